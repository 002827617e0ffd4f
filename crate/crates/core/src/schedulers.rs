//! Alignment probability schedules.
//!
//! A schedule maps the current step and (for the achievement-driven variants)
//! the agent's achievement rate to the probability `β` that the agent snaps its
//! frame angle to the estimated predecessor frame this step.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `β` evolves over a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BetaSchedule {
    Constant {
        beta0: f64,
    },
    /// `max(0, β₀ − Δβ·⌊k/W⌋)`
    TimeDecrease {
        beta0: f64,
        delta: f64,
        window: u64,
    },
    /// `min(1, β₀ + Δβ·⌊k/W⌋)`
    TimeIncrease {
        beta0: f64,
        delta: f64,
        window: u64,
    },
    /// `c_d · A`, so agents that already agree with their predecessor rarely rotate.
    AchievementDecrease {
        coeff: f64,
        beta0: f64,
    },
    /// `c_i / A`; `A = 0` saturates to 1.
    AchievementIncrease {
        coeff: f64,
        beta0: f64,
    },
}

/// Short CLI names of the schedules, in [`BetaSchedule::defaults`] order.
pub const BETA_METHODS: [&str; 5] = ["constant", "td", "ti", "ad", "ai"];

impl BetaSchedule {
    pub fn constant() -> Self {
        Self::Constant { beta0: 0.1 }
    }

    pub fn time_decrease() -> Self {
        Self::TimeDecrease {
            beta0: 0.1,
            delta: 0.01,
            window: 100,
        }
    }

    pub fn time_increase() -> Self {
        Self::TimeIncrease {
            beta0: 0.1,
            delta: 0.01,
            window: 100,
        }
    }

    pub fn achievement_decrease() -> Self {
        Self::AchievementDecrease {
            coeff: 1.0 / (10.0 * PI),
            beta0: 0.01,
        }
    }

    pub fn achievement_increase() -> Self {
        Self::AchievementIncrease {
            coeff: 0.01 * PI,
            beta0: 0.1,
        }
    }

    /// All five schedules with their default parameters.
    pub fn defaults() -> [Self; 5] {
        [
            Self::constant(),
            Self::time_decrease(),
            Self::time_increase(),
            Self::achievement_decrease(),
            Self::achievement_increase(),
        ]
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::TimeDecrease { .. } => "td",
            Self::TimeIncrease { .. } => "ti",
            Self::AchievementDecrease { .. } => "ad",
            Self::AchievementIncrease { .. } => "ai",
        }
    }

    /// Whether `beta_value` consumes the achievement rate.
    pub fn uses_achievement(&self) -> bool {
        matches!(
            self,
            Self::AchievementDecrease { .. } | Self::AchievementIncrease { .. }
        )
    }

    /// The value used before any achievement estimate exists.
    pub fn initial_beta(&self) -> f64 {
        match *self {
            Self::Constant { beta0 }
            | Self::TimeDecrease { beta0, .. }
            | Self::TimeIncrease { beta0, .. }
            | Self::AchievementDecrease { beta0, .. }
            | Self::AchievementIncrease { beta0, .. } => beta0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Constant { beta0 } => beta0.is_finite(),
            Self::TimeDecrease {
                beta0,
                delta,
                window,
            }
            | Self::TimeIncrease {
                beta0,
                delta,
                window,
            } => beta0.is_finite() && delta.is_finite() && delta >= 0.0 && window > 0,
            Self::AchievementDecrease { coeff, beta0 }
            | Self::AchievementIncrease { coeff, beta0 } => {
                coeff.is_finite() && coeff > 0.0 && beta0.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid beta schedule {self:?}")))
        }
    }

    /// `β` at step `k`, clamped to `[0, 1]`.
    ///
    /// `achievement` is ignored by the constant and time schedules; when it is
    /// `None` the achievement schedules fall back to their initial value.
    pub fn beta_value(&self, k: u64, achievement: Option<f64>) -> Result<f64> {
        if let Some(a) = achievement {
            if a.is_nan() || a < 0.0 {
                return Err(Error::numeric(format!("achievement rate must be >= 0, got {a}")));
            }
        }
        let raw = match *self {
            Self::Constant { beta0 } => beta0,
            Self::TimeDecrease {
                beta0,
                delta,
                window,
            } => beta0 - delta * (k / window) as f64,
            Self::TimeIncrease {
                beta0,
                delta,
                window,
            } => beta0 + delta * (k / window) as f64,
            Self::AchievementDecrease { coeff, beta0 } => achievement.map_or(beta0, |a| coeff * a),
            Self::AchievementIncrease { coeff, beta0 } => match achievement {
                None => beta0,
                Some(a) if a == 0.0 => 1.0,
                Some(a) => coeff / a,
            },
        };
        Ok(raw.clamp(0.0, 1.0))
    }
}

impl fmt::Display for BetaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BetaSchedule {
    type Err = Error;

    /// Parses a short name (`constant`, `td`, `ti`, `ad`, `ai`) into the
    /// schedule with default parameters.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "constant" | "c" => Ok(Self::constant()),
            "td" | "time_decrease" => Ok(Self::time_decrease()),
            "ti" | "time_increase" => Ok(Self::time_increase()),
            "ad" | "achievement_decrease" => Ok(Self::achievement_decrease()),
            "ai" | "achievement_increase" => Ok(Self::achievement_increase()),
            other => Err(Error::config(format!(
                "unknown beta method '{other}' (expected one of {})",
                BETA_METHODS.join(", ")
            ))),
        }
    }
}
