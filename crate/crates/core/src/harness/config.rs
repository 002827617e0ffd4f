use serde::{Deserialize, Serialize};

use crate::dynamics::InitialFrames;
use crate::error::{Error, Result};
use crate::schedulers::BetaSchedule;
use crate::shape::{make_named_shape, ClosedCurve, Point};

/// Which movement law the agents follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Method {
    /// Agents share the global frame.
    SharedFrame,
    /// Agents keep local frames and align them probabilistically.
    LocalFrame,
}

impl TryFrom<u8> for Method {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::SharedFrame),
            2 => Ok(Self::LocalFrame),
            other => Err(Error::config(format!("method must be 1 or 2, got {other}"))),
        }
    }
}

impl From<Method> for u8 {
    fn from(m: Method) -> u8 {
        match m {
            Method::SharedFrame => 1,
            Method::LocalFrame => 2,
        }
    }
}

/// Everything needed to reproduce one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub agents: usize,
    pub eta: f64,
    pub alpha: f64,
    pub steps: u64,
    pub method: Method,
    pub beta: BetaSchedule,
    /// Human-readable origin of `shape`, e.g. `name:shape1`.
    pub shape_label: String,
    pub shape: ClosedCurve,
    pub center: [f64; 2],
    pub radius: f64,
    pub seed: u64,
    /// Overrides the per-method default (shared for method 1, random for 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_frames: Option<InitialFrames>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            agents: 3,
            eta: 0.01,
            alpha: 0.01,
            steps: 1000,
            method: Method::SharedFrame,
            beta: BetaSchedule::constant(),
            shape_label: "name:shape1".into(),
            shape: make_named_shape("shape1").expect("built-in shape"),
            center: [0.0, 0.0],
            radius: 15.0,
            seed: 0,
            initial_frames: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.agents < 3 {
            return Err(Error::config(format!("need at least 3 agents, got {}", self.agents)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::config(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if self.steps < 1 {
            return Err(Error::config("steps must be at least 1"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config(format!("radius must be > 0, got {}", self.radius)));
        }
        if !self.center.iter().all(|c| c.is_finite()) {
            return Err(Error::config("circle center must be finite"));
        }
        if let Some(InitialFrames::Fixed(a)) = self.initial_frames {
            if !a.is_finite() {
                return Err(Error::config("fixed initial frame angle must be finite"));
            }
        }
        self.beta.validate()
    }

    pub fn with_shape(mut self, source: &str) -> Result<Self> {
        self.shape = ClosedCurve::from_source(source)?;
        self.shape_label = if source.contains(':') {
            source.to_string()
        } else {
            format!("name:{source}")
        };
        Ok(self)
    }

    pub fn frames(&self) -> InitialFrames {
        self.initial_frames.unwrap_or(match self.method {
            Method::SharedFrame => InitialFrames::Shared,
            Method::LocalFrame => InitialFrames::Random,
        })
    }

    pub fn center_point(&self) -> Point {
        Point::new(self.center[0], self.center[1])
    }

    /// Steps per full traversal of the curve, `round(1/η)`.
    pub fn period_len(&self) -> usize {
        (1.0 / self.eta).round().max(1.0) as usize
    }

    /// Number of complete periods in the run.
    pub fn full_periods(&self) -> usize {
        self.steps as usize / self.period_len()
    }
}
