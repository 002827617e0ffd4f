//! Cross-product parameter sweeps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::config::SimConfig;
use super::log::write_header;
use super::run::{evaluate_periods, run_simulation};
use crate::error::{Error, Result};
use crate::metrics::GaParams;
use crate::schedulers::BetaSchedule;

/// The configuration field a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Agents,
    Alpha,
    Shape,
    BetaMethod,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" | "agents" => Ok(Self::Agents),
            "alpha" => Ok(Self::Alpha),
            "shape" => Ok(Self::Shape),
            "beta-method" | "beta_method" | "beta" => Ok(Self::BetaMethod),
            other => Err(Error::config(format!(
                "unknown sweep axis '{other}' (expected N, alpha, shape or beta-method)"
            ))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Agents => "N",
            Self::Alpha => "alpha",
            Self::Shape => "shape",
            Self::BetaMethod => "beta-method",
        })
    }
}

impl SweepAxis {
    /// `base` with this axis set to `value` and the given seed.
    pub fn resolve(&self, base: &SimConfig, value: &str, seed: u64) -> Result<SimConfig> {
        let mut cfg = SimConfig { seed, ..base.clone() };
        match self {
            Self::Agents => {
                cfg.agents = value
                    .parse()
                    .map_err(|_| Error::config(format!("agent count '{value}' is not an integer")))?;
            }
            Self::Alpha => {
                cfg.alpha = value
                    .parse()
                    .map_err(|_| Error::config(format!("alpha '{value}' is not a number")))?;
            }
            Self::Shape => cfg = cfg.with_shape(value)?,
            Self::BetaMethod => cfg.beta = value.parse::<BetaSchedule>()?,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Outcome of one (value, seed) cell: the metric in the first and last full
/// periods, or the error that stopped the cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub value: String,
    pub seed: u64,
    pub d_first: Option<f64>,
    pub d_final: Option<f64>,
    pub error: Option<String>,
}

/// Per-value mean over the seeds whose cells succeeded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepMean {
    pub value: String,
    pub runs: usize,
    pub d_first: Option<f64>,
    pub d_final: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub axis: SweepAxis,
    pub base: SimConfig,
    pub cells: Vec<SweepCell>,
    pub means: Vec<SweepMean>,
}

/// Run one cell exactly as a standalone `simulate` + `evaluate` would.
pub fn run_cell(config: &SimConfig, ga: &GaParams) -> Result<(f64, f64)> {
    let log = run_simulation(config)?;
    let last = config.full_periods();
    if last == 0 {
        return Err(Error::config("sweep runs need at least one full period"));
    }
    let periods: Vec<usize> = if last == 1 { vec![1] } else { vec![1, last] };
    let m = evaluate_periods(&log, &config.shape, ga, config.seed, &periods)?;
    Ok((m[0].distance, m[m.len() - 1].distance))
}

/// Run every `(value, seed)` combination. Per-cell failures are recorded in
/// the summary rather than aborting the sweep.
pub fn sweep(
    base: &SimConfig,
    axis: SweepAxis,
    values: &[String],
    seeds: &[u64],
    ga: &GaParams,
) -> Result<SweepSummary> {
    if values.is_empty() || seeds.is_empty() {
        return Err(Error::config("sweep needs at least one value and one seed"));
    }
    ga.validate()?;
    let jobs: Vec<(&String, u64)> = values
        .iter()
        .flat_map(|v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(value, seed)| {
            let outcome = axis
                .resolve(base, value, seed)
                .and_then(|cfg| run_cell(&cfg, ga));
            match outcome {
                Ok((first, last)) => SweepCell {
                    value: value.clone(),
                    seed,
                    d_first: Some(first),
                    d_final: Some(last),
                    error: None,
                },
                Err(e) => SweepCell {
                    value: value.clone(),
                    seed,
                    d_first: None,
                    d_final: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let means = values
        .iter()
        .map(|v| {
            let ok: Vec<&SweepCell> = cells.iter().filter(|c| &c.value == v && c.error.is_none()).collect();
            let mean = |f: fn(&SweepCell) -> Option<f64>| {
                (!ok.is_empty()).then(|| ok.iter().filter_map(|c| f(c)).sum::<f64>() / ok.len() as f64)
            };
            SweepMean {
                value: v.clone(),
                runs: ok.len(),
                d_first: mean(|c| c.d_first),
                d_final: mean(|c| c.d_final),
            }
        })
        .collect();
    Ok(SweepSummary {
        axis,
        base: base.clone(),
        cells,
        means,
    })
}

impl SweepSummary {
    /// `axis,value,seed,d_first,d_final,error` rows per cell, then one
    /// `seed = mean` row per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_header(&mut out, &self.base)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(["axis", "value", "seed", "d_first", "d_final", "error"])?;
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let axis = self.axis.to_string();
        for c in &self.cells {
            w.write_record([
                axis.as_str(),
                &c.value,
                &c.seed.to_string(),
                &fmt(c.d_first),
                &fmt(c.d_final),
                c.error.as_deref().unwrap_or(""),
            ])?;
        }
        for m in &self.means {
            w.write_record([axis.as_str(), &m.value, "mean", &fmt(m.d_first), &fmt(m.d_final), ""])?;
        }
        w.flush()?;
        Ok(())
    }
}
