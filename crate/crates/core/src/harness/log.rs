//! CSV persistence for trajectories and metric series.
//!
//! Files start with `#` comment lines carrying the tool version and the full
//! run configuration as JSON, followed by a plain CSV table.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use crate::error::{Error, Result};
use crate::metrics::{wrap_dist, SimilarityTransform};
use crate::shape::Point;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const TRAJ_COLUMNS: [&str; 7] = ["step", "agent", "x", "y", "tau", "theta", "beta"];
const METRIC_COLUMNS: [&str; 6] = ["period", "d", "e", "theta", "xt", "yt"];
const CONFIG_PREFIX: &str = "# config: ";
const VERSION_PREFIX: &str = "# shapepursuit ";

/// One agent at one step. `agent` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub step: u64,
    pub agent: usize,
    pub x: f64,
    pub y: f64,
    pub tau: f64,
    pub theta: f64,
    pub beta: f64,
}

impl LogRow {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Every agent's state at every step, step-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryLog {
    pub config: SimConfig,
    pub version: String,
    pub rows: Vec<LogRow>,
}

impl TrajectoryLog {
    pub fn agents(&self) -> usize {
        self.config.agents
    }

    pub fn steps(&self) -> usize {
        self.rows.len() / self.config.agents.max(1)
    }

    pub fn row(&self, step: usize, agent: usize) -> &LogRow {
        &self.rows[step * self.config.agents + agent]
    }

    /// Check the row layout: `steps × N` rows, step-major, steps increasing.
    pub fn validate(&self) -> Result<()> {
        let n = self.config.agents;
        if n == 0 || self.rows.len() % n != 0 {
            return Err(Error::Parse(format!(
                "{} rows is not a multiple of {n} agents",
                self.rows.len()
            )));
        }
        for (idx, row) in self.rows.iter().enumerate() {
            let (k, i) = (idx / n, idx % n);
            if row.agent != i + 1 {
                return Err(Error::Parse(format!("row {idx}: expected agent {}, got {}", i + 1, row.agent)));
            }
            if k > 0 && row.step <= self.rows[idx - n].step {
                return Err(Error::Parse(format!("row {idx}: steps must strictly increase")));
            }
            if i > 0 && row.step != self.rows[idx - 1].step {
                return Err(Error::Parse(format!("row {idx}: agents of one step disagree on step")));
            }
        }
        Ok(())
    }

    /// Largest `|δ(τ_{n(i)}, τ_i) − 1/N|` over all logged steps and agents.
    pub fn max_spacing_error(&self) -> f64 {
        let n = self.config.agents;
        let gap = 1.0 / n as f64;
        self.rows
            .chunks(n)
            .flat_map(|step| {
                (0..n).map(move |i| (wrap_dist(step[(i + 1) % n].tau, step[i].tau) - gap).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Mean logged `β` over each full period (all steps and agents).
    pub fn beta_period_means(&self) -> Vec<f64> {
        let n = self.config.agents;
        let len = self.config.period_len();
        self.rows
            .chunks(n * len)
            .filter(|c| c.len() == n * len)
            .map(|c| c.iter().map(|r| r.beta).sum::<f64>() / c.len() as f64)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_header(&mut out, &self.config)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(TRAJ_COLUMNS)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let (meta, body) = split_header(input)?;
        let config = meta.config.ok_or_else(|| Error::Parse("missing `# config:` line".into()))?;
        let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        check_columns(reader.headers()?, &TRAJ_COLUMNS)?;
        let rows = reader
            .deserialize()
            .collect::<std::result::Result<Vec<LogRow>, _>>()?;
        let log = Self {
            config,
            version: meta.version.unwrap_or_default(),
            rows,
        };
        log.validate()?;
        Ok(log)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Formation quality of one period (1-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodMetric {
    pub period: usize,
    pub distance: f64,
    pub transform: SimilarityTransform,
}

#[derive(Serialize, Deserialize)]
struct MetricRow {
    period: usize,
    d: f64,
    e: f64,
    theta: f64,
    xt: f64,
    yt: f64,
}

pub fn write_metrics_csv<W: Write>(mut out: W, config: &SimConfig, metrics: &[PeriodMetric]) -> Result<()> {
    write_header(&mut out, config)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(METRIC_COLUMNS)?;
    for m in metrics {
        w.serialize(MetricRow {
            period: m.period,
            d: m.distance,
            e: m.transform.scale,
            theta: m.transform.rotation,
            xt: m.transform.tx,
            yt: m.transform.ty,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_csv<R: Read>(input: R) -> Result<(Option<SimConfig>, Vec<PeriodMetric>)> {
    let (meta, body) = split_header(input)?;
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    check_columns(reader.headers()?, &METRIC_COLUMNS)?;
    let metrics = reader
        .deserialize()
        .map(|r| {
            r.map(|m: MetricRow| PeriodMetric {
                period: m.period,
                distance: m.d,
                transform: SimilarityTransform {
                    scale: m.e,
                    rotation: m.theta,
                    tx: m.xt,
                    ty: m.yt,
                },
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((meta.config, metrics))
}

pub(crate) fn write_header<W: Write>(out: &mut W, config: &SimConfig) -> Result<()> {
    writeln!(out, "{VERSION_PREFIX}{VERSION}")?;
    let json = serde_json::to_string(config).map_err(|e| Error::numeric(e.to_string()))?;
    writeln!(out, "{CONFIG_PREFIX}{json}")?;
    Ok(())
}

struct Meta {
    version: Option<String>,
    config: Option<SimConfig>,
}

fn split_header<R: Read>(input: R) -> Result<(Meta, String)> {
    let mut meta = Meta {
        version: None,
        config: None,
    };
    let mut body = String::new();
    for line in BufReader::new(input).lines() {
        let line = line?;
        if let Some(json) = line.strip_prefix(CONFIG_PREFIX) {
            meta.config = Some(
                serde_json::from_str(json).map_err(|e| Error::Parse(format!("embedded config: {e}")))?,
            );
        } else if let Some(v) = line.strip_prefix(VERSION_PREFIX) {
            meta.version = Some(v.trim().to_string());
        } else if !line.starts_with('#') {
            body.push_str(&line);
            body.push('\n');
        }
    }
    Ok((meta, body))
}

fn check_columns(headers: &csv::StringRecord, want: &[&str]) -> Result<()> {
    if headers.iter().eq(want.iter().copied()) {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "expected columns {}, found {}",
            want.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )))
    }
}
