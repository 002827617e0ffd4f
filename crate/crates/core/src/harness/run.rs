use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Method, SimConfig};
use super::log::{LogRow, PeriodMetric, TrajectoryLog, VERSION};
use crate::dynamics::{init_placement, step_method1, step_method2, StepParams, World};
use crate::error::{Error, Result};
use crate::metrics::{metric_d, GaParams, Polyline};
use crate::shape::ClosedCurve;

// Fixed offsets splitting the master seed into independent streams.
const SIM_STREAM: u64 = 0;
const GA_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of the simulation random stream.
pub fn sim_seed(seed: u64) -> u64 {
    seed.wrapping_add(SIM_STREAM)
}

/// Seed of the GA used to evaluate `period` (1-based).
pub fn ga_seed(seed: u64, period: usize) -> u64 {
    seed.wrapping_add(GA_STREAM)
        .wrapping_mul(0xBF58_476D_1CE4_E5B9)
        .wrapping_add(period as u64)
}

/// Run `config.steps` steps and record every agent's state at steps
/// `0..steps`. `observe` sees the world before each step and after the last.
pub fn run_simulation_with<F>(config: &SimConfig, mut observe: F) -> Result<TrajectoryLog>
where
    F: FnMut(&World),
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sim_seed(config.seed));
    let mut world = init_placement(
        config.agents,
        config.center_point(),
        config.radius,
        config.frames(),
        &mut rng,
    )?;
    let params = StepParams {
        eta: config.eta,
        alpha: config.alpha,
    };
    let n = config.agents;
    let mut rows = Vec::with_capacity(config.steps as usize * n);
    for k in 0..config.steps {
        observe(&world);
        let start = rows.len();
        rows.extend(world.agents.iter().enumerate().map(|(i, a)| LogRow {
            step: k,
            agent: i + 1,
            x: a.position.x,
            y: a.position.y,
            tau: a.tau,
            theta: a.theta,
            beta: 0.0,
        }));
        match config.method {
            Method::SharedFrame => step_method1(&mut world, &config.shape, params),
            Method::LocalFrame => step_method2(&mut world, &config.shape, params, &config.beta, &mut rng)?,
        }
        for (row, a) in rows[start..].iter_mut().zip(&world.agents) {
            row.beta = a.last_beta;
        }
        if world
            .agents
            .iter()
            .any(|a| !(a.position.x.is_finite() && a.position.y.is_finite()))
        {
            return Err(Error::numeric(format!("non-finite agent position at step {k}")));
        }
    }
    observe(&world);
    Ok(TrajectoryLog {
        config: config.clone(),
        version: VERSION.to_string(),
        rows,
    })
}

pub fn run_simulation(config: &SimConfig) -> Result<TrajectoryLog> {
    run_simulation_with(config, |_| {})
}

/// Evaluate every full period of the log.
pub fn evaluate_run(
    log: &TrajectoryLog,
    curve: &ClosedCurve,
    ga: &GaParams,
    seed: u64,
) -> Result<Vec<PeriodMetric>> {
    let periods: Vec<usize> = (1..=full_periods(log)?).collect();
    evaluate_periods(log, curve, ga, seed, &periods)
}

fn full_periods(log: &TrajectoryLog) -> Result<usize> {
    let len = log.config.period_len();
    let count = log.steps() / len;
    if count == 0 {
        return Err(Error::config(format!(
            "log has {} steps, fewer than one period of {len}",
            log.steps()
        )));
    }
    Ok(count)
}

/// Evaluate the selected 1-based periods. Each period's GA is seeded from
/// `(seed, period)`, so a subset gives the same values as a full evaluation.
pub fn evaluate_periods(
    log: &TrajectoryLog,
    curve: &ClosedCurve,
    ga: &GaParams,
    seed: u64,
    periods: &[usize],
) -> Result<Vec<PeriodMetric>> {
    log.validate()?;
    let available = full_periods(log)?;
    if let Some(&bad) = periods.iter().find(|&&p| p == 0 || p > available) {
        return Err(Error::config(format!("period {bad} outside 1..={available}")));
    }
    let n = log.agents();
    let len = log.config.period_len();
    periods
        .par_iter()
        .map(|&s| {
            let first = (s - 1) * len;
            let mut trajs = Vec::with_capacity(n);
            let mut taus = Vec::with_capacity(n);
            for i in 0..n {
                let rows = (first..first + len).map(|k| log.row(k, i));
                let (pts, ts): (Vec<_>, Vec<_>) = rows.map(|r| (r.position(), r.tau)).unzip();
                trajs.push(Polyline::new(pts)?);
                taus.push(ts);
            }
            let m = metric_d(&trajs, curve, &taus, ga, ga_seed(seed, s))?;
            Ok(PeriodMetric {
                period: s,
                distance: m.distance,
                transform: m.transform,
            })
        })
        .collect()
}
