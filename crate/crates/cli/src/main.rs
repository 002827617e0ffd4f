//! `shapepursuit` command-line front end.
//!
//! Exit codes: 0 on success, 2 for configuration, parse and I/O errors, 3 for
//! numeric failures during a run.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shapepursuit::harness::{evaluate_periods, evaluate_run, run_simulation, sweep, write_metrics_csv, SweepAxis};
use shapepursuit::{BetaSchedule, ClosedCurve, Error, GaParams, InitialFrames, Method, SimConfig, TrajectoryLog};

#[derive(Parser, Debug)]
#[command(name = "shapepursuit", version, about = "Cyclic-pursuit formation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write the trajectory CSV.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the per-period formation metric of a trajectory CSV.
    Evaluate {
        #[arg(long)]
        traj: PathBuf,
        /// Target curve; defaults to the one recorded in the trajectory.
        #[arg(long)]
        shape: Option<String>,
        #[command(flatten)]
        ga: GaArgs,
        /// GA seed; defaults to the run seed recorded in the trajectory.
        #[arg(long)]
        seed: Option<u64>,
        /// 1-based periods to evaluate; all full periods when omitted.
        #[arg(long, value_delimiter = ',')]
        periods: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vary one configuration field over values and seeds.
    Sweep {
        /// One of N, alpha, shape, beta-method.
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// `name:<id>`, `file:<path>` or a bare built-in name.
    #[arg(long, default_value = "shape1")]
    shape: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    method: u8,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    /// constant, td, ti, ad or ai.
    #[arg(long, default_value = "constant")]
    beta_method: String,
    /// Override the schedule's constant or initial β.
    #[arg(long)]
    beta0: Option<f64>,
    /// Override the time schedules' per-window increment.
    #[arg(long)]
    beta_delta: Option<f64>,
    /// Override the time schedules' window length in steps.
    #[arg(long)]
    beta_window: Option<u64>,
    /// Override the achievement schedules' coefficient.
    #[arg(long)]
    beta_coeff: Option<f64>,
    /// Start every agent's frame at this angle instead of the method default.
    #[arg(long)]
    initial_frame: Option<f64>,
    #[arg(long, default_value_t = 15.0)]
    radius: f64,
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 0.0])]
    center: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GaArgs {
    #[arg(long, default_value_t = 50)]
    ga_pop: usize,
    #[arg(long, default_value_t = 100)]
    ga_gens: usize,
}

impl GaArgs {
    fn params(&self) -> shapepursuit::Result<GaParams> {
        let ga = GaParams {
            population: self.ga_pop,
            generations: self.ga_gens,
            ..GaParams::default()
        };
        ga.validate()?;
        Ok(ga)
    }
}

fn schedule(run: &RunArgs) -> shapepursuit::Result<BetaSchedule> {
    let mut beta: BetaSchedule = run.beta_method.parse()?;
    let name = beta.short_name();
    let misplaced = |flag: &str| Error::Config(format!("--{flag} does not apply to beta method '{name}'"));
    match &mut beta {
        BetaSchedule::Constant { beta0 } => {
            if run.beta_delta.is_some() || run.beta_window.is_some() {
                return Err(misplaced("beta-delta/--beta-window"));
            }
            if run.beta_coeff.is_some() {
                return Err(misplaced("beta-coeff"));
            }
            *beta0 = run.beta0.unwrap_or(*beta0);
        }
        BetaSchedule::TimeDecrease { beta0, delta, window } | BetaSchedule::TimeIncrease { beta0, delta, window } => {
            if run.beta_coeff.is_some() {
                return Err(misplaced("beta-coeff"));
            }
            *beta0 = run.beta0.unwrap_or(*beta0);
            *delta = run.beta_delta.unwrap_or(*delta);
            *window = run.beta_window.unwrap_or(*window);
        }
        BetaSchedule::AchievementDecrease { coeff, beta0 } | BetaSchedule::AchievementIncrease { coeff, beta0 } => {
            if run.beta_delta.is_some() || run.beta_window.is_some() {
                return Err(misplaced("beta-delta/--beta-window"));
            }
            *beta0 = run.beta0.unwrap_or(*beta0);
            *coeff = run.beta_coeff.unwrap_or(*coeff);
        }
    }
    beta.validate()?;
    Ok(beta)
}

fn config(run: &RunArgs) -> shapepursuit::Result<SimConfig> {
    let cfg = SimConfig {
        agents: run.agents,
        eta: run.eta,
        alpha: run.alpha,
        steps: run.steps,
        method: Method::try_from(run.method)?,
        beta: schedule(run)?,
        center: [run.center[0], run.center[1]],
        radius: run.radius,
        seed: run.seed,
        initial_frames: run.initial_frame.map(InitialFrames::Fixed),
        ..SimConfig::default()
    }
    .with_shape(&run.shape)?;
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: &Option<PathBuf>) -> shapepursuit::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> shapepursuit::Result<()> {
    match cli.command {
        Command::Simulate { run, out } => {
            let cfg = config(&run)?;
            let log = run_simulation(&cfg)?;
            log.write_csv(output(&out)?)?;
            eprintln!(
                "simulated {} agents for {} steps (max spacing error {:.1e})",
                cfg.agents,
                cfg.steps,
                log.max_spacing_error()
            );
        }
        Command::Evaluate {
            traj,
            shape,
            ga,
            seed,
            periods,
            out,
        } => {
            let log = TrajectoryLog::load(&traj)?;
            let curve = match &shape {
                Some(s) => ClosedCurve::from_source(s)?,
                None => log.config.shape.clone(),
            };
            let seed = seed.unwrap_or(log.config.seed);
            let ga = ga.params()?;
            let metrics = if periods.is_empty() {
                evaluate_run(&log, &curve, &ga, seed)?
            } else {
                evaluate_periods(&log, &curve, &ga, seed, &periods)?
            };
            write_metrics_csv(output(&out)?, &log.config, &metrics)?;
            for m in &metrics {
                eprintln!("period {:>3}  d = {:.6}", m.period, m.distance);
            }
        }
        Command::Sweep {
            axis,
            values,
            seeds,
            run,
            ga,
            out,
        } => {
            let axis: SweepAxis = axis.parse()?;
            let base = config(&run)?;
            let summary = sweep(&base, axis, &values, &seeds, &ga.params()?)?;
            summary.write_csv(output(&out)?)?;
            for m in &summary.means {
                eprintln!(
                    "{axis}={:<12} runs={} d_first={} d_final={}",
                    m.value,
                    m.runs,
                    m.d_first.map_or("-".into(), |v| format!("{v:.4}")),
                    m.d_final.map_or("-".into(), |v| format!("{v:.4}")),
                );
            }
            let failed = summary.cells.iter().filter(|c| c.error.is_some()).count();
            if failed > 0 {
                eprintln!("{failed} of {} cells failed; see the error column", summary.cells.len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numeric(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
