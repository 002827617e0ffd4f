use shapepursuit::harness::{evaluate_periods, run_simulation, run_simulation_with};
use shapepursuit::{BetaSchedule, ClosedCurve, GaParams, Method, SimConfig, TrajectoryLog};

fn small_ga() -> GaParams {
    GaParams {
        population: 16,
        generations: 8,
        ..GaParams::default()
    }
}

#[test]
fn achievement_spread_contracts() {
    let mut contracted = 0;
    for seed in 0..5 {
        let cfg = SimConfig {
            method: Method::LocalFrame,
            beta: BetaSchedule::achievement_decrease(),
            seed,
            ..SimConfig::default()
        };
        let (mut early, mut late) = (None, None);
        run_simulation_with(&cfg, |w| {
            let spread = w
                .agents
                .iter()
                .filter_map(|a| a.last_achievement)
                .fold(0.0, f64::max);
            match w.step {
                50 => early = Some(spread),
                1000 => late = Some(spread),
                _ => {}
            }
        })
        .unwrap();
        if late.unwrap() < early.unwrap() {
            contracted += 1;
        }
    }
    assert!(contracted >= 4, "only {contracted}/5 seeds contracted");
}

#[test]
fn saved_log_evaluates_like_the_original() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SimConfig {
        method: Method::LocalFrame,
        beta: BetaSchedule::time_increase(),
        steps: 400,
        seed: 11,
        ..SimConfig::default()
    }
    .with_shape("star")
    .unwrap();
    let log = run_simulation(&cfg).unwrap();
    let path = dir.path().join("t.csv");
    log.save(&path).unwrap();
    let back = TrajectoryLog::load(&path).unwrap();
    assert_eq!(back, log);
    let a = evaluate_periods(&log, &cfg.shape, &small_ga(), 3, &[1, 4]).unwrap();
    let b = evaluate_periods(&back, &back.config.shape, &small_ga(), 3, &[1, 4]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shape_file_source_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let builtin = ClosedCurve::from_source("heart").unwrap();
    let path = dir.path().join("heart.toml");
    std::fs::write(&path, builtin.to_spec_text()).unwrap();
    let source = format!("file:{}", path.display());
    let cfg = SimConfig::default().with_shape(&source).unwrap();
    assert_eq!(cfg.shape, builtin);
    assert_eq!(cfg.shape_label, source);

    let named = SimConfig::default().with_shape("heart").unwrap();
    assert_eq!(run_simulation(&cfg).unwrap().rows, run_simulation(&named).unwrap().rows);
}

#[test]
fn unreadable_shape_file_is_a_config_error() {
    let err = SimConfig::default().with_shape("file:/nonexistent/shape.toml").unwrap_err();
    assert!(!matches!(err, shapepursuit::Error::Numeric(_)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "kind = \"polygon\"\nvertices = [[0.0, 0.0]]\n").unwrap();
    let err = ClosedCurve::from_source(&format!("file:{}", path.display())).unwrap_err();
    assert!(err.is_config());
}
