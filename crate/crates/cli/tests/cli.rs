use std::path::Path;
use std::process::{Command, Output};

use shapepursuit::harness::{read_metrics_csv, run_simulation};
use shapepursuit::{Method, SimConfig, TrajectoryLog};

fn shapepursuit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapepursuit"))
        .args(args)
        .output()
        .expect("spawn shapepursuit")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_matches_library_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let status = shapepursuit(&[
        "simulate", "--shape", "name:heart", "--method", "2", "--agents", "4", "--steps", "250",
        "--beta-method", "ad", "--seed", "9", "--out", path(&out),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));

    let log = TrajectoryLog::load(&out).unwrap();
    let cfg = SimConfig {
        agents: 4,
        steps: 250,
        method: Method::LocalFrame,
        beta: "ad".parse().unwrap(),
        seed: 9,
        ..SimConfig::default()
    }
    .with_shape("name:heart")
    .unwrap();
    assert_eq!(log.config, cfg);
    assert_eq!(log.rows, run_simulation(&cfg).unwrap().rows);

    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# shapepursuit "));
    assert!(text.lines().any(|l| l == "step,agent,x,y,tau,theta,beta"));
}

#[test]
fn simulate_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let metrics = dir.path().join("metrics.csv");
    assert!(shapepursuit(&["simulate", "--steps", "300", "--out", path(&traj)]).status.success());
    let res = shapepursuit(&[
        "evaluate", "--traj", path(&traj), "--ga-pop", "12", "--ga-gens", "5", "--seed", "1", "--out",
        path(&metrics),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let (config, m) = read_metrics_csv(std::fs::File::open(&metrics).unwrap()).unwrap();
    assert_eq!(config.unwrap().steps, 300);
    assert_eq!(m.iter().map(|p| p.period).collect::<Vec<_>>(), [1, 2, 3]);
    assert!(m.iter().all(|p| p.distance.is_finite() && p.distance >= 0.0));

    let subset = dir.path().join("subset.csv");
    let res = shapepursuit(&[
        "evaluate", "--traj", path(&traj), "--ga-pop", "12", "--ga-gens", "5", "--seed", "1", "--periods", "2",
        "--out", path(&subset),
    ]);
    assert!(res.status.success());
    let (_, sub) = read_metrics_csv(std::fs::File::open(&subset).unwrap()).unwrap();
    assert_eq!(sub, [m[1]]);
}

#[test]
fn sweep_writes_cells_and_means() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.csv");
    let res = shapepursuit(&[
        "sweep", "--axis", "alpha", "--values", "0.01,0.1", "--seeds", "0,1", "--steps", "200", "--ga-pop",
        "10", "--ga-gens", "3", "--out", path(&out),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "axis,value,seed,d_first,d_final,error");
    assert_eq!(body.len(), 1 + 4 + 2);
    assert!(body.iter().any(|l| l.starts_with("alpha,0.1,mean,")));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["simulate", "--agents", "2"],
        vec!["simulate", "--shape", "name:nonsense"],
        vec!["simulate", "--beta-method", "sometimes"],
        vec!["simulate", "--beta-method", "constant", "--beta-coeff", "0.3"],
        vec!["simulate", "--method", "3"],
        vec!["sweep", "--axis", "eta", "--values", "0.1"],
        vec!["evaluate", "--traj", "/nonexistent/traj.csv"],
    ] {
        let res = shapepursuit(&args);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_3() {
    let res = shapepursuit(&["simulate", "--alpha", "1e300", "--steps", "50"]);
    assert_eq!(res.status.code(), Some(3), "{}", String::from_utf8_lossy(&res.stderr));
}
