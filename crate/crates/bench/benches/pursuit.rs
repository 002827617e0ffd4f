use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use shapepursuit::harness::run_simulation;
use shapepursuit::metrics::{discrete_frechet, metric_d};
use shapepursuit::{make_named_shape, BetaSchedule, GaParams, Method, Point, Polyline, SimConfig};

fn frechet(c: &mut Criterion) {
    let p: Vec<Point> = (0..100).map(|i| Point::new(i as f64, (i as f64 * 0.1).sin())).collect();
    let q: Vec<Point> = (0..100).map(|i| Point::new(i as f64 + 0.5, (i as f64 * 0.1).cos())).collect();
    c.bench_function("discrete_frechet 100x100", |b| b.iter(|| discrete_frechet(black_box(&p), black_box(&q))));
}

fn simulate(c: &mut Criterion) {
    let m1 = SimConfig::default();
    let m2 = SimConfig {
        method: Method::LocalFrame,
        beta: BetaSchedule::achievement_decrease(),
        ..SimConfig::default()
    };
    let n30 = SimConfig {
        agents: 30,
        ..SimConfig::default()
    };
    c.bench_function("simulate method1 N=3 1000 steps", |b| b.iter(|| run_simulation(black_box(&m1)).unwrap()));
    c.bench_function("simulate method2 N=3 1000 steps", |b| b.iter(|| run_simulation(black_box(&m2)).unwrap()));
    c.bench_function("simulate method1 N=30 1000 steps", |b| b.iter(|| run_simulation(black_box(&n30)).unwrap()));
}

fn metric(c: &mut Criterion) {
    let curve = make_named_shape("shape1").unwrap();
    let taus: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..100).map(|k| (i as f64 / 3.0 + k as f64 * 0.01).fract()).collect())
        .collect();
    let trajs: Vec<Polyline> = taus
        .iter()
        .map(|ts| Polyline::new(ts.iter().map(|&t| curve.eval(t) * 2.0 + Point::new(1.0, -3.0)).collect()).unwrap())
        .collect();
    let ga = GaParams {
        population: 20,
        generations: 10,
        ..GaParams::default()
    };
    let mut group = c.benchmark_group("metric");
    group.sample_size(10);
    group.bench_function("metric_d N=3 pop=20 gens=10", |b| {
        b.iter(|| metric_d(black_box(&trajs), &curve, &taus, &ga, 0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, frechet, simulate, metric);
criterion_main!(benches);
