//! Formation-quality evaluation.
//!
//! The quality of a period is the mean discrete Fréchet distance between each
//! agent's trajectory and the desired curve sampled at the agent's own phases,
//! minimized over one similarity transform shared by all agents.

mod frechet;
mod ga;

use std::ops::Deref;

use nalgebra::Rotation2;
use serde::{Deserialize, Serialize};

pub use frechet::{discrete_frechet, frechet_oracle, ORACLE_MAX_POINTS};
pub use ga::{ga_optimize, GaOutcome, GaParams, TransformBounds};

use crate::error::{Error, Result};
use crate::shape::{curve_sample, ClosedCurve, Point};

/// Circle distance between two phases in `[0, 1)`: `min(|x−y|, 1−|x−y|)`.
pub fn wrap_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    d.min(1.0 - d)
}

/// `p ↦ e·R(θ)·p + (x_t, y_t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform {
    pub scale: f64,
    pub rotation: f64,
    pub tx: f64,
    pub ty: f64,
}

impl SimilarityTransform {
    pub fn identity() -> Self {
        Self {
            scale: 1.0,
            rotation: 0.0,
            tx: 0.0,
            ty: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale > 0.0 && self.scale.is_finite() {
            Ok(())
        } else {
            Err(Error::config(format!("transform scale must be > 0, got {}", self.scale)))
        }
    }

    #[inline]
    pub fn apply(&self, p: &Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        let e = self.scale;
        Point::new(e * (c * p.x - s * p.y) + self.tx, e * (s * p.x + c * p.y) + self.ty)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Self {
        let t = self.apply(&Point::new(inner.tx, inner.ty));
        Self {
            scale: self.scale * inner.scale,
            rotation: self.rotation + inner.rotation,
            tx: t.x,
            ty: t.y,
        }
    }
}

/// An ordered, non-empty list of finite points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline(Vec<Point>);

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::config("polyline must have at least one point"));
        }
        if points.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::numeric("polyline has non-finite coordinates"));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn into_points(self) -> Vec<Point> {
        self.0
    }

    /// Largest distance between any two vertices.
    pub fn diameter(&self) -> f64 {
        diameter(&self.0)
    }
}

impl Deref for Polyline {
    type Target = [Point];

    fn deref(&self) -> &[Point] {
        &self.0
    }
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = Error;

    fn try_from(points: Vec<Point>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.0
    }
}

pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm_squared());
        }
    }
    best.sqrt()
}

pub fn apply_transform(poly: &Polyline, t: &SimilarityTransform) -> Result<Polyline> {
    t.validate()?;
    Ok(Polyline(poly.iter().map(|p| t.apply(p)).collect()))
}

/// Result of one metric evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub distance: f64,
    pub transform: SimilarityTransform,
}

/// Starting guesses injected into the GA population: identity, a
/// bounding-box fit, and the least-squares similarity fit over the
/// phase-matched point pairs.
pub fn heuristic_transforms(trajectories: &[Polyline], references: &[Vec<Point>]) -> Vec<SimilarityTransform> {
    let traj: Vec<Point> = trajectories.iter().flat_map(|t| t.iter().copied()).collect();
    let refs: Vec<Point> = references.iter().flat_map(|r| r.iter().copied()).collect();
    let mut out = vec![SimilarityTransform::identity()];
    if let (Some((tlo, thi)), Some((rlo, rhi))) = (bbox(&traj), bbox(&refs)) {
        let rdiag = (rhi - rlo).norm();
        let scale = if rdiag > 0.0 { (thi - tlo).norm() / rdiag } else { 1.0 };
        let shift = (tlo + thi) / 2.0 - scale * (rlo + rhi) / 2.0;
        out.push(SimilarityTransform {
            scale,
            rotation: 0.0,
            tx: shift.x,
            ty: shift.y,
        });
    }
    if let Some(fit) = least_squares_fit(&traj, &refs) {
        out.push(fit);
    }
    out
}

fn bbox(points: &[Point]) -> Option<(Point, Point)> {
    let first = *points.first()?;
    Some(points.iter().fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p))))
}

/// Closed-form `argmin Σ‖p_j − (e·R(θ)·q_j + t)‖²` over paired points.
fn least_squares_fit(target: &[Point], source: &[Point]) -> Option<SimilarityTransform> {
    if target.len() != source.len() || target.is_empty() {
        return None;
    }
    let n = target.len() as f64;
    let pc = target.iter().sum::<Point>() / n;
    let qc = source.iter().sum::<Point>() / n;
    let (mut dot, mut cross, mut qq) = (0.0, 0.0, 0.0);
    for (p, q) in target.iter().zip(source) {
        let (p, q) = (p - pc, q - qc);
        dot += q.dot(&p);
        cross += q.x * p.y - q.y * p.x;
        qq += q.norm_squared();
    }
    if qq == 0.0 {
        return None;
    }
    let rotation = cross.atan2(dot);
    let scale = dot.hypot(cross) / qq;
    if !(scale > 0.0 && scale.is_finite()) {
        return None;
    }
    let shift = pc - scale * (Rotation2::new(rotation) * qc);
    Some(SimilarityTransform {
        scale,
        rotation: rotation.rem_euclid(std::f64::consts::TAU),
        tx: shift.x,
        ty: shift.y,
    })
}

/// Mean Fréchet distance between trajectories and transformed references.
pub fn mean_frechet(trajectories: &[Polyline], references: &[Vec<Point>], t: &SimilarityTransform) -> f64 {
    let mut row = Vec::new();
    let mut moved = Vec::new();
    let total: f64 = trajectories
        .iter()
        .zip(references)
        .map(|(traj, reference)| {
            moved.clear();
            moved.extend(reference.iter().map(|q| t.apply(q)));
            frechet::frechet_sq_into(traj, &moved, &mut row).sqrt()
        })
        .sum();
    total / trajectories.len() as f64
}

/// Formation quality of one period.
///
/// `tau_offsets[i]` lists agent `i`'s phases at the logged steps; the
/// reference arc for agent `i` is the curve sampled at those phases.
pub fn metric_d(
    trajectories: &[Polyline],
    curve: &ClosedCurve,
    tau_offsets: &[Vec<f64>],
    ga: &GaParams,
    seed: u64,
) -> Result<MetricValue> {
    if trajectories.is_empty() {
        return Err(Error::config("metric needs at least one trajectory"));
    }
    if trajectories.len() != tau_offsets.len() {
        return Err(Error::config(format!(
            "{} trajectories but {} phase lists",
            trajectories.len(),
            tau_offsets.len()
        )));
    }
    let len = trajectories[0].len();
    for (traj, taus) in trajectories.iter().zip(tau_offsets) {
        if traj.len() != len || taus.len() != len {
            return Err(Error::config(
                "trajectories and phase lists must all have the same length",
            ));
        }
    }
    let references = tau_offsets
        .iter()
        .map(|taus| curve_sample(curve, taus))
        .collect::<Result<Vec<_>>>()?;
    let injected = heuristic_transforms(trajectories, &references);
    let out = ga_optimize(
        |t| mean_frechet(trajectories, &references, t),
        ga,
        &injected,
        seed,
    )?;
    if !out.value.is_finite() {
        return Err(Error::numeric("metric objective is not finite"));
    }
    Ok(MetricValue {
        distance: out.value,
        transform: out.best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::make_named_shape;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn wrap_distance() {
        assert_eq!(wrap_dist(0.3, 0.3), 0.0);
        assert_abs_diff_eq!(wrap_dist(0.1, 0.9), 0.2, epsilon = 1e-15);
        assert_eq!(wrap_dist(0.0, 0.5), 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (a, b, c): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
            assert!(wrap_dist(a, c) <= wrap_dist(a, b) + wrap_dist(b, c) + 1e-15);
            assert_eq!(wrap_dist(a, b), wrap_dist(b, a));
        }
    }

    #[test]
    fn transforms() {
        let poly = Polyline::new(vec![Point::new(1.0, 1.0), Point::new(-2.0, 0.5)]).unwrap();
        assert_eq!(apply_transform(&poly, &SimilarityTransform::identity()).unwrap(), poly);
        let double = SimilarityTransform {
            scale: 2.0,
            ..SimilarityTransform::identity()
        };
        assert_eq!(apply_transform(&poly, &double).unwrap()[0], Point::new(2.0, 2.0));
        let quarter = SimilarityTransform {
            scale: 1.0,
            rotation: FRAC_PI_2,
            tx: 1.0,
            ty: 0.0,
        };
        assert_abs_diff_eq!(quarter.apply(&Point::new(1.0, 0.0)), Point::new(1.0, 1.0), epsilon = 1e-15);
        let bad = SimilarityTransform {
            scale: 0.0,
            ..SimilarityTransform::identity()
        };
        assert!(apply_transform(&poly, &bad).is_err());
    }

    #[test]
    fn compose_matches_sequential_application() {
        let a = SimilarityTransform { scale: 1.3, rotation: 0.4, tx: 2.0, ty: -1.0 };
        let b = SimilarityTransform { scale: 0.7, rotation: 2.0, tx: -3.0, ty: 5.0 };
        let p = Point::new(0.3, -1.7);
        assert_abs_diff_eq!(a.compose(&b).apply(&p), a.apply(&b.apply(&p)), epsilon = 1e-12);
    }

    #[test]
    fn polyline_validation() {
        assert!(Polyline::new(vec![]).is_err());
        assert!(Polyline::new(vec![Point::new(f64::NAN, 0.0)]).is_err());
        let sq = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0), Point::new(1.0, 0.0)]).unwrap();
        assert_eq!(sq.diameter(), 5.0);
    }

    #[test]
    fn least_squares_recovers_exact_transform() {
        let c = make_named_shape("shape2").unwrap();
        let q: Vec<Point> = (0..50).map(|k| c.eval(k as f64 / 50.0)).collect();
        let t = SimilarityTransform { scale: 2.5, rotation: 4.0, tx: -3.0, ty: 8.0 };
        let p: Vec<Point> = q.iter().map(|x| t.apply(x)).collect();
        let fit = least_squares_fit(&p, &q).unwrap();
        assert_abs_diff_eq!(fit.scale, 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.rotation, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.tx, -3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.ty, 8.0, epsilon = 1e-9);
    }

    #[test]
    fn identity_trajectory_scores_zero() {
        let c = make_named_shape("shape1").unwrap();
        let taus: Vec<f64> = (0..100).map(|k| k as f64 / 100.0).collect();
        let traj = Polyline::new(curve_sample(&c, &taus).unwrap()).unwrap();
        let m = metric_d(&[traj], &c, &[taus], &GaParams::default(), 1).unwrap();
        assert!(m.distance <= 1e-6, "{m:?}");
    }

    #[test]
    fn metric_rejects_mismatched_inputs() {
        let c = make_named_shape("shape1").unwrap();
        let traj = Polyline::new(vec![Point::zeros(); 3]).unwrap();
        let ga = GaParams::default();
        assert!(metric_d(&[traj.clone()], &c, &[vec![0.0, 0.1]], &ga, 0).is_err());
        assert!(metric_d(&[traj.clone(), traj], &c, &[vec![0.0; 3]], &ga, 0).is_err());
        assert!(metric_d(&[], &c, &[], &ga, 0).is_err());
    }

    fn synthetic(
        curve: &ClosedCurve,
        t: &SimilarityTransform,
        agents: usize,
        noise: f64,
        rng: &mut ChaCha8Rng,
    ) -> (Vec<Polyline>, Vec<Vec<f64>>) {
        (0..agents)
            .map(|i| {
                let taus: Vec<f64> = (0..100)
                    .map(|k| (i as f64 / agents as f64 + k as f64 / 100.0).fract())
                    .collect();
                let pts = taus
                    .iter()
                    .map(|&s| {
                        let jitter = Point::new(rng.random_range(-noise..=noise), rng.random_range(-noise..=noise));
                        t.apply(&curve.eval(s)) + jitter
                    })
                    .collect();
                (Polyline::new(pts).unwrap(), taus)
            })
            .unzip()
    }

    #[test]
    fn recovers_known_transform() {
        let c = make_named_shape("shape1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut ok = 0;
        for trial in 0..20 {
            let t = SimilarityTransform {
                scale: rng.random_range(0.5..3.0),
                rotation: rng.random_range(0.0..std::f64::consts::TAU),
                tx: rng.random_range(-20.0..20.0),
                ty: rng.random_range(-20.0..20.0),
            };
            let (trajs, taus) = synthetic(&c, &t, 3, 0.0, &mut rng);
            let diam = diameter(&trajs[0]);
            let m = metric_d(&trajs, &c, &taus, &GaParams::default(), trial).unwrap();
            if m.distance <= 0.05 * diam && (m.transform.scale - t.scale).abs() <= 0.1 * t.scale {
                ok += 1;
            }
        }
        assert!(ok >= 18, "{ok}/20");
    }

    #[test]
    fn invariant_under_common_transform() {
        let c = make_named_shape("shape3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = SimilarityTransform { scale: 1.4, rotation: 0.3, tx: 2.0, ty: -1.0 };
        let (trajs, taus) = synthetic(&c, &t, 3, 0.05, &mut rng);
        let ga = GaParams::default();
        let base = metric_d(&trajs, &c, &taus, &ga, 3).unwrap().distance;
        // a rigid motion leaves the minimum unchanged
        let rigid = SimilarityTransform { scale: 1.0, rotation: 2.2, tx: -6.0, ty: 4.0 };
        let moved: Vec<Polyline> = trajs.iter().map(|p| apply_transform(p, &rigid).unwrap()).collect();
        let d_rigid = metric_d(&moved, &c, &taus, &ga, 3).unwrap().distance;
        assert!((d_rigid - base).abs() <= 0.05 * base, "{base} vs {d_rigid}");
        // a scaling by s scales the minimum by s
        let grow = SimilarityTransform { scale: 2.0, rotation: 1.0, tx: 3.0, ty: 3.0 };
        let grown: Vec<Polyline> = trajs.iter().map(|p| apply_transform(p, &grow).unwrap()).collect();
        let d_grow = metric_d(&grown, &c, &taus, &ga, 3).unwrap().distance;
        assert!((d_grow - 2.0 * base).abs() <= 0.05 * 2.0 * base, "{base} vs {d_grow}");
    }
}
