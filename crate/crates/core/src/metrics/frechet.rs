//! Discrete Fréchet distance.
//!
//! Eiter & Mannila's O(|P||Q|) dynamic program, plus an exhaustive
//! enumeration of monotone couplings for cross-checking on tiny inputs.

use crate::error::{Error, Result};
use crate::shape::Point;

/// Largest polyline the brute-force oracle accepts.
pub const ORACLE_MAX_POINTS: usize = 8;

/// Discrete Fréchet distance under the Euclidean point metric.
///
/// Panics if either polyline is empty.
pub fn discrete_frechet(p: &[Point], q: &[Point]) -> f64 {
    assert!(!p.is_empty() && !q.is_empty(), "discrete Fréchet of an empty polyline");
    let mut row = vec![0.0f64; q.len()];
    frechet_sq_into(p, q, &mut row).sqrt()
}

/// Same as [`discrete_frechet`] but reuses `row` (resized to `q.len()`) as
/// scratch space and returns the *squared* distance.
pub(crate) fn frechet_sq_into(p: &[Point], q: &[Point], row: &mut Vec<f64>) -> f64 {
    let m = q.len();
    row.resize(m, 0.0);
    let sq = |a: &Point, b: &Point| {
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        dx * dx + dy * dy
    };
    // Squared distances keep the same argmin/argmax; one sqrt at the end.
    row[0] = sq(&p[0], &q[0]);
    for j in 1..m {
        row[j] = row[j - 1].max(sq(&p[0], &q[j]));
    }
    for a in &p[1..] {
        let mut diag = row[0];
        row[0] = row[0].max(sq(a, &q[0]));
        for j in 1..m {
            let up = row[j];
            row[j] = diag.min(up).min(row[j - 1]).max(sq(a, &q[j]));
            diag = up;
        }
    }
    row[m - 1]
}

/// Minimum over every monotone coupling of the maximum coupled distance,
/// found by walking all lattice paths. Only for polylines of at most
/// [`ORACLE_MAX_POINTS`] points.
pub fn frechet_oracle(p: &[Point], q: &[Point]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::config("Fréchet oracle needs non-empty polylines"));
    }
    if p.len() > ORACLE_MAX_POINTS || q.len() > ORACLE_MAX_POINTS {
        return Err(Error::config(format!(
            "Fréchet oracle limited to {ORACLE_MAX_POINTS} points, got {} and {}",
            p.len(),
            q.len()
        )));
    }

    fn walk(p: &[Point], q: &[Point], i: usize, j: usize, worst: f64, best: &mut f64) {
        let worst = worst.max((p[i] - q[j]).norm());
        if i + 1 == p.len() && j + 1 == q.len() {
            *best = best.min(worst);
            return;
        }
        if i + 1 < p.len() {
            walk(p, q, i + 1, j, worst, best);
        }
        if j + 1 < q.len() {
            walk(p, q, i, j + 1, worst, best);
        }
        if i + 1 < p.len() && j + 1 < q.len() {
            walk(p, q, i + 1, j + 1, worst, best);
        }
    }

    let mut best = f64::INFINITY;
    walk(p, q, 0, 0, 0.0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn small_cases() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let q = pts(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]);
        assert_eq!(discrete_frechet(&p, &q), 1.0);
        assert_eq!(frechet_oracle(&p, &q).unwrap(), 1.0);
        assert_eq!(discrete_frechet(&p, &p), 0.0);
        assert_eq!(discrete_frechet(&pts(&[(0.0, 0.0)]), &pts(&[(3.0, 4.0)])), 5.0);
    }

    #[test]
    fn order_sensitivity() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let q = pts(&[(0.0, 0.5), (1.0, 0.5), (2.0, 0.5)]);
        let rev: Vec<Point> = q.iter().rev().copied().collect();
        assert_eq!(frechet_oracle(&p, &q).unwrap(), 0.5);
        // reversing forces the endpoints to cross the whole polyline
        assert!(frechet_oracle(&p, &rev).unwrap() > 2.0);
    }

    #[test]
    fn oracle_rejects_large_inputs() {
        let big = vec![Point::zeros(); ORACLE_MAX_POINTS + 1];
        assert!(frechet_oracle(&big, &big[..2]).is_err());
        assert!(frechet_oracle(&[], &big[..2]).is_err());
    }

    fn polyline(max: usize) -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..=max)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
    }

    proptest! {
        #[test]
        fn dp_equals_oracle(p in polyline(8), q in polyline(8)) {
            prop_assert_eq!(discrete_frechet(&p, &q), frechet_oracle(&p, &q).unwrap());
        }

        #[test]
        fn symmetric_and_bounded_by_endpoints(p in polyline(30), q in polyline(30)) {
            let d = discrete_frechet(&p, &q);
            prop_assert_eq!(d, discrete_frechet(&q, &p));
            let first = (p[0] - q[0]).norm();
            let last = (p[p.len() - 1] - q[q.len() - 1]).norm();
            prop_assert!(d >= first.max(last));
            prop_assert_eq!(discrete_frechet(&p, &p), 0.0);
        }
    }
}
