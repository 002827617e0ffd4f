//! Real-coded genetic algorithm over similarity transforms.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SimilarityTransform;
use crate::error::{Error, Result};

const GENES: usize = 4;
type Genome = [f64; GENES];

/// Search box for `(scale, rotation, x_t, y_t)`. Rotation is periodic and
/// wraps instead of clamping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformBounds {
    pub scale: (f64, f64),
    pub rotation: (f64, f64),
    pub tx: (f64, f64),
    pub ty: (f64, f64),
}

impl Default for TransformBounds {
    fn default() -> Self {
        Self {
            scale: (0.1, 5.0),
            rotation: (0.0, TAU),
            tx: (-50.0, 50.0),
            ty: (-50.0, 50.0),
        }
    }
}

impl TransformBounds {
    fn ranges(&self) -> [(f64, f64); GENES] {
        [self.scale, self.rotation, self.tx, self.ty]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in ["scale", "rotation", "tx", "ty"].iter().zip(self.ranges()) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!("empty or invalid {name} bounds [{lo}, {hi}]")));
            }
        }
        if self.scale.0 <= 0.0 {
            return Err(Error::config("scale bounds must be positive"));
        }
        Ok(())
    }

    fn clamp(&self, g: &mut Genome) {
        for (k, (lo, hi)) in self.ranges().into_iter().enumerate() {
            g[k] = if k == 1 {
                lo + (g[k] - lo).rem_euclid(hi - lo)
            } else {
                g[k].clamp(lo, hi)
            };
        }
    }
}

/// Genetic algorithm settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub tournament: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Mutation standard deviation as a fraction of each gene's range.
    pub mutation_sigma: f64,
    pub elitism: usize,
    pub bounds: TransformBounds,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 50,
            generations: 100,
            tournament: 3,
            crossover_prob: 0.9,
            mutation_prob: 0.2,
            mutation_sigma: 0.05,
            elitism: 2,
            bounds: TransformBounds::default(),
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        self.bounds.validate()?;
        if self.population == 0 {
            return Err(Error::config("GA population must be at least 1"));
        }
        if self.tournament == 0 {
            return Err(Error::config("GA tournament size must be at least 1"));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if !(self.mutation_sigma >= 0.0 && self.mutation_sigma.is_finite()) {
            return Err(Error::config("mutation_sigma must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Best individual found and its objective value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaOutcome {
    pub best: SimilarityTransform,
    pub value: f64,
}

fn to_genome(t: &SimilarityTransform) -> Genome {
    [t.scale, t.rotation, t.tx, t.ty]
}

fn from_genome(g: &Genome) -> SimilarityTransform {
    SimilarityTransform {
        scale: g[0],
        rotation: g[1],
        tx: g[2],
        ty: g[3],
    }
}

/// Minimize `objective` over similarity transforms.
///
/// `injected` individuals (clamped into the bounds) head the initial
/// population; the rest is drawn uniformly. Evaluation order never touches
/// the random stream, so results depend only on `seed`.
pub fn ga_optimize<F>(
    objective: F,
    params: &GaParams,
    injected: &[SimilarityTransform],
    seed: u64,
) -> Result<GaOutcome>
where
    F: Fn(&SimilarityTransform) -> f64 + Sync,
{
    params.validate()?;
    let bounds = params.bounds;
    let ranges = bounds.ranges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let score = |g: &Genome| {
        let v = objective(&from_genome(g));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let evaluate = |pop: &[Genome]| -> Vec<f64> { pop.par_iter().map(score).collect() };

    let mut pop: Vec<Genome> = injected
        .iter()
        .take(params.population)
        .map(|t| {
            let mut g = to_genome(t);
            bounds.clamp(&mut g);
            g
        })
        .collect();
    while pop.len() < params.population {
        let mut g = [0.0; GENES];
        for (gene, (lo, hi)) in g.iter_mut().zip(ranges) {
            *gene = rng.random_range(lo..hi);
        }
        pop.push(g);
    }
    let mut fit = evaluate(&pop);

    let tournament = |fit: &[f64], rng: &mut ChaCha8Rng| -> usize {
        (0..params.tournament)
            .map(|_| rng.random_range(0..fit.len()))
            .min_by(|&a, &b| fit[a].total_cmp(&fit[b]))
            .expect("tournament size >= 1")
    };

    for _ in 0..params.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]));
        let elites = params.elitism.min(pop.len());
        let mut next: Vec<Genome> = order[..elites].iter().map(|&i| pop[i]).collect();
        let mut next_fit: Vec<f64> = order[..elites].iter().map(|&i| fit[i]).collect();

        let mut children = Vec::with_capacity(pop.len() - elites);
        while next.len() + children.len() < pop.len() {
            let a = pop[tournament(&fit, &mut rng)];
            let b = pop[tournament(&fit, &mut rng)];
            let mut child = a;
            if rng.random::<f64>() < params.crossover_prob {
                for (k, gene) in child.iter_mut().enumerate() {
                    if rng.random::<bool>() {
                        *gene = b[k];
                    }
                }
            }
            for (k, gene) in child.iter_mut().enumerate() {
                if rng.random::<f64>() < params.mutation_prob {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *gene += z * params.mutation_sigma * (ranges[k].1 - ranges[k].0);
                }
            }
            bounds.clamp(&mut child);
            children.push(child);
        }
        next_fit.extend(evaluate(&children));
        next.extend(children);
        pop = next;
        fit = next_fit;
    }

    let best = (0..pop.len())
        .min_by(|&a, &b| fit[a].total_cmp(&fit[b]))
        .expect("population >= 1");
    Ok(GaOutcome {
        best: from_genome(&pop[best]),
        value: fit[best],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(target: SimilarityTransform) -> impl Fn(&SimilarityTransform) -> f64 + Sync {
        move |t| {
            (t.scale - target.scale).powi(2)
                + (t.rotation - target.rotation).powi(2)
                + (t.tx - target.tx).powi(2)
                + (t.ty - target.ty).powi(2)
        }
    }

    #[test]
    fn finds_quadratic_optimum() {
        let target = SimilarityTransform {
            scale: 2.0,
            rotation: 1.5,
            tx: 12.0,
            ty: -7.0,
        };
        let out = ga_optimize(quadratic(target), &GaParams::default(), &[], 4).unwrap();
        let b = out.best;
        let close = |got: f64, want: f64| (got - want).abs() <= 0.01 * want.abs();
        assert!(close(b.scale, 2.0), "{b:?}");
        assert!(close(b.rotation, 1.5), "{b:?}");
        assert!(close(b.tx, 12.0), "{b:?}");
        assert!(close(b.ty, -7.0), "{b:?}");
    }

    #[test]
    fn zero_generations_returns_injected() {
        let seedling = SimilarityTransform {
            scale: 1.5,
            rotation: 0.2,
            tx: 1.0,
            ty: 2.0,
        };
        let params = GaParams {
            population: 1,
            generations: 0,
            ..GaParams::default()
        };
        let out = ga_optimize(|_| 1.0, &params, &[seedling], 9).unwrap();
        assert_eq!(out.best, seedling);
    }

    #[test]
    fn deterministic_per_seed() {
        let target = SimilarityTransform::identity();
        let params = GaParams {
            generations: 20,
            ..GaParams::default()
        };
        let a = ga_optimize(quadratic(target), &params, &[], 77).unwrap();
        let b = ga_optimize(quadratic(target), &params, &[], 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_empty_bounds() {
        let mut params = GaParams::default();
        params.bounds.tx = (3.0, 3.0);
        assert!(ga_optimize(|_| 0.0, &params, &[], 0).is_err());
        let params = GaParams {
            population: 0,
            ..GaParams::default()
        };
        assert!(ga_optimize(|_| 0.0, &params, &[], 0).is_err());
    }

    #[test]
    fn rotation_wraps_inside_bounds() {
        let b = TransformBounds::default();
        let mut g = [1.0, -0.5, 0.0, 0.0];
        b.clamp(&mut g);
        assert!((g[1] - (TAU - 0.5)).abs() < 1e-12);
        let mut g = [9.0, 7.0, 80.0, -80.0];
        b.clamp(&mut g);
        assert_eq!([g[0], g[2], g[3]], [5.0, 50.0, -50.0]);
    }
}
