//! Agent state and the one-step movement laws.
//!
//! Agents sit on a ring: agent `i` only observes its predecessor `n(i)`, the
//! next agent in index order (agent `N` observes agent `1`). Each agent carries
//! a phase `τ` on the desired curve and, when frames are not shared, the
//! rotation `θ` of its local frame relative to the global one.
//!
//! Internally agents are stored 0-based; [`next_index`] exposes the 1-based
//! convention used in the CLI output.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedulers::BetaSchedule;
use crate::shape::{wrap_phase, ClosedCurve, Point};

/// Vectors shorter than this carry no usable direction.
pub const DIRECTION_EPS: f64 = 1e-9;

// Guards ⌊(Nη)⁻¹⌋ against 1/(Nη) landing just below an integer.
const FLOOR_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Point,
    /// Phase on the desired curve, in `[0, 1)`.
    pub tau: f64,
    /// Local frame rotation, in `[0, 2π)`. Always 0 with a shared frame.
    pub theta: f64,
    /// Orientation on the initial circle.
    pub phi0: f64,
    /// Predecessor's position relative to this agent at the previous step.
    pub prev_pred_rel: Option<Point>,
    /// Displacement applied at the previous step.
    pub last_move: Point,
    /// `β` used at the last step (0 with a shared frame).
    pub last_beta: f64,
    /// Last achievement rate that could be computed.
    pub last_achievement: Option<f64>,
}

/// All agents of one run plus the step counter.
#[derive(Clone, Debug, PartialEq)]
pub struct World {
    pub agents: Vec<AgentState>,
    pub step: u64,
}

impl World {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Largest deviation of `δ(τ_{n(i)}, τ_i)` from `1/N` over all agents.
    pub fn spacing_error(&self) -> f64 {
        let n = self.agents.len();
        (0..n)
            .map(|i| {
                let gap = crate::metrics::wrap_dist(self.agents[(i + 1) % n].tau, self.agents[i].tau);
                (gap - 1.0 / n as f64).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// How frame angles are initialized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialFrames {
    /// Shared global frame, θ = 0.
    Shared,
    /// One uniform draw in `[0, 2π)` per agent, in agent order.
    Random,
    /// Every agent starts at the same angle.
    Fixed(f64),
}

/// Step size and alignment gain shared by both movement laws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    pub eta: f64,
    pub alpha: f64,
}

/// Predecessor of agent `i` (1-based): `i + 1`, wrapping `N` to 1.
pub fn next_index(i: usize, n: usize) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::config(format!("agent index {i} outside 1..={n}")));
    }
    Ok(if i < n { i + 1 } else { 1 })
}

/// Place `n` agents evenly on a circle, agent `i` at angle `2π(i−1)/N`.
pub fn init_placement<R: Rng + ?Sized>(
    n: usize,
    center: Point,
    radius: f64,
    frames: InitialFrames,
    rng: &mut R,
) -> Result<World> {
    if n < 3 {
        return Err(Error::config(format!("need at least 3 agents, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::config(format!("circle radius must be positive, got {radius}")));
    }
    let agents = (0..n)
        .map(|i| {
            let psi = TAU * i as f64 / n as f64;
            let theta = match frames {
                InitialFrames::Shared => 0.0,
                InitialFrames::Random => rng.random_range(0.0..TAU),
                InitialFrames::Fixed(a) => wrap_angle(a),
            };
            AgentState {
                position: center + radius * Point::new(psi.cos(), psi.sin()),
                tau: psi / TAU,
                theta,
                phi0: psi,
                prev_pred_rel: None,
                last_move: Point::zeros(),
                last_beta: 0.0,
                last_achievement: None,
            }
        })
        .collect();
    Ok(World { agents, step: 0 })
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn rotate(v: Point, theta: f64) -> Point {
    if theta == 0.0 {
        return v;
    }
    let (s, c) = theta.sin_cos();
    Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Advance a phase by `η`, wrapping at 1.
pub fn tau_step(tau: f64, eta: f64) -> f64 {
    let next = tau + eta;
    if next < 1.0 {
        next
    } else {
        next - 1.0
    }
}

/// Phase of the predecessor, which always leads by exactly `1/N`.
pub fn predecessor_tau(tau: f64, n: usize) -> f64 {
    let next = tau + 1.0 / n as f64;
    if next < 1.0 {
        next
    } else {
        next - 1.0
    }
}

/// Shape-tracing displacement `η·R(θ)·γ̇(τ)`.
pub fn v_shape(curve: &ClosedCurve, tau: f64, theta: f64, eta: f64) -> Point {
    rotate(curve.deriv(tau), theta) * eta
}

/// Number of past predecessor moves undone when locating the ideal position:
/// `⌊(Nη)⁻¹⌋`.
pub fn backtrack_count(n: usize, eta: f64) -> usize {
    (1.0 / (n as f64 * eta) + FLOOR_SLACK).floor() as usize
}

/// Where the predecessor was `⌊(Nη)⁻¹⌋` steps ago, reconstructed from its
/// current relative position and the shape it is assumed to be tracing.
pub fn ideal_position(
    x: Point,
    pred_rel: Point,
    curve: &ClosedCurve,
    tau: f64,
    n: usize,
    eta: f64,
    theta: f64,
) -> Point {
    let lead = 1.0 / n as f64;
    let undone: Point = (1..=backtrack_count(n, eta))
        .map(|l| curve.deriv(tau + lead - l as f64 * eta))
        .sum();
    x + pred_rel - rotate(undone, theta) * eta
}

/// Pull toward the ideal position: `α·(ideal − x)`.
pub fn v_align(ideal: Point, x: Point, alpha: f64) -> Point {
    (ideal - x) * alpha
}

/// Frame angle that rotates `γ̇(τ_pred)` onto the observed predecessor
/// displacement, or `None` when either vector is too short to have a direction.
pub fn estimate_pred_theta(observed_disp: Point, curve: &ClosedCurve, tau_pred: f64) -> Option<f64> {
    let tangent = curve.deriv(tau_pred);
    if observed_disp.norm() <= DIRECTION_EPS || tangent.norm() <= DIRECTION_EPS {
        return None;
    }
    Some(wrap_angle(
        observed_disp.y.atan2(observed_disp.x) - tangent.y.atan2(tangent.x),
    ))
}

/// Angular distance between two frame angles, in `[0, π]`.
pub fn achievement(theta: f64, estimate: f64) -> f64 {
    let d = (theta - estimate).abs().rem_euclid(TAU);
    d.min(TAU - d)
}

/// One synchronous step of the shared-frame law.
pub fn step_method1(world: &mut World, curve: &ClosedCurve, params: StepParams) {
    let n = world.agents.len();
    let moves: Vec<Point> = (0..n)
        .map(|i| {
            let me = &world.agents[i];
            let pred_rel = world.agents[(i + 1) % n].position - me.position;
            let ideal = ideal_position(me.position, pred_rel, curve, me.tau, n, params.eta, 0.0);
            v_shape(curve, me.tau, 0.0, params.eta) + v_align(ideal, me.position, params.alpha)
        })
        .collect();
    for (agent, mv) in world.agents.iter_mut().zip(moves) {
        agent.prev_pred_rel = None;
        agent.position += mv;
        agent.last_move = mv;
        agent.tau = tau_step(agent.tau, params.eta);
        agent.last_beta = 0.0;
    }
    world.step += 1;
}

/// One synchronous step of the local-frame law with probabilistic alignment.
///
/// Each agent draws exactly one uniform number per step from `rng`, in agent
/// order, whether or not an alignment is possible.
pub fn step_method2<R: Rng + ?Sized>(
    world: &mut World,
    curve: &ClosedCurve,
    params: StepParams,
    schedule: &BetaSchedule,
    rng: &mut R,
) -> Result<()> {
    let n = world.agents.len();
    let k = world.step;

    struct Update {
        mv: Point,
        pred_rel: Point,
        theta: f64,
        beta: f64,
        achievement: Option<f64>,
    }

    let mut updates = Vec::with_capacity(n);
    for i in 0..n {
        let me = &world.agents[i];
        let pred_rel = world.agents[(i + 1) % n].position - me.position;
        let ideal = ideal_position(me.position, pred_rel, curve, me.tau, n, params.eta, me.theta);
        let mv = v_shape(curve, me.tau, me.theta, params.eta) + v_align(ideal, me.position, params.alpha);

        // x_{n(i)}(k) − x_{n(i)}(k−1) from the two relative observations and
        // the agent's own last move. That move followed the tangent at the
        // predecessor's phase of step k−1.
        let estimate = me.prev_pred_rel.and_then(|prev| {
            let disp = pred_rel - prev + me.last_move;
            let observed_tau = wrap_phase(predecessor_tau(me.tau, n) - params.eta);
            estimate_pred_theta(disp, curve, observed_tau)
        });
        let achievement_now = estimate.map(|e| achievement(me.theta, e)).or(me.last_achievement);
        let beta = schedule.beta_value(k, achievement_now)?;
        let draw: f64 = rng.random();
        let theta = match estimate {
            Some(e) if draw < beta => e,
            _ => me.theta,
        };
        updates.push(Update {
            mv,
            pred_rel,
            theta,
            beta,
            achievement: achievement_now,
        });
    }

    for (agent, u) in world.agents.iter_mut().zip(updates) {
        agent.position += u.mv;
        agent.last_move = u.mv;
        agent.prev_pred_rel = Some(u.pred_rel);
        agent.tau = tau_step(agent.tau, params.eta);
        agent.theta = u.theta;
        agent.last_beta = u.beta;
        agent.last_achievement = u.achievement;
    }
    world.step += 1;
    Ok(())
}
