//! Cyclic-pursuit formation control for arbitrary closed-curve shapes.
//!
//! Each agent sees only the relative position of its predecessor on a ring.
//! Agents trace the desired curve individually while pulling toward where
//! their predecessor was one phase gap ago, so that all trajectories merge
//! into one copy of the shape. With unshared frames, agents also estimate the
//! predecessor's frame rotation from its motion and adopt it at random.
//!
//! - [`shape`]: desired curves (Fourier series, polygons, heart)
//! - [`dynamics`]: agent state and the two movement laws
//! - [`schedulers`]: alignment probability schedules
//! - [`metrics`]: discrete Fréchet distance and the transform-minimized metric
//! - [`harness`]: configuration, runs, CSV logs, evaluation, sweeps

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod schedulers;
pub mod shape;

pub use dynamics::{AgentState, InitialFrames, StepParams, World};
pub use error::{Error, Result};
pub use harness::{Method, SimConfig, TrajectoryLog};
pub use metrics::{GaParams, Polyline, SimilarityTransform};
pub use schedulers::BetaSchedule;
pub use shape::{make_named_shape, ClosedCurve, Point};
