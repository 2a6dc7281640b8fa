//! Legibility-aware local motion planning.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure computation:
//! the world model and its geometry, the task and legibility cost terms, the
//! cross-entropy receding-horizon planner and the synthetic-observer
//! evaluation. File formats, rendering and the command-line driver live in the
//! `legiplan` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod eval;
pub mod geometry;
pub mod legibility;
pub(crate) mod math;
pub mod model;
pub mod planner;
pub mod task_cost;

pub use error::{ContractViolation, ValidationError};
pub use eval::{
    correctness, evaluate_trajectory, goal_posterior, legibility_score, LegibilityReport, Posterior,
    PosteriorModel, DEFAULT_PARTIALS,
};
pub use geometry::{
    arc_length_prefix, clearance, integrate, velocities, Obstacle, Point2, Trajectory, Vec2,
    CLEARANCE_SENTINEL,
};
pub use legibility::{
    fov_cost, h_weight, legibility_aware_cost, sim_cost, step_cosines, theta_dev, visibility,
    weighted_similarity, LegibilityParams, PredictedPathSet,
};
pub use model::{Goal, ObserverState, RobotState, ScenarioSpec};
pub use planner::{
    plan_once, rollout, rollout_with_headings, run_closed_loop, ClosedLoopError, ClosedLoopRun, Control, ControlSequence,
    ControlStd, Executor, ExecutedStep, Mode, PlanError, PlanResult, PlannerParams, Sequential,
};
pub use math::wrap_angle;
pub use task_cost::{task_cost, CostBreakdown, TaskCostWeights, COLLISION_COST};
