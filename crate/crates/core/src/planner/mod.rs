//! Receding-horizon sampling planner.
//!
//! Every cycle first predicts, for each goal, the path a plain task-cost
//! planner would take toward it. Baseline mode returns the target's
//! prediction. Legible mode then runs a second cross-entropy search on the
//! legibility-aware cost with those predictions held fixed, warm-started from
//! the target prediction's control mean.

mod cem;
mod closed_loop;

use alloc::vec::Vec;
use core::fmt;

use crate::error::{ContractViolation, ValidationError};
use crate::geometry::{Point2, Trajectory};
use crate::legibility::{legibility_aware_cost, PredictedPathSet};
use crate::math;
use crate::model::{RobotState, ScenarioSpec};
use crate::task_cost::{task_cost, CostBreakdown};

pub use cem::{CemConfig, CemOutcome};
pub use closed_loop::{run_closed_loop, ClosedLoopError, ClosedLoopRun, ExecutedStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Baseline,
    Legible,
}

/// Sampling spread of the cross-entropy search at its first iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlStd {
    pub v: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerParams {
    pub dt: f64,
    pub horizon_w: usize,
    pub mode: Mode,
    pub cem_population: usize,
    pub cem_elites: usize,
    pub cem_iterations: usize,
    pub cem_init_std: ControlStd,
    pub execute_steps: usize,
    pub goal_tolerance: f64,
    pub max_cycles: usize,
}

impl PlannerParams {
    pub fn defaults_for(robot: &RobotState) -> Self {
        Self {
            dt: 0.4,
            horizon_w: 12,
            mode: Mode::Legible,
            cem_population: 64,
            cem_elites: 8,
            cem_iterations: 4,
            cem_init_std: ControlStd {
                v: 0.5 * robot.v_max,
                omega: 0.5 * robot.omega_max,
            },
            execute_steps: 1,
            goal_tolerance: 0.3,
            max_cycles: 500,
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ValidationError::new("planner.dt", "positive and finite"));
        }
        if self.horizon_w < 2 {
            return Err(ValidationError::new("planner.horizon_w", "horizon_w ≥ 2"));
        }
        if self.cem_population < 8 {
            return Err(ValidationError::new("planner.cem_population", "cem_population ≥ 8"));
        }
        if self.cem_elites < 2 || self.cem_elites > self.cem_population {
            return Err(ValidationError::new(
                "planner.cem_elites",
                "2 ≤ cem_elites ≤ cem_population",
            ));
        }
        if self.cem_population > cem::MAX_KEY {
            return Err(ValidationError::new("planner.cem_population", "cem_population ≤ 2^20"));
        }
        if self.cem_iterations < 1 || self.cem_iterations > cem::MAX_KEY {
            return Err(ValidationError::new("planner.cem_iterations", "1 ≤ cem_iterations ≤ 2^20"));
        }
        if !(self.cem_init_std.v > 0.0 && self.cem_init_std.v.is_finite()) {
            return Err(ValidationError::new("planner.cem_init_std_v", "positive and finite"));
        }
        if !(self.cem_init_std.omega > 0.0 && self.cem_init_std.omega.is_finite()) {
            return Err(ValidationError::new("planner.cem_init_std_omega_deg", "positive and finite"));
        }
        if self.execute_steps < 1 || self.execute_steps > self.horizon_w {
            return Err(ValidationError::new(
                "planner.execute_steps",
                "1 ≤ execute_steps ≤ horizon_w",
            ));
        }
        if !(self.goal_tolerance > 0.0 && self.goal_tolerance.is_finite()) {
            return Err(ValidationError::new("planner.goal_tolerance", "goal_tolerance > 0"));
        }
        if self.max_cycles < 1 {
            return Err(ValidationError::new("planner.max_cycles", "max_cycles ≥ 1"));
        }
        Ok(())
    }
}

/// One unicycle command: forward speed (m/s) and turn rate (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Control {
    pub v: f64,
    pub omega: f64,
}

impl Control {
    pub const fn new(v: f64, omega: f64) -> Self {
        Self { v, omega }
    }
}

/// Controls for one horizon, always within the robot's limits.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSequence(Vec<Control>);

impl ControlSequence {
    /// Clips raw controls into the limits: `0 ≤ v ≤ v_max`, `|ω| ≤ ω_max` and
    /// `|v_t − v_{t−1}| ≤ a_max·dt`, starting from the robot's current speed.
    pub fn clipped(raw: &[Control], robot: &RobotState, dt: f64) -> Self {
        let dv = robot.a_max * dt;
        let mut prev = robot.speed;
        let controls = raw
            .iter()
            .map(|c| {
                let lo = (prev - dv).max(0.0);
                let hi = (prev + dv).min(robot.v_max);
                let v = if c.v.is_nan() { lo } else { c.v.clamp(lo, hi) };
                let omega = if c.omega.is_nan() {
                    0.0
                } else {
                    c.omega.clamp(-robot.omega_max, robot.omega_max)
                };
                prev = v;
                Control { v, omega }
            })
            .collect();
        Self(controls)
    }

    /// Whether the controls already satisfy every bound (within `tol`).
    pub fn respects_bounds(controls: &[Control], robot: &RobotState, dt: f64, tol: f64) -> bool {
        let mut prev = robot.speed;
        controls.iter().all(|c| {
            let ok = c.v >= -tol
                && c.v <= robot.v_max + tol
                && c.omega.abs() <= robot.omega_max + tol
                && (c.v - prev).abs() <= robot.a_max * dt + tol;
            prev = c.v;
            ok
        })
    }

    pub fn as_slice(&self) -> &[Control] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Control> {
        self.0
    }
}

/// Runs `f` for every index in `0..len` and returns the results in index
/// order. Implementations may evaluate in parallel; callers rely on `f` being
/// pure so results never depend on scheduling.
pub trait Executor {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Evaluates on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}

/// Unicycle forward integration: the heading is updated first, then the
/// position moves along the new heading.
pub fn rollout(state: &RobotState, controls: &[Control], dt: f64) -> Trajectory {
    let (waypoints, _) = rollout_with_headings(state, controls, dt);
    Trajectory::new(waypoints, dt).expect("rollout of a non-empty control sequence")
}

/// Waypoints and the heading held at each of them.
pub fn rollout_with_headings(state: &RobotState, controls: &[Control], dt: f64) -> (Vec<Point2>, Vec<f64>) {
    let mut q = state.position;
    let mut heading = state.heading;
    let mut pts = Vec::with_capacity(controls.len() + 1);
    let mut headings = Vec::with_capacity(controls.len() + 1);
    pts.push(q);
    headings.push(heading);
    for c in controls {
        heading += c.omega * dt;
        q += Point2::from_angle(heading) * (c.v * dt);
        pts.push(q);
        headings.push(math::wrap_angle(heading));
    }
    (pts, headings)
}

/// A steer-toward-goal control sequence used to initialise the search.
pub(crate) fn nominal_controls(robot: &RobotState, goal: Point2, v_pref: f64, dt: f64, w: usize) -> Vec<Control> {
    let mut q = robot.position;
    let mut heading = robot.heading;
    let mut v_prev = robot.speed;
    let mut out = Vec::with_capacity(w);
    for _ in 0..w {
        let to_goal = goal - q;
        let err = math::wrap_angle(to_goal.angle() - heading);
        let omega = (err / (2.0 * dt)).clamp(-robot.omega_max, robot.omega_max);
        let align = math::cos(err).max(0.0);
        let stop = to_goal.norm() / dt;
        let v_target = (v_pref * align).min(stop);
        let dv = robot.a_max * dt;
        let v = v_target.clamp((v_prev - dv).max(0.0), (v_prev + dv).min(robot.v_max));
        heading += omega * dt;
        q += Point2::from_angle(heading) * (v * dt);
        v_prev = v;
        out.push(Control::new(v, omega));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub trajectory: Trajectory,
    pub controls: Vec<Control>,
    pub breakdown: CostBreakdown,
    pub predictions: PredictedPathSet,
    pub cycles_used: usize,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanError {
    Contract(ContractViolation),
    /// Even the best candidate found collides.
    Collided { breakdown: CostBreakdown },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::Contract(c) => c.fmt(f),
            PlanError::Collided { .. } => f.write_str("planner failure: every candidate collides"),
        }
    }
}

impl core::error::Error for PlanError {}

impl From<ContractViolation> for PlanError {
    fn from(c: ContractViolation) -> Self {
        PlanError::Contract(c)
    }
}

/// Random-stream key of the legible search; prediction searches use the goal
/// index.
const LEGIBLE_STAGE: u32 = 0xFF_FFFF;

/// One planning cycle from the scenario's current robot state.
pub fn plan_once<E: Executor>(scenario: &ScenarioSpec, rng_seed: u64, exec: &E) -> Result<PlanResult, PlanError> {
    if scenario.goals.is_empty() {
        return Err(ContractViolation::new("scenario has no goals").into());
    }
    let target_idx = scenario
        .goals
        .iter()
        .position(|g| g.is_target)
        .ok_or_else(|| ContractViolation::new("scenario has no target goal"))?;
    let p = &scenario.planner;
    let robot = &scenario.robot;
    let weights = &scenario.task_weights;
    let cfg = CemConfig::from_params(p);

    let mut predictions = PredictedPathSet::new();
    let mut target_outcome = None;
    for (gi, goal) in scenario.goals.iter().enumerate() {
        let init = nominal_controls(robot, goal.position, weights.v_pref, p.dt, p.horizon_w);
        let outcome = cem::optimize(exec, robot, p.dt, &cfg, init, None, rng_seed, gi as u32, |traj| {
            task_cost(traj, goal.position, &scenario.obstacles, robot, weights)
        });
        predictions.insert(goal.id.clone(), outcome.best_trajectory.clone());
        if gi == target_idx {
            target_outcome = Some(outcome);
        }
    }
    let target_outcome = target_outcome.expect("target index is in range");
    let observer = scenario.designated_observer();
    let objective = |traj: &Trajectory| {
        legibility_aware_cost(
            traj,
            &scenario.goals,
            &predictions,
            observer,
            &scenario.obstacles,
            robot,
            weights,
            &scenario.legibility,
        )
    };

    let lambda_zero = scenario.legibility.lambda_sim == 0.0 && scenario.legibility.lambda_fov == 0.0;
    let (controls, trajectory, breakdown) = match p.mode {
        Mode::Baseline => (
            target_outcome.best_controls,
            target_outcome.best_trajectory,
            target_outcome.best_breakdown,
        ),
        // The legible objective equals the prediction objective, whose search
        // has already run.
        Mode::Legible if lambda_zero => {
            let b = objective(&target_outcome.best_trajectory)?;
            (target_outcome.best_controls, target_outcome.best_trajectory, b)
        }
        Mode::Legible => {
            // validate the objective once so the search itself cannot fail
            objective(&target_outcome.best_trajectory)?;
            let outcome = cem::optimize(
                exec,
                robot,
                p.dt,
                &cfg,
                target_outcome.mean.clone(),
                Some(target_outcome.best_controls.clone()),
                rng_seed,
                LEGIBLE_STAGE,
                |traj| objective(traj).expect("objective validated above"),
            );
            (outcome.best_controls, outcome.best_trajectory, outcome.best_breakdown)
        }
    };

    if breakdown.collided {
        return Err(PlanError::Collided { breakdown });
    }
    let target = scenario.goals[target_idx].position;
    let reached = trajectory.end().distance(target) <= p.goal_tolerance;
    Ok(PlanResult {
        trajectory,
        controls,
        breakdown,
        predictions,
        cycles_used: 1,
        reached,
    })
}
