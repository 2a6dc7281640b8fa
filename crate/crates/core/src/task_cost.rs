//! The task cost: goal progress, obstacle clearance, approach rate,
//! smoothness and speed tracking.

use crate::error::ValidationError;
use crate::geometry::{clearance, velocities, Obstacle, Point2, Trajectory};
use crate::model::RobotState;

/// Total reported for any trajectory that enters an obstacle.
pub const COLLISION_COST: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskCostWeights {
    pub w_goal: f64,
    pub w_clearance: f64,
    pub w_approach: f64,
    pub w_smooth: f64,
    pub w_speed: f64,
    /// Clearance (after subtracting the robot radius) below which the
    /// clearance penalty starts, meters.
    pub d_safe: f64,
    /// Preferred cruising speed, m/s.
    pub v_pref: f64,
}

impl TaskCostWeights {
    pub fn defaults_for(robot: &RobotState) -> Self {
        Self {
            w_goal: 1.0,
            w_clearance: 2.0,
            w_approach: 0.5,
            w_smooth: 0.1,
            w_speed: 0.2,
            d_safe: 0.5,
            v_pref: 0.8 * robot.v_max,
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        for (name, w) in [
            ("task_weights.w_goal", self.w_goal),
            ("task_weights.w_clearance", self.w_clearance),
            ("task_weights.w_approach", self.w_approach),
            ("task_weights.w_smooth", self.w_smooth),
            ("task_weights.w_speed", self.w_speed),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(ValidationError::new(name, "finite and non-negative"));
            }
        }
        if !(self.d_safe > 0.0 && self.d_safe.is_finite()) {
            return Err(ValidationError::new("task_weights.d_safe", "positive and finite"));
        }
        if !(self.v_pref > 0.0 && self.v_pref.is_finite()) {
            return Err(ValidationError::new("task_weights.v_pref", "positive and finite"));
        }
        Ok(())
    }
}

/// Per-term costs of one candidate. The `*_term` fields are unweighted;
/// `total` is the weighted sum (or [`COLLISION_COST`] when `collided`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub goal_term: f64,
    pub clearance_term: f64,
    pub approach_term: f64,
    pub smooth_term: f64,
    pub speed_term: f64,
    pub sim_term: f64,
    pub fov_term: f64,
    pub total: f64,
    pub collided: bool,
}

impl CostBreakdown {
    /// Weighted task part of the total, recomputed from the terms.
    pub fn weighted_task(&self, w: &TaskCostWeights) -> f64 {
        w.w_goal * self.goal_term
            + w.w_clearance * self.clearance_term
            + w.w_approach * self.approach_term
            + w.w_smooth * self.smooth_term
            + w.w_speed * self.speed_term
    }
}

pub fn task_cost(
    traj: &Trajectory,
    goal: Point2,
    obstacles: &[Obstacle],
    robot: &RobotState,
    weights: &TaskCostWeights,
) -> CostBreakdown {
    let q = traj.waypoints();
    let n = q.len();
    let dt = traj.dt();

    let terminal = q[n - 1].distance(goal);
    let mean = q.iter().map(|p| p.distance(goal)).sum::<f64>() / n as f64;
    let goal_term = terminal + mean;

    let mut collided = false;
    let mut clearance_term = 0.0;
    let mut approach_term = 0.0;
    let mut prev = f64::NAN;
    for (t, p) in q.iter().enumerate() {
        let c = clearance(*p, obstacles) - robot.radius;
        if c < 0.0 {
            collided = true;
        }
        let short = (weights.d_safe - c).max(0.0) / weights.d_safe;
        clearance_term += short * short;
        if t > 0 {
            approach_term += (prev - c).max(0.0) / weights.d_safe;
        }
        prev = c;
    }

    let dt4 = dt * dt * dt * dt;
    let smooth_term = q
        .windows(3)
        .map(|s| {
            let a = s[2] - s[1] * 2.0 + s[0];
            a.dot(a) / dt4
        })
        .sum::<f64>();

    let vp = weights.v_pref;
    let speed_term = velocities(traj)
        .iter()
        .map(|v| {
            let e = vp - v.norm();
            e * e / (vp * vp)
        })
        .sum::<f64>();

    let mut out = CostBreakdown {
        goal_term,
        clearance_term,
        approach_term,
        smooth_term,
        speed_term,
        collided,
        ..CostBreakdown::default()
    };
    out.total = if collided {
        COLLISION_COST
    } else {
        out.weighted_task(weights)
    };
    out
}
