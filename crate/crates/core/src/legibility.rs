//! Observer-perspective legibility terms.
//!
//! A candidate is compared step by step with the path an observer would
//! predict for every goal. Similarity to the target's predicted path lowers the
//! cost, similarity to any other goal's raises it. Each step is weighted by
//! whether the observer can see it and by how much closer the robot is to the
//! competing goal than to its own. A separate term keeps the robot near the
//! observer's line of sight.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{ContractViolation, ValidationError};
use crate::geometry::{velocities, Obstacle, Point2, Trajectory};
use crate::math;
use crate::model::{Goal, ObserverState, RobotState};
use crate::task_cost::{task_cost, CostBreakdown, TaskCostWeights};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegibilityParams {
    pub lambda_sim: f64,
    pub lambda_fov: f64,
    /// Upper clamp of the distance-ratio weight.
    pub h_max: f64,
    /// Speeds below this contribute no similarity, m/s.
    pub eps_v: f64,
}

impl Default for LegibilityParams {
    fn default() -> Self {
        Self {
            lambda_sim: 1.0,
            lambda_fov: 0.2,
            h_max: 3.0,
            eps_v: 1e-6,
        }
    }
}

impl LegibilityParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (name, v) in [
            ("legibility.lambda_sim", self.lambda_sim),
            ("legibility.lambda_fov", self.lambda_fov),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ValidationError::new(name, "finite and non-negative"));
            }
        }
        if !(self.h_max > 0.0 && self.h_max.is_finite()) {
            return Err(ValidationError::new("legibility.h_max", "positive and finite"));
        }
        if !(self.eps_v > 0.0 && self.eps_v.is_finite()) {
            return Err(ValidationError::new("legibility.eps_v", "positive and finite"));
        }
        Ok(())
    }
}

/// Predicted local path for each goal, in goal order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictedPathSet {
    paths: Vec<(String, Trajectory)>,
}

impl PredictedPathSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the prediction for `goal_id`.
    pub fn insert(&mut self, goal_id: impl Into<String>, path: Trajectory) {
        let id = goal_id.into();
        match self.paths.iter_mut().find(|(g, _)| *g == id) {
            Some(slot) => slot.1 = path,
            None => self.paths.push((id, path)),
        }
    }

    pub fn get(&self, goal_id: &str) -> Option<&Trajectory> {
        self.paths.iter().find(|(g, _)| g == goal_id).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Trajectory)> {
        self.paths.iter().map(|(g, t)| (g.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Angle between the observer's gaze and the direction to `q`, in [0, π].
/// Zero when `q` coincides with the observer.
pub fn theta_dev(q: Point2, observer: &ObserverState) -> f64 {
    let d = q - observer.position;
    let n = d.norm();
    if n == 0.0 {
        return 0.0;
    }
    let c = (d / n).dot(Point2::from_angle(observer.heading));
    math::acos(c.clamp(-1.0, 1.0))
}

/// Whether `q` lies inside the observer's (infinitely deep) view wedge,
/// boundary included.
pub fn visibility(q: Point2, observer: &ObserverState) -> bool {
    theta_dev(q, observer) <= observer.fov / 2.0
}

/// Distance-ratio weight `d(q, g*) / d(q, g)`, clamped to `[0, h_max]`.
///
/// Exactly 1 when `g` is the target itself, `h_max` when `q` sits on `g`,
/// 0 when `q` sits on the target.
pub fn h_weight(q: Point2, g_star: Point2, g: Point2, h_max: f64) -> f64 {
    if g == g_star {
        return 1.0;
    }
    let to_star = q.distance(g_star);
    if to_star == 0.0 {
        return 0.0;
    }
    let to_g = q.distance(g);
    if to_g == 0.0 {
        return h_max;
    }
    (to_star / to_g).min(h_max)
}

/// Per-step cosine between the velocities of `a` and `b`; steps where either
/// speed is below `eps_v` yield 0.
pub fn step_cosines(a: &Trajectory, b: &Trajectory, eps_v: f64) -> Result<Vec<f64>, ContractViolation> {
    check_aligned(a, b)?;
    Ok(velocities(a)
        .into_iter()
        .zip(velocities(b))
        .map(|(va, vb)| {
            let (na, nb) = (va.norm(), vb.norm());
            if na < eps_v || nb < eps_v {
                0.0
            } else {
                (va.dot(vb) / (na * nb)).clamp(-1.0, 1.0)
            }
        })
        .collect())
}

fn check_aligned(a: &Trajectory, b: &Trajectory) -> Result<(), ContractViolation> {
    if a.waypoints().len() != b.waypoints().len() {
        return Err(ContractViolation::new(format!(
            "trajectories differ in length ({} vs {})",
            a.waypoints().len(),
            b.waypoints().len()
        )));
    }
    if a.dt() != b.dt() {
        return Err(ContractViolation::new("trajectories differ in time step"));
    }
    Ok(())
}

/// Visibility- and distance-weighted cosine similarity between a candidate and
/// the predicted path toward `goal`. Without an observer every step counts as
/// visible.
pub fn weighted_similarity(
    candidate: &Trajectory,
    predicted: &Trajectory,
    goal: &Goal,
    g_star: Point2,
    observer: Option<&ObserverState>,
    params: &LegibilityParams,
) -> Result<f64, ContractViolation> {
    let cosines = step_cosines(candidate, predicted, params.eps_v)?;
    let mut sum = 0.0;
    for (q, cos) in candidate.waypoints().iter().zip(cosines) {
        if cos == 0.0 {
            continue;
        }
        if let Some(o) = observer {
            if !visibility(*q, o) {
                continue;
            }
        }
        let h = if goal.is_target {
            1.0
        } else {
            h_weight(*q, g_star, goal.position, params.h_max)
        };
        sum += h * cos;
    }
    Ok(sum)
}

/// Similarity to every unintended goal's prediction minus similarity to the
/// target's.
pub fn sim_cost(
    candidate: &Trajectory,
    predictions: &PredictedPathSet,
    goals: &[Goal],
    observer: Option<&ObserverState>,
    params: &LegibilityParams,
) -> Result<f64, ContractViolation> {
    let target = goals
        .iter()
        .find(|g| g.is_target)
        .ok_or_else(|| ContractViolation::new("no target goal"))?;
    let mut others = 0.0;
    let mut own = 0.0;
    for g in goals {
        let predicted = predictions
            .get(&g.id)
            .ok_or_else(|| ContractViolation::new(format!("missing prediction for goal {}", g.id)))?;
        let s = weighted_similarity(candidate, predicted, g, target.position, observer, params)?;
        if g.is_target {
            own = s;
        } else {
            others += s;
        }
    }
    Ok(others - own)
}

/// Sum over waypoints of `tanh(θ_dev / (fov / 2))`.
pub fn fov_cost(candidate: &Trajectory, observer: &ObserverState) -> f64 {
    let half = observer.fov / 2.0;
    candidate
        .waypoints()
        .iter()
        .map(|q| math::tanh(theta_dev(*q, observer) / half))
        .sum()
}

/// Task cost toward the target plus the λ-weighted similarity and
/// field-of-view terms. Without an observer the field-of-view term is zero.
#[allow(clippy::too_many_arguments)]
pub fn legibility_aware_cost(
    candidate: &Trajectory,
    goals: &[Goal],
    predictions: &PredictedPathSet,
    observer: Option<&ObserverState>,
    obstacles: &[Obstacle],
    robot: &RobotState,
    task_weights: &TaskCostWeights,
    params: &LegibilityParams,
) -> Result<CostBreakdown, ContractViolation> {
    let target = goals
        .iter()
        .find(|g| g.is_target)
        .ok_or_else(|| ContractViolation::new("no target goal"))?;
    let mut out = task_cost(candidate, target.position, obstacles, robot, task_weights);
    out.sim_term = sim_cost(candidate, predictions, goals, observer, params)?;
    out.fov_term = observer.map_or(0.0, |o| fov_cost(candidate, o));
    if !out.collided {
        out.total += params.lambda_sim * out.sim_term + params.lambda_fov * out.fov_term;
    }
    Ok(out)
}
