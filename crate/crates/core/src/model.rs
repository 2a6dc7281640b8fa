//! The declarative world a planner runs in.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::ValidationError;
use crate::geometry::{clearance, Obstacle, Point2};
use crate::legibility::LegibilityParams;
use crate::planner::PlannerParams;
use crate::task_cost::TaskCostWeights;

/// Kinematic state and limits of the disc-shaped robot.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub position: Point2,
    /// Radians in (-π, π].
    pub heading: f64,
    /// Current forward speed, `0 ≤ speed ≤ v_max`.
    pub speed: f64,
    pub radius: f64,
    pub v_max: f64,
    pub a_max: f64,
    pub omega_max: f64,
}

impl RobotState {
    /// A robot at rest with the default limits (0.25 m radius, 1 m/s, 1 m/s², 90°/s).
    pub fn at(position: Point2, heading: f64) -> Self {
        Self {
            position,
            heading,
            speed: 0.0,
            radius: 0.25,
            v_max: 1.0,
            a_max: 1.0,
            omega_max: PI / 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub id: String,
    pub position: Point2,
    pub is_target: bool,
}

impl Goal {
    pub fn new(id: impl Into<String>, position: Point2, is_target: bool) -> Self {
        Self {
            id: id.into(),
            position,
            is_target,
        }
    }
}

/// A watching human: position, gaze heading and angular field of view.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverState {
    pub id: String,
    pub position: Point2,
    pub heading: f64,
    /// Full opening angle in (0, 2π].
    pub fov: f64,
    pub attached_goal: Option<String>,
}

impl ObserverState {
    /// Default field of view, 120°.
    pub const DEFAULT_FOV: f64 = 2.0 * PI / 3.0;

    pub fn new(id: impl Into<String>, position: Point2, heading: f64) -> Self {
        Self {
            id: id.into(),
            position,
            heading,
            fov: Self::DEFAULT_FOV,
            attached_goal: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub robot: RobotState,
    pub goals: Vec<Goal>,
    pub observers: Vec<ObserverState>,
    pub obstacles: Vec<Obstacle>,
    pub planner: PlannerParams,
    pub task_weights: TaskCostWeights,
    pub legibility: LegibilityParams,
    pub seed: u64,
}

impl ScenarioSpec {
    /// A scenario with default parameters for `robot`.
    pub fn new(robot: RobotState, goals: Vec<Goal>) -> Self {
        Self {
            planner: PlannerParams::defaults_for(&robot),
            task_weights: TaskCostWeights::defaults_for(&robot),
            legibility: LegibilityParams::default(),
            robot,
            goals,
            observers: Vec::new(),
            obstacles: Vec::new(),
            seed: 0,
        }
    }

    /// The goal flagged `is_target`, if there is exactly one.
    pub fn target(&self) -> Option<&Goal> {
        let mut it = self.goals.iter().filter(|g| g.is_target);
        match (it.next(), it.next()) {
            (Some(g), None) => Some(g),
            _ => None,
        }
    }

    /// The observer the legibility terms are computed for: the one attached to
    /// the target goal, otherwise the first observer.
    pub fn designated_observer(&self) -> Option<&ObserverState> {
        let target = self.target().map(|g| g.id.as_str());
        self.observers
            .iter()
            .find(|o| target.is_some() && o.attached_goal.as_deref() == target)
            .or_else(|| self.observers.first())
    }

    /// Checks every world-model invariant; returns the first violation.
    pub fn validate(&self) -> Result<(), ValidationError> {
        validate_robot(&self.robot)?;

        if self.goals.is_empty() {
            return Err(ValidationError::new("goals", "at least one goal"));
        }
        if self.goals.iter().filter(|g| g.is_target).count() != 1 {
            return Err(ValidationError::new("goals", "exactly one target"));
        }
        for (i, g) in self.goals.iter().enumerate() {
            if !g.position.is_finite() {
                return Err(ValidationError::new(format!("goals[{i}].position"), "finite coordinates"));
            }
            if self.goals[..i].iter().any(|o| o.id == g.id) {
                return Err(ValidationError::new(format!("goals[{i}].id"), "unique goal ids"));
            }
        }

        for (i, o) in self.observers.iter().enumerate() {
            if !o.position.is_finite() || !o.heading.is_finite() {
                return Err(ValidationError::new(format!("observers[{i}]"), "finite pose"));
            }
            if !(o.fov > 0.0 && o.fov <= TAU) {
                return Err(ValidationError::new(format!("observers[{i}].fov_deg"), "fov in (0, 360]"));
            }
            if self.observers[..i].iter().any(|p| p.id == o.id) {
                return Err(ValidationError::new(format!("observers[{i}].id"), "unique observer ids"));
            }
            if let Some(goal) = &o.attached_goal {
                if !self.goals.iter().any(|g| &g.id == goal) {
                    return Err(ValidationError::new(
                        format!("observers[{i}].attached_goal"),
                        "attached goal must name a goal",
                    ));
                }
            }
        }

        for (i, ob) in self.obstacles.iter().enumerate() {
            match *ob {
                Obstacle::Circle { center, radius } => {
                    if !center.is_finite() || !(radius > 0.0 && radius.is_finite()) {
                        return Err(ValidationError::new(
                            format!("obstacles[{i}].circle"),
                            "finite center and radius > 0",
                        ));
                    }
                }
                Obstacle::Rect { min, max } => {
                    if !min.is_finite() || !max.is_finite() || !(min.x < max.x && min.y < max.y) {
                        return Err(ValidationError::new(
                            format!("obstacles[{i}].rect"),
                            "min < max componentwise",
                        ));
                    }
                }
            }
        }

        let r = self.robot.radius;
        if clearance(self.robot.position, &self.obstacles) < r {
            return Err(ValidationError::new("robot.position", "start clearance ≥ radius"));
        }
        for (i, g) in self.goals.iter().enumerate() {
            if clearance(g.position, &self.obstacles) < r {
                return Err(ValidationError::new(
                    format!("goals[{i}].position"),
                    "goal clearance ≥ radius",
                ));
            }
        }

        self.planner.validate()?;
        if self.robot.v_max > self.robot.a_max * self.planner.horizon_w as f64 * self.planner.dt {
            return Err(ValidationError::new(
                "planner",
                "stopping horizon: v_max ≤ a_max · horizon_w · dt",
            ));
        }
        self.task_weights.validate()?;
        self.legibility.validate()?;
        Ok(())
    }
}

fn validate_robot(r: &RobotState) -> Result<(), ValidationError> {
    if !r.position.is_finite() {
        return Err(ValidationError::new("robot.position", "finite coordinates"));
    }
    if !(r.heading > -PI && r.heading <= PI) {
        return Err(ValidationError::new("robot.heading_deg", "heading in (-180, 180]"));
    }
    for (name, v) in [
        ("robot.radius", r.radius),
        ("robot.v_max", r.v_max),
        ("robot.a_max", r.a_max),
        ("robot.omega_max_deg", r.omega_max),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ValidationError::new(name, "positive and finite"));
        }
    }
    if !(r.speed >= 0.0 && r.speed <= r.v_max) {
        return Err(ValidationError::new("robot.speed", "0 ≤ speed ≤ v_max"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn base() -> ScenarioSpec {
        ScenarioSpec::new(
            RobotState::at(Point2::ORIGIN, 0.0),
            vec![
                Goal::new("a", Point2::new(4.0, 1.0), true),
                Goal::new("b", Point2::new(4.0, -1.0), false),
            ],
        )
    }

    #[test]
    fn default_scenario_is_valid() {
        base().validate().unwrap();
    }

    #[test]
    fn two_targets_rejected() {
        let mut s = base();
        s.goals[1].is_target = true;
        let e = s.validate().unwrap_err();
        assert_eq!(e.path, "goals");
        assert_eq!(e.rule, "exactly one target");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut s = base();
        s.goals[1].id = "a".into();
        assert_eq!(s.validate().unwrap_err().path, "goals[1].id");
    }

    #[test]
    fn start_inside_obstacle_rejected() {
        let mut s = base();
        s.obstacles.push(Obstacle::Circle {
            center: Point2::new(0.3, 0.0),
            radius: 0.2,
        });
        assert_eq!(s.validate().unwrap_err().path, "robot.position");
    }

    #[test]
    fn stopping_horizon_enforced() {
        let mut s = base();
        s.robot.a_max = 0.1;
        assert_eq!(s.validate().unwrap_err().path, "planner");
    }

    #[test]
    fn designated_observer_prefers_target_attachment() {
        let mut s = base();
        s.observers.push(ObserverState::new("o1", Point2::new(5.0, 0.0), PI));
        let mut o2 = ObserverState::new("o2", Point2::new(5.0, 1.0), PI);
        o2.attached_goal = Some("a".into());
        s.observers.push(o2);
        assert_eq!(s.designated_observer().unwrap().id, "o2");
        s.observers[1].attached_goal = Some("b".into());
        assert_eq!(s.designated_observer().unwrap().id, "o1");
    }

    #[test]
    fn dangling_attachment_rejected() {
        let mut s = base();
        let mut o = ObserverState::new("o", Point2::new(5.0, 0.0), PI);
        o.attached_goal = Some("zz".into());
        s.observers.push(o);
        assert_eq!(s.validate().unwrap_err().path, "observers[0].attached_goal");
    }
}
