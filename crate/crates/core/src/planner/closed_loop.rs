use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use super::{plan_once, rollout_with_headings, Executor, PlanError, PlanResult};
use crate::geometry::{clearance, Point2, Trajectory};
use crate::model::ScenarioSpec;

/// One executed state of the closed loop. `v` and `omega` are the command that
/// led into it (the initial row carries the starting speed and zero turn rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecutedStep {
    pub t: f64,
    pub position: Point2,
    pub heading: f64,
    pub v: f64,
    pub omega: f64,
    /// Obstacle clearance minus the robot radius.
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopRun {
    pub plans: Vec<PlanResult>,
    pub steps: Vec<ExecutedStep>,
    pub reached: bool,
    pub cycles_used: usize,
}

impl ClosedLoopRun {
    /// Executed positions as a trajectory. A run that never moved yields the
    /// degenerate `[q_0, q_0]`.
    pub fn executed(&self, dt: f64) -> Trajectory {
        let mut pts: Vec<Point2> = self.steps.iter().map(|s| s.position).collect();
        if pts.len() == 1 {
            pts.push(pts[0]);
        }
        Trajectory::new(pts, dt).expect("executed steps are finite")
    }

    pub fn min_clearance(&self) -> f64 {
        self.steps.iter().map(|s| s.clearance).fold(f64::INFINITY, f64::min)
    }
}

/// A planning failure in some cycle, with everything executed before it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopError {
    pub cycle: usize,
    pub error: PlanError,
    pub partial: Box<ClosedLoopRun>,
}

impl fmt::Display for ClosedLoopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle {}: {}", self.cycle, self.error)
    }
}

impl core::error::Error for ClosedLoopError {}

/// Plans, executes the first `execute_steps` controls, and replans until the
/// robot is within `goal_tolerance` of the target or `max_cycles` cycles ran.
/// Cycle `k` plans with seed `scenario.seed + k`.
pub fn run_closed_loop<E: Executor>(scenario: &ScenarioSpec, exec: &E) -> Result<ClosedLoopRun, ClosedLoopError> {
    let p = &scenario.planner;
    let mut world = scenario.clone();
    let target = scenario
        .target()
        .map(|g| g.position)
        .ok_or_else(|| ClosedLoopError {
            cycle: 0,
            error: PlanError::Contract(crate::ContractViolation::new("scenario has no single target goal")),
            partial: Box::new(ClosedLoopRun {
                plans: Vec::new(),
                steps: Vec::new(),
                reached: false,
                cycles_used: 0,
            }),
        })?;

    let start = &scenario.robot;
    let mut run = ClosedLoopRun {
        plans: Vec::new(),
        steps: alloc::vec![ExecutedStep {
            t: 0.0,
            position: start.position,
            heading: start.heading,
            v: start.speed,
            omega: 0.0,
            clearance: clearance(start.position, &scenario.obstacles) - start.radius,
        }],
        reached: start.position.distance(target) <= p.goal_tolerance,
        cycles_used: 0,
    };

    let mut cycle = 0;
    while !run.reached && cycle < p.max_cycles {
        let seed = scenario.seed.wrapping_add(cycle as u64);
        let plan = match plan_once(&world, seed, exec) {
            Ok(plan) => plan,
            Err(error) => {
                run.cycles_used = cycle;
                return Err(ClosedLoopError {
                    cycle,
                    error,
                    partial: Box::new(run),
                });
            }
        };
        let (pts, headings) = rollout_with_headings(&world.robot, &plan.controls, p.dt);
        for k in 0..p.execute_steps {
            let c = plan.controls[k];
            let q = pts[k + 1];
            let step = ExecutedStep {
                t: run.steps.len() as f64 * p.dt,
                position: q,
                heading: headings[k + 1],
                v: c.v,
                omega: c.omega,
                clearance: clearance(q, &scenario.obstacles) - world.robot.radius,
            };
            run.steps.push(step);
            world.robot.position = q;
            world.robot.heading = headings[k + 1];
            world.robot.speed = c.v;
            if q.distance(target) <= p.goal_tolerance {
                run.reached = true;
                break;
            }
        }
        run.plans.push(plan);
        cycle += 1;
    }
    run.cycles_used = cycle;
    Ok(run)
}
