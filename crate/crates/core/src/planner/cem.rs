//! Cross-entropy search over unicycle control sequences.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{rollout, Control, ControlSequence, ControlStd, Executor, PlannerParams};
use crate::geometry::Trajectory;
use crate::math;
use crate::model::RobotState;
use crate::task_cost::CostBreakdown;

/// Largest population / iteration count the stream keying supports.
pub(crate) const MAX_KEY: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CemConfig {
    pub population: usize,
    pub elites: usize,
    pub iterations: usize,
    pub init_std: ControlStd,
}

impl CemConfig {
    pub fn from_params(p: &PlannerParams) -> Self {
        Self {
            population: p.cem_population,
            elites: p.cem_elites,
            iterations: p.cem_iterations,
            init_std: p.cem_init_std,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CemOutcome {
    pub best_controls: Vec<Control>,
    pub best_trajectory: Trajectory,
    pub best_breakdown: CostBreakdown,
    /// Sampling mean after the last refit.
    pub mean: Vec<Control>,
    /// Best cost seen so far, after each iteration.
    pub history: Vec<f64>,
}

/// Independent random stream for one candidate of one iteration of one search.
fn candidate_rng(seed: u64, stage: u32, iteration: usize, candidate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stage = u64::from(stage) & 0xFF_FFFF;
    rng.set_stream((stage << 40) | ((iteration as u64) << 20) | candidate as u64);
    rng
}

fn sq(x: f64) -> f64 {
    x * x
}

struct Scored {
    controls: Vec<Control>,
    trajectory: Trajectory,
    breakdown: CostBreakdown,
}

/// Minimises `objective` over control sequences for `robot`.
///
/// Candidate 0 of every iteration is the current mean itself; the others are
/// per-step Gaussian draws clipped to the robot limits. The best candidate
/// ever scored is returned (ties keep the earlier one), so the cost history is
/// non-increasing. `incumbent`, when given, is scored before the first
/// iteration and acts as the initial best.
#[allow(clippy::too_many_arguments)]
pub(crate) fn optimize<E, F>(
    exec: &E,
    robot: &RobotState,
    dt: f64,
    cfg: &CemConfig,
    init_mean: Vec<Control>,
    incumbent: Option<Vec<Control>>,
    seed: u64,
    stage: u32,
    objective: F,
) -> CemOutcome
where
    E: Executor,
    F: Fn(&Trajectory) -> CostBreakdown + Sync + Send,
{
    let w = init_mean.len();
    let mut mean = init_mean;
    let mut std: Vec<ControlStd> = alloc::vec![cfg.init_std; w];
    let floor = ControlStd {
        v: 0.02 * cfg.init_std.v,
        omega: 0.02 * cfg.init_std.omega,
    };

    let score = |raw: &[Control]| {
        let controls = ControlSequence::clipped(raw, robot, dt).into_inner();
        let trajectory = rollout(robot, &controls, dt);
        let breakdown = objective(&trajectory);
        Scored {
            controls,
            trajectory,
            breakdown,
        }
    };

    let mut best: Option<Scored> = incumbent.map(|c| score(&c));
    let mut history = Vec::with_capacity(cfg.iterations);

    for it in 0..cfg.iterations {
        let (m, s) = (&mean, &std);
        let scored: Vec<Scored> = exec.map_indexed(cfg.population, |k| {
            if k == 0 {
                return score(m);
            }
            let mut rng = candidate_rng(seed, stage, it, k);
            let raw: Vec<Control> = m
                .iter()
                .zip(s)
                .map(|(c, sd)| {
                    let zv: f64 = rng.sample(StandardNormal);
                    let zw: f64 = rng.sample(StandardNormal);
                    Control::new(c.v + sd.v * zv, c.omega + sd.omega * zw)
                })
                .collect();
            score(&raw)
        });

        let mut order: Vec<usize> = (0..scored.len()).collect();
        order.sort_by(|&a, &b| {
            scored[a]
                .breakdown
                .total
                .total_cmp(&scored[b].breakdown.total)
                .then(a.cmp(&b))
        });

        let elites = &order[..cfg.elites];
        let n = elites.len() as f64;
        for t in 0..w {
            let mv = elites.iter().map(|&i| scored[i].controls[t].v).sum::<f64>() / n;
            let mw = elites.iter().map(|&i| scored[i].controls[t].omega).sum::<f64>() / n;
            let vv = elites
                .iter()
                .map(|&i| sq(scored[i].controls[t].v - mv))
                .sum::<f64>()
                / n;
            let vw = elites
                .iter()
                .map(|&i| sq(scored[i].controls[t].omega - mw))
                .sum::<f64>()
                / n;
            mean[t] = Control::new(mv, mw);
            std[t] = ControlStd {
                v: math::sqrt(vv).max(floor.v),
                omega: math::sqrt(vw).max(floor.omega),
            };
        }

        let mut scored = scored;
        let top = scored.swap_remove(order[0]);
        let improves = best
            .as_ref()
            .is_none_or(|b| top.breakdown.total < b.breakdown.total);
        if improves {
            best = Some(top);
        }
        history.push(best.as_ref().map_or(f64::INFINITY, |b| b.breakdown.total));
    }

    let best = best.unwrap_or_else(|| score(&mean));
    CemOutcome {
        best_controls: best.controls,
        best_trajectory: best.trajectory,
        best_breakdown: best.breakdown,
        mean,
        history,
    }
}
