//! Synthetic observer: goal inference from trajectory prefixes and the
//! weighted legibility score.
//!
//! The observer scores a goal by how much the partial path `S → Q` costs on top
//! of the cheapest way to the goal, with path length as cost and Euclidean
//! distance as the optimal remaining cost:
//!
//! ```text
//! P(G | S→Q) ∝ prior(G) · exp(−β (len(S→Q) + d(Q, G))) / exp(−β d(S, G))
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::ContractViolation;
use crate::geometry::{arc_length_prefix, Point2, Trajectory};
use crate::legibility::visibility;
use crate::math;
use crate::model::{Goal, ObserverState, ScenarioSpec};
use crate::planner::Mode;

/// Arc-length fractions of the three default partials.
pub const DEFAULT_PARTIALS: [f64; 3] = [0.25, 0.50, 0.75];

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorModel {
    /// Rationality (inverse temperature), per meter.
    pub beta: f64,
    /// Prior per goal id; `None` is uniform.
    pub prior: Option<Vec<(String, f64)>>,
}

impl Default for PosteriorModel {
    fn default() -> Self {
        Self {
            beta: 1.0,
            prior: None,
        }
    }
}

impl PosteriorModel {
    fn prior_for(&self, goals: &[Goal]) -> Result<Vec<f64>, ContractViolation> {
        match &self.prior {
            None => Ok(alloc::vec![1.0 / goals.len() as f64; goals.len()]),
            Some(p) => {
                let out = goals
                    .iter()
                    .map(|g| {
                        p.iter()
                            .find(|(id, _)| *id == g.id)
                            .map(|(_, v)| *v)
                            .ok_or_else(|| ContractViolation::new(alloc::format!("no prior for goal {}", g.id)))
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                let sum: f64 = out.iter().sum();
                if out.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
                    return Err(ContractViolation::new("prior must be non-negative and sum to 1"));
                }
                Ok(out)
            }
        }
    }
}

/// Probability per goal id, in goal order.
pub type Posterior = Vec<(String, f64)>;

pub fn goal_posterior(
    prefix: &Trajectory,
    goals: &[Goal],
    start: Point2,
    model: &PosteriorModel,
) -> Result<Posterior, ContractViolation> {
    if goals.is_empty() {
        return Err(ContractViolation::new("posterior needs at least one goal"));
    }
    if !(model.beta >= 0.0 && model.beta.is_finite()) {
        return Err(ContractViolation::new("beta must be finite and non-negative"));
    }
    let prior = model.prior_for(goals)?;
    let len = prefix.arc_length();
    let ids = goals.iter().map(|g| g.id.clone());
    if model.beta == 0.0 || len == 0.0 {
        return Ok(ids.zip(prior).collect());
    }
    let q = prefix.end();
    let logits: Vec<f64> = goals
        .iter()
        .zip(&prior)
        .map(|(g, p)| {
            let excess = len + q.distance(g.position) - start.distance(g.position);
            if *p > 0.0 {
                math::ln(*p) - model.beta * excess
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|l| math::exp(l - top)).collect();
    let z: f64 = weights.iter().sum();
    Ok(ids.zip(weights.into_iter().map(|w| w / z)).collect())
}

/// Posterior mass on the target goal.
pub fn correctness(posterior: &[(String, f64)], g_star_id: &str) -> Result<f64, ContractViolation> {
    posterior
        .iter()
        .find(|(id, _)| id == g_star_id)
        .map(|(_, p)| *p)
        .ok_or_else(|| ContractViolation::new(alloc::format!("goal {g_star_id} not in posterior")))
}

/// Mean of the correctness values weighted by `1/k` (k = 1, 2, ...).
pub fn legibility_score(correctness: &[f64]) -> Result<f64, ContractViolation> {
    if correctness.is_empty() {
        return Err(ContractViolation::new("legibility score needs at least one partial"));
    }
    if correctness.iter().any(|c| !(0.0..=1.0).contains(c)) {
        return Err(ContractViolation::new("correctness values must lie in [0, 1]"));
    }
    let (num, den) = correctness
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(num, den), (i, c)| {
            let w = 1.0 / (i + 1) as f64;
            (num + w * c, den + w)
        });
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegibilityReport {
    pub partial_fractions: Vec<f64>,
    pub posteriors: Vec<Posterior>,
    pub correctness: Vec<f64>,
    /// Whether the target was the most probable goal, per partial. Reported
    /// only; the score uses the continuous correctness.
    pub argmax_correct: Vec<bool>,
    pub score: f64,
    pub mode: Mode,
}

/// Scores an executed trajectory on the given partials.
///
/// With `mask` set, each partial is cut back to its last waypoint visible to
/// that observer (an entirely unseen partial yields the prior).
pub fn evaluate_trajectory(
    executed: &Trajectory,
    scenario: &ScenarioSpec,
    model: &PosteriorModel,
    fractions: &[f64],
    mode: Mode,
    mask: Option<&ObserverState>,
) -> Result<LegibilityReport, ContractViolation> {
    let target = scenario
        .target()
        .ok_or_else(|| ContractViolation::new("scenario has no single target goal"))?;
    if fractions.is_empty() {
        return Err(ContractViolation::new("at least one partial fraction is required"));
    }
    let start = executed.start();
    let mut posteriors = Vec::with_capacity(fractions.len());
    let mut correct = Vec::with_capacity(fractions.len());
    let mut argmax = Vec::with_capacity(fractions.len());
    for &f in fractions {
        let mut prefix = arc_length_prefix(executed, f)?;
        if let Some(o) = mask {
            prefix = visible_prefix(&prefix, o);
        }
        let post = goal_posterior(&prefix, &scenario.goals, start, model)?;
        let c = correctness(&post, &target.id)?;
        let best = post
            .iter()
            .fold(None::<&(String, f64)>, |acc, e| match acc {
                Some(a) if a.1 >= e.1 => Some(a),
                _ => Some(e),
            })
            .map(|(id, _)| id.as_str());
        argmax.push(best == Some(target.id.as_str()));
        correct.push(c);
        posteriors.push(post);
    }
    let score = legibility_score(&correct)?;
    Ok(LegibilityReport {
        partial_fractions: fractions.to_vec(),
        posteriors,
        correctness: correct,
        argmax_correct: argmax,
        score,
        mode,
    })
}

fn visible_prefix(prefix: &Trajectory, observer: &ObserverState) -> Trajectory {
    let pts = prefix.waypoints();
    let last = pts.iter().rposition(|q| visibility(*q, observer)).unwrap_or(0);
    let mut kept = pts[..=last].to_vec();
    if kept.len() < 2 {
        kept.push(kept[0]);
    }
    Trajectory::new(kept, prefix.dt()).expect("sub-trajectory of a valid trajectory")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RobotState;
    use alloc::vec;

    fn straight(to: Point2) -> Trajectory {
        Trajectory::new(vec![Point2::ORIGIN, to * 0.5, to], 1.0).unwrap()
    }

    #[test]
    fn symmetric_goals_split_evenly() {
        let goals = vec![
            Goal::new("a", Point2::new(3.0, 2.0), true),
            Goal::new("b", Point2::new(3.0, -2.0), false),
        ];
        let p = goal_posterior(&straight(Point2::new(1.0, 0.0)), &goals, Point2::ORIGIN, &PosteriorModel::default()).unwrap();
        assert!((p[0].1 - 0.5).abs() < 1e-9);
        assert!((p[1].1 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn heading_toward_target_favors_it() {
        let goals = vec![
            Goal::new("a", Point2::new(5.0, 0.0), true),
            Goal::new("b", Point2::new(-3.0, 0.0), false),
        ];
        let p = goal_posterior(&straight(Point2::new(1.0, 0.0)), &goals, Point2::ORIGIN, &PosteriorModel::default()).unwrap();
        assert!(p[0].1 > 0.5);
    }

    #[test]
    fn hand_computed_posterior() {
        // exponents 0 and -(3 - √5): P(G1) = 1 / (1 + e^{-(3-√5)})
        let goals = vec![
            Goal::new("g1", Point2::new(2.0, 0.0), true),
            Goal::new("g2", Point2::new(1.0, 2.0), false),
        ];
        let p = goal_posterior(&straight(Point2::new(1.0, 0.0)), &goals, Point2::ORIGIN, &PosteriorModel::default()).unwrap();
        assert!((p[0].1 - 0.682_206_809).abs() < 1e-6);
        assert!((correctness(&p, "g1").unwrap() - 0.682).abs() < 1e-3);
    }

    #[test]
    fn correctness_examples() {
        let p = vec![("s".into(), 1.0), ("o".into(), 0.0)];
        assert_eq!(correctness(&p, "s").unwrap(), 1.0);
        let u = vec![("s".into(), 0.5), ("o".into(), 0.5)];
        assert_eq!(correctness(&u, "s").unwrap(), 0.5);
        assert!(correctness(&u, "zz").is_err());
    }

    #[test]
    fn score_examples() {
        assert_eq!(legibility_score(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(legibility_score(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((legibility_score(&[1.0, 1.0, 0.0]).unwrap() - 9.0 / 11.0).abs() < 1e-12);
        assert!(legibility_score(&[]).is_err());
        assert!(legibility_score(&[1.5]).is_err());
    }

    #[test]
    fn beta_zero_and_zero_length_give_prior() {
        let goals = vec![
            Goal::new("a", Point2::new(3.0, 1.0), true),
            Goal::new("b", Point2::new(3.0, -4.0), false),
        ];
        let model = PosteriorModel {
            beta: 0.0,
            prior: Some(vec![("a".into(), 0.3), ("b".into(), 0.7)]),
        };
        let p = goal_posterior(&straight(Point2::new(1.0, 1.0)), &goals, Point2::ORIGIN, &model).unwrap();
        assert_eq!((p[0].1, p[1].1), (0.3, 0.7));
        let still = Trajectory::new(vec![Point2::ORIGIN; 2], 1.0).unwrap();
        let p = goal_posterior(&still, &goals, Point2::ORIGIN, &PosteriorModel::default()).unwrap();
        assert_eq!((p[0].1, p[1].1), (0.5, 0.5));
    }

    #[test]
    fn single_goal_scenario_scores_one() {
        let spec = ScenarioSpec::new(
            RobotState::at(Point2::ORIGIN, 0.0),
            vec![Goal::new("only", Point2::new(4.0, 0.0), true)],
        );
        let traj = Trajectory::new(vec![Point2::ORIGIN, Point2::new(1.0, 1.0), Point2::new(3.0, 0.0)], 0.4).unwrap();
        let r = evaluate_trajectory(&traj, &spec, &PosteriorModel::default(), &DEFAULT_PARTIALS, Mode::Legible, None).unwrap();
        assert_eq!(r.correctness, vec![1.0; 3]);
        assert_eq!(r.score, 1.0);
    }

    #[test]
    fn mirror_symmetric_trajectory_scores_half() {
        let spec = ScenarioSpec::new(
            RobotState::at(Point2::ORIGIN, 0.0),
            vec![
                Goal::new("a", Point2::new(4.0, 2.0), true),
                Goal::new("b", Point2::new(4.0, -2.0), false),
            ],
        );
        let traj = Trajectory::new((0..5).map(|i| Point2::new(i as f64 * 0.5, 0.0)).collect(), 0.4).unwrap();
        let r = evaluate_trajectory(&traj, &spec, &PosteriorModel::default(), &DEFAULT_PARTIALS, Mode::Baseline, None).unwrap();
        for c in &r.correctness {
            assert!((c - 0.5).abs() < 1e-9);
        }
        assert!((r.score - 0.5).abs() < 1e-9);
    }

    #[test]
    fn masking_hides_unseen_motion() {
        let spec = ScenarioSpec::new(
            RobotState::at(Point2::ORIGIN, 0.0),
            vec![
                Goal::new("a", Point2::new(4.0, 2.0), true),
                Goal::new("b", Point2::new(4.0, -2.0), false),
            ],
        );
        let traj = Trajectory::new(vec![Point2::ORIGIN, Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)], 0.4).unwrap();
        // looking away from the whole path
        let blind = ObserverState::new("o", Point2::new(-1.0, 0.0), core::f64::consts::PI);
        let r = evaluate_trajectory(&traj, &spec, &PosteriorModel::default(), &[0.5, 1.0], Mode::Legible, Some(&blind)).unwrap();
        assert_eq!(r.correctness, vec![0.5, 0.5]);
    }
}
