use std::f64::consts::PI;

use legiplan_core::{goal_posterior, legibility_score, Goal, Point2, PosteriorModel, Trajectory};
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = Point2> {
    (-r..r, -r..r).prop_map(|(x, y)| Point2::new(x, y))
}

fn goals() -> impl Strategy<Value = Vec<Goal>> {
    prop::collection::vec(point(10.0), 1..5).prop_map(|ps| {
        ps.into_iter()
            .enumerate()
            .map(|(i, p)| Goal::new(format!("g{i}"), p, i == 0))
            .collect()
    })
}

fn prefix() -> impl Strategy<Value = Trajectory> {
    prop::collection::vec(point(6.0), 2..10).prop_map(|pts| Trajectory::new(pts, 0.4).unwrap())
}

/// The 1/k-weighted mean computed directly.
fn score_oracle(c: &[f64]) -> f64 {
    let num: f64 = c.iter().enumerate().map(|(i, v)| v / (i + 1) as f64).sum();
    let den: f64 = (1..=c.len()).map(|k| 1.0 / k as f64).sum();
    num / den
}

proptest! {
    #[test]
    fn posterior_is_a_distribution(p in prefix(), g in goals(), beta in 0.0f64..20.0) {
        let post = goal_posterior(&p, &g, p.start(), &PosteriorModel { beta, prior: None }).unwrap();
        prop_assert_eq!(post.len(), g.len());
        let total: f64 = post.iter().map(|(_, v)| v).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(post.iter().all(|(_, v)| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn posterior_is_rigid_motion_invariant(p in prefix(), g in goals(), shift in point(50.0), angle in -PI..PI) {
        let tf = |q: Point2| q.rotated(angle) + shift;
        let model = PosteriorModel::default();
        let a = goal_posterior(&p, &g, p.start(), &model).unwrap();
        let moved: Vec<Goal> = g.iter().map(|x| Goal::new(x.id.clone(), tf(x.position), x.is_target)).collect();
        let mp = p.map_points(tf);
        let b = goal_posterior(&mp, &moved, mp.start(), &model).unwrap();
        for ((ia, va), (ib, vb)) in a.iter().zip(&b) {
            prop_assert_eq!(ia, ib);
            prop_assert!((va - vb).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_beta_returns_the_prior(p in prefix(), g in goals()) {
        let post = goal_posterior(&p, &g, p.start(), &PosteriorModel { beta: 0.0, prior: None }).unwrap();
        let u = 1.0 / g.len() as f64;
        prop_assert!(post.iter().all(|(_, v)| (*v - u).abs() < 1e-15));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn score_properties(c in prop::collection::vec(0.0f64..=1.0, 1..6), k in 0usize..6, bump in 0.0f64..1.0) {
        let l = legibility_score(&c).unwrap();
        prop_assert!((l - score_oracle(&c)).abs() < 1e-12);
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(l >= lo - 1e-12 && l <= hi + 1e-12);

        // raising any partial never lowers the score
        let k = k % c.len();
        let mut up = c.clone();
        up[k] = (up[k] + bump).min(1.0);
        prop_assert!(legibility_score(&up).unwrap() >= l - 1e-15);

        // the same gain counts more on an earlier partial
        if k + 1 < c.len() {
            let room = (1.0 - c[k]).min(1.0 - c[k + 1]);
            let d = bump * room;
            let mut early = c.clone();
            early[k] += d;
            let mut late = c.clone();
            late[k + 1] += d;
            prop_assert!(legibility_score(&early).unwrap() >= legibility_score(&late).unwrap() - 1e-15);
        }
    }
}

#[test]
fn score_examples() {
    assert!((legibility_score(&[1.0, 1.0, 0.0]).unwrap() - 9.0 / 11.0).abs() < 1e-12);
    assert_eq!(legibility_score(&[0.5]).unwrap(), 0.5);
    assert!(legibility_score(&[]).is_err());
    assert!(legibility_score(&[1.2]).is_err());
}
