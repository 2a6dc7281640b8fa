//! Deterministic SVG scene figures.
//!
//! Obstacles are gray, the target goal is gold and the other goals white,
//! observers get a cyan view wedge, the legible path is dark green, the
//! baseline path light green, and predicted paths are arrows (green toward the
//! target, red toward the others). The view box covers the scenario plus a
//! 1 m margin and does not depend on the trajectories drawn.

use std::fmt::Write;

use legiplan_core::{Point2, PredictedPathSet, ScenarioSpec, Trajectory};

pub const OBSTACLE_COLOR: &str = "#808080";
pub const FOV_COLOR: &str = "#00ffff";
pub const LEGIBLE_COLOR: &str = "#006400";
pub const BASELINE_COLOR: &str = "#90ee90";
pub const OTHER_COLOR: &str = "#1f77b4";
pub const TARGET_PREDICTION_COLOR: &str = "#2ca02c";
pub const OTHER_PREDICTION_COLOR: &str = "#d62728";

const MARGIN: f64 = 1.0;
const PX_PER_M: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStyle {
    Legible,
    Baseline,
    Other,
}

impl TrajectoryStyle {
    fn color(self) -> &'static str {
        match self {
            TrajectoryStyle::Legible => LEGIBLE_COLOR,
            TrajectoryStyle::Baseline => BASELINE_COLOR,
            TrajectoryStyle::Other => OTHER_COLOR,
        }
    }
}

pub struct LabeledTrajectory<'a> {
    pub label: &'a str,
    pub style: TrajectoryStyle,
    pub trajectory: &'a Trajectory,
}

fn n(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn scene_bounds(scenario: &ScenarioSpec) -> (Point2, Point2) {
    let mut lo = scenario.robot.position;
    let mut hi = lo;
    let mut take = |p: Point2| {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    };
    for g in &scenario.goals {
        take(g.position);
    }
    for o in &scenario.observers {
        take(o.position);
    }
    for ob in &scenario.obstacles {
        let (a, b) = ob.bounds();
        take(a);
        take(b);
    }
    (lo - Point2::new(MARGIN, MARGIN), hi + Point2::new(MARGIN, MARGIN))
}

fn polyline_points(t: &Trajectory) -> String {
    t.waypoints()
        .iter()
        .map(|p| format!("{},{}", n(p.x), n(-p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(
    scenario: &ScenarioSpec,
    trajectories: &[LabeledTrajectory<'_>],
    predictions: Option<&PredictedPathSet>,
) -> String {
    let (lo, hi) = scene_bounds(scenario);
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let reach = w.hypot(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        n(w * PX_PER_M),
        n(h * PX_PER_M),
        n(lo.x),
        n(-hi.y),
        n(w),
        n(h)
    );
    s.push_str("<defs>\n");
    for (id, color) in [("arrow-target", TARGET_PREDICTION_COLOR), ("arrow-other", OTHER_PREDICTION_COLOR)] {
        let _ = writeln!(
            s,
            r#"<marker id="{id}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="5" markerHeight="5" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker>"#
        );
    }
    s.push_str("</defs>\n");
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
        n(lo.x),
        n(-hi.y),
        n(w),
        n(h)
    );

    s.push_str("<g id=\"observers\">\n");
    for o in &scenario.observers {
        let steps = 24;
        let mut pts = vec![o.position];
        for i in 0..=steps {
            let a = o.heading - o.fov / 2.0 + o.fov * i as f64 / steps as f64;
            pts.push(o.position + Point2::from_angle(a) * reach);
        }
        let poly = pts
            .iter()
            .map(|p| format!("{},{}", n(p.x), n(-p.y)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            s,
            r#"<polygon class="fov" points="{poly}" fill="{FOV_COLOR}" fill-opacity="0.2" stroke="{FOV_COLOR}" stroke-width="0.02"/>"#
        );
        let tip = o.position + Point2::from_angle(o.heading) * 0.4;
        let _ = writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="0.12" fill="#008b8b"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#008b8b" stroke-width="0.05"/>"##,
            n(o.position.x),
            n(-o.position.y),
            n(o.position.x),
            n(-o.position.y),
            n(tip.x),
            n(-tip.y)
        );
    }
    s.push_str("</g>\n<g id=\"obstacles\">\n");
    for ob in &scenario.obstacles {
        match *ob {
            legiplan_core::Obstacle::Circle { center, radius } => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{OBSTACLE_COLOR}"/>"#,
                    n(center.x),
                    n(-center.y),
                    n(radius)
                );
            }
            legiplan_core::Obstacle::Rect { min, max } => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{OBSTACLE_COLOR}"/>"#,
                    n(min.x),
                    n(-max.y),
                    n(max.x - min.x),
                    n(max.y - min.y)
                );
            }
        }
    }
    s.push_str("</g>\n");

    if let Some(preds) = predictions {
        s.push_str("<g id=\"predictions\">\n");
        for (goal_id, t) in preds.iter() {
            let is_target = scenario.goals.iter().any(|g| g.id == goal_id && g.is_target);
            let (color, marker) = if is_target {
                (TARGET_PREDICTION_COLOR, "arrow-target")
            } else {
                (OTHER_PREDICTION_COLOR, "arrow-other")
            };
            let _ = writeln!(
                s,
                r#"<polyline class="prediction" points="{}" fill="none" stroke="{color}" stroke-width="0.04" stroke-dasharray="0.1 0.06" marker-end="url(#{marker})"><title>prediction {}</title></polyline>"#,
                polyline_points(t),
                escape(goal_id)
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g id=\"trajectories\">\n");
    for lt in trajectories {
        let _ = writeln!(
            s,
            r#"<polyline class="trajectory" points="{}" fill="none" stroke="{}" stroke-width="0.06" stroke-linejoin="round"><title>{}</title></polyline>"#,
            polyline_points(lt.trajectory),
            lt.style.color(),
            escape(lt.label)
        );
    }
    s.push_str("</g>\n<g id=\"goals\" font-family=\"sans-serif\" font-size=\"0.3\">\n");
    for g in &scenario.goals {
        let fill = if g.is_target { "#ffd700" } else { "#ffffff" };
        let label = if g.is_target {
            format!("{} (target)", g.id)
        } else {
            g.id.clone()
        };
        let _ = writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="0.15" fill="{fill}" stroke="#000000" stroke-width="0.03"/><text x="{}" y="{}">{}</text>"##,
            n(g.position.x),
            n(-g.position.y),
            n(g.position.x + 0.2),
            n(-g.position.y - 0.2),
            escape(&label)
        );
    }
    let r = &scenario.robot;
    let nose = r.position + Point2::from_angle(r.heading) * r.radius;
    let _ = writeln!(
        s,
        r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#1f4e79" stroke-width="0.04"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f4e79" stroke-width="0.04"/>"##,
        n(r.position.x),
        n(-r.position.y),
        n(r.radius),
        n(r.position.x),
        n(-r.position.y),
        n(nose.x),
        n(-nose.y)
    );
    s.push_str("</g>\n</svg>\n");
    s
}
