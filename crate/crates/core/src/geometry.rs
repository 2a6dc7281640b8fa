//! Points, obstacles, trajectories and the clearance query.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::ContractViolation;
use crate::math;

/// Clearance reported when there are no obstacles at all, in meters.
pub const CLEARANCE_SENTINEL: f64 = 1e9;

/// A point (or displacement) in the plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Velocities and displacements share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from the x axis.
    pub fn from_angle(angle: f64) -> Self {
        Self::new(math::cos(angle), math::sin(angle))
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        math::atan2(self.y, self.x)
    }

    /// Rotates counter-clockwise about the origin.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = (math::sin(angle), math::cos(angle));
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point2 {
    type Output = Self;
    fn div(self, k: f64) -> Self {
        Self::new(self.x / k, self.y / k)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Static obstacle with an exact signed-distance query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    Circle { center: Point2, radius: f64 },
    /// Axis-aligned rectangle, `min < max` componentwise.
    Rect { min: Point2, max: Point2 },
}

impl Obstacle {
    /// Signed distance from `p` to the obstacle surface, negative inside.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        match *self {
            Obstacle::Circle { center, radius } => p.distance(center) - radius,
            Obstacle::Rect { min, max } => {
                let center = (min + max) * 0.5;
                let half = (max - min) * 0.5;
                let dx = (p.x - center.x).abs() - half.x;
                let dy = (p.y - center.y).abs() - half.y;
                let outside = math::hypot(dx.max(0.0), dy.max(0.0));
                let inside = dx.max(dy).min(0.0);
                outside + inside
            }
        }
    }

    pub fn translated(&self, by: Vec2) -> Self {
        match *self {
            Obstacle::Circle { center, radius } => Obstacle::Circle {
                center: center + by,
                radius,
            },
            Obstacle::Rect { min, max } => Obstacle::Rect {
                min: min + by,
                max: max + by,
            },
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounds(&self) -> (Point2, Point2) {
        match *self {
            Obstacle::Circle { center, radius } => (
                center - Point2::new(radius, radius),
                center + Point2::new(radius, radius),
            ),
            Obstacle::Rect { min, max } => (min, max),
        }
    }
}

/// Signed distance from `p` to the nearest obstacle surface.
///
/// Returns [`CLEARANCE_SENTINEL`] when `obstacles` is empty.
pub fn clearance(p: Point2, obstacles: &[Obstacle]) -> f64 {
    obstacles
        .iter()
        .map(|o| o.signed_distance(p))
        .fold(CLEARANCE_SENTINEL, f64::min)
}

/// Waypoints `q_0..=q_w` sampled at a fixed time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<Point2>,
    dt: f64,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Point2>, dt: f64) -> Result<Self, ContractViolation> {
        if waypoints.len() < 2 {
            return Err(ContractViolation::new("trajectory needs at least two waypoints"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(ContractViolation::new("trajectory time step must be positive"));
        }
        if waypoints.iter().any(|p| !p.is_finite()) {
            return Err(ContractViolation::new("trajectory waypoints must be finite"));
        }
        Ok(Self { waypoints, dt })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// The index `w` of the last waypoint.
    pub fn horizon(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point2 {
        self.waypoints[self.waypoints.len() - 1]
    }

    pub fn arc_length(&self) -> f64 {
        self.waypoints.windows(2).map(|s| s[0].distance(s[1])).sum()
    }

    /// Applies `f` to every waypoint, keeping the time step.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Self {
        Self {
            waypoints: self.waypoints.iter().map(|&p| f(p)).collect(),
            dt: self.dt,
        }
    }

    pub fn into_waypoints(self) -> Vec<Point2> {
        self.waypoints
    }
}

/// Finite-difference velocities, one per waypoint; the last one repeats the
/// previous so every index `0..=w` has a value.
pub fn velocities(traj: &Trajectory) -> Vec<Vec2> {
    let dt = traj.dt;
    let mut out: Vec<Vec2> = traj
        .waypoints
        .windows(2)
        .map(|s| (s[1] - s[0]) / dt)
        .collect();
    let last = out[out.len() - 1];
    out.push(last);
    out
}

/// Inverse of [`velocities`]: rebuilds waypoints from `start`, using the
/// first `velocities.len() - 1` entries.
pub fn integrate(start: Point2, velocities: &[Vec2], dt: f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(velocities.len());
    out.push(start);
    let mut q = start;
    for v in velocities.iter().take(velocities.len().saturating_sub(1)) {
        q += *v * dt;
        out.push(q);
    }
    out
}

/// The prefix of `traj` covering `fraction` of its arc length, with the final
/// waypoint interpolated on the containing segment.
///
/// `fraction = 0` (or a trajectory with no length) yields the degenerate
/// two-point prefix `[q_0, q_0]`; `fraction = 1` yields the whole trajectory.
pub fn arc_length_prefix(traj: &Trajectory, fraction: f64) -> Result<Trajectory, ContractViolation> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(ContractViolation::new("prefix fraction must lie in [0, 1]"));
    }
    if fraction == 1.0 {
        return Ok(traj.clone());
    }
    let q0 = traj.start();
    let total = traj.arc_length();
    let target = fraction * total;
    if target <= 0.0 {
        return Ok(Trajectory {
            waypoints: alloc::vec![q0, q0],
            dt: traj.dt,
        });
    }
    let pts = &traj.waypoints;
    let mut walked = 0.0;
    for i in 0..pts.len() - 1 {
        let seg = pts[i].distance(pts[i + 1]);
        if seg > 0.0 && walked + seg >= target {
            let s = ((target - walked) / seg).clamp(0.0, 1.0);
            let mut waypoints: Vec<Point2> = pts[..=i].to_vec();
            waypoints.push(pts[i] + (pts[i + 1] - pts[i]) * s);
            return Ok(Trajectory {
                waypoints,
                dt: traj.dt,
            });
        }
        walked += seg;
    }
    Ok(traj.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(n: usize) -> Trajectory {
        Trajectory::new((0..=n).map(|i| Point2::new(i as f64, 0.0)).collect(), 1.0).unwrap()
    }

    #[test]
    fn clearance_examples() {
        let c = [Obstacle::Circle {
            center: Point2::ORIGIN,
            radius: 0.5,
        }];
        assert_eq!(clearance(Point2::new(2.0, 0.0), &c), 1.5);
        assert_eq!(clearance(Point2::ORIGIN, &c), -0.5);
        assert_eq!(clearance(Point2::new(-3.0, 7.0), &[]), 1e9);
    }

    #[test]
    fn rect_signed_distance() {
        let r = Obstacle::Rect {
            min: Point2::new(0.0, 0.0),
            max: Point2::new(2.0, 1.0),
        };
        assert_eq!(r.signed_distance(Point2::new(1.0, 0.5)), -0.5);
        assert_eq!(r.signed_distance(Point2::new(3.0, 0.5)), 1.0);
        assert!((r.signed_distance(Point2::new(5.0, 5.0)) - 5.0).abs() < 1e-12);
        assert_eq!(r.signed_distance(Point2::new(2.0, 0.5)), 0.0);
    }

    #[test]
    fn velocities_examples() {
        assert_eq!(
            velocities(&line(2)),
            vec![Point2::new(1.0, 0.0); 3]
        );
        let still = Trajectory::new(vec![Point2::ORIGIN; 2], 1.0).unwrap();
        assert_eq!(velocities(&still), vec![Point2::ORIGIN; 2]);
        let up = Trajectory::new(vec![Point2::ORIGIN, Point2::new(0.0, 2.0)], 0.5).unwrap();
        assert_eq!(velocities(&up), vec![Point2::new(0.0, 4.0); 2]);
    }

    #[test]
    fn prefix_examples() {
        let l = line(4);
        let p = arc_length_prefix(&l, 0.25).unwrap();
        assert_eq!(p.end(), Point2::new(1.0, 0.0));
        assert_eq!(arc_length_prefix(&l, 1.0).unwrap(), l);

        let ell = Trajectory::new(
            vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(2.0, 2.0)],
            1.0,
        )
        .unwrap();
        let p = arc_length_prefix(&ell, 0.75).unwrap();
        assert_eq!(p.end(), Point2::new(2.0, 1.0));
        assert_eq!(p.waypoints().len(), 3);

        let z = arc_length_prefix(&l, 0.0).unwrap();
        assert_eq!(z.waypoints(), &[Point2::ORIGIN, Point2::ORIGIN]);
    }

    #[test]
    fn prefix_rejects_out_of_range() {
        assert!(arc_length_prefix(&line(2), -0.1).is_err());
        assert!(arc_length_prefix(&line(2), 1.5).is_err());
        assert!(arc_length_prefix(&line(2), f64::NAN).is_err());
    }

    #[test]
    fn prefix_skips_stationary_segments() {
        let t = Trajectory::new(
            vec![Point2::ORIGIN, Point2::ORIGIN, Point2::new(2.0, 0.0)],
            1.0,
        )
        .unwrap();
        let p = arc_length_prefix(&t, 0.5).unwrap();
        assert_eq!(p.waypoints(), &[Point2::ORIGIN, Point2::ORIGIN, Point2::new(1.0, 0.0)]);
    }

    #[test]
    fn trajectory_rejects_short_or_bad_dt() {
        assert!(Trajectory::new(vec![Point2::ORIGIN], 1.0).is_err());
        assert!(Trajectory::new(vec![Point2::ORIGIN; 2], 0.0).is_err());
        assert!(Trajectory::new(vec![Point2::ORIGIN, Point2::new(f64::NAN, 0.0)], 1.0).is_err());
    }
}
