//! Planar poses, path segments and forward simulation.
//!
//! Angles are radians, counterclockwise from +x. Turn letters on arcs are
//! relative to the direction the vehicle faces, so a Left arc driven in
//! reverse swings the heading clockwise.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Positional tolerance for exact-geometry checks, in meters.
pub const POSITION_EPS: f64 = 1e-9;
/// Angular tolerance for exact-geometry checks, in radians.
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite value: {0}")]
    NonFinite(f64),
    #[error("sample step must be positive, got {0}")]
    InvalidStep(f64),
}

/// Wraps a finite angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> Result<f64, GeometryError> {
    if !a.is_finite() {
        return Err(GeometryError::NonFinite(a));
    }
    Ok(wrap(a))
}

// rem_euclid can round up to exactly TAU for tiny negative inputs.
pub(crate) fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angle in `(-π, π]` carrying `from` onto `to`.
pub fn angle_diff(to: f64, from: f64) -> f64 {
    let d = wrap(to - from);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// A position in meters plus a heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedPoint {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl DirectedPoint {
    /// Panics on non-finite input; use [`DirectedPoint::try_new`] for untrusted values.
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self::try_new(x, y, heading).expect("finite pose")
    }

    pub fn try_new(x: f64, y: f64, heading: f64) -> Result<Self, GeometryError> {
        for v in [x, y] {
            if !v.is_finite() {
                return Err(GeometryError::NonFinite(v));
            }
        }
        Ok(Self {
            x,
            y,
            heading: normalize_angle(heading)?,
        })
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn distance_to(&self, other: &DirectedPoint) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Unit vector along the heading.
    pub fn facing(&self) -> (f64, f64) {
        (self.heading.cos(), self.heading.sin())
    }

    /// Center of the turning circle of the given radius on the `turn` side.
    pub fn turning_center(&self, turn: Turn, radius: f64) -> (f64, f64) {
        let s = turn.sign();
        let (c, sn) = self.facing();
        (self.x - s * radius * sn, self.y + s * radius * c)
    }

    /// Rigid rotation by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y, self.heading + angle)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy, self.heading)
    }

    /// Reflection through the x-axis.
    pub fn mirrored(&self) -> Self {
        Self::new(self.x, -self.y, -self.heading)
    }

    /// Largest of the positional error and the wrapped heading error.
    pub fn pose_error(&self, other: &DirectedPoint) -> (f64, f64) {
        (self.distance_to(other), angle_diff(other.heading, self.heading).abs())
    }
}

impl fmt::Display for DirectedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3}°)", self.x, self.y, self.heading.to_degrees())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Left,
    Right,
}

impl Turn {
    /// +1 for Left (counterclockwise when driving forward), -1 for Right.
    pub fn sign(self) -> f64 {
        match self {
            Turn::Left => 1.0,
            Turn::Right => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Turn::Left => Turn::Right,
            Turn::Right => Turn::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Turn::Left => 'L',
            Turn::Right => 'R',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentShape {
    Straight,
    Arc { turn: Turn, radius: f64, sweep: f64 },
}

/// One arc or straight piece of a route, traversed in a single direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub shape: SegmentShape,
    pub direction: Direction,
    pub length: f64,
}

impl PathSegment {
    pub fn straight(length: f64, direction: Direction) -> Self {
        debug_assert!(length >= 0.0);
        Self {
            shape: SegmentShape::Straight,
            direction,
            length,
        }
    }

    pub fn arc(turn: Turn, radius: f64, sweep: f64, direction: Direction) -> Self {
        debug_assert!(radius > 0.0 && sweep >= 0.0);
        Self {
            shape: SegmentShape::Arc { turn, radius, sweep },
            direction,
            length: radius * sweep,
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self.shape, SegmentShape::Arc { .. })
    }

    pub fn sweep(&self) -> f64 {
        match self.shape {
            SegmentShape::Arc { sweep, .. } => sweep,
            SegmentShape::Straight => 0.0,
        }
    }

    /// Letter used in form labels: `L`, `R` or `S`.
    pub fn letter(&self) -> char {
        match self.shape {
            SegmentShape::Straight => 'S',
            SegmentShape::Arc { turn, .. } => turn.letter(),
        }
    }

    /// The same segment driven the other way.
    pub fn reversed(&self) -> Self {
        Self {
            direction: match self.direction {
                Direction::Forward => Direction::Reverse,
                Direction::Reverse => Direction::Forward,
            },
            ..*self
        }
    }

    /// Pose after driving this segment from `from`.
    pub fn advance(&self, from: &DirectedPoint) -> DirectedPoint {
        self.advance_by(from, self.length)
    }

    /// Pose after driving the first `distance` meters of this segment.
    pub fn advance_by(&self, from: &DirectedPoint, distance: f64) -> DirectedPoint {
        let ds = self.direction.sign() * distance;
        match self.shape {
            SegmentShape::Straight => {
                let (c, s) = from.facing();
                DirectedPoint::new(from.x + ds * c, from.y + ds * s, from.heading)
            }
            SegmentShape::Arc { turn, radius, .. } => {
                let k = turn.sign();
                let dtheta = k * ds / radius;
                let (s0, c0) = from.heading.sin_cos();
                let (s1, c1) = (from.heading + dtheta).sin_cos();
                DirectedPoint::new(
                    from.x + k * radius * (s1 - s0),
                    from.y + k * radius * (c0 - c1),
                    from.heading + dtheta,
                )
            }
        }
    }
}

/// A start pose and the segments driven from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub start: DirectedPoint,
    pub segments: Vec<PathSegment>,
    pub form_label: String,
}

impl PathPlan {
    pub fn new(start: DirectedPoint, segments: Vec<PathSegment>, form_label: impl Into<String>) -> Self {
        Self {
            start,
            segments,
            form_label: form_label.into(),
        }
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn length_in(&self, direction: Direction) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.direction == direction)
            .map(|s| s.length)
            .sum()
    }

    pub fn end(&self) -> DirectedPoint {
        integrate_path(self)
    }

    /// Number of Forward→Reverse or Reverse→Forward switches, ignoring
    /// zero-length segments.
    pub fn direction_changes(&self) -> usize {
        let mut dirs = self.segments.iter().filter(|s| s.length > 0.0).map(|s| s.direction);
        let Some(mut prev) = dirs.next() else {
            return 0;
        };
        let mut n = 0;
        for d in dirs {
            if d != prev {
                n += 1;
                prev = d;
            }
        }
        n
    }
}

/// Pose reached by driving every segment of `plan` in order.
pub fn integrate_path(plan: &PathPlan) -> DirectedPoint {
    plan.segments.iter().fold(plan.start, |pose, seg| seg.advance(&pose))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub direction: Direction,
}

impl SamplePoint {
    fn at(pose: DirectedPoint, direction: Direction) -> Self {
        Self {
            x: pose.x,
            y: pose.y,
            heading: pose.heading,
            direction,
        }
    }
}

/// Polyline of poses no more than `step` meters apart along the path.
///
/// Each segment is split evenly; segment end poses are always included and
/// computed the same way as [`integrate_path`], so the final point matches it.
pub fn sample_path(plan: &PathPlan, step: f64) -> Result<Vec<SamplePoint>, GeometryError> {
    if step <= 0.0 || !step.is_finite() {
        return Err(GeometryError::InvalidStep(step));
    }
    let first_dir = plan.segments.first().map_or(Direction::Forward, |s| s.direction);
    let mut out = vec![SamplePoint::at(plan.start, first_dir)];
    let mut pose = plan.start;
    for seg in &plan.segments {
        if seg.length <= 0.0 {
            continue;
        }
        let n = (seg.length / step).ceil().max(1.0) as usize;
        for k in 1..n {
            let p = seg.advance_by(&pose, seg.length * k as f64 / n as f64);
            out.push(SamplePoint::at(p, seg.direction));
        }
        pose = seg.advance(&pose);
        out.push(SamplePoint::at(pose, seg.direction));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const R: f64 = 28.4;

    fn assert_pose(a: DirectedPoint, b: DirectedPoint, pos_tol: f64, ang_tol: f64) {
        let (dp, da) = a.pose_error(&b);
        assert!(dp <= pos_tol && da <= ang_tol, "{a} vs {b}: {dp} m, {da} rad");
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0).unwrap(), 0.0);
        assert!((normalize_angle(-FRAC_PI_2).unwrap() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!((normalize_angle(7.0 * PI).unwrap() - PI).abs() < 1e-12);
        assert!(normalize_angle(f64::NAN).is_err());
        assert!(normalize_angle(f64::INFINITY).is_err());
        let tiny = normalize_angle(-1e-18).unwrap();
        assert!((0.0..TAU).contains(&tiny));
    }

    #[test]
    fn non_finite_pose_rejected() {
        assert!(DirectedPoint::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(DirectedPoint::try_new(0.0, 0.0, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn integrate_examples() {
        let o = DirectedPoint::new(0.0, 0.0, 0.0);
        let plan = PathPlan::new(o, vec![PathSegment::straight(100.0, Direction::Forward)], "S");
        assert_pose(integrate_path(&plan), DirectedPoint::new(100.0, 0.0, 0.0), 1e-9, 1e-12);

        let plan = PathPlan::new(o, vec![PathSegment::arc(Turn::Left, R, PI, Direction::Forward)], "L");
        assert_pose(integrate_path(&plan), DirectedPoint::new(0.0, 2.0 * R, PI), 1e-9, 1e-12);

        let plan = PathPlan::new(
            DirectedPoint::new(R, R, FRAC_PI_2),
            vec![PathSegment::arc(Turn::Left, R, FRAC_PI_2, Direction::Reverse)],
            "L",
        );
        assert_pose(integrate_path(&plan), o, 1e-9, 1e-12);
    }

    #[test]
    fn right_arc_reverse() {
        // Forward right quarter from origin ends at (r, -r, -π/2); backing up returns.
        let o = DirectedPoint::new(0.0, 0.0, 0.0);
        let fwd = PathSegment::arc(Turn::Right, R, FRAC_PI_2, Direction::Forward);
        let p = fwd.advance(&o);
        assert_pose(p, DirectedPoint::new(R, -R, 3.0 * FRAC_PI_2), 1e-9, 1e-12);
        assert_pose(fwd.reversed().advance(&p), o, 1e-9, 1e-12);
    }

    #[test]
    fn sample_examples() {
        let o = DirectedPoint::new(0.0, 0.0, 0.0);
        let plan = PathPlan::new(o, vec![PathSegment::straight(10.0, Direction::Forward)], "S");
        let pts = sample_path(&plan, 5.0).unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 5.0, 10.0]);

        let plan = PathPlan::new(o, vec![PathSegment::arc(Turn::Left, R, PI, Direction::Forward)], "L");
        let pts = sample_path(&plan, 89.22).unwrap();
        assert!((2..=3).contains(&pts.len()));
        let last = pts.last().unwrap();
        assert!((last.x - 0.0).abs() < 1e-9 && (last.y - 2.0 * R).abs() < 1e-9);

        assert!(sample_path(&plan, 0.0).is_err());
        assert!(sample_path(&plan, -1.0).is_err());
    }

    #[test]
    fn sample_skips_zero_segments_and_tracks_direction() {
        let o = DirectedPoint::new(0.0, 0.0, 0.0);
        let plan = PathPlan::new(
            o,
            vec![
                PathSegment::arc(Turn::Left, R, 0.0, Direction::Forward),
                PathSegment::straight(3.0, Direction::Forward),
                PathSegment::straight(2.0, Direction::Reverse),
            ],
            "LS|S",
        );
        let pts = sample_path(&plan, 1.0).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts.last().unwrap().direction, Direction::Reverse);
        assert!((pts.last().unwrap().x - 1.0).abs() < 1e-12);
        assert_eq!(plan.direction_changes(), 1);
    }

    fn segment_strategy() -> impl Strategy<Value = PathSegment> {
        let dir = prop_oneof![Just(Direction::Forward), Just(Direction::Reverse)];
        let turn = prop_oneof![Just(Turn::Left), Just(Turn::Right)];
        prop_oneof![
            (0.0..300.0f64, dir.clone()).prop_map(|(l, d)| PathSegment::straight(l, d)),
            (turn, 5.0..60.0f64, 0.0..TAU, dir).prop_map(|(t, r, s, d)| PathSegment::arc(t, r, s, d)),
        ]
    }

    fn pose_strategy() -> impl Strategy<Value = DirectedPoint> {
        (-500.0..500.0f64, -500.0..500.0f64, 0.0..TAU).prop_map(|(x, y, h)| DirectedPoint::new(x, y, h))
    }

    proptest! {
        #[test]
        fn heading_always_normalized(p in pose_strategy(), segs in prop::collection::vec(segment_strategy(), 0..6)) {
            let plan = PathPlan::new(p, segs, "");
            let end = integrate_path(&plan);
            prop_assert!((0.0..TAU).contains(&end.heading));
            for s in sample_path(&plan, 7.5).unwrap() {
                prop_assert!((0.0..TAU).contains(&s.heading));
            }
        }

        #[test]
        fn integration_is_additive(p in pose_strategy(), segs in prop::collection::vec(segment_strategy(), 1..6)) {
            let whole = integrate_path(&PathPlan::new(p, segs.clone(), ""));
            let mut pose = p;
            for s in &segs {
                pose = integrate_path(&PathPlan::new(pose, vec![*s], ""));
            }
            let (dp, da) = whole.pose_error(&pose);
            prop_assert!(dp <= 1e-9 && da <= 1e-12, "{dp} {da}");
        }

        #[test]
        fn forward_then_reverse_returns(p in pose_strategy(), seg in segment_strategy()) {
            let seg = PathSegment { direction: Direction::Forward, ..seg };
            let end = integrate_path(&PathPlan::new(p, vec![seg, seg.reversed()], ""));
            let (dp, _) = end.pose_error(&p);
            prop_assert!(dp <= 1e-9, "{dp}");
        }

        #[test]
        fn rotation_equivariance(p in pose_strategy(), segs in prop::collection::vec(segment_strategy(), 1..5), phi in -PI..PI) {
            let a = integrate_path(&PathPlan::new(p, segs.clone(), "")).rotated(phi);
            let b = integrate_path(&PathPlan::new(p.rotated(phi), segs, ""));
            let (dp, da) = a.pose_error(&b);
            prop_assert!(dp <= 1e-9 && da <= 1e-9, "{dp} {da}");
        }

        #[test]
        fn samples_are_close_and_end_matches(p in pose_strategy(), segs in prop::collection::vec(segment_strategy(), 1..5), step in 0.5..40.0f64) {
            let plan = PathPlan::new(p, segs, "");
            let pts = sample_path(&plan, step).unwrap();
            let first = pts[0];
            prop_assert_eq!((first.x, first.y), (p.x, p.y));
            let end = integrate_path(&plan);
            let last = pts.last().unwrap();
            prop_assert!((last.x - end.x).abs() <= 1e-9 && (last.y - end.y).abs() <= 1e-9);
            // Chords never exceed the arclength between samples.
            for w in pts.windows(2) {
                prop_assert!((w[1].x - w[0].x).hypot(w[1].y - w[0].y) <= step + 1e-9);
            }
        }
    }
}
