//! Approaches that stop at a reverse point and back onto the dump pose.
//!
//! The optimized approach is a forward arc-straight-arc whose second arc turns
//! exactly a quarter circle, a cusp, then one reverse arc. The turn letter of
//! the reverse arc is relative to the way the truck faces.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dubins::{pick_shortest, shortest_csc, sweep_of};
use crate::geometry::{DirectedPoint, Direction, PathPlan, PathSegment, Turn};
use crate::PlanError;

/// Reverse distances beyond this are flagged on user-placed reverse points.
pub const LONG_REVERSE_WARNING_M: f64 = 200.0;

const SCAN_STEPS: usize = 2048;
const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ReverseForm {
    #[serde(rename = "LSL|R")]
    LslR,
    #[serde(rename = "LSR|L")]
    LsrL,
    #[serde(rename = "RSL|R")]
    RslR,
    #[serde(rename = "RSR|L")]
    RsrL,
}

impl ReverseForm {
    pub const ALL: [ReverseForm; 4] = [
        ReverseForm::LslR,
        ReverseForm::LsrL,
        ReverseForm::RslR,
        ReverseForm::RsrL,
    ];

    pub fn first_turn(self) -> Turn {
        match self {
            ReverseForm::LslR | ReverseForm::LsrL => Turn::Left,
            ReverseForm::RslR | ReverseForm::RsrL => Turn::Right,
        }
    }

    /// Turn of the quarter-circle arc ending at the cusp.
    pub fn quarter_turn(self) -> Turn {
        match self {
            ReverseForm::LslR | ReverseForm::RslR => Turn::Left,
            ReverseForm::LsrL | ReverseForm::RsrL => Turn::Right,
        }
    }

    pub fn reverse_turn(self) -> Turn {
        self.quarter_turn().opposite()
    }

    pub fn label(self) -> &'static str {
        match self {
            ReverseForm::LslR => "LSL|R",
            ReverseForm::LsrL => "LSR|L",
            ReverseForm::RslR => "RSL|R",
            ReverseForm::RsrL => "RSR|L",
        }
    }
}

impl fmt::Display for ReverseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A forward approach to a cusp followed by reversing onto the dump pose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseApproach {
    /// `None` when the reverse point was placed by the user.
    pub form: Option<ReverseForm>,
    pub plan: PathPlan,
    pub reverse_point: DirectedPoint,
    pub total_length: f64,
    pub forward_length: f64,
    pub reverse_length: f64,
    pub long_reverse: bool,
}

impl ReverseApproach {
    fn from_plan(form: Option<ReverseForm>, plan: PathPlan, reverse_point: DirectedPoint) -> Self {
        let forward_length = plan.length_in(Direction::Forward);
        let reverse_length = plan.length_in(Direction::Reverse);
        Self {
            form,
            reverse_point,
            total_length: forward_length + reverse_length,
            forward_length,
            reverse_length,
            long_reverse: reverse_length > LONG_REVERSE_WARNING_M,
            plan,
        }
    }

    pub fn is_overridden(&self) -> bool {
        self.form.is_none()
    }

    /// Leading segments driven forward, up to the cusp.
    pub fn forward_segments(&self) -> &[PathSegment] {
        let n = self
            .plan
            .segments
            .iter()
            .take_while(|s| s.direction == Direction::Forward)
            .count();
        &self.plan.segments[..n]
    }

    pub fn reverse_segments(&self) -> &[PathSegment] {
        &self.plan.segments[self.forward_segments().len()..]
    }
}

/// Geometry of one form for a given reverse sweep.
struct FormGeometry<'a> {
    form: ReverseForm,
    start: &'a DirectedPoint,
    dump: &'a DirectedPoint,
    radius: f64,
    start_center: (f64, f64),
}

impl<'a> FormGeometry<'a> {
    fn new(form: ReverseForm, start: &'a DirectedPoint, dump: &'a DirectedPoint, radius: f64) -> Self {
        Self {
            form,
            start,
            dump,
            radius,
            start_center: start.turning_center(form.first_turn(), radius),
        }
    }

    /// Cusp pose and the pose where the quarter arc begins.
    fn poses(&self, reverse_sweep: f64) -> (DirectedPoint, DirectedPoint) {
        let cusp = PathSegment::arc(self.form.reverse_turn(), self.radius, reverse_sweep, Direction::Forward)
            .advance(self.dump);
        let quarter_start =
            PathSegment::arc(self.form.quarter_turn(), self.radius, FRAC_PI_2, Direction::Reverse).advance(&cusp);
        (cusp, quarter_start)
    }

    /// Signed offset of the first turning circle from the line the straight
    /// must lie on, and the straight length along that line.
    fn residual(&self, reverse_sweep: f64) -> (f64, f64) {
        let (_, q) = self.poses(reverse_sweep);
        let (c, s) = q.facing();
        let (dx, dy) = (self.start_center.0 - q.x, self.start_center.1 - q.y);
        let lateral = -s * dx + c * dy;
        let along = c * dx + s * dy;
        (lateral - self.form.first_turn().sign() * self.radius, -along)
    }

    fn build(&self, reverse_sweep: f64) -> Option<ReverseApproach> {
        let (_, straight) = self.residual(reverse_sweep);
        if straight < -1e-9 {
            return None;
        }
        let (cusp, q) = self.poses(reverse_sweep);
        let t1 = self.form.first_turn();
        let first_sweep = sweep_of(t1.sign() * (q.heading - self.start.heading));
        let plan = PathPlan::new(
            *self.start,
            vec![
                PathSegment::arc(t1, self.radius, first_sweep, Direction::Forward),
                PathSegment::straight(straight.max(0.0), Direction::Forward),
                PathSegment::arc(self.form.quarter_turn(), self.radius, FRAC_PI_2, Direction::Forward),
                PathSegment::arc(self.form.reverse_turn(), self.radius, reverse_sweep, Direction::Reverse),
            ],
            self.form.label(),
        );
        Some(ReverseApproach::from_plan(Some(self.form), plan, cusp))
    }

    /// Every reverse sweep in `[0, π]` where the straight is tangent to the
    /// first turning circle, found by scanning for sign changes and bisecting.
    fn roots(&self) -> Vec<f64> {
        let f = |b: f64| self.residual(b).0;
        let mut roots: Vec<f64> = Vec::new();
        let mut lo = 0.0;
        let mut f_lo = f(lo);
        for i in 1..=SCAN_STEPS {
            let hi = PI * i as f64 / SCAN_STEPS as f64;
            let f_hi = f(hi);
            if f_lo == 0.0 {
                roots.push(lo);
            } else if f_lo * f_hi < 0.0 {
                roots.push(bisect(&f, lo, hi, f_lo));
            }
            lo = hi;
            f_lo = f_hi;
        }
        if f_lo == 0.0 {
            roots.push(lo);
        }
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        roots
    }

    fn solutions(&self) -> Vec<ReverseApproach> {
        self.roots().into_iter().filter_map(|b| self.build(b)).collect()
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All solutions of one form, shortest first.
pub fn solve_reverse_form(
    form: ReverseForm,
    start: &DirectedPoint,
    dump: &DirectedPoint,
    radius: f64,
) -> Vec<ReverseApproach> {
    let mut out = FormGeometry::new(form, start, dump, radius).solutions();
    out.sort_by(|a, b| a.total_length.total_cmp(&b.total_length));
    out
}

/// Shortest one-cusp approach ending on `dump`, where `dump.heading` is the
/// direction the truck will drive away after tipping.
pub fn solve_reverse_approach(
    start: &DirectedPoint,
    dump: &DirectedPoint,
    radius: f64,
) -> Result<ReverseApproach, PlanError> {
    assert!(radius > 0.0, "turning radius must be positive");
    let all = ReverseForm::ALL
        .iter()
        .flat_map(|&form| solve_reverse_form(form, start, dump, radius));
    pick_shortest(all, |a| a.total_length).ok_or(PlanError::NoPathExists)
}

/// Re-plans through a user-chosen reverse point: the shortest forward path to
/// it, then the shortest path from the dump to it driven backwards.
pub fn replan_with_reverse_override(
    start: &DirectedPoint,
    reverse_point: &DirectedPoint,
    dump: &DirectedPoint,
    radius: f64,
) -> Result<ReverseApproach, PlanError> {
    let forward = shortest_csc(start, reverse_point, radius)?;
    let backward = shortest_csc(dump, reverse_point, radius)?;
    let mut segments = forward.plan.segments.clone();
    let mut label = forward.form.label().to_string();
    if backward.total_length > 0.0 {
        label.push('|');
        for seg in backward.plan.segments.iter().rev() {
            segments.push(seg.reversed());
            label.push(seg.letter());
        }
    }
    let plan = PathPlan::new(*start, segments, label);
    Ok(ReverseApproach::from_plan(None, plan, *reverse_point))
}
