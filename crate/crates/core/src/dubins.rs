//! Shortest forward-only paths under a minimum turning radius.
//!
//! Only the arc-straight-arc families (LSL, LSR, RSL, RSR) are generated,
//! plus the arc-straight families (LS, RS) used to reach a bare position.
//! The three-arc families LRL and RLR are not produced, so results are only
//! guaranteed optimal when the poses are not crowded together (roughly,
//! further apart than four turning radii).

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{wrap, DirectedPoint, Direction, PathPlan, PathSegment, Turn};
use crate::PlanError;

/// Sweeps this close to zero or a full turn are snapped to zero.
const SWEEP_SNAP: f64 = 1e-10;
/// Lengths closer than this count as ties, settled by form order.
pub(crate) const TIE_EPS: f64 = 1e-9;

pub(crate) fn sweep_of(a: f64) -> f64 {
    let s = wrap(a);
    if !(SWEEP_SNAP..=TAU - SWEEP_SNAP).contains(&s) {
        0.0
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CscForm {
    #[serde(rename = "LSL")]
    Lsl,
    #[serde(rename = "LSR")]
    Lsr,
    #[serde(rename = "RSL")]
    Rsl,
    #[serde(rename = "RSR")]
    Rsr,
}

impl CscForm {
    /// Fixed order used for tie-breaking.
    pub const ALL: [CscForm; 4] = [CscForm::Lsl, CscForm::Lsr, CscForm::Rsl, CscForm::Rsr];

    pub fn turns(self) -> (Turn, Turn) {
        match self {
            CscForm::Lsl => (Turn::Left, Turn::Left),
            CscForm::Lsr => (Turn::Left, Turn::Right),
            CscForm::Rsl => (Turn::Right, Turn::Left),
            CscForm::Rsr => (Turn::Right, Turn::Right),
        }
    }

    pub fn from_turns(first: Turn, last: Turn) -> Self {
        match (first, last) {
            (Turn::Left, Turn::Left) => CscForm::Lsl,
            (Turn::Left, Turn::Right) => CscForm::Lsr,
            (Turn::Right, Turn::Left) => CscForm::Rsl,
            (Turn::Right, Turn::Right) => CscForm::Rsr,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CscForm::Lsl => "LSL",
            CscForm::Lsr => "LSR",
            CscForm::Rsl => "RSL",
            CscForm::Rsr => "RSR",
        }
    }

    /// Form obtained by reflecting both poses through a line.
    pub fn mirrored(self) -> Self {
        let (a, b) = self.turns();
        Self::from_turns(a.opposite(), b.opposite())
    }
}

impl fmt::Display for CscForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DubinsCandidate {
    pub form: CscForm,
    pub plan: PathPlan,
    pub total_length: f64,
}

impl DubinsCandidate {
    pub fn first_sweep(&self) -> f64 {
        self.plan.segments[0].sweep()
    }

    pub fn straight_length(&self) -> f64 {
        self.plan.segments[1].length
    }

    pub fn last_sweep(&self) -> f64 {
        self.plan.segments[2].sweep()
    }
}

fn csc_plan(form: CscForm, start: &DirectedPoint, radius: f64, s1: f64, straight: f64, s2: f64) -> DubinsCandidate {
    let (t1, t2) = form.turns();
    let plan = PathPlan::new(
        *start,
        vec![
            PathSegment::arc(t1, radius, s1, Direction::Forward),
            PathSegment::straight(straight, Direction::Forward),
            PathSegment::arc(t2, radius, s2, Direction::Forward),
        ],
        form.label(),
    );
    let total_length = plan.length();
    DubinsCandidate {
        form,
        plan,
        total_length,
    }
}

/// Solves one arc-straight-arc family, or `None` when it does not exist.
pub fn solve_form(form: CscForm, start: &DirectedPoint, goal: &DirectedPoint, radius: f64) -> Option<DubinsCandidate> {
    let (t1, t2) = form.turns();
    let (ax, ay) = start.turning_center(t1, radius);
    let (bx, by) = goal.turning_center(t2, radius);
    let (dx, dy) = (bx - ax, by - ay);
    let dist = dx.hypot(dy);

    // Heading along the straight.
    let (psi, straight) = if t1 == t2 {
        // Outer tangent; coincident circles leave the straight undefined, so
        // do all the turning on the first arc.
        if dist < 1e-9 {
            (goal.heading, 0.0)
        } else {
            (dy.atan2(dx), dist)
        }
    } else {
        let sq = dist * dist - 4.0 * radius * radius;
        if sq < -1e-12 * radius * radius {
            return None;
        }
        let straight = sq.max(0.0).sqrt();
        let offset = (2.0 * radius).atan2(straight);
        // For L→R the center line sits to the right of the straight.
        (dy.atan2(dx) + t1.sign() * offset, straight)
    };
    let s1 = sweep_of(t1.sign() * (psi - start.heading));
    let s2 = sweep_of(t2.sign() * (goal.heading - psi));
    Some(csc_plan(form, start, radius, s1, straight, s2))
}

/// All existing arc-straight-arc paths from `start` to `goal`, in form order.
pub fn solve_csc(start: &DirectedPoint, goal: &DirectedPoint, radius: f64) -> Vec<DubinsCandidate> {
    assert!(radius > 0.0, "turning radius must be positive");
    CscForm::ALL
        .iter()
        .filter_map(|&f| solve_form(f, start, goal, radius))
        .collect()
}

/// Picks the shortest item; among lengths within [`TIE_EPS`] the earliest wins.
pub(crate) fn pick_shortest<T>(items: impl IntoIterator<Item = T>, len: impl Fn(&T) -> f64) -> Option<T> {
    items.into_iter().fold(None, |best, c| match best {
        Some(b) if len(&c) >= len(&b) - TIE_EPS => Some(b),
        _ => Some(c),
    })
}

pub fn shortest_csc(start: &DirectedPoint, goal: &DirectedPoint, radius: f64) -> Result<DubinsCandidate, PlanError> {
    pick_shortest(solve_csc(start, goal, radius), |c| c.total_length).ok_or(PlanError::NoPathExists)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CsForm {
    #[serde(rename = "LS")]
    Ls,
    #[serde(rename = "RS")]
    Rs,
}

impl CsForm {
    pub const ALL: [CsForm; 2] = [CsForm::Ls, CsForm::Rs];

    pub fn turn(self) -> Turn {
        match self {
            CsForm::Ls => Turn::Left,
            CsForm::Rs => Turn::Right,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CsForm::Ls => "LS",
            CsForm::Rs => "RS",
        }
    }
}

/// An arc then a straight ending on a position; the arrival heading is free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCandidate {
    pub form: CsForm,
    pub plan: PathPlan,
    pub entry_heading: f64,
    pub total_length: f64,
}

fn solve_cs(form: CsForm, start: &DirectedPoint, target: (f64, f64), radius: f64) -> Option<PointCandidate> {
    let turn = form.turn();
    let (cx, cy) = start.turning_center(turn, radius);
    let (dx, dy) = (target.0 - cx, target.1 - cy);
    let sq = dx * dx + dy * dy - radius * radius;
    if sq < -1e-12 * radius * radius {
        return None;
    }
    let straight = sq.max(0.0).sqrt();
    let psi = dy.atan2(dx) + turn.sign() * radius.atan2(straight);
    let sweep = sweep_of(turn.sign() * (psi - start.heading));
    let plan = PathPlan::new(
        *start,
        vec![
            PathSegment::arc(turn, radius, sweep, Direction::Forward),
            PathSegment::straight(straight, Direction::Forward),
        ],
        form.label(),
    );
    let total_length = plan.length();
    Some(PointCandidate {
        form,
        entry_heading: wrap(psi),
        plan,
        total_length,
    })
}

/// Arc-straight paths from `start` to a bare position.
///
/// A target on a turning circle is reachable by that circle alone (zero
/// straight); a target strictly inside a circle rules that family out.
pub fn solve_point_target(
    start: &DirectedPoint,
    target: (f64, f64),
    radius: f64,
) -> Result<Vec<PointCandidate>, PlanError> {
    assert!(radius > 0.0, "turning radius must be positive");
    let found: Vec<_> = CsForm::ALL
        .iter()
        .filter_map(|&f| solve_cs(f, start, target, radius))
        .collect();
    if found.is_empty() {
        Err(PlanError::TargetInsideTurningCircle)
    } else {
        Ok(found)
    }
}
