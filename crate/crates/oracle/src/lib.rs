//! Brute-force reference computations for cross-checking the planners.
//!
//! Nothing here depends on the planning crate: poses, integration and the
//! searches are written out from first principles so that agreement between
//! the two is evidence rather than tautology. Everything is deliberately
//! slow and simple: parameter grids, sign-change brackets refined by finer
//! grids, and fixed-step time integration.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Turn signs: left is counter-clockwise.
pub const LEFT: f64 = 1.0;
pub const RIGHT: f64 = -1.0;
pub const STRAIGHT: f64 = 0.0;

/// Direction signs.
pub const FORWARD: f64 = 1.0;
pub const REVERSE: f64 = -1.0;

/// Subdivisions used to refine a coarse grid cell that brackets a root.
const REFINE: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, h: f64) -> Self {
        Self { x, y, h }
    }

    pub fn dist(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Absolute heading difference folded into [0, π].
    pub fn heading_err(&self, other: &Pose) -> f64 {
        let d = (self.h - other.h).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

/// One piece of motion: `turn` is LEFT, RIGHT or STRAIGHT, `dir` FORWARD or
/// REVERSE, `length` the distance travelled along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub turn: f64,
    pub dir: f64,
    pub length: f64,
}

impl Piece {
    pub fn arc(turn: f64, dir: f64, sweep: f64, r: f64) -> Self {
        Self {
            turn,
            dir,
            length: sweep * r,
        }
    }

    pub fn line(dir: f64, length: f64) -> Self {
        Self {
            turn: STRAIGHT,
            dir,
            length,
        }
    }
}

/// Closed-form motion along one piece.
pub fn advance(p: Pose, piece: Piece, r: f64) -> Pose {
    if piece.turn == STRAIGHT {
        let s = piece.dir * piece.length;
        return Pose::new(p.x + s * p.h.cos(), p.y + s * p.h.sin(), p.h);
    }
    let t = piece.turn;
    let h2 = p.h + t * piece.dir * piece.length / r;
    Pose::new(
        p.x + t * r * (h2.sin() - p.h.sin()),
        p.y + t * r * (p.h.cos() - h2.cos()),
        h2,
    )
}

/// Motion along one piece by many small straight steps (midpoint heading).
/// Independent of the closed form above; used to check it.
pub fn advance_stepped(p: Pose, piece: Piece, r: f64, step: f64) -> Pose {
    let n = (piece.length / step).ceil().max(1.0) as usize;
    let ds = piece.length / n as f64;
    let dh = if piece.turn == STRAIGHT {
        0.0
    } else {
        piece.turn * piece.dir * ds / r
    };
    let mut q = p;
    for _ in 0..n {
        let mid = q.h + 0.5 * dh;
        let chord = if dh == 0.0 {
            ds
        } else {
            2.0 * r * (0.5 * dh.abs()).sin()
        };
        q.x += piece.dir * chord * mid.cos();
        q.y += piece.dir * chord * mid.sin();
        q.h += dh;
    }
    q
}

pub fn integrate(start: Pose, pieces: &[Piece], r: f64) -> Pose {
    pieces.iter().fold(start, |p, &piece| advance(p, piece, r))
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn cross(ux: f64, uy: f64, vx: f64, vy: f64) -> f64 {
    ux * vy - uy * vx
}

/// Scan `f` over `n + 1` evenly spaced points of `[lo, hi]`. Grid points
/// where `accept` holds with `|f| <= tol`, and the refined minimum-|f|
/// point of every cell whose ends differ in sign, are handed to `visit`.
fn scan_roots(lo: f64, hi: f64, n: usize, tol: f64, f: impl Fn(f64) -> (f64, bool), mut visit: impl FnMut(f64)) {
    let at = |i: usize| lo + (hi - lo) * i as f64 / n as f64;
    let mut prev = f(at(0));
    if prev.0.abs() <= tol && prev.1 {
        visit(at(0));
    }
    for i in 1..=n {
        let cur = f(at(i));
        if cur.0.abs() <= tol && cur.1 {
            visit(at(i));
        }
        if prev.0.signum() != cur.0.signum() && (prev.1 || cur.1) {
            let (a, b) = (at(i - 1), at(i));
            let mut best = (f64::INFINITY, a);
            for j in 0..=REFINE {
                let x = a + (b - a) * j as f64 / REFINE as f64;
                let v = f(x);
                if v.1 && v.0.abs() < best.0 {
                    best = (v.0.abs(), x);
                }
            }
            if best.0.is_finite() {
                visit(best.1);
            }
        }
        prev = cur;
    }
}

/// A path found by a grid search, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPath {
    pub length: f64,
    pub first_sweep: f64,
    pub straight: f64,
    pub last_sweep: f64,
    pub endpoint_error: f64,
}

/// Shortest forward turn-straight-turn path of one form found by scanning
/// the first-arc sweep on a grid of `step_deg`.
///
/// For each first sweep the last sweep is whatever brings the heading to the
/// goal heading, the straight joins the two arcs, and the candidate is kept
/// when the integrated endpoint lands within `tol` meters of the goal.
pub fn dubins_form_min(start: Pose, goal: Pose, r: f64, t1: f64, t2: f64, step_deg: f64, tol: f64) -> Option<GridPath> {
    let n = (360.0 / step_deg).round() as usize;
    let params = |s1: f64| {
        let p1 = advance(start, Piece::arc(t1, FORWARD, s1, r), r);
        let s2 = wrap(t2 * (goal.h - p1.h));
        let q = advance(goal, Piece::arc(t2, REVERSE, s2, r), r);
        let (ux, uy) = (p1.h.cos(), p1.h.sin());
        let (dx, dy) = (q.x - p1.x, q.y - p1.y);
        (s2, cross(ux, uy, dx, dy), ux * dx + uy * dy)
    };
    let mut best: Option<GridPath> = None;
    scan_roots(
        0.0,
        TAU * (1.0 - 1.0 / n as f64),
        n - 1,
        tol,
        |s1| {
            let (_, lateral, along) = params(s1);
            (lateral, along >= -tol)
        },
        |s1| {
            let (s2, _, along) = params(s1);
            let straight = along.max(0.0);
            let end = integrate(
                start,
                &[
                    Piece::arc(t1, FORWARD, s1, r),
                    Piece::line(FORWARD, straight),
                    Piece::arc(t2, FORWARD, s2, r),
                ],
                r,
            );
            let err = end.dist(&goal);
            if err <= tol {
                let length = r * (s1 + s2) + straight;
                if best.is_none_or(|b| length < b.length) {
                    best = Some(GridPath {
                        length,
                        first_sweep: s1,
                        straight,
                        last_sweep: s2,
                        endpoint_error: err,
                    });
                }
            }
        },
    );
    best
}

/// The four turn-straight-turn forms in the order LSL, LSR, RSL, RSR.
pub const CSC_FORMS: [(f64, f64); 4] = [(LEFT, LEFT), (LEFT, RIGHT), (RIGHT, LEFT), (RIGHT, RIGHT)];

/// Minimum over all four forms.
pub fn dubins_min(start: Pose, goal: Pose, r: f64, step_deg: f64, tol: f64) -> Option<GridPath> {
    CSC_FORMS
        .iter()
        .filter_map(|&(a, b)| dubins_form_min(start, goal, r, a, b, step_deg, tol))
        .min_by(|a, b| a.length.total_cmp(&b.length))
}

/// Turn then straight to a position target: the first arc sweep on a grid of
/// `step_deg` whose tangent ray passes within `tol` of the target.
/// Returns (sweep, straight, entry heading).
pub fn point_target(
    start: Pose,
    target: (f64, f64),
    r: f64,
    turn: f64,
    step_deg: f64,
    tol: f64,
) -> Option<(f64, f64, f64)> {
    let n = (360.0 / step_deg).round() as usize;
    let ray = |s: f64| {
        let p = advance(start, Piece::arc(turn, FORWARD, s, r), r);
        let (ux, uy) = (p.h.cos(), p.h.sin());
        let (dx, dy) = (target.0 - p.x, target.1 - p.y);
        (cross(ux, uy, dx, dy), ux * dx + uy * dy, p.h)
    };
    let mut first: Option<f64> = None;
    scan_roots(
        0.0,
        TAU * (1.0 - 1.0 / n as f64),
        n - 1,
        tol,
        |s| {
            let (lateral, along, _) = ray(s);
            (lateral, along >= 0.0)
        },
        |s| {
            if first.is_none() && ray(s).0.abs() <= tol {
                first = Some(s);
            }
        },
    );
    first.map(|s| {
        let (_, along, h) = ray(s);
        (s, along, wrap(h))
    })
}

/// A one-cusp approach found by the reverse-arc grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridReverse {
    pub length: f64,
    pub first_sweep: f64,
    pub straight: f64,
    pub reverse_sweep: f64,
    pub endpoint_error: f64,
}

/// Turn signs of a one-cusp approach: the first arc, the quarter arc ending at
/// the cusp, and the reverse arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspTurns {
    pub first: f64,
    pub quarter: f64,
    pub back: f64,
}

/// Shortest approach of the form `first`-S-`quarter` (forward, quarter arc of
/// 90°) followed by one reverse arc turning `back`, found by scanning the
/// reverse sweep over [0, π] on a grid of `step_deg`.
///
/// For each reverse sweep the cusp and the start of the quarter arc follow
/// by backing out of the dump pose; the straight before the quarter arc must
/// be tangent to the start's `first` turning circle, which is the mismatch
/// whose sign changes are searched.
pub fn reverse_form_min(
    start: Pose,
    dump: Pose,
    r: f64,
    turns: CuspTurns,
    step_deg: f64,
    tol: f64,
) -> Option<GridReverse> {
    let CuspTurns { first, quarter, back } = turns;
    let n = (180.0 / step_deg).round() as usize;
    let cx = start.x - first * r * start.h.sin();
    let cy = start.y + first * r * start.h.cos();
    let params = |b: f64| {
        let cusp = advance(dump, Piece::arc(back, FORWARD, b, r), r);
        let p = advance(cusp, Piece::arc(quarter, REVERSE, FRAC_PI_2, r), r);
        let (ux, uy) = (p.h.cos(), p.h.sin());
        let (dx, dy) = (cx - p.x, cy - p.y);
        let lateral = cross(ux, uy, dx, dy) - first * r;
        let along = -(ux * dx + uy * dy);
        (p, lateral, along)
    };
    let mut best: Option<GridReverse> = None;
    scan_roots(
        0.0,
        PI,
        n,
        tol,
        |b| {
            let (_, lateral, along) = params(b);
            (lateral, along >= -tol)
        },
        |b| {
            let (p, _, along) = params(b);
            let straight = along.max(0.0);
            let s1 = wrap(first * (p.h - start.h));
            let end = integrate(
                start,
                &[
                    Piece::arc(first, FORWARD, s1, r),
                    Piece::line(FORWARD, straight),
                    Piece::arc(quarter, FORWARD, FRAC_PI_2, r),
                    Piece::arc(back, REVERSE, b, r),
                ],
                r,
            );
            let err = end.dist(&dump);
            if err <= tol {
                let length = r * (s1 + FRAC_PI_2 + b) + straight;
                if best.is_none_or(|g| length < g.length) {
                    best = Some(GridReverse {
                        length,
                        first_sweep: s1,
                        straight,
                        reverse_sweep: b,
                        endpoint_error: err,
                    });
                }
            }
        },
    );
    best
}

/// Fixed-step simulation of a vehicle that accelerates at `accel` up to
/// `v_max` and brakes at `decel` as late as possible. Returns the time to
/// cover `distance`. With `start_at_rest` false the vehicle enters at
/// `v_max`, or at the fastest speed it can still stop from when the end is
/// a stop and the leg is short.
pub fn simulate_motion(
    distance: f64,
    v_max: f64,
    accel: f64,
    decel: f64,
    start_at_rest: bool,
    end_at_rest: bool,
    dt: f64,
) -> f64 {
    if distance <= 0.0 {
        return 0.0;
    }
    let v_in = match (start_at_rest, end_at_rest) {
        (true, _) => 0.0,
        (false, true) => v_max.min((2.0 * decel * distance).sqrt()),
        (false, false) => v_max,
    };
    let (mut s, mut v, mut t) = (0.0, v_in, 0.0);
    let mut braking = false;
    loop {
        braking |= end_at_rest && v * v / (2.0 * decel) >= distance - s;
        let a = if braking {
            -decel
        } else if v < v_max {
            accel
        } else {
            0.0
        };
        let v_next = (v + a * dt).min(v_max);
        if braking && v_next <= 0.0 {
            return t + v / decel;
        }
        s += 0.5 * (v + v_next) * dt;
        v = v_next;
        t += dt;
        if !end_at_rest && s >= distance {
            return t - (s - distance) / v;
        }
    }
}
