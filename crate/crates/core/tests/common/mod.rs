#![allow(dead_code)]

use haulplan_core::geometry::SegmentShape;
use haulplan_core::{DirectedPoint, PathPlan};
use haulplan_oracle::{integrate, Piece, Pose};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub const R: f64 = 28.4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_pose(rng: &mut ChaCha8Rng, size: f64) -> DirectedPoint {
    DirectedPoint::new(
        rng.gen_range(0.0..size),
        rng.gen_range(0.0..size),
        rng.gen_range(0.0..TAU),
    )
}

pub fn pose(p: &DirectedPoint) -> Pose {
    Pose::new(p.x, p.y, p.heading)
}

pub fn pieces(plan: &PathPlan) -> Vec<Piece> {
    plan.segments
        .iter()
        .map(|s| Piece {
            turn: match s.shape {
                SegmentShape::Straight => 0.0,
                SegmentShape::Arc { turn, .. } => turn.sign(),
            },
            dir: s.direction.sign(),
            length: s.length,
        })
        .collect()
}

/// Where the oracle's own integrator says the plan ends.
pub fn simulate(plan: &PathPlan, radius: f64) -> Pose {
    integrate(pose(&plan.start), &pieces(plan), radius)
}

pub fn assert_reaches(plan: &PathPlan, goal: &DirectedPoint, radius: f64, pos_tol: f64, ang_tol: f64) {
    let end = simulate(plan, radius);
    let g = pose(goal);
    assert!(
        end.dist(&g) < pos_tol && end.heading_err(&g) < ang_tol,
        "plan {} ends at {end:?}, expected {g:?}",
        plan.form_label
    );
}
