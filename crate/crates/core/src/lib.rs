//! Haulage path planning near ore crushers.
//!
//! Designs minimum-length truck paths under a turning-radius bound, both for
//! sites where trucks stop and reverse up to the crusher and for sites with a
//! turntable, then costs each trip in time, fuel and tyre wear.

pub mod cost;
pub mod dubins;
pub mod geometry;
pub mod reverse;
pub mod scenario;
pub mod trip;
pub mod turntable;

use thiserror::Error;

pub use geometry::{DirectedPoint, Direction, PathPlan, PathSegment, Turn};

/// Failures shared by the planners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("no path of the permitted forms exists")]
    NoPathExists,
    #[error("target lies inside both turning circles")]
    TargetInsideTurningCircle,
    #[error("start is {distance:.2} m from the turntable center, closer than its {diameter:.2} m diameter")]
    StartTooClose { distance: f64, diameter: f64 },
}
