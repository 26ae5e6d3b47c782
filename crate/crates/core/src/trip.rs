//! A complete entry → dump → exit route for one site variant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{integrate_path, DirectedPoint, PathPlan};
use crate::reverse::ReverseApproach;
use crate::turntable::{TurntableApproach, TurntableSpec};

/// Index of an entry/exit pair and a dump point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RouteId {
    pub pair: usize,
    pub dump: usize,
}

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair{}-dump{}", self.pair, self.dump)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Turntable,
    NoTurntable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Manoeuvre {
    Turntable {
        approach: TurntableApproach,
        turntable: TurntableSpec,
    },
    Reverse {
        approach: ReverseApproach,
    },
}

impl Manoeuvre {
    pub fn plan(&self) -> &PathPlan {
        match self {
            Manoeuvre::Turntable { approach, .. } => &approach.plan,
            Manoeuvre::Reverse { approach } => &approach.plan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ReversePoint,
    Turntable,
    Dump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stop {
    pub reason: StopReason,
    pub pose: DirectedPoint,
    /// Whether the truck still carries its load when it halts here.
    pub loaded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripPlan {
    pub route_id: RouteId,
    pub variant: Variant,
    /// Entry pose through the inbound waypoints to where the manoeuvre starts.
    pub inbound: Vec<PathPlan>,
    pub manoeuvre: Manoeuvre,
    /// Dump departure pose through the outbound waypoints to the exit pose.
    pub outbound: Vec<PathPlan>,
    /// Trucks cross the entry and exit points at full forward speed when set,
    /// otherwise they start and finish at rest.
    pub boundary_at_speed: bool,
}

impl TripPlan {
    pub fn inbound_length(&self) -> f64 {
        self.inbound.iter().map(PathPlan::length).sum()
    }

    pub fn outbound_length(&self) -> f64 {
        self.outbound.iter().map(PathPlan::length).sum()
    }

    /// Every plan in driving order.
    pub fn legs(&self) -> impl Iterator<Item = &PathPlan> {
        self.inbound
            .iter()
            .chain(std::iter::once(self.manoeuvre.plan()))
            .chain(self.outbound.iter())
    }

    pub fn stops(&self) -> Vec<Stop> {
        let dump = self.manoeuvre.plan().end();
        match &self.manoeuvre {
            Manoeuvre::Turntable { .. } => vec![
                Stop {
                    reason: StopReason::Turntable,
                    pose: dump,
                    loaded: true,
                },
                Stop {
                    reason: StopReason::Dump,
                    pose: DirectedPoint::new(dump.x, dump.y, self.departure().heading),
                    loaded: true,
                },
            ],
            Manoeuvre::Reverse { approach } => vec![
                Stop {
                    reason: StopReason::ReversePoint,
                    pose: approach.reverse_point,
                    loaded: true,
                },
                Stop {
                    reason: StopReason::Dump,
                    pose: dump,
                    loaded: true,
                },
            ],
        }
    }

    /// Pose the truck leaves the dump from.
    pub fn departure(&self) -> DirectedPoint {
        self.outbound
            .first()
            .map_or_else(|| self.manoeuvre.plan().end(), |p| p.start)
    }

    /// Largest position and heading gaps between the end of one leg and the
    /// start of the next. The turntable swing is not counted as a heading gap.
    pub fn max_chain_gap(&self) -> (f64, f64) {
        let legs: Vec<&PathPlan> = self.legs().collect();
        let turntable = match &self.manoeuvre {
            Manoeuvre::Turntable { approach, .. } => Some(&approach.plan),
            Manoeuvre::Reverse { .. } => None,
        };
        let (mut pos, mut ang) = (0.0f64, 0.0f64);
        for w in legs.windows(2) {
            let (dp, da) = integrate_path(w[0]).pose_error(&w[1].start);
            pos = pos.max(dp);
            if !turntable.is_some_and(|t| std::ptr::eq(t, w[0])) {
                ang = ang.max(da);
            }
        }
        (pos, ang)
    }
}
