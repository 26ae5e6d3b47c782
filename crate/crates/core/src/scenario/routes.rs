//! Assembles trip plans for every entry/exit pair and dump point.

use serde::{Deserialize, Serialize};

use super::model::{Scenario, Section};
use super::ScenarioError;
use crate::dubins::shortest_csc;
use crate::geometry::{DirectedPoint, PathPlan};
use crate::reverse::{replan_with_reverse_override, solve_reverse_approach};
use crate::trip::{Manoeuvre, RouteId, TripPlan, Variant};
use crate::turntable::plan_turntable_approach;
use crate::PlanError;

/// Which part of a trip a planner failed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripPart {
    Inbound,
    Manoeuvre,
    Outbound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteFailure {
    pub route_id: RouteId,
    pub variant: Variant,
    pub part: TripPart,
    pub error: PlanError,
}

/// Shortest arc-straight-arc legs from `from` through each pose in `via`.
pub fn chain_legs(from: DirectedPoint, via: &[DirectedPoint], radius: f64) -> Result<Vec<PathPlan>, PlanError> {
    let mut legs = Vec::with_capacity(via.len());
    let mut at = from;
    for next in via {
        legs.push(shortest_csc(&at, next, radius)?.plan);
        at = *next;
    }
    Ok(legs)
}

fn build_trip(scenario: &Scenario, route_id: RouteId, variant: Variant) -> Result<TripPlan, RouteFailure> {
    let fail = |part| {
        move |error| RouteFailure {
            route_id,
            variant,
            part,
            error,
        }
    };
    let radius = scenario.truck.turning_radius_m;
    let pair = &scenario.entry_exit_pairs[route_id.pair];
    let dump = scenario.dump_points[route_id.dump].pose.to_directed();

    let entry = pair.entry.to_directed();
    let inbound_via = scenario.waypoints_for(route_id, Section::Inbound);
    let inbound = chain_legs(entry, &inbound_via, radius).map_err(fail(TripPart::Inbound))?;
    let manoeuvre_start = inbound_via.last().copied().unwrap_or(entry);

    let manoeuvre = match variant {
        Variant::Turntable => {
            let turntable = scenario.turntable.at(&dump);
            let approach =
                plan_turntable_approach(&manoeuvre_start, &turntable, radius).map_err(fail(TripPart::Manoeuvre))?;
            Manoeuvre::Turntable { approach, turntable }
        }
        Variant::NoTurntable => {
            let approach = match scenario.reverse_override_for(route_id) {
                Some(cusp) => replan_with_reverse_override(&manoeuvre_start, &cusp, &dump, radius),
                None => solve_reverse_approach(&manoeuvre_start, &dump, radius),
            }
            .map_err(fail(TripPart::Manoeuvre))?;
            Manoeuvre::Reverse { approach }
        }
    };

    let mut outbound_via = scenario.waypoints_for(route_id, Section::Outbound);
    outbound_via.push(pair.exit.to_directed());
    let outbound = chain_legs(dump, &outbound_via, radius).map_err(fail(TripPart::Outbound))?;

    Ok(TripPlan {
        route_id,
        variant,
        inbound,
        manoeuvre,
        outbound,
        boundary_at_speed: true,
    })
}

/// Both variants of every route, pairs outermost, turntable variant first.
/// A failing route does not stop the others.
pub fn build_routes(scenario: &Scenario) -> Result<Vec<Result<TripPlan, RouteFailure>>, ScenarioError> {
    scenario.validate()?;
    Ok(scenario
        .route_ids()
        .flat_map(|id| [Variant::Turntable, Variant::NoTurntable].map(|v| build_trip(scenario, id, v)))
        .collect())
}
