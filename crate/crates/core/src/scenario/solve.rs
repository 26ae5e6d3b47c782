//! Solving a scenario into costed, sampled routes.

use serde::{Deserialize, Serialize};

use super::model::{heading_to_bearing, Pose, Scenario, SCHEMA_VERSION};
use super::routes::{build_routes, RouteFailure, TripPart};
use super::wire::ApiError;
use super::ScenarioError;
use crate::cost::{compare_and_annualize, trip_cost, CostBreakdown, CostDelta, Savings};
use crate::geometry::{sample_path, Direction, PathPlan, PathSegment, SegmentShape};
use crate::trip::{Manoeuvre, RouteId, TripPlan, Variant};
use crate::turntable::rotation_time;

pub const DEFAULT_SAMPLE_STEP_M: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub kind: String,
    pub turn: Option<String>,
    pub direction: Direction,
    pub length: f64,
    pub radius: Option<f64>,
    pub sweep_deg: Option<f64>,
}

impl From<&PathSegment> for SegmentRecord {
    fn from(s: &PathSegment) -> Self {
        let (kind, turn, radius, sweep_deg) = match s.shape {
            SegmentShape::Straight => ("straight", None, None, None),
            SegmentShape::Arc { turn, radius, sweep } => (
                "arc",
                Some(turn.letter().to_string()),
                Some(radius),
                Some(sweep.to_degrees()),
            ),
        };
        Self {
            kind: kind.into(),
            turn,
            direction: s.direction,
            length: s.length,
            radius,
            sweep_deg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegRecord {
    pub part: TripPart,
    pub form: String,
    pub start: Pose,
    pub length: f64,
    pub segments: Vec<SegmentRecord>,
}

impl LegRecord {
    fn new(part: TripPart, plan: &PathPlan) -> Self {
        Self {
            part,
            form: plan.form_label.clone(),
            start: Pose::from_directed(&plan.start),
            length: plan.length(),
            segments: plan.segments.iter().map(SegmentRecord::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolylinePoint {
    pub x: f64,
    pub y: f64,
    pub bearing_deg: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManoeuvreRecord {
    Turntable {
        form: String,
        center: Pose,
        diameter_m: f64,
        entry_bearing_deg: f64,
        rotation_deg: f64,
        rotation_time_s: f64,
        used_fallback: bool,
    },
    Reverse {
        form: String,
        reverse_point: Pose,
        forward_length: f64,
        reverse_length: f64,
        overridden: bool,
        long_reverse: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantResult {
    pub status: Status,
    pub error: Option<ApiError>,
    /// Leg forms in driving order, e.g. `["LSR", "LS", "LSL"]`.
    pub forms: Vec<String>,
    pub length: f64,
    pub manoeuvre: Option<ManoeuvreRecord>,
    pub legs: Vec<LegRecord>,
    pub polyline: Vec<PolylinePoint>,
    pub cost: Option<CostBreakdown>,
}

impl VariantResult {
    fn failed(error: ApiError) -> Self {
        Self {
            status: Status::Error,
            error: Some(error),
            forms: Vec::new(),
            length: 0.0,
            manoeuvre: None,
            legs: Vec::new(),
            polyline: Vec::new(),
            cost: None,
        }
    }

    fn from_trip(trip: &TripPlan, scenario: &Scenario, step: f64) -> Result<Self, ScenarioError> {
        let params = scenario.truck.to_params();
        let parts = trip
            .inbound
            .iter()
            .map(|p| (TripPart::Inbound, p))
            .chain(std::iter::once((TripPart::Manoeuvre, trip.manoeuvre.plan())))
            .chain(trip.outbound.iter().map(|p| (TripPart::Outbound, p)));

        let mut legs = Vec::new();
        let mut polyline: Vec<PolylinePoint> = Vec::new();
        for (part, plan) in parts {
            legs.push(LegRecord::new(part, plan));
            let pts = sample_path(plan, step).map_err(|e| ScenarioError::InvalidParameter(e.to_string()))?;
            let skip = usize::from(!polyline.is_empty());
            polyline.extend(pts.into_iter().skip(skip).map(|p| PolylinePoint {
                x: p.x,
                y: p.y,
                bearing_deg: heading_to_bearing(p.heading),
                direction: p.direction,
            }));
        }

        let manoeuvre = match &trip.manoeuvre {
            Manoeuvre::Turntable { approach, turntable } => ManoeuvreRecord::Turntable {
                form: approach.plan.form_label.clone(),
                center: Pose::from_directed(&turntable.exit_pose()),
                diameter_m: turntable.diameter,
                entry_bearing_deg: heading_to_bearing(approach.entry_heading),
                rotation_deg: approach.rotation_angle.to_degrees(),
                rotation_time_s: rotation_time(approach.rotation_angle, turntable),
                used_fallback: approach.used_fallback,
            },
            Manoeuvre::Reverse { approach } => ManoeuvreRecord::Reverse {
                form: approach.plan.form_label.clone(),
                reverse_point: Pose::from_directed(&approach.reverse_point),
                forward_length: approach.forward_length,
                reverse_length: approach.reverse_length,
                overridden: approach.is_overridden(),
                long_reverse: approach.long_reverse,
            },
        };

        Ok(Self {
            status: Status::Ok,
            error: None,
            forms: legs.iter().map(|l| l.form.clone()).collect(),
            length: legs.iter().map(|l| l.length).sum(),
            manoeuvre: Some(manoeuvre),
            legs,
            polyline,
            cost: Some(trip_cost(trip, &params)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResult {
    pub route_id: RouteId,
    pub pair_label: String,
    pub dump_label: String,
    pub status: Status,
    pub turntable: VariantResult,
    pub no_turntable: VariantResult,
    pub savings: Option<Savings>,
}

/// Mean per-trip savings over the routes that solved, annualized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub routes_solved: usize,
    pub routes_failed: usize,
    pub mean: Option<Savings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub schema_version: u32,
    pub sample_step_m: f64,
    pub routes: Vec<RouteResult>,
    pub summary: Summary,
}

impl ResultSet {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result set serializes")
    }

    pub fn route(&self, id: RouteId) -> Option<&RouteResult> {
        self.routes.iter().find(|r| r.route_id == id)
    }

    pub fn errors(&self) -> Vec<&ApiError> {
        self.routes
            .iter()
            .flat_map(|r| [&r.turntable, &r.no_turntable])
            .filter_map(|v| v.error.as_ref())
            .collect()
    }
}

fn variant_result(
    built: Result<TripPlan, RouteFailure>,
    scenario: &Scenario,
    step: f64,
) -> Result<VariantResult, ScenarioError> {
    match built {
        Ok(trip) => VariantResult::from_trip(&trip, scenario, step),
        Err(f) => {
            let mut e = ApiError::for_route(f.route_id, &f.error);
            let variant = match f.variant {
                Variant::Turntable => "turntable",
                Variant::NoTurntable => "no-turntable",
            };
            let part = match f.part {
                TripPart::Inbound => "inbound",
                TripPart::Manoeuvre => "manoeuvre",
                TripPart::Outbound => "outbound",
            };
            e.message = format!("{} ({variant} variant, {part} section)", e.message);
            Ok(VariantResult::failed(e))
        }
    }
}

/// Plans, samples and costs both variants of every route.
pub fn solve_scenario(scenario: &Scenario, sample_step: f64) -> Result<ResultSet, ScenarioError> {
    if !(sample_step > 0.0 && sample_step.is_finite()) {
        return Err(ScenarioError::InvalidParameter(format!("sample step {sample_step}")));
    }
    let built = build_routes(scenario)?;
    let mut routes = Vec::with_capacity(built.len() / 2);
    let mut iter = built.into_iter();
    for route_id in scenario.route_ids() {
        let (Some(tt), Some(no_tt)) = (iter.next(), iter.next()) else {
            unreachable!("two variants per route");
        };
        debug_assert!(tt.as_ref().map_or(true, |t| t.variant == Variant::Turntable));
        let turntable = variant_result(tt, scenario, sample_step)?;
        let no_turntable = variant_result(no_tt, scenario, sample_step)?;
        let savings = match (&turntable.cost, &no_turntable.cost) {
            (Some(with), Some(without)) => Some(compare_and_annualize(with, without, &scenario.schedule)),
            _ => None,
        };
        routes.push(RouteResult {
            route_id,
            pair_label: scenario.entry_exit_pairs[route_id.pair].label.clone(),
            dump_label: scenario.dump_points[route_id.dump].label.clone(),
            status: if savings.is_some() { Status::Ok } else { Status::Error },
            turntable,
            no_turntable,
            savings,
        });
    }

    let solved: Vec<&Savings> = routes.iter().filter_map(|r| r.savings.as_ref()).collect();
    let mean = (!solved.is_empty()).then(|| {
        let n = solved.len() as f64;
        let sum = solved.iter().fold(CostDelta::default(), |acc, s| CostDelta {
            time: acc.time + s.per_trip.time,
            fuel: acc.fuel + s.per_trip.fuel,
            tyre_wear: acc.tyre_wear + s.per_trip.tyre_wear,
        });
        Savings::from_per_trip(sum.scaled(1.0 / n), &scenario.schedule)
    });
    let summary = Summary {
        routes_solved: solved.len(),
        routes_failed: routes.len() - solved.len(),
        mean,
    };

    Ok(ResultSet {
        schema_version: SCHEMA_VERSION,
        sample_step_m: sample_step,
        routes,
        summary,
    })
}
