//! Scenario documents, route assembly, solving and export.

pub mod calibration;
pub mod model;
pub mod routes;
pub mod solve;
pub mod svg;
pub mod wire;

use thiserror::Error;

use crate::trip::RouteId;

pub use calibration::{calibrate, Calibration, PixelTransform};
pub use model::{DumpPoint, EntryExitPair, Pose, ReverseOverride, Scenario, Section, Waypoint, SCHEMA_VERSION};
pub use routes::{build_routes, RouteFailure};
pub use solve::{solve_scenario, ResultSet, DEFAULT_SAMPLE_STEP_M};
pub use svg::render_svg;
pub use wire::{ApiError, ScenarioRecord};

/// The demo site: two entry/exit pairs and dump points at the front and rear
/// of a crusher.
pub const DEMO_SCENARIO_JSON: &str = include_str!("../../fixtures/demo_scenario.json");

pub fn demo_scenario() -> Scenario {
    Scenario::from_json(DEMO_SCENARIO_JSON).expect("demo fixture is valid")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("could not parse scenario: {0}")]
    Parse(String),
    #[error("unsupported schema version {0}")]
    UnsupportedSchema(u32),
    #[error("calibration points must be distinct and the distance positive")]
    DegenerateCalibration,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite coordinate in {0}")]
    NonFinite(String),
    #[error("route {0} does not exist")]
    UnknownRoute(RouteId),
    #[error("duplicate waypoint index {index} on route {route_id}")]
    DuplicateWaypoint { route_id: RouteId, index: u32 },
    #[error("more than one reverse point override on route {0}")]
    DuplicateOverride(RouteId),
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Parse(_) => "parse_error",
            ScenarioError::UnsupportedSchema(_) => "unsupported_schema",
            ScenarioError::DegenerateCalibration => "degenerate_calibration",
            ScenarioError::InvalidParameter(_) => "invalid_parameter",
            ScenarioError::NonFinite(_) => "non_finite",
            ScenarioError::UnknownRoute(_) => "unknown_route",
            ScenarioError::DuplicateWaypoint { .. } => "duplicate_waypoint",
            ScenarioError::DuplicateOverride(_) => "duplicate_override",
        }
    }
}
