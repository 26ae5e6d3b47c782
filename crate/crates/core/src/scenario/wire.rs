//! JSON bodies shared by the HTTP service and its client.

use serde::{Deserialize, Serialize};

use super::model::Scenario;
use super::ScenarioError;
use crate::trip::RouteId;
use crate::PlanError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route_id: Option<RouteId>,
}

impl ApiError {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
            route_id: None,
        }
    }

    pub fn for_route(route_id: RouteId, err: &PlanError) -> Self {
        let code = match err {
            PlanError::NoPathExists => "no_path_exists",
            PlanError::TargetInsideTurningCircle => "target_inside_turning_circle",
            PlanError::StartTooClose { .. } => "start_too_close",
        };
        Self {
            code: code.into(),
            message: err.to_string(),
            route_id: Some(route_id),
        }
    }
}

impl From<&ScenarioError> for ApiError {
    fn from(e: &ScenarioError) -> Self {
        let route_id = match e {
            ScenarioError::UnknownRoute(id) | ScenarioError::DuplicateOverride(id) => Some(*id),
            ScenarioError::DuplicateWaypoint { route_id, .. } => Some(*route_id),
            _ => None,
        };
        Self {
            code: e.code().into(),
            message: e.to_string(),
            route_id,
        }
    }
}

/// Response to creating a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub id: String,
    pub scenario: Scenario,
}
