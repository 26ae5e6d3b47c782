//! HTTP/JSON service over the haulage planner.
//!
//! Scenarios live in memory, keyed by a generated id. Each solve works on an
//! immutable snapshot of the stored scenario on a blocking worker thread, so
//! edits and solves for different sessions never wait on each other.
//!
//! | Method | Path                    | Body / response                          |
//! |--------|-------------------------|------------------------------------------|
//! | POST   | `/scenarios`            | `Scenario` → 201 `ScenarioRecord`        |
//! | GET    | `/scenarios/{id}`       | → `Scenario`                             |
//! | PUT    | `/scenarios/{id}`       | `Scenario` → `ScenarioRecord`            |
//! | POST   | `/scenarios/{id}/solve` | `?sample_step=m` → `ResultSet`           |
//! | GET    | `/scenarios/{id}/svg`   | `?sample_step=m` → `image/svg+xml`       |
//! | GET    | `/health`               | → `{"status":"ok"}`                      |
//!
//! Errors are `{code, message, route_id?}` with 400 for unreadable bodies,
//! 404 for unknown ids and 422 for scenarios that fail validation.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use haulplan_core::scenario::{
    render_svg, solve_scenario, ApiError, ResultSet, Scenario, ScenarioError, ScenarioRecord, DEFAULT_SAMPLE_STEP_M,
};
use serde::Deserialize;
use tokio::net::TcpListener;
use tower_http::trace::TraceLayer;

pub const DEFAULT_PORT: u16 = 8787;
pub const PORT_ENV: &str = "HAULPLAN_PORT";

/// Port from `HAULPLAN_PORT`, or the default when unset or unparsable.
pub fn port_from_env() -> u16 {
    std::env::var(PORT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PORT)
}

#[derive(Default)]
pub struct AppState {
    scenarios: RwLock<HashMap<String, Arc<Scenario>>>,
}

impl AppState {
    fn snapshot(&self, id: &str) -> Result<Arc<Scenario>, ServiceError> {
        self.scenarios
            .read()
            .expect("scenario store poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::not_found(id))
    }
}

#[derive(Debug)]
pub struct ServiceError {
    status: StatusCode,
    body: ApiError,
}

impl ServiceError {
    fn not_found(id: &str) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            body: ApiError::new("not_found", format!("no scenario with id {id}")),
        }
    }
}

impl From<ScenarioError> for ServiceError {
    fn from(e: ScenarioError) -> Self {
        let status = match e {
            ScenarioError::Parse(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self {
            status,
            body: ApiError::from(&e),
        }
    }
}

impl From<QueryRejection> for ServiceError {
    fn from(e: QueryRejection) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: ApiError::new("bad_query", e.body_text()),
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct SolveParams {
    sample_step: Option<f64>,
}

impl SolveParams {
    fn step(&self) -> f64 {
        self.sample_step.unwrap_or(DEFAULT_SAMPLE_STEP_M)
    }
}

fn parse_body(body: &[u8]) -> Result<Scenario, ServiceError> {
    let text = std::str::from_utf8(body).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    Ok(Scenario::from_json(text)?)
}

async fn create(State(state): State<Arc<AppState>>, body: Bytes) -> Result<impl IntoResponse, ServiceError> {
    let scenario = parse_body(&body)?;
    let id = uuid::Uuid::new_v4().to_string();
    state
        .scenarios
        .write()
        .expect("scenario store poisoned")
        .insert(id.clone(), Arc::new(scenario.clone()));
    tracing::info!(%id, "scenario created");
    Ok((StatusCode::CREATED, Json(ScenarioRecord { id, scenario })))
}

async fn fetch(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Scenario>, ServiceError> {
    Ok(Json(Scenario::clone(&*state.snapshot(&id)?)))
}

async fn replace(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<ScenarioRecord>, ServiceError> {
    let scenario = parse_body(&body)?;
    let mut store = state.scenarios.write().expect("scenario store poisoned");
    let slot = store.get_mut(&id).ok_or_else(|| ServiceError::not_found(&id))?;
    *slot = Arc::new(scenario.clone());
    Ok(Json(ScenarioRecord { id, scenario }))
}

async fn solve_snapshot(scenario: Arc<Scenario>, step: f64) -> Result<ResultSet, ServiceError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(ScenarioError::InvalidParameter(format!("sample_step must be positive, got {step}")).into());
    }
    let results = tokio::task::spawn_blocking(move || solve_scenario(&scenario, step))
        .await
        .map_err(|e| ServiceError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ApiError::new("internal", e.to_string()),
        })??;
    Ok(results)
}

async fn solve(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    params: Result<Query<SolveParams>, QueryRejection>,
) -> Result<Response, ServiceError> {
    let Query(params) = params?;
    let results = solve_snapshot(state.snapshot(&id)?, params.step()).await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], results.to_json()).into_response())
}

async fn svg(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    params: Result<Query<SolveParams>, QueryRejection>,
) -> Result<Response, ServiceError> {
    let Query(params) = params?;
    let scenario = state.snapshot(&id)?;
    let results = solve_snapshot(scenario.clone(), params.step()).await?;
    let body = render_svg(&scenario, &results);
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], body).into_response())
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

pub fn router() -> Router {
    router_with_state(Arc::new(AppState::default()))
}

pub fn router_with_state(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/scenarios", post(create))
        .route("/scenarios/{id}", get(fetch).put(replace))
        .route("/scenarios/{id}/solve", post(solve))
        .route("/scenarios/{id}/svg", get(svg))
        .layer(TraceLayer::new_for_http())
        .with_state(state)
}

/// Serve on an already bound listener until the process ends.
pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}

/// Bind `addr` and serve in a background task, returning the bound address.
/// Port 0 picks a free port.
pub async fn spawn(addr: SocketAddr) -> std::io::Result<SocketAddr> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    tokio::spawn(async move {
        if let Err(e) = serve(listener).await {
            tracing::error!(error = %e, "server stopped");
        }
    });
    Ok(local)
}
