//! Thin async client for the haulplan service.
//!
//! ```no_run
//! # async fn demo() -> Result<(), haulplan_client::ClientError> {
//! let client = haulplan_client::Client::new("http://127.0.0.1:8787");
//! let record = client.create(&haulplan_core::scenario::demo_scenario()).await?;
//! let results = client.solve(&record.id, None).await?;
//! println!("{} routes solved", results.summary.routes_solved);
//! # Ok(()) }
//! ```

use haulplan_core::scenario::{ApiError, ResultSet, Scenario, ScenarioRecord};
use reqwest::{RequestBuilder, Response};
use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    /// The service answered with an error document.
    #[error("{status}: {} ({})", .error.message, .error.code)]
    Api { status: u16, error: ApiError },
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
}

impl ClientError {
    /// True for 400/422 answers, i.e. problems with the scenario itself.
    pub fn is_scenario_error(&self) -> bool {
        matches!(self, ClientError::Api { status: 400 | 422, .. })
    }
}

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base: base_url.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn url(&self, path: &str, sample_step: Option<f64>) -> String {
        match sample_step {
            Some(step) => format!("{}{path}?sample_step={step}", self.base),
            None => format!("{}{path}", self.base),
        }
    }

    async fn checked(req: RequestBuilder) -> Result<Response, ClientError> {
        let resp = req.send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp);
        }
        let text = resp.text().await?;
        let error = serde_json::from_str(&text).unwrap_or_else(|_| ApiError::new("http_error", text));
        Err(ClientError::Api {
            status: status.as_u16(),
            error,
        })
    }

    async fn json<T: DeserializeOwned>(req: RequestBuilder) -> Result<T, ClientError> {
        Ok(Self::checked(req).await?.json().await?)
    }

    pub async fn create(&self, scenario: &Scenario) -> Result<ScenarioRecord, ClientError> {
        Self::json(self.http.post(self.url("/scenarios", None)).json(scenario)).await
    }

    /// Upload scenario JSON as-is, letting the service parse and validate it.
    pub async fn create_raw(&self, json: String) -> Result<ScenarioRecord, ClientError> {
        let req = self
            .http
            .post(self.url("/scenarios", None))
            .header(reqwest::header::CONTENT_TYPE, "application/json")
            .body(json);
        Self::json(req).await
    }

    pub async fn get(&self, id: &str) -> Result<Scenario, ClientError> {
        Self::json(self.http.get(self.url(&format!("/scenarios/{id}"), None))).await
    }

    pub async fn put(&self, id: &str, scenario: &Scenario) -> Result<ScenarioRecord, ClientError> {
        Self::json(
            self.http
                .put(self.url(&format!("/scenarios/{id}"), None))
                .json(scenario),
        )
        .await
    }

    pub async fn solve(&self, id: &str, sample_step: Option<f64>) -> Result<ResultSet, ClientError> {
        Self::json(self.http.post(self.url(&format!("/scenarios/{id}/solve"), sample_step))).await
    }

    pub async fn svg(&self, id: &str, sample_step: Option<f64>) -> Result<String, ClientError> {
        let resp = Self::checked(self.http.get(self.url(&format!("/scenarios/{id}/svg"), sample_step))).await?;
        Ok(resp.text().await?)
    }
}
