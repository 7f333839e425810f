//! Typed async client for the dynamic matching HTTP service.

use dynmatch_core::protocol::*;
use dynmatch_core::workload::{StaticGraph, UpdateOp, UpdateSequence, ValidationReport};
use reqwest::{Method, RequestBuilder, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    /// The service answered with its error format.
    #[error("{status}: {}", .body.message)]
    Api { status: u16, body: ErrorBody },
    #[error("unexpected {status} response: {text}")]
    Unexpected { status: u16, text: String },
}

impl ClientError {
    pub fn kind(&self) -> Option<ErrorKind> {
        match self {
            ClientError::Api { body, .. } => Some(body.kind),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base_url` like `http://127.0.0.1:8080`; a trailing slash is ignored.
    pub fn new(base_url: &str) -> Self {
        Self {
            base: base_url.trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn request(&self, method: Method, path: &str) -> RequestBuilder {
        self.http.request(method, format!("{}{path}", self.base))
    }

    async fn send<T: DeserializeOwned>(req: RequestBuilder) -> Result<T, ClientError> {
        let resp = req.send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        Err(Self::error(status, resp.text().await?))
    }

    fn error(status: StatusCode, text: String) -> ClientError {
        match serde_json::from_str::<ErrorBody>(&text) {
            Ok(body) => ClientError::Api {
                status: status.as_u16(),
                body,
            },
            Err(_) => ClientError::Unexpected {
                status: status.as_u16(),
                text,
            },
        }
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T, ClientError> {
        Self::send(self.request(Method::POST, path).json(body)).await
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        Self::send(self.request(Method::GET, path)).await
    }

    pub async fn health(&self) -> Result<(), ClientError> {
        let resp = self.request(Method::GET, "/health").send().await?;
        match resp.status() {
            s if s.is_success() => Ok(()),
            s => Err(Self::error(s, resp.text().await?)),
        }
    }

    pub async fn create_session(&self, req: &CreateSession) -> Result<SessionInfo, ClientError> {
        self.post("/sessions", req).await
    }

    pub async fn session(&self, id: u64) -> Result<SessionInfo, ClientError> {
        self.get(&format!("/sessions/{id}")).await
    }

    pub async fn delete_session(&self, id: u64) -> Result<(), ClientError> {
        let resp = self.request(Method::DELETE, &format!("/sessions/{id}")).send().await?;
        match resp.status() {
            s if s.is_success() => Ok(()),
            s => Err(Self::error(s, resp.text().await?)),
        }
    }

    pub async fn apply_updates(&self, id: u64, ops: Vec<UpdateOp>) -> Result<UpdatesApplied, ClientError> {
        self.post(&format!("/sessions/{id}/updates"), &ApplyUpdates { ops }).await
    }

    pub async fn matching(&self, id: u64) -> Result<MatchingEdges, ClientError> {
        self.get(&format!("/sessions/{id}/matching")).await
    }

    pub async fn audit(&self, id: u64) -> Result<AuditReport, ClientError> {
        self.get(&format!("/sessions/{id}/audit")).await
    }

    pub async fn run_experiment(&self, req: &ExperimentRequest) -> Result<ExperimentResponse, ClientError> {
        self.post("/experiments", req).await
    }

    pub async fn profile(&self, req: &ProfileRequest) -> Result<ProfileResponse, ClientError> {
        self.post("/profile", req).await
    }

    pub async fn validate(&self, sequence: UpdateSequence) -> Result<ValidationReport, ClientError> {
        let r: ValidateResponse = self.post("/validate", &ValidateRequest { sequence }).await?;
        Ok(r.report)
    }

    pub async fn oracle(&self, graph: StaticGraph) -> Result<OracleResponse, ClientError> {
        self.post("/oracle", &OracleRequest { graph }).await
    }
}
