//! Request and response bodies of the HTTP service.

use crate::bench::{ExperimentResult, MatcherConfig, ProfileMode, ProfileRow, ResultTable, RunOptions};
use crate::graph::VertexId;
use crate::workload::{StaticGraph, UpdateOp, UpdateSequence, ValidationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSession {
    pub n: usize,
    pub config: MatcherConfig,
    /// Repetition index used to derive the matcher seed.
    #[serde(default)]
    pub repetition: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub id: u64,
    pub matcher: String,
    pub n: usize,
    pub m: usize,
    pub size: usize,
    pub updates: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplyUpdates {
    pub ops: Vec<UpdateOp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdatesApplied {
    /// Operations that changed the graph.
    pub applied: usize,
    /// Duplicate inserts and deletes of missing edges.
    pub ignored: usize,
    pub size: usize,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingEdges {
    pub size: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub size: usize,
    /// Exact optimum, present when the graph is small enough to check.
    pub opt: Option<usize>,
    pub guarantee: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRequest {
    pub sequence: UpdateSequence,
    pub config: MatcherConfig,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResponse {
    pub results: Vec<ExperimentResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRequest {
    pub table: ResultTable,
    pub mode: ProfileMode,
    pub taus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileResponse {
    pub algorithms: Vec<String>,
    pub rows: Vec<ProfileRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateRequest {
    pub sequence: UpdateSequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateResponse {
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRequest {
    pub graph: StaticGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResponse {
    pub n: usize,
    pub m: usize,
    pub max_matching: usize,
}

/// Error classes, mapped to HTTP status codes by the service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// Malformed or inconsistent input (400).
    Input,
    /// Unknown session (404).
    NotFound,
    /// A matcher failed its audit (422).
    Audit,
    /// Unexpected server failure (500).
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: ErrorKind,
    pub message: String,
    /// Operation index for failures during a replay.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op_index: Option<usize>,
}
