use crate::error::ApiError;
use axum::extract::{DefaultBodyLimit, FromRequest, Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use dynmatch_core::bench::{performance_profile, run_repetitions, MatcherConfig};
use dynmatch_core::blossom::static_max_matching;
use dynmatch_core::matcher::check_guarantee;
use dynmatch_core::protocol::*;
use dynmatch_core::workload::validate_sequence;
use dynmatch_core::{DynamicGraph, DynamicMatcher};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

/// Largest vertex count accepted for sessions and static graphs.
pub const MAX_VERTICES: usize = 1 << 26;
/// Largest n for which the audit endpoint also runs the exact oracle.
const AUDIT_ORACLE_MAX_N: usize = 200;
const BODY_LIMIT: usize = 512 << 20;

struct Session {
    matcher: Box<dyn DynamicMatcher>,
    updates: u64,
}

impl Session {
    fn info(&self, id: u64) -> SessionInfo {
        let g = self.matcher.graph();
        SessionInfo {
            id,
            matcher: self.matcher.name(),
            n: g.n(),
            m: g.m(),
            size: self.matcher.size(),
            updates: self.updates,
        }
    }
}

type SharedSession = Arc<Mutex<Session>>;

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<u64, SharedSession>>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    fn session(&self, id: u64) -> Result<SharedSession, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::new(ErrorKind::NotFound, format!("no session {id}")))
    }
}

/// JSON body extractor whose rejections use the API error format.
#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
struct Body<T>(T);

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/updates", post(apply_updates))
        .route("/sessions/{id}/matching", get(get_matching))
        .route("/sessions/{id}/audit", get(audit_session))
        .route("/experiments", post(run_experiments))
        .route("/profile", post(profile))
        .route("/validate", post(validate))
        .route("/oracle", post(oracle))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

// CPU-bound work runs off the async workers.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(ErrorKind::Internal, e.to_string()))?
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
}

async fn health() -> Json<Health> {
    Json(Health { status: "ok" })
}

fn check_n(n: usize) -> Result<(), ApiError> {
    if n > MAX_VERTICES {
        return Err(ApiError::input(format!("n = {n} exceeds the limit of {MAX_VERTICES}")));
    }
    Ok(())
}

async fn create_session(
    State(st): State<AppState>,
    Body(req): Body<CreateSession>,
) -> Result<(StatusCode, Json<SessionInfo>), ApiError> {
    check_n(req.n)?;
    let matcher = req
        .config
        .build(req.n, req.repetition)
        .map_err(|e| ApiError::input(e.to_string()))?;
    let id = st.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let session = Session { matcher, updates: 0 };
    let info = session.info(id);
    st.sessions
        .lock()
        .unwrap()
        .insert(id, Arc::new(Mutex::new(session)));
    tracing::info!(id, matcher = %info.matcher, n = info.n, "session created");
    Ok((StatusCode::CREATED, Json(info)))
}

async fn get_session(State(st): State<AppState>, Path(id): Path<u64>) -> Result<Json<SessionInfo>, ApiError> {
    let s = st.session(id)?;
    let info = s.lock().unwrap().info(id);
    Ok(Json(info))
}

async fn delete_session(State(st): State<AppState>, Path(id): Path<u64>) -> Result<StatusCode, ApiError> {
    match st.sessions.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::new(ErrorKind::NotFound, format!("no session {id}"))),
    }
}

async fn apply_updates(
    State(st): State<AppState>,
    Path(id): Path<u64>,
    Body(req): Body<ApplyUpdates>,
) -> Result<Json<UpdatesApplied>, ApiError> {
    let s = st.session(id)?;
    blocking(move || {
        let mut s = s.lock().unwrap();
        let (mut applied, mut ignored, mut elapsed_ns) = (0, 0, 0u64);
        for (i, op) in req.ops.iter().enumerate() {
            let start = Instant::now();
            let r = s.matcher.apply(op);
            elapsed_ns += start.elapsed().as_nanos() as u64;
            match r {
                Ok(true) => applied += 1,
                Ok(false) => ignored += 1,
                Err(e) => {
                    // earlier operations of the batch stay applied
                    s.updates += applied as u64;
                    return Err(ApiError::input(e.to_string()).at(i));
                }
            }
        }
        s.updates += applied as u64;
        Ok(Json(UpdatesApplied {
            applied,
            ignored,
            size: s.matcher.size(),
            elapsed_ns,
        }))
    })
    .await
}

async fn get_matching(State(st): State<AppState>, Path(id): Path<u64>) -> Result<Json<MatchingEdges>, ApiError> {
    let s = st.session(id)?;
    let s = s.lock().unwrap();
    let m = s.matcher.matching();
    Ok(Json(MatchingEdges {
        size: m.size(),
        edges: m.edges().collect(),
    }))
}

async fn audit_session(State(st): State<AppState>, Path(id): Path<u64>) -> Result<Json<AuditReport>, ApiError> {
    let s = st.session(id)?;
    blocking(move || {
        let s = s.lock().unwrap();
        let fail = |e: dynmatch_core::AuditError| ApiError::new(ErrorKind::Audit, e.to_string());
        s.matcher.audit().map_err(fail)?;
        let opt = if s.matcher.graph().n() <= AUDIT_ORACLE_MAX_N {
            Some(check_guarantee(s.matcher.as_ref()).map_err(fail)?)
        } else {
            None
        };
        Ok(Json(AuditReport {
            size: s.matcher.size(),
            opt,
            guarantee: format!("{:?}", s.matcher.guarantee()),
        }))
    })
    .await
}

async fn run_experiments(Body(req): Body<ExperimentRequest>) -> Result<Json<ExperimentResponse>, ApiError> {
    check_n(req.sequence.n)?;
    let cfg: MatcherConfig = req.config;
    blocking(move || {
        let results = run_repetitions(&req.sequence, &cfg, &req.options)?;
        Ok(Json(ExperimentResponse { results }))
    })
    .await
}

async fn profile(Body(req): Body<ProfileRequest>) -> Result<Json<ProfileResponse>, ApiError> {
    let rows = performance_profile(&req.table, req.mode, &req.taus).map_err(|e| ApiError::input(e.to_string()))?;
    Ok(Json(ProfileResponse {
        algorithms: req.table.algorithms,
        rows,
    }))
}

async fn validate(Body(req): Body<ValidateRequest>) -> Json<ValidateResponse> {
    Json(ValidateResponse {
        report: validate_sequence(&req.sequence),
    })
}

async fn oracle(Body(req): Body<OracleRequest>) -> Result<Json<OracleResponse>, ApiError> {
    check_n(req.graph.n)?;
    blocking(move || {
        let g = DynamicGraph::from_edges(req.graph.n, &req.graph.edges).map_err(|e| ApiError::input(e.to_string()))?;
        Ok(Json(OracleResponse {
            n: g.n(),
            m: g.m(),
            max_matching: static_max_matching(&g).size(),
        }))
    })
    .await
}
