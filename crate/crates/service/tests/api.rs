use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use dynmatch_core::bench::{Algorithm, MatcherConfig, ProfileMode, ResultTable, RunOptions};
use dynmatch_core::protocol::*;
use dynmatch_core::workload::{StaticGraph, UpdateOp, UpdateSequence};
use dynmatch_service::{router, AppState};
use http_body_util::BodyExt;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use tower::ServiceExt;

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

fn json<T: Serialize>(t: &T) -> Option<Value> {
    Some(serde_json::to_value(t).unwrap())
}

fn parse<T: DeserializeOwned>(v: Value) -> T {
    serde_json::from_value(v).unwrap()
}

fn app() -> Router {
    router(AppState::default())
}

#[tokio::test]
async fn health() {
    let (s, v) = call(&app(), Method::GET, "/health", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["status"], "ok");
}

#[tokio::test]
async fn session_lifecycle() {
    let app = app();
    let create = CreateSession {
        n: 4,
        config: MatcherConfig::new(Algorithm::DynBlossom),
        repetition: 0,
    };
    let (s, v) = call(&app, Method::POST, "/sessions", json(&create)).await;
    assert_eq!(s, StatusCode::CREATED);
    let info: SessionInfo = parse(v);
    assert_eq!((info.n, info.m, info.size), (4, 0, 0));
    assert_eq!(info.matcher, "dyn-blossom-safe");
    let base = format!("/sessions/{}", info.id);

    let ops = ApplyUpdates {
        ops: vec![
            UpdateOp::insert(1, 2),
            UpdateOp::insert(0, 1),
            UpdateOp::insert(2, 3),
            UpdateOp::insert(2, 1),
            UpdateOp::delete(0, 3),
        ],
    };
    let (s, v) = call(&app, Method::POST, &format!("{base}/updates"), json(&ops)).await;
    assert_eq!(s, StatusCode::OK);
    let r: UpdatesApplied = parse(v);
    assert_eq!((r.applied, r.ignored, r.size), (3, 2, 2));

    let (_, v) = call(&app, Method::GET, &format!("{base}/matching"), None).await;
    let m: MatchingEdges = parse(v);
    assert_eq!(m.edges, vec![(0, 1), (2, 3)]);

    let (s, v) = call(&app, Method::GET, &format!("{base}/audit"), None).await;
    assert_eq!(s, StatusCode::OK);
    let a: AuditReport = parse(v);
    assert_eq!(a.opt, Some(2));
    assert_eq!(a.guarantee, "Maximum");

    let (_, v) = call(&app, Method::GET, &base, None).await;
    let info: SessionInfo = parse(v);
    assert_eq!((info.m, info.updates), (3, 3));

    let (s, _) = call(&app, Method::DELETE, &base, None).await;
    assert_eq!(s, StatusCode::NO_CONTENT);
    let (s, v) = call(&app, Method::GET, &base, None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(parse::<ErrorBody>(v).kind, ErrorKind::NotFound);
}

#[tokio::test]
async fn bad_updates_report_the_operation() {
    let app = app();
    let create = CreateSession {
        n: 3,
        config: MatcherConfig::new(Algorithm::Greedy),
        repetition: 0,
    };
    let (_, v) = call(&app, Method::POST, "/sessions", json(&create)).await;
    let id = parse::<SessionInfo>(v).id;
    let ops = ApplyUpdates {
        ops: vec![UpdateOp::insert(0, 1), UpdateOp::insert(0, 9)],
    };
    let (s, v) = call(&app, Method::POST, &format!("/sessions/{id}/updates"), json(&ops)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let e: ErrorBody = parse(v);
    assert_eq!((e.kind, e.op_index), (ErrorKind::Input, Some(1)));
    let (_, v) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(parse::<SessionInfo>(v).m, 1);
}

#[tokio::test]
async fn invalid_configs_and_bodies_are_input_errors() {
    let app = app();
    let mut cfg = MatcherConfig::new(Algorithm::Greedy);
    cfg.lazy = true;
    let create = CreateSession { n: 3, config: cfg, repetition: 0 };
    let (s, v) = call(&app, Method::POST, "/sessions", json(&create)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(parse::<ErrorBody>(v).message.contains("lazy"));

    let (s, v) = call(&app, Method::POST, "/sessions", Some(serde_json::json!({"n": "x"}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(parse::<ErrorBody>(v).kind, ErrorKind::Input);

    let too_big = serde_json::json!({"n": usize::MAX, "config": {"algorithm": "greedy"}});
    let (s, _) = call(&app, Method::POST, "/sessions", Some(too_big)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn experiments_run_every_repetition() {
    let seq = UpdateSequence::new(
        3,
        vec![UpdateOp::insert(0, 1), UpdateOp::insert(1, 2), UpdateOp::insert(2, 0)],
    );
    let req = ExperimentRequest {
        sequence: seq,
        config: MatcherConfig::new(Algorithm::Greedy).with_repetitions(2),
        options: RunOptions {
            verify_every: Some(1),
            ..Default::default()
        },
    };
    let (s, v) = call(&app(), Method::POST, "/experiments", json(&req)).await;
    assert_eq!(s, StatusCode::OK);
    let r: ExperimentResponse = parse(v);
    assert_eq!(r.results.len(), 2);
    assert_eq!(r.results[0].summary.final_size, 1);
    assert_eq!(r.results[1].records.len(), 3);

    let mut bad = req.clone();
    bad.sequence.ops.push(UpdateOp::delete(0, 2));
    bad.sequence.ops.push(UpdateOp::delete(0, 2));
    let (s, v) = call(&app(), Method::POST, "/experiments", json(&bad)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(parse::<ErrorBody>(v).op_index, Some(4));
}

#[tokio::test]
async fn profile_validate_and_oracle() {
    let table = ResultTable {
        algorithms: vec!["a".into(), "b".into()],
        instances: vec!["i".into()],
        values: vec![vec![Some(10.0), Some(5.0)]],
    };
    let req = ProfileRequest {
        table,
        mode: ProfileMode::Maximize,
        taus: vec![1.0, 0.5],
    };
    let (s, v) = call(&app(), Method::POST, "/profile", json(&req)).await;
    assert_eq!(s, StatusCode::OK);
    let p: ProfileResponse = parse(v);
    assert_eq!(p.rows[0].fractions, vec![1.0, 0.0]);
    assert_eq!(p.rows[1].fractions, vec![1.0, 1.0]);

    let mut missing = req.clone();
    missing.table.values[0][1] = None;
    let (s, _) = call(&app(), Method::POST, "/profile", json(&missing)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let seq = UpdateSequence::new(3, vec![UpdateOp::insert(0, 1), UpdateOp::delete(1, 2)]);
    let (_, v) = call(&app(), Method::POST, "/validate", json(&ValidateRequest { sequence: seq })).await;
    let r: ValidateResponse = parse(v);
    assert_eq!(r.report.phantom_deletes, 1);
    assert_eq!(r.report.first_violation, Some(1));

    let g = StaticGraph {
        n: 6,
        edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
    };
    let (_, v) = call(&app(), Method::POST, "/oracle", json(&OracleRequest { graph: g })).await;
    assert_eq!(parse::<OracleResponse>(v), OracleResponse { n: 6, m: 6, max_matching: 3 });
    let bad = OracleRequest {
        graph: StaticGraph { n: 2, edges: vec![(0, 5)] },
    };
    let (s, _) = call(&app(), Method::POST, "/oracle", json(&bad)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}
