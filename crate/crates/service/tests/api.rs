use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use quivers::catalog::{self, ReferenceCatalog};
use quivers::format::QuiverJson;
use quivers::report;
use quivers_service::router;

fn app() -> Router {
    static CATALOG: OnceLock<Arc<ReferenceCatalog>> = OnceLock::new();
    router(CATALOG.get_or_init(|| Arc::new(ReferenceCatalog::new())).clone())
}

async fn send(method: &str, uri: &str, content_type: Option<&str>, body: String) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(ct) = content_type {
        req = req.header(header::CONTENT_TYPE, ct);
    }
    let resp = app().oneshot(req.body(Body::from(body)).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    let (status, text) = send("POST", uri, Some("application/json"), body.to_string()).await;
    (status, serde_json::from_str(&text).unwrap())
}

fn triangle() -> Value {
    json!({"n": 3, "arrows": [[1, 2, 1], [2, 3, 1], [3, 1, 1]]})
}

#[tokio::test]
async fn mutate_reverses_a_single_arrow() {
    let (status, body) = post(
        "/api/mutate",
        json!({"quiver": {"n": 2, "arrows": [[1, 2, 1]]}, "k": 1}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"quiver": {"n": 2, "arrows": [[2, 1, 1]]}}));
}

#[tokio::test]
async fn versioned_and_plain_routes_agree() {
    let req = json!({"quiver": triangle(), "k": 2});
    let (_, a) = post("/api/mutate", req.clone()).await;
    let (_, b) = post("/api/v1/mutate", req).await;
    assert_eq!(a, b);
}

#[tokio::test]
async fn analyze_triangle() {
    let (status, body) = post("/api/v1/analyze", json!({"quiver": triangle()})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["corank_z"], 1);
    assert_eq!(body["rank_z"], 2);
    assert_eq!(body["dim_v00"], 1);
    assert_eq!(body["quotient_dim"], 0);
    assert_eq!(body["cycles"][0]["vertices"], json!([1, 2, 3]));
    assert_eq!(body["cycles"][0]["oriented"], true);
    assert_eq!(body["radical_basis_z"], json!([[1, 1, 1]]));
    assert!(body.get("infinite_certificate").is_none());
}

#[tokio::test]
async fn analyze_reports_certificates() {
    let tree = json!({"n": 3, "arrows": [[1, 2, 2], [2, 3, 1]]});
    let (_, body) = post("/api/analyze", json!({"quiver": tree})).await;
    assert_eq!(body["infinite_certificate"]["clause"], "ThreeVertexNonAdmissible");
    assert_eq!(body["double_edges"][0]["vertices"], json!([1, 2]));
}

#[tokio::test]
async fn classify_exceptional_seeds() {
    let e611 = QuiverJson::from_quiver(&catalog::seed("E6^(1,1)").unwrap());
    let (status, body) = post("/api/v1/classify", json!({"quiver": e611})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["verdict"], json!({"kind": "ExceptionalE", "name": "E6^(1,1)"}));

    let x6 = QuiverJson::from_quiver(&catalog::seed("X6").unwrap());
    let (_, body) = post("/api/classify", json!({"quiver": x6})).await;
    assert_eq!(body["verdict"]["kind"], "ExceptionalX");

    let (_, body) = post("/api/classify", json!({"quiver": triangle()})).await;
    assert_eq!(body["verdict"], json!({"kind": "Surface"}));
}

#[tokio::test]
async fn class_with_pages() {
    let a3 = json!({"n": 3, "arrows": [[1, 2, 1], [2, 3, 1]]});
    let (status, body) = post("/api/class", json!({"quiver": a3, "limit": 3, "offset": 2})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["size"], 4);
    assert_eq!(body["status"], "Complete");
    assert_eq!(body["members"].as_array().unwrap().len(), 2);

    let (_, body) = post(
        "/api/class",
        json!({"quiver": a3, "caps": {"max_size": 2}}),
    )
    .await;
    assert_eq!(body["status"], "AbortedCap");
    assert!(body.get("members").is_none());
}

#[tokio::test]
async fn catalog_lists_seeds() {
    let (status, text) = send("GET", "/api/v1/catalog", None, String::new()).await;
    assert_eq!(status, StatusCode::OK);
    let body: Value = serde_json::from_str(&text).unwrap();
    let seeds = body["seeds"].as_array().unwrap();
    assert_eq!(seeds.len(), 11);
    assert!(seeds.contains(&json!({"name": "X7", "vertices": 7, "family": "X"})));
}

#[tokio::test]
async fn schema_errors_carry_a_path() {
    let (status, body) = post(
        "/api/mutate",
        json!({"quiver": {"n": 2, "arrows": [[1, "x", 1]]}, "k": 1}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["code"], "invalid_request");
    assert_eq!(body["error"]["path"], "quiver.arrows[0][1]");

    let (status, body) = post("/api/mutate", json!({"quiver": triangle()})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"]["message"].as_str().unwrap().contains("k"));

    let (status, body) = post(
        "/api/analyze",
        json!({"quiver": {"n": 2, "arrows": [[1, 3, 1]]}}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "quiver.arrows[0][1]");

    let (status, body) = post("/api/mutate", json!({"quiver": triangle(), "k": 0})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "k");
}

#[tokio::test]
async fn domain_errors_are_unprocessable() {
    let looped = json!({"n": 2, "arrows": [[1, 1, 1]]});
    let (status, body) = post("/api/analyze", json!({"quiver": looped})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["code"], "loop_forbidden");

    let dup = json!({"n": 2, "arrows": [[1, 2, 1], [2, 1, 1]]});
    let (status, body) = post("/api/analyze", json!({"quiver": dup})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["code"], "conflicting_edge");

    let (status, body) = post("/api/mutate", json!({"quiver": triangle(), "k": 4})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["code"], "vertex_out_of_range");

    let a5 = json!({"n": 5, "arrows": [[1, 2, 1], [2, 3, 1], [3, 4, 1], [4, 5, 1]]});
    let (status, body) = post(
        "/api/classify",
        json!({"quiver": a5, "caps": {"max_size": 3}}),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["code"], "caps_exceeded");

    let (status, body) = post(
        "/api/class",
        json!({"quiver": triangle(), "caps": {"max_size": 0}}),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["code"], "invalid_caps");
}

#[tokio::test]
async fn content_type_is_strict() {
    let body = json!({"quiver": triangle()}).to_string();
    let (status, _) = send("POST", "/api/analyze", Some("text/plain"), body.clone()).await;
    assert_eq!(status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let (status, _) = send("POST", "/api/analyze", None, body.clone()).await;
    assert_eq!(status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let (status, _) = send(
        "POST",
        "/api/analyze",
        Some("application/json; charset=utf-8"),
        body,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn responses_match_the_library_and_repeat() {
    let e6 = catalog::seed("E6").unwrap();
    let req = json!({"quiver": QuiverJson::from_quiver(&e6)}).to_string();
    let (_, first) = send("POST", "/api/analyze", Some("application/json"), req.clone()).await;
    let (_, second) = send("POST", "/api/analyze", Some("application/json"), req).await;
    assert_eq!(first, second);
    assert_eq!(first, report::to_json(&report::analyze(&e6).unwrap()));
}

#[tokio::test]
async fn cors_headers_are_present() {
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/api/v1/analyze")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app().oneshot(req).await.unwrap();
    assert!(resp
        .headers()
        .contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}
