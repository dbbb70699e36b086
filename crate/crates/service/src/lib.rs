//! Stateless JSON API over the quivers library.
//!
//! Every request carries the full quiver. Routes live under `/api/v1` and
//! are mirrored under `/api`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use quivers::catalog::ReferenceCatalog;
use quivers::classify;
use quivers::format::QuiverJson;
use quivers::mutclass::Caps;
use quivers::report::{self, Page};
use quivers::{Error, Quiver};

/// Default cap on `/class` enumerations.
pub const DEFAULT_CLASS_MAX_SIZE: usize = 10_000;
/// Largest page of members a `/class` response may carry.
pub const MAX_PAGE: usize = 1_000;

#[derive(Clone)]
pub struct AppState {
    catalog: Arc<ReferenceCatalog>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

/// An error response with its status code.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn schema(path: String, message: String) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                code: "invalid_request",
                message,
                path: Some(path),
            },
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Json { .. } => StatusCode::BAD_REQUEST,
            Error::Cache { .. } | Error::Io(_) | Error::TheoremViolation(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let path = match &e {
            Error::Json { path, .. } => Some(format!("quiver.{path}")),
            _ => None,
        };
        ApiError {
            status,
            body: ErrorBody {
                code: e.code(),
                message: e.to_string(),
                path,
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.body });
        (self.status, json_response(body.to_string())).into_response()
    }
}

fn json_response(body: String) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], body)
}

type ApiResult = Result<Response, ApiError>;

/// Checks the content type and decodes the body, reporting the path of the
/// first offending field.
fn decode<T: DeserializeOwned>(headers: &HeaderMap, body: &Bytes) -> Result<T, ApiError> {
    let json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .is_some_and(|v| v.trim().eq_ignore_ascii_case("application/json"));
    if !json {
        return Err(ApiError {
            status: StatusCode::UNSUPPORTED_MEDIA_TYPE,
            body: ErrorBody {
                code: "unsupported_media_type",
                message: "expected content-type application/json".into(),
                path: None,
            },
        });
    }
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::schema(path, e.inner().to_string())
    })
}

/// Runs CPU-bound work off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, Error> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody {
                code: "internal",
                message: e.to_string(),
                path: None,
            },
        })?
        .map_err(ApiError::from)
}

fn ok<T: Serialize>(value: &T) -> ApiResult {
    Ok(json_response(report::to_json(value)).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateRequest {
    quiver: QuiverJson,
    /// 1-based.
    k: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverRequest {
    quiver: QuiverJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyRequest {
    quiver: QuiverJson,
    #[serde(default)]
    caps: Option<Caps>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassRequest {
    quiver: QuiverJson,
    #[serde(default)]
    caps: Option<Caps>,
    #[serde(default)]
    offset: usize,
    /// Number of members to include; none unless given.
    #[serde(default)]
    limit: Option<usize>,
}

/// Converts a 1-based vertex to 0-based.
fn vertex(k: usize, q: &Quiver) -> Result<usize, ApiError> {
    if k == 0 {
        return Err(ApiError::schema("k".into(), "vertices are numbered from 1".into()));
    }
    if k > q.n() {
        return Err(Error::VertexOutOfRange { vertex: k - 1, n: q.n() }.into());
    }
    Ok(k - 1)
}

async fn mutate(headers: HeaderMap, body: Bytes) -> ApiResult {
    let req: MutateRequest = decode(&headers, &body)?;
    let q = req.quiver.to_quiver()?;
    let k = vertex(req.k, &q)?;
    ok(&report::mutate(&q, &[k])?)
}

async fn analyze(headers: HeaderMap, body: Bytes) -> ApiResult {
    let req: QuiverRequest = decode(&headers, &body)?;
    let q = req.quiver.to_quiver()?;
    let r = blocking(move || report::analyze(&q)).await?;
    ok(&r)
}

async fn classify_handler(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let req: ClassifyRequest = decode(&headers, &body)?;
    let q = req.quiver.to_quiver()?;
    let caps = req.caps.unwrap_or_default();
    let catalog = state.catalog.clone();
    let r = blocking(move || classify::classify_quiver_with(&q, &catalog, caps)).await?;
    ok(&r)
}

async fn class(headers: HeaderMap, body: Bytes) -> ApiResult {
    let req: ClassRequest = decode(&headers, &body)?;
    let q = req.quiver.to_quiver()?;
    let caps = req
        .caps
        .unwrap_or_else(|| Caps::with_max_size(DEFAULT_CLASS_MAX_SIZE));
    let page = req.limit.map(|limit| Page {
        offset: req.offset,
        limit: limit.min(MAX_PAGE),
    });
    let r = blocking(move || report::class(&q, caps, page)).await?;
    ok(&r)
}

async fn catalog_handler(State(state): State<AppState>) -> ApiResult {
    ok(&report::catalog(&state.catalog))
}

fn routes() -> Router<AppState> {
    Router::new()
        .route("/mutate", post(mutate))
        .route("/analyze", post(analyze))
        .route("/classify", post(classify_handler))
        .route("/class", post(class))
        .route("/catalog", get(catalog_handler))
}

/// The application with permissive CORS.
pub fn router(catalog: Arc<ReferenceCatalog>) -> Router {
    Router::new()
        .nest("/api/v1", routes())
        .nest("/api", routes())
        .layer(CorsLayer::permissive())
        .with_state(AppState { catalog })
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, catalog: Arc<ReferenceCatalog>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(catalog)).await
}
