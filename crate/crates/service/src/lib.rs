//! HTTP/JSON API over a knowledge-base snapshot.
//!
//! Every handler reads the snapshot that is current when the request
//! arrives; a reload builds a new snapshot off to the side and swaps it in,
//! so in-flight requests finish on the old one. Failures are always
//! rendered as `{"error":{"code":..,"message":..}}`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use swat_core::ingest::{cross_validate_history, parse_corpus};
use swat_core::model::build_snapshot;
use swat_core::wire::{self, to_json, RecommendRequest, ScoreRequest};
use swat_core::{Error, GraphSnapshot};

/// Shared service state: the active snapshot behind a swap point.
pub struct AppState {
    snapshot: RwLock<Arc<GraphSnapshot>>,
}

impl AppState {
    pub fn new(snapshot: GraphSnapshot) -> Arc<Self> {
        Arc::new(Self {
            snapshot: RwLock::new(Arc::new(snapshot)),
        })
    }

    pub fn current(&self) -> Arc<GraphSnapshot> {
        self.snapshot.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn replace(&self, snapshot: GraphSnapshot) {
        *self.snapshot.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(snapshot);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    UnknownArea,
    UnknownIndividual,
    BadRequest,
    CandidateExplosion,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a ApiError,
}

impl ApiError {
    pub fn bad_request(message: impl Into<String>) -> Self {
        Self {
            code: ErrorCode::BadRequest,
            message: message.into(),
        }
    }

    fn status(&self) -> StatusCode {
        match self.code {
            ErrorCode::UnknownArea | ErrorCode::UnknownIndividual => StatusCode::NOT_FOUND,
            ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
            ErrorCode::CandidateExplosion => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnknownArea(_) => ErrorCode::UnknownArea,
            Error::UnknownIndividual(_) => ErrorCode::UnknownIndividual,
            Error::CandidateExplosion { .. } => ErrorCode::CandidateExplosion,
            Error::InvalidArgument(_)
            | Error::InvalidParams(_)
            | Error::EmptyAssignment
            | Error::InsufficientAreas { .. } => ErrorCode::BadRequest,
            Error::Integrity { .. } | Error::Io { .. } | Error::Format { .. } => ErrorCode::Internal,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status(), to_json(&ErrorBody { error: &self }))
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn ok<T: Serialize>(value: &T) -> Response {
    json_response(StatusCode::OK, to_json(value))
}

type ApiResult = Result<Response, ApiError>;
type Params = Result<Query<HashMap<String, String>>, QueryRejection>;

fn params(p: Params) -> Result<HashMap<String, String>, ApiError> {
    p.map(|Query(m)| m).map_err(|e| ApiError::bad_request(e.body_text()))
}

fn number<T: std::str::FromStr>(p: &HashMap<String, String>, name: &str) -> Result<Option<T>, ApiError> {
    p.get(name)
        .map(|v| {
            v.parse()
                .map_err(|_| ApiError::bad_request(format!("`{name}` must be a non-negative integer")))
        })
        .transpose()
}

fn flag(p: &HashMap<String, String>, name: &str) -> Result<bool, ApiError> {
    match p.get(name).map(String::as_str) {
        None | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") | Some("") => Ok(true),
        Some(other) => Err(ApiError::bad_request(format!(
            "`{name}` must be true or false, got `{other}`"
        ))),
    }
}

fn body<T: serde::de::DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

/// Runs CPU-bound work off the async workers.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        code: ErrorCode::Internal,
        message: e.to_string(),
    })?
}

async fn suggest(State(st): State<Arc<AppState>>, p: Params) -> ApiResult {
    let p = params(p)?;
    let q = p
        .get("q")
        .ok_or_else(|| ApiError::bad_request("missing query parameter `q`"))?;
    let limit = number(&p, "limit")?;
    Ok(ok(&wire::suggest(&st.current(), q, limit)))
}

async fn related(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    Ok(ok(&wire::related(&st.current(), &id)?))
}

async fn experts(State(st): State<Arc<AppState>>, p: Params) -> ApiResult {
    let p = params(p)?;
    let area = p
        .get("area")
        .ok_or_else(|| ApiError::bad_request("missing query parameter `area`"))?;
    Ok(ok(&wire::experts(
        &st.current(),
        area,
        number(&p, "k")?,
        flag(&p, "expand")?,
    )?))
}

async fn stats(State(st): State<Arc<AppState>>) -> ApiResult {
    let snapshot = st.current();
    blocking(move || Ok(ok(&wire::stats(&snapshot)))).await
}

async fn ego(State(st): State<Arc<AppState>>, Path(id): Path<String>, p: Params) -> ApiResult {
    let p = params(p)?;
    Ok(ok(&wire::ego(&st.current(), &id, number(&p, "radius")?)?))
}

async fn recommend(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult {
    let req: RecommendRequest = body(&bytes)?;
    let snapshot = st.current();
    blocking(move || Ok(ok(&wire::recommend(&snapshot, &req)?))).await
}

async fn score(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult {
    let req: ScoreRequest = body(&bytes)?;
    let snapshot = st.current();
    blocking(move || Ok(ok(&wire::score(&snapshot, &req)?))).await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReloadRequest {
    corpus_dir: PathBuf,
}

#[derive(Serialize)]
struct ReloadResponse {
    individuals: usize,
    areas: usize,
    history_teams: usize,
    anomalies: usize,
    build_timestamp: u64,
}

async fn reload(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult {
    let req: ReloadRequest = body(&bytes)?;
    blocking(move || {
        // A bad corpus is the caller's problem, not a server fault.
        let built = parse_corpus(&req.corpus_dir).and_then(|(records, mut report)| {
            let (records, derived) = cross_validate_history(records);
            report.extend(derived);
            build_snapshot(&records).map(|s| (s, report))
        });
        let (snapshot, report) = built.map_err(|e| match e {
            Error::Integrity { .. } | Error::Io { .. } | Error::Format { .. } => ApiError::bad_request(e.to_string()),
            other => other.into(),
        })?;
        let body = ReloadResponse {
            individuals: snapshot.individuals().len(),
            areas: snapshot.areas().len(),
            history_teams: snapshot.history().len(),
            anomalies: report.len(),
            build_timestamp: snapshot.build_timestamp(),
        };
        st.replace(snapshot);
        Ok(ok(&body))
    })
    .await
}

async fn no_route() -> ApiError {
    ApiError {
        code: ErrorCode::BadRequest,
        message: "no such endpoint".into(),
    }
}

async fn wrong_method() -> ApiError {
    ApiError::bad_request("method not allowed for this endpoint")
}

fn not_found_status(e: ApiError) -> Response {
    let mut r = e.into_response();
    *r.status_mut() = StatusCode::NOT_FOUND;
    r
}

/// The `/api` routes alone.
pub fn api(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/concepts/suggest", get(suggest))
        .route("/concepts/{id}/related", get(related))
        .route("/experts", get(experts))
        .route("/stats", get(stats))
        .route("/individuals/{id}/ego", get(ego))
        .route("/teams/recommend", post(recommend))
        .route("/teams/score", post(score))
        .route("/admin/reload", post(reload))
        .fallback(|| async { not_found_status(no_route().await) })
        .method_not_allowed_fallback(|| async {
            let mut r = wrong_method().await.into_response();
            *r.status_mut() = StatusCode::METHOD_NOT_ALLOWED;
            r
        })
        .with_state(state)
}

/// The API under `/api` with CORS, plus static files from `ui_dir` at `/`.
pub fn app(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let cors = CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any);
    let router = Router::new().nest("/api", api(state));
    let router = match ui_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    };
    router.layer(cors)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: Arc<AppState>, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app(state, ui_dir)).await
}
