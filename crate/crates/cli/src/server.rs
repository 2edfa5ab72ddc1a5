//! JSON API over the same report functions as the command line.
//!
//! Documents are uploaded once with `POST /linkage` and then named by the returned
//! `id`, the SHA-256 of their canonical form. The cache is the only state.

use std::collections::HashMap;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::{Query, State};
use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::document::{load_text, Loaded};
use crate::failure::Failure;
use crate::report::{self, Algo, CheckReport, Endpoint, Selector};

#[derive(Clone, Default)]
pub struct AppState {
    cache: Arc<RwLock<HashMap<String, Arc<Loaded>>>>,
    assets: Option<PathBuf>,
}

impl AppState {
    /// `assets`, when given, is served for paths no endpoint claims.
    pub fn new(assets: Option<PathBuf>) -> AppState {
        AppState { cache: Arc::default(), assets }
    }

    fn get(&self, id: &str) -> Result<Arc<Loaded>, ApiError> {
        self.cache.read().expect("cache lock").get(id).cloned().ok_or_else(|| ApiError::UnknownDocument(id.to_string()))
    }
}

pub enum ApiError {
    Failure(Failure),
    UnknownDocument(String),
    Internal(String),
}

impl From<Failure> for ApiError {
    fn from(f: Failure) -> ApiError {
        ApiError::Failure(f)
    }
}

impl From<caylink::Error> for ApiError {
    fn from(e: caylink::Error) -> ApiError {
        ApiError::Failure(e.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, name, message) = match self {
            ApiError::Failure(f) => {
                let status = if f.is_input_error() { StatusCode::BAD_REQUEST } else { StatusCode::UNPROCESSABLE_ENTITY };
                (status, f.name().to_string(), f.to_string())
            }
            ApiError::UnknownDocument(id) => {
                (StatusCode::NOT_FOUND, "UnknownDocument".into(), format!("no document with id {id:?}; POST it to /linkage first"))
            }
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, "Internal".into(), m),
        };
        (status, Json(json!({ "error": name, "message": message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Params = Query<HashMap<String, String>>;

fn param<'a>(q: &'a HashMap<String, String>, key: &str) -> Result<&'a str, ApiError> {
    q.get(key).map(String::as_str).ok_or_else(|| Failure::Parse(format!("missing query parameter {key:?}")).into())
}

fn number<T: std::str::FromStr>(q: &HashMap<String, String>, key: &str) -> Result<Option<T>, ApiError> {
    match q.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| Failure::Parse(format!("bad value {v:?} for {key:?}")).into()),
    }
}

fn flag(q: &HashMap<String, String>, key: &str) -> bool {
    q.get(key).is_some_and(|v| v.is_empty() || v == "true" || v == "1")
}

/// Runs `f` off the async workers; the computations are CPU bound.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

#[derive(Serialize, Deserialize)]
pub struct Uploaded {
    pub id: String,
    pub check: CheckReport,
}

async fn post_linkage(State(st): State<AppState>, body: String) -> ApiResult<Uploaded> {
    let loaded = blocking(move || Ok(load_text(&body)?)).await?;
    let id = loaded.hash.clone();
    let loaded = Arc::new(loaded);
    let check = {
        let l = loaded.clone();
        blocking(move || Ok(report::check(&l))).await?
    };
    st.cache.write().expect("cache lock").entry(id.clone()).or_insert(loaded);
    Ok(Json(Uploaded { id, check }))
}

async fn get_space(State(st): State<AppState>, Query(q): Params) -> ApiResult<report::SpaceReport> {
    let loaded = st.get(param(&q, "id")?)?;
    let algo: Algo = q.get("algo").map(String::as_str).unwrap_or("elr").parse()?;
    let sel = Selector::parse(q.get("type").map(String::as_str).unwrap_or("all"))?;
    let double = flag(&q, "double");
    blocking(move || Ok(report::space(&loaded, algo, &sel, double)?)).await.map(Json)
}

async fn get_realize(State(st): State<AppState>, Query(q): Params) -> ApiResult<report::RealizeReport> {
    let loaded = st.get(param(&q, "id")?)?;
    let lf: f64 = number(&q, "lf")?.ok_or_else(|| ApiError::from(Failure::Parse("missing query parameter \"lf\"".into())))?;
    let sigma = param(&q, "sigma")?.to_string();
    blocking(move || Ok(report::realize_at(&loaded, lf, &sigma)?)).await.map(Json)
}

#[derive(Serialize, Deserialize)]
pub struct MotionRequest {
    pub id: String,
    pub from: Endpoint,
    pub to: Endpoint,
    #[serde(default)]
    pub animate: Option<usize>,
}

async fn post_motion(State(st): State<AppState>, body: String) -> ApiResult<report::MotionDoc> {
    let req: MotionRequest = serde_json::from_str(&body).map_err(|e| Failure::Parse(e.to_string()))?;
    let loaded = st.get(&req.id)?;
    blocking(move || Ok(report::motion(&loaded, &req.from, &req.to, req.animate)?)).await.map(Json)
}

async fn get_curve(State(st): State<AppState>, Query(q): Params) -> ApiResult<report::CurveReport> {
    let loaded = st.get(param(&q, "id")?)?;
    let resolution = number(&q, "resolution")?.unwrap_or(100usize);
    let probe = flag(&q, "probe");
    blocking(move || Ok(report::curve(&loaded, resolution, probe)?)).await.map(Json)
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

async fn assets(State(st): State<AppState>, uri: Uri) -> Response {
    let index = || {
        Json(json!({
            "endpoints": ["POST /linkage", "GET /space", "GET /realize", "POST /motion", "GET /curve"],
        }))
        .into_response()
    };
    let Some(root) = st.assets.clone() else {
        return if uri.path() == "/" { index() } else { StatusCode::NOT_FOUND.into_response() };
    };
    let rel = uri.path().trim_start_matches('/');
    let rel = if rel.is_empty() { "index.html" } else { rel };
    let rel = Path::new(rel);
    if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
        return StatusCode::NOT_FOUND.into_response();
    }
    let path = root.join(rel);
    match tokio::fs::read(&path).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, content_type(&path))], bytes).into_response(),
        Err(_) if uri.path() == "/" => index(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/linkage", post(post_linkage))
        .route("/space", get(get_space))
        .route("/realize", get(get_realize))
        .route("/motion", post(post_motion))
        .route("/curve", get(get_curve))
        .fallback(assets)
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(port: u16, assets: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(assets))).await
}
