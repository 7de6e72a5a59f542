//! HTTP session service driving the browser client.
//!
//! Each session owns an uploaded hypergraph, its current parameters and the
//! cached pipeline state. Parameter changes recompute the barcode; threshold
//! and expansion changes only redo the cut. Requests on one session are
//! serialized by its lock; sessions are independent of each other.

use std::collections::{BTreeSet, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::error::Error;
use crate::graph::{SingletonMode, WeightScheme};
use crate::hypergraph::{Hypergraph, Side};
use crate::io::{self, BarcodeView, Format, PartitionView, ResultDocument, ViewGeometry};
use crate::layout::{self, LayoutConfig};
use crate::metrics::{self, MetricsComparison};
use crate::simplify::{self, Prepared, SimplificationParams, SimplificationResult};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub idle_timeout: Duration,
    pub snapshot_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            idle_timeout: Duration::from_secs(3600),
            snapshot_dir: None,
            static_dir: None,
        }
    }
}

struct Session {
    prepared: Prepared,
    result: SimplificationResult,
    layouts: HashMap<(View, u64), ViewGeometry>,
    last_used: Instant,
}

impl Session {
    fn new(h: &Hypergraph, params: &SimplificationParams) -> Result<Session, Error> {
        let prepared = simplify::prepare(h, params)?;
        let result = prepared.at(params.epsilon, &params.expanded_bars)?;
        Ok(Session {
            prepared,
            result,
            layouts: HashMap::new(),
            last_used: Instant::now(),
        })
    }

    fn recut(&mut self, epsilon: f64, expanded: &BTreeSet<usize>) -> Result<(), Error> {
        self.result = self.prepared.at(epsilon, expanded)?;
        self.layouts.retain(|(view, _), _| *view == View::Original);
        Ok(())
    }
}

pub struct AppState {
    config: ServiceConfig,
    next_id: AtomicU64,
    sessions: Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        AppState {
            config,
            next_id: AtomicU64::new(1),
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    /// Drops sessions idle for longer than the configured timeout.
    pub fn expire_idle(&self) {
        let timeout = self.config.idle_timeout;
        self.sessions.lock().unwrap().retain(|_, s| match s.try_lock() {
            Ok(s) => s.last_used.elapsed() <= timeout,
            Err(_) => true,
        });
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.expire_idle();
        id.parse::<u64>()
            .ok()
            .and_then(|id| self.sessions.lock().unwrap().get(&id).cloned())
            .ok_or_else(|| ApiError::not_found(format!("unknown session {id}")))
    }

    fn snapshot(&self, id: &str, session: &Session) {
        let Some(dir) = &self.config.snapshot_dir else {
            return;
        };
        let written = io::serialize_result(&ResultDocument::new(session.result.clone()))
            .map_err(|e| e.to_string())
            .and_then(|bytes| {
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(dir.join(format!("session-{id}.json")), bytes))
                    .map_err(|e| e.to_string())
            });
        if let Err(e) = written {
            log::warn!("snapshot of session {id} failed: {e}");
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn not_found(message: String) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": message }),
        }
    }

    fn bad_request(message: String) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": message }),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parameter(_) | Error::Validation(_) | Error::Parse { .. } | Error::Json(_) => {
                StatusCode::BAD_REQUEST
            }
            Error::UnknownId { .. } => StatusCode::NOT_FOUND,
            Error::BarNotActive(_) | Error::BarNotExpanded(_) => StatusCode::CONFLICT,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut body = json!({ "error": e.to_string() });
        if let Error::Validation(v) = &e {
            body["violations"] = serde_json::to_value(v).unwrap_or_default();
        }
        ApiError { status, body }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Graph-building parameters; the threshold and expanded bars have their
/// own routes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphParams {
    #[serde(default = "default_side")]
    pub side: Side,
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default)]
    pub weight: WeightScheme,
    #[serde(default)]
    pub collapse_vertices: bool,
    #[serde(default)]
    pub collapse_edges: bool,
    #[serde(default)]
    pub singletons: SingletonMode,
}

fn default_side() -> Side {
    Side::Hyperedge
}

fn default_s() -> usize {
    1
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CreatedSession {
    pub session_id: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ParamsResponse {
    #[serde(flatten)]
    pub barcode: BarcodeView,
    /// True when expanded bars from the previous barcode were dropped.
    pub cleared: bool,
}

#[derive(Debug, Deserialize)]
struct ThresholdBody {
    epsilon: f64,
}

#[derive(Debug, Deserialize)]
struct ExpandBody {
    bar_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
enum View {
    Original,
    Simplified,
}

#[derive(Debug, Deserialize)]
struct LayoutQuery {
    view: Option<View>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct SeedQuery {
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassLabels {
    pub simplified_id: usize,
    pub members: Vec<usize>,
    pub labels: Vec<String>,
}

pub fn router(state: Arc<AppState>) -> Router {
    let mut app = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/params", put(set_params))
        .route("/sessions/{id}/threshold", put(set_threshold))
        .route("/sessions/{id}/expand", post(expand))
        .route("/sessions/{id}/expand/{bar_id}", delete(unexpand))
        .route("/sessions/{id}/layout", get(layout_view))
        .route("/sessions/{id}/metrics", get(metrics_view))
        .route("/sessions/{id}/class/{simplified_id}", get(class_view))
        .with_state(state.clone());
    if let Some(dir) = &state.config.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    app
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let state = Arc::new(AppState::new(config));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<(StatusCode, Json<CreatedSession>), ApiError> {
    state.expire_idle();
    let is_csv = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("csv"));
    let format = if is_csv { Format::Csv } else { Format::Json };
    let h = io::parse_hypergraph(&body, format)?;
    let session = Session::new(&h, &SimplificationParams::default())?;
    let id = state.next_id.fetch_add(1, Ordering::Relaxed);
    state.snapshot(&id.to_string(), &session);
    state
        .sessions
        .lock()
        .unwrap()
        .insert(id, Arc::new(Mutex::new(session)));
    Ok((
        StatusCode::CREATED,
        Json(CreatedSession {
            session_id: id.to_string(),
        }),
    ))
}

/// Runs `f` under the session lock and refreshes its idle clock.
fn with_session<T>(
    state: &AppState,
    id: &str,
    mutates: bool,
    f: impl FnOnce(&mut Session) -> Result<T, ApiError>,
) -> Result<T, ApiError> {
    let session = state.session(id)?;
    let mut guard = session.lock().unwrap();
    guard.last_used = Instant::now();
    let out = f(&mut guard)?;
    if mutates {
        state.snapshot(id, &guard);
    }
    Ok(out)
}

async fn set_params(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<ParamsResponse> {
    state.session(&id)?;
    let p: GraphParams = parse_body(&body)?;
    with_session(&state, &id, true, |s| {
        let epsilon = s.result.params.epsilon;
        let cleared = !s.result.params.expanded_bars.is_empty();
        let params = SimplificationParams {
            side: p.side,
            s: p.s,
            weight: p.weight,
            epsilon,
            collapse_vertices: p.collapse_vertices,
            collapse_edges: p.collapse_edges,
            singletons: p.singletons,
            expanded_bars: BTreeSet::new(),
        };
        let original = s.prepared.original.clone();
        *s = Session::new(&original, &params)?;
        Ok(Json(ParamsResponse {
            barcode: BarcodeView::from(&s.result),
            cleared,
        }))
    })
}

async fn set_threshold(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<PartitionView> {
    state.session(&id)?;
    let t: ThresholdBody = parse_body(&body)?;
    with_session(&state, &id, true, |s| {
        let expanded = s.result.params.expanded_bars.clone();
        s.recut(t.epsilon, &expanded)?;
        Ok(Json(PartitionView::from(&s.result)))
    })
}

async fn expand(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<PartitionView> {
    state.session(&id)?;
    let b: ExpandBody = parse_body(&body)?;
    with_session(&state, &id, true, |s| {
        s.result = simplify::expand_bar(&s.result, b.bar_id)?;
        s.layouts.retain(|(view, _), _| *view == View::Original);
        Ok(Json(PartitionView::from(&s.result)))
    })
}

async fn unexpand(
    State(state): State<Arc<AppState>>,
    Path((id, bar_id)): Path<(String, String)>,
) -> ApiResult<PartitionView> {
    state.session(&id)?;
    let bar_id: usize = bar_id
        .parse()
        .map_err(|_| ApiError::not_found(format!("unknown bar {bar_id}")))?;
    with_session(&state, &id, true, |s| {
        s.result = simplify::collapse_bar(&s.result, bar_id)?;
        s.layouts.retain(|(view, _), _| *view == View::Original);
        Ok(Json(PartitionView::from(&s.result)))
    })
}

async fn layout_view(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<LayoutQuery>,
) -> ApiResult<ViewGeometry> {
    let view = q.view.unwrap_or(View::Simplified);
    let seed = q.seed.unwrap_or(layout::DEFAULT_SEED);
    with_session(&state, &id, false, |s| {
        let h = match view {
            View::Original => &s.result.original,
            View::Simplified => &s.result.simplified_hypergraph,
        };
        let geometry = match s.layouts.get(&(view, seed)) {
            Some(g) => g.clone(),
            None => {
                let g = view_geometry(h, seed);
                s.layouts.insert((view, seed), g.clone());
                g
            }
        };
        Ok(Json(geometry))
    })
}

/// Layout and hulls of `h` with default iterations and margin.
pub fn view_geometry(h: &Hypergraph, seed: u64) -> ViewGeometry {
    let config = LayoutConfig::default();
    let layout = layout::bipartite_layout(h, seed, config.iterations);
    let hulls = layout::venn_hulls(h, &layout, config.margin);
    ViewGeometry { layout, hulls }
}

async fn metrics_view(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<SeedQuery>,
) -> ApiResult<MetricsComparison> {
    with_session(&state, &id, false, |s| {
        let config = LayoutConfig {
            seed: q.seed.unwrap_or(layout::DEFAULT_SEED),
            ..LayoutConfig::default()
        };
        Ok(Json(metrics::before_after(
            &s.result.original,
            &s.result.simplified_hypergraph,
            &config,
        )))
    })
}

async fn class_view(
    State(state): State<Arc<AppState>>,
    Path((id, simplified_id)): Path<(String, String)>,
) -> ApiResult<ClassLabels> {
    state.session(&id)?;
    let simplified_id: usize = simplified_id
        .parse()
        .map_err(|_| ApiError::not_found(format!("unknown class {simplified_id}")))?;
    with_session(&state, &id, false, |s| {
        let r = &s.result;
        Ok(Json(ClassLabels {
            simplified_id,
            members: r.class_members(simplified_id)?.to_vec(),
            labels: r.class_labels(simplified_id)?.into_iter().map(String::from).collect(),
        }))
    })
}
