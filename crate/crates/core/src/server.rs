//! Loopback JSON-over-HTTP service for exploration sessions.
//!
//! | method | path | body |
//! |---|---|---|
//! | POST | `/api/sessions` | `{"file": "<.iq text>"}` |
//! | GET | `/api/sessions/{id}` | |
//! | POST | `/api/sessions/{id}/mutate` | `{"orbit": v}` or `{"vertex": v}` |
//! | POST | `/api/sessions/{id}/undo` | |
//! | GET | `/api/sessions/{id}/fold` | |
//! | GET | `/api/sessions/{id}/variables` | |

use std::collections::HashMap;
use std::net::{Ipv4Addr, SocketAddr};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::format::parse_quiver_file;
use crate::session::{Move, Session};

pub const PORT_VAR: &str = "ICEFOLD_PORT";
pub const DEFAULT_PORT: u16 = 7878;

type Shared = Arc<Mutex<Session>>;

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<String, Shared>>>,
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": kind, "message": message.into() }),
        }
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session `{id}`"))
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "MalformedBody", message)
    }

    /// Domain errors from a move: the failing rule and its witness.
    fn conflict(e: &Error) -> Self {
        let witness = match e.root() {
            Error::FrozenOrbit(v) => json!({ "orbit": v }),
            Error::NotAdmissible(w) => json!({ "admissibility": w }),
            Error::OrderDependent(v) => json!({ "orbit": v }),
            Error::FrozenDirection(v) | Error::UnknownVertex(v) => json!({ "vertex": v }),
            other => json!(other.to_string()),
        };
        ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": e.kind(), "message": e.to_string(), "witness": witness }),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

impl AppState {
    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions
            .lock()
            .expect("session map")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }
}

fn view(id: &str, s: &Session) -> Value {
    json!({ "id": id, "state": s.state() })
}

#[derive(Deserialize)]
struct CreateBody {
    file: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateBody {
    orbit: Option<u32>,
    vertex: Option<u32>,
}

async fn create(State(app): State<AppState>, body: String) -> Result<(StatusCode, Json<Value>), ApiError> {
    let body: CreateBody = serde_json::from_str(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let file =
        parse_quiver_file(&body.file).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.kind(), e.to_string()))?;
    let session = Session::new(file).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.kind(), e.to_string()))?;
    let id = format!("{:016x}", rand::thread_rng().gen::<u64>());
    let out = view(&id, &session);
    app.sessions
        .lock()
        .expect("session map")
        .insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(out)))
}

async fn state(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = app.get(&id)?;
    let s = s.lock().expect("session");
    Ok(Json(view(&id, &s)))
}

async fn mutate(State(app): State<AppState>, Path(id): Path<String>, body: String) -> ApiResult {
    let s = app.get(&id)?;
    let body: MutateBody = serde_json::from_str(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let m = match (body.orbit, body.vertex) {
        (Some(v), None) => Move::Orbit(v),
        (None, Some(v)) => Move::Vertex(v),
        _ => return Err(ApiError::bad_request("give exactly one of `orbit` and `vertex`")),
    };
    let mut s = s.lock().expect("session");
    s.apply(m).map_err(|e| ApiError::conflict(&e))?;
    Ok(Json(view(&id, &s)))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = app.get(&id)?;
    let mut s = s.lock().expect("session");
    s.undo().map_err(|e| ApiError::conflict(&e))?;
    Ok(Json(view(&id, &s)))
}

async fn fold(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = app.get(&id)?;
    let s = s.lock().expect("session");
    let f = s.fold().map_err(|e| ApiError::conflict(&e))?;
    Ok(Json(json!({
        "id": id,
        "folded": f,
        "column_symmetrizer": f.right_symmetrizer(),
        "state": s.state(),
    })))
}

async fn variables(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = app.get(&id)?;
    let s = s.lock().expect("session");
    Ok(Json(
        json!({ "id": id, "variables": s.variables(), "state": s.state() }),
    ))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}", get(state))
        .route("/api/sessions/{id}/mutate", post(mutate))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/fold", get(fold))
        .route("/api/sessions/{id}/variables", get(variables))
        .with_state(app)
}

/// Port from `ICEFOLD_PORT`, else the default.
pub fn default_port() -> u16 {
    std::env::var(PORT_VAR)
        .ok()
        .and_then(|p| p.parse().ok())
        .unwrap_or(DEFAULT_PORT)
}

/// Serves on `127.0.0.1:port` until the process ends.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::default())).await
}
