//! HTTP service that lets people play the benchmark tasks through the same
//! lettered options and frames a model sees.
//!
//! Routes:
//!
//! | method | path | body / reply |
//! |---|---|---|
//! | `GET` | `/tasks` | task codes and levels |
//! | `POST` | `/sessions` | `{participant, kind, level, seed?}` -> `{session, seed, view}` |
//! | `GET` | `/sessions/{id}/step` | current [`StepView`] |
//! | `POST` | `/sessions/{id}/choice` | `{letter, step?}` -> next [`StepView`] |
//! | `GET` | `/sessions/{id}/frame.png` | current frame, `ETag` is its sha256 |
//! | `GET` | `/sessions/{id}/frames/{k}` | frame `k` (earlier ones for memory tasks only) |
//! | `GET` | `/results/table` | human success table, `?format=csv` for CSV |
//! | `GET` | `/results/records` | finished episodes |
//!
//! Sending `step` with a choice makes resubmission safe: a repeat of an
//! answered step returns the same view and changes nothing.

mod session;
mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use kidgym_core::harness::FrameImage;
use kidgym_core::procgen::{sample_instance_with, seeds, Catalog};
use kidgym_core::render::Tileset;
use kidgym_core::{Level, TaskKind};

pub use session::{Choice, FrameRef, OptionView, Session, StepView};
pub use store::{aggregate_human_table, PlayRecord, SessionRecord, Store, StoreFile, STORE_SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlayError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("store: {0}")]
    Store(String),
    #[error("{0}")]
    Internal(String),
}

impl PlayError {
    pub fn status(&self) -> StatusCode {
        match self {
            PlayError::BadRequest(_) => StatusCode::BAD_REQUEST,
            PlayError::NotFound(_) => StatusCode::NOT_FOUND,
            PlayError::Conflict(_) => StatusCode::CONFLICT,
            PlayError::Store(_) | PlayError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for PlayError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}

impl From<JsonRejection> for PlayError {
    fn from(r: JsonRejection) -> Self {
        PlayError::BadRequest(r.body_text())
    }
}

#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    /// Seeds of sessions created without one derive from this.
    pub seed: u64,
    /// Where sessions and results persist; in memory only when unset.
    pub store: Option<PathBuf>,
    pub catalog: Option<Catalog>,
}

pub struct PlayService {
    seed: u64,
    catalog: Catalog,
    tiles: Tileset,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    /// Sessions started per cell, for seed derivation.
    started: Mutex<HashMap<(TaskKind, Level), u64>>,
    next_id: AtomicU64,
    /// Persisted view of everything. Locked after a session lock, never
    /// before one.
    ledger: Mutex<StoreFile>,
    store: Option<Store>,
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

const ID_SALT: u64 = 0x7365_7373_696f_6e73;

impl PlayService {
    /// Opens the service, replaying any stored sessions.
    pub fn open(config: ServiceConfig) -> Result<PlayService, PlayError> {
        let (catalog, tiles) = match config.catalog {
            Some(c) => {
                c.validate().map_err(|e| PlayError::BadRequest(e.to_string()))?;
                let t = Tileset::procedural(&c).map_err(|e| PlayError::BadRequest(e.to_string()))?;
                (c, t)
            }
            None => (Catalog::shipped().clone(), Tileset::shipped().clone()),
        };
        let store = config.store.map(Store::new);
        let file = match &store {
            Some(s) => s.load()?,
            None => StoreFile::new(),
        };
        let mut sessions = HashMap::new();
        let mut started = HashMap::new();
        for rec in &file.sessions {
            *started.entry((rec.kind, rec.level)).or_insert(0) += 1;
            let instance = sample_instance_with(&catalog, rec.kind, rec.level, rec.seed)
                .map_err(|e| PlayError::Store(format!("session {}: {e}", rec.id)))?;
            let mut s = Session::start(rec.id.clone(), rec.participant.clone(), instance, &tiles, rec.created_ms)?;
            for c in &rec.choices {
                s.submit(c.letter, Some(c.step), &tiles, c.at_ms)
                    .map_err(|e| PlayError::Store(format!("session {} step {}: {e}", rec.id, c.step)))?;
                if s.choices().last().map(|x| &x.action) != Some(&c.action) {
                    return Err(PlayError::Store(format!("session {} diverged at step {}", rec.id, c.step)));
                }
            }
            sessions.insert(rec.id.clone(), Arc::new(Mutex::new(s)));
        }
        Ok(PlayService {
            seed: config.seed,
            catalog,
            tiles,
            sessions: RwLock::new(sessions),
            started: Mutex::new(started),
            next_id: AtomicU64::new(file.sessions.len() as u64),
            ledger: Mutex::new(file),
            store,
        })
    }

    pub fn in_memory(seed: u64) -> PlayService {
        PlayService::open(ServiceConfig { seed, ..Default::default() }).expect("in-memory service opens")
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, PlayError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| PlayError::NotFound(format!("no session {id:?}")))
    }

    fn persist(&self, file: &StoreFile) -> Result<(), PlayError> {
        match &self.store {
            Some(s) => s.save(file),
            None => Ok(()),
        }
    }

    /// Starts a session; returns its id, instance seed and first view.
    pub fn create(
        &self,
        participant: &str,
        kind: TaskKind,
        level: Level,
        seed: Option<u64>,
    ) -> Result<(String, u64, StepView), PlayError> {
        let now = now_ms();
        let (seed, id) = {
            let mut started = self.started.lock().unwrap();
            let n = started.entry((kind, level)).or_insert(0);
            let seed = seed.unwrap_or_else(|| seeds::round_seed(self.seed, kind, level, *n));
            *n += 1;
            // derive is a bijection in its index, so ids never repeat
            let k = self.next_id.fetch_add(1, Ordering::Relaxed);
            (seed, format!("{:016x}", seeds::derive(self.seed ^ ID_SALT, k)))
        };
        let instance = sample_instance_with(&self.catalog, kind, level, seed)
            .map_err(|e| PlayError::Internal(e.to_string()))?;
        let session = Session::start(id.clone(), participant.to_string(), instance, &self.tiles, now)?;
        let view = session.view().clone();
        let mut ledger = self.ledger.lock().unwrap();
        ledger.sessions.push(SessionRecord {
            id: id.clone(),
            participant: participant.to_string(),
            kind,
            level,
            seed,
            created_ms: now,
            choices: Vec::new(),
        });
        self.persist(&ledger)?;
        self.sessions.write().unwrap().insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok((id, seed, view))
    }

    pub fn view(&self, id: &str) -> Result<StepView, PlayError> {
        Ok(self.session(id)?.lock().unwrap().view().clone())
    }

    pub fn choose(&self, id: &str, letter: char, step: Option<u32>) -> Result<StepView, PlayError> {
        let handle = self.session(id)?;
        let mut s = handle.lock().unwrap();
        let before = s.choices().len();
        let view = s.submit(letter, step, &self.tiles, now_ms())?.clone();
        if s.choices().len() == before {
            return Ok(view);
        }
        let mut ledger = self.ledger.lock().unwrap();
        let choice = s.choices().last().cloned().expect("a choice was just made");
        if let Some(rec) = ledger.session_mut(id) {
            rec.choices.push(choice);
        }
        if s.is_finished() {
            let outcome = s.outcome();
            ledger.records.push(PlayRecord {
                session: s.id.clone(),
                participant: s.participant.clone(),
                kind: s.instance.kind,
                level: s.instance.level,
                seed: s.instance.seed,
                success: outcome.is_success(),
                status: outcome,
                steps: s.step(),
                optimal_len: s.instance.optimal_len(),
                started_ms: s.created_ms,
                finished_ms: s.finished_ms.unwrap_or_default(),
            });
        }
        self.persist(&ledger)?;
        Ok(view)
    }

    /// Frame `k`, or the current one when `k` is `None`.
    pub fn frame(&self, id: &str, k: Option<usize>) -> Result<FrameImage, PlayError> {
        let handle = self.session(id)?;
        let s = handle.lock().unwrap();
        match k {
            None => Ok(s.current_frame().clone()),
            Some(k) => s.frame(k).cloned().ok_or_else(|| PlayError::NotFound(format!("no frame {k}"))),
        }
    }

    pub fn records(&self) -> Vec<PlayRecord> {
        self.ledger.lock().unwrap().records.clone()
    }
}

pub type SharedService = Arc<PlayService>;

pub fn router(service: SharedService) -> Router {
    Router::new()
        .route("/tasks", get(tasks))
        .route("/sessions", post(create))
        .route("/sessions/{id}/step", get(step))
        .route("/sessions/{id}/choice", post(choice))
        .route("/sessions/{id}/frame.png", get(current_frame))
        .route("/sessions/{id}/frames/{k}", get(history_frame))
        .route("/results/table", get(table))
        .route("/results/records", get(records))
        .with_state(service)
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(addr: SocketAddr, service: SharedService) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(listener, service, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// Serves on a bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: tokio::net::TcpListener,
    service: SharedService,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(service)).with_graceful_shutdown(shutdown).await
}

async fn tasks() -> Json<serde_json::Value> {
    let kinds: Vec<_> = TaskKind::ALL
        .iter()
        .map(|k| json!({ "code": k.code(), "name": k.to_string(), "memory": k.is_memory() }))
        .collect();
    let levels: Vec<u8> = Level::ALL.iter().map(|l| l.number()).collect();
    Json(json!({ "tasks": kinds, "levels": levels }))
}

#[derive(Deserialize)]
struct CreateRequest {
    #[serde(default)]
    participant: String,
    kind: String,
    level: Level,
    seed: Option<u64>,
}

async fn create(
    State(svc): State<SharedService>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<serde_json::Value>), PlayError> {
    let Json(req) = body?;
    let kind: TaskKind = req.kind.parse().map_err(|e: kidgym_core::tasks::TaskError| PlayError::BadRequest(e.to_string()))?;
    let participant = if req.participant.trim().is_empty() { "anonymous" } else { req.participant.trim() };
    let (id, seed, view) = svc.create(participant, kind, req.level, req.seed)?;
    Ok((StatusCode::CREATED, Json(json!({ "session": id, "seed": seed, "view": view }))))
}

async fn step(State(svc): State<SharedService>, Path(id): Path<String>) -> Result<Json<StepView>, PlayError> {
    svc.view(&id).map(Json)
}

#[derive(Deserialize)]
struct ChoiceRequest {
    letter: String,
    step: Option<u32>,
}

async fn choice(
    State(svc): State<SharedService>,
    Path(id): Path<String>,
    body: Result<Json<ChoiceRequest>, JsonRejection>,
) -> Result<Json<StepView>, PlayError> {
    let Json(req) = body?;
    let mut chars = req.letter.trim().chars();
    let (Some(letter), None) = (chars.next(), chars.next()) else {
        return Err(PlayError::BadRequest(format!("letter must be one character, got {:?}", req.letter)));
    };
    svc.choose(&id, letter, req.step).map(Json)
}

fn png_response(frame: FrameImage, headers: &HeaderMap) -> Response {
    let etag = format!("\"{}\"", frame.hash);
    let matches = headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == etag || t.trim() == "*"));
    let common = [(header::ETAG, etag.clone()), (header::CACHE_CONTROL, "no-cache".to_string())];
    if matches {
        return (StatusCode::NOT_MODIFIED, common).into_response();
    }
    (
        common,
        [(header::CONTENT_TYPE, "image/png".to_string()), (header::HeaderName::from_static("x-frame-hash"), frame.hash)],
        frame.png.as_ref().clone(),
    )
        .into_response()
}

async fn current_frame(
    State(svc): State<SharedService>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> Result<Response, PlayError> {
    Ok(png_response(svc.frame(&id, None)?, &headers))
}

async fn history_frame(
    State(svc): State<SharedService>,
    Path((id, k)): Path<(String, usize)>,
    headers: HeaderMap,
) -> Result<Response, PlayError> {
    Ok(png_response(svc.frame(&id, Some(k))?, &headers))
}

#[derive(Deserialize)]
struct TableQuery {
    format: Option<String>,
}

async fn table(State(svc): State<SharedService>, Query(q): Query<TableQuery>) -> Result<Response, PlayError> {
    let t = aggregate_human_table(&svc.records());
    match q.format.as_deref() {
        None | Some("json") => Ok(([(header::CONTENT_TYPE, "application/json")], t.to_json()).into_response()),
        Some("csv") => Ok(([(header::CONTENT_TYPE, "text/csv")], t.to_csv()).into_response()),
        Some(other) => Err(PlayError::BadRequest(format!("unknown format {other:?}"))),
    }
}

async fn records(State(svc): State<SharedService>) -> Json<Vec<PlayRecord>> {
    Json(svc.records())
}
