use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use kidgym_core::scoring::SuccessTable;
use kidgym_core::world::Status;
use kidgym_core::{Level, TaskKind};

use crate::session::Choice;
use crate::PlayError;

pub const STORE_SCHEMA_VERSION: u32 = 1;

/// A session as persisted: enough to regenerate the instance and replay
/// the choices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub participant: String,
    pub kind: TaskKind,
    pub level: Level,
    pub seed: u64,
    pub created_ms: u64,
    pub choices: Vec<Choice>,
}

/// A finished episode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayRecord {
    pub session: String,
    pub participant: String,
    pub kind: TaskKind,
    pub level: Level,
    pub seed: u64,
    pub success: bool,
    pub status: Status,
    pub steps: u32,
    pub optimal_len: usize,
    pub started_ms: u64,
    pub finished_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreFile {
    pub schema_version: u32,
    pub sessions: Vec<SessionRecord>,
    pub records: Vec<PlayRecord>,
}

impl StoreFile {
    pub fn new() -> Self {
        StoreFile { schema_version: STORE_SCHEMA_VERSION, ..Default::default() }
    }

    pub fn session_mut(&mut self, id: &str) -> Option<&mut SessionRecord> {
        self.sessions.iter_mut().find(|s| s.id == id)
    }
}

/// JSON file written whole on every change, through a temporary file and a
/// rename so a crash leaves either the old or the new contents.
#[derive(Clone, Debug)]
pub struct Store {
    path: PathBuf,
}

impl Store {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Store { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> Result<StoreFile, PlayError> {
        let text = match std::fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(StoreFile::new()),
            Err(e) => return Err(PlayError::Store(e.to_string())),
        };
        let file: StoreFile = serde_json::from_str(&text).map_err(|e| PlayError::Store(e.to_string()))?;
        if file.schema_version != STORE_SCHEMA_VERSION {
            return Err(PlayError::Store(format!("unsupported store schema {}", file.schema_version)));
        }
        Ok(file)
    }

    pub fn save(&self, file: &StoreFile) -> Result<(), PlayError> {
        let err = |e: std::io::Error| PlayError::Store(e.to_string());
        let tmp = self.path.with_extension("tmp");
        let mut f = std::fs::File::create(&tmp).map_err(err)?;
        f.write_all(&serde_json::to_vec_pretty(file).expect("store serializes")).map_err(err)?;
        f.sync_all().map_err(err)?;
        std::fs::rename(&tmp, &self.path).map_err(err)
    }
}

/// Per-cell success rates over finished episodes, counts kept.
pub fn aggregate_human_table(records: &[PlayRecord]) -> SuccessTable {
    let mut counts = std::collections::BTreeMap::<(TaskKind, Level), (u32, u32)>::new();
    for r in records {
        let c = counts.entry((r.kind, r.level)).or_default();
        c.0 += r.success as u32;
        c.1 += 1;
    }
    let mut table = SuccessTable::labelled("human");
    for ((kind, level), (ok, n)) in counts {
        table.set_counts(kind, level, ok, n);
    }
    table
}
