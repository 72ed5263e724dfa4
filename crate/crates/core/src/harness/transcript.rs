//! JSON-lines transcripts: a header line, one line per step, a result line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::client::ScriptedMock;
use super::decode::DecodeRoute;
use super::episode::{run_episode, EpisodeConfig, EpisodeError, EpisodeResult, InvalidPolicy};
use crate::procgen::TaskInstance;
use crate::render::hex_sha256;
use crate::tasks::{Level, TaskKind};
use crate::world::{apply_action, Action, FailureReason, Status};

pub const TRANSCRIPT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub schema_version: u32,
    pub kind: TaskKind,
    pub level: Level,
    pub seed: u64,
    /// sha256 of the instance JSON.
    pub instance_digest: String,
    pub client: String,
    pub config: EpisodeConfig,
    pub budget: u32,
}

impl TranscriptHeader {
    pub fn new(instance: &TaskInstance, client: &str, config: &EpisodeConfig) -> Self {
        Self {
            schema_version: TRANSCRIPT_SCHEMA_VERSION,
            kind: instance.kind,
            level: instance.level,
            seed: instance.seed,
            instance_digest: hex_sha256(instance.to_json().as_bytes()),
            client: client.to_string(),
            config: config.clone(),
            budget: instance.budget(config.budget),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u32,
    pub permutation_seed: u64,
    /// Hashes of the state frames attached to the prompt, if one was built.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame_hashes: Vec<String>,
    /// Option texts in lettered order.
    pub options: Vec<String>,
    pub response: String,
    pub decoded: Option<char>,
    pub route: Option<DecodeRoute>,
    pub action: Option<Action>,
    /// Task status after the step.
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub steps: Vec<StepRecord>,
    pub status: Status,
    pub steps_used: u32,
    pub elapsed_ms: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Line {
    Header(TranscriptHeader),
    Step(StepRecord),
    Result { status: Status, steps_used: u32, elapsed_ms: u64 },
}

#[derive(Debug, thiserror::Error)]
pub enum TranscriptError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("transcript is for {0}, not this instance")]
    WrongInstance(String),
    #[error(transparent)]
    Episode(#[from] EpisodeError),
}

impl Transcript {
    pub fn write_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        let mut put = |l: &Line| -> std::io::Result<()> {
            serde_json::to_writer(&mut w, l)?;
            w.write_all(b"\n")
        };
        put(&Line::Header(self.header.clone()))?;
        for s in &self.steps {
            put(&Line::Step(s.clone()))?;
        }
        put(&Line::Result { status: self.status, steps_used: self.steps_used, elapsed_ms: self.elapsed_ms })
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Transcript, TranscriptError> {
        let mut header = None;
        let mut steps = Vec::new();
        let mut result = None;
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fmt = |msg: String| TranscriptError::Format { line: n + 1, msg };
            match serde_json::from_str::<Line>(&line).map_err(|e| fmt(e.to_string()))? {
                Line::Header(h) => {
                    if h.schema_version != TRANSCRIPT_SCHEMA_VERSION {
                        return Err(fmt(format!("schema version {}", h.schema_version)));
                    }
                    header = Some(h)
                }
                Line::Step(s) => steps.push(s),
                Line::Result { status, steps_used, elapsed_ms } => result = Some((status, steps_used, elapsed_ms)),
            }
        }
        let header = header.ok_or(TranscriptError::Format { line: 0, msg: "no header".into() })?;
        let (status, steps_used, elapsed_ms) =
            result.ok_or(TranscriptError::Format { line: 0, msg: "no result line".into() })?;
        Ok(Transcript { header, steps, status, steps_used, elapsed_ms })
    }

    pub fn from_jsonl(text: &str) -> Result<Transcript, TranscriptError> {
        Self::read_jsonl(text.as_bytes())
    }

    pub fn responses(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.response.clone()).collect()
    }

    fn check_instance(&self, instance: &TaskInstance) -> Result<(), TranscriptError> {
        if hex_sha256(instance.to_json().as_bytes()) != self.header.instance_digest {
            return Err(TranscriptError::WrongInstance(format!(
                "{} {} seed {}",
                self.header.kind, self.header.level, self.header.seed
            )));
        }
        Ok(())
    }

    /// Reruns the episode with the recorded responses as a scripted client.
    pub fn replay(&self, instance: &TaskInstance) -> Result<EpisodeResult, TranscriptError> {
        self.check_instance(instance)?;
        let mut mock = ScriptedMock::new(self.responses());
        if self.steps.iter().any(|s| !s.frame_hashes.is_empty()) {
            mock = mock.with_prompts();
        }
        Ok(run_episode(instance, &mut mock, &self.header.config)?)
    }

    /// Applies the recorded actions directly through the transition rules
    /// and returns the final status under the recorded budget.
    pub fn replay_actions(&self, instance: &TaskInstance) -> Result<Status, TranscriptError> {
        self.check_instance(instance)?;
        let mut state = instance.initial.clone();
        let mut used = 0;
        for s in &self.steps {
            used += 1;
            match &s.action {
                Some(a) => {
                    state = apply_action(&state, a).map_err(|e| TranscriptError::Format { line: s.step as usize, msg: e.to_string() })?
                }
                None if self.header.config.invalid == InvalidPolicy::Fail => {
                    return Ok(Status::Failure(FailureReason::InvalidResponse))
                }
                None => {}
            }
        }
        Ok(match state.status {
            Status::Ongoing if used >= instance.budget(self.header.config.budget) => {
                Status::Failure(FailureReason::StepBudgetExhausted)
            }
            s => s,
        })
    }
}
