use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::client::{AgentClient, ApiClient, ClientError, Oracle, ScriptedMock, UniformRandom};
use super::episode::{run_episode, EpisodeConfig, EpisodeResult};
use crate::procgen::{sample_instance, seeds, TaskInstance};
use crate::scoring::SuccessTable;
use crate::tasks::{Level, TaskKind};

/// Which agent plays each round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "client", rename_all = "snake_case")]
pub enum ClientSpec {
    Oracle,
    /// Uniform choice; each round gets its own stream derived from `seed`.
    Random { seed: u64 },
    /// Remote chat model by name.
    Api { model: String },
}

impl ClientSpec {
    pub fn parse(s: &str, seed: u64) -> Result<Self, String> {
        match s.trim() {
            "oracle" => Ok(ClientSpec::Oracle),
            "random" => Ok(ClientSpec::Random { seed }),
            other => match other.strip_prefix("api:") {
                Some(m) if !m.is_empty() => Ok(ClientSpec::Api { model: m.to_string() }),
                _ => Err(format!("unknown client {other:?}")),
            },
        }
    }

    pub fn build(&self, instance: &TaskInstance) -> Result<Box<dyn AgentClient>, ClientError> {
        Ok(match self {
            ClientSpec::Oracle => Box::new(Oracle),
            ClientSpec::Random { seed } => Box::new(UniformRandom::new(seeds::derive(*seed, instance.seed))),
            ClientSpec::Api { model } => Box::new(ApiClient::from_env(model)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub tasks: Vec<TaskKind>,
    pub levels: Vec<Level>,
    pub rounds: u32,
    pub seed: u64,
    #[serde(default)]
    pub episode: EpisodeConfig,
    /// Episodes in flight at once; 0 uses every core.
    #[serde(default)]
    pub parallelism: usize,
    /// Keep per-round transcripts in the report.
    #[serde(default)]
    pub keep_transcripts: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tasks: TaskKind::ALL.to_vec(),
            levels: Level::ALL.to_vec(),
            rounds: 100,
            seed: 0,
            episode: EpisodeConfig::default(),
            parallelism: 0,
            keep_transcripts: false,
        }
    }
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The instance of one round. Identical for every client.
    pub fn instance(&self, kind: TaskKind, level: Level, round: u32) -> Result<TaskInstance, String> {
        sample_instance(kind, level, seeds::round_seed(self.seed, kind, level, round as u64))
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundError {
    pub round: u32,
    pub error: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellReport {
    pub kind: TaskKind,
    pub level: Level,
    pub successes: u32,
    /// Rounds that ran to an outcome; errored rounds are not counted.
    pub attempts: u32,
    pub errors: Vec<RoundError>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<EpisodeResult>,
}

impl CellReport {
    pub fn rate(&self) -> Option<f64> {
        (self.attempts > 0).then(|| self.successes as f64 / self.attempts as f64)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub table: SuccessTable,
    pub cells: Vec<CellReport>,
}

/// Runs every (task, level) cell. A failing round is recorded in its cell
/// and the suite carries on.
pub fn run_suite(config: &SuiteConfig, client: &ClientSpec) -> SuiteReport {
    let cells: Vec<(TaskKind, Level)> = config
        .tasks
        .iter()
        .flat_map(|&k| config.levels.iter().map(move |&l| (k, l)))
        .collect();
    let work = || {
        cells
            .par_iter()
            .map(|&(kind, level)| run_cell(config, client, kind, level))
            .collect::<Vec<_>>()
    };
    let reports = if config.parallelism == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallelism)
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work())
    };
    let mut table = SuccessTable::new();
    for c in &reports {
        table.set_counts(c.kind, c.level, c.successes, c.attempts);
    }
    SuiteReport { table, cells: reports }
}

fn run_cell(config: &SuiteConfig, client: &ClientSpec, kind: TaskKind, level: Level) -> CellReport {
    let outcomes: Vec<(u32, Result<EpisodeResult, String>)> = (0..config.rounds)
        .into_par_iter()
        .map(|round| {
            let r = config.instance(kind, level, round).and_then(|inst| {
                let mut agent = client.build(&inst).map_err(|e| e.to_string())?;
                run_episode(&inst, agent.as_mut(), &config.episode).map_err(|e| e.to_string())
            });
            (round, r)
        })
        .collect();
    let mut report = CellReport { kind, level, successes: 0, attempts: 0, errors: Vec::new(), results: Vec::new() };
    for (round, r) in outcomes {
        match r {
            Ok(res) => {
                report.attempts += 1;
                report.successes += res.success as u32;
                if config.keep_transcripts {
                    report.results.push(res);
                }
            }
            Err(error) => report.errors.push(RoundError { round, error }),
        }
    }
    report
}

/// A scripted client that replays the responses of a stored transcript.
pub fn scripted_from(transcript: &super::Transcript) -> ScriptedMock {
    ScriptedMock::new(transcript.responses())
}
