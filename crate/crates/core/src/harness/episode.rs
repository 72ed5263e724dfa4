use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::client::{AgentClient, ClientError, Turn};
use super::decode::decode_with_route;
use super::icl::IclExample;
use super::prompt::{assemble, attached_frames, PromptMode, Reasoning};
use super::transcript::{StepRecord, Transcript, TranscriptHeader};
use crate::procgen::{seeds, TaskInstance};
use crate::render::{RenderConfig, RenderError};
use crate::tasks::BudgetMode;
use crate::world::{apply_action, generate_actions, present_options, FailureReason, Status, WorldError};

/// What to do with a response that names no option.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidPolicy {
    /// Fail the episode at once.
    #[default]
    Fail,
    /// Spend a step and ask again.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpisodeConfig {
    pub reasoning: Reasoning,
    pub budget: BudgetMode,
    pub invalid: InvalidPolicy,
    /// Attempts per step before a transport error ends the episode.
    pub attempts: u32,
    pub render: RenderConfig,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig {
            reasoning: Reasoning::ZeroShot,
            budget: BudgetMode::Strict,
            invalid: InvalidPolicy::Fail,
            attempts: 3,
            render: RenderConfig::default(),
        }
    }
}

/// Infrastructure failures, kept apart from task outcomes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EpisodeError {
    #[error("client failed after {attempts} attempts: {last}")]
    Transport { attempts: u32, last: ClientError },
    #[error(transparent)]
    Client(ClientError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub success: bool,
    pub status: Status,
    /// `None` on success.
    pub failure: Option<FailureReason>,
    pub steps_used: u32,
    pub optimal_len: usize,
    pub transcript: Transcript,
}

impl EpisodeResult {
    /// Outcome fields only, for comparing runs.
    pub fn summary(&self) -> (bool, Status, u32, usize) {
        (self.success, self.status, self.steps_used, self.optimal_len)
    }
}

/// Plays one episode: list actions, shuffle them into options, prompt the
/// client, decode, apply; until the task ends or the budget runs out.
pub fn run_episode(
    instance: &TaskInstance,
    client: &mut dyn AgentClient,
    config: &EpisodeConfig,
) -> Result<EpisodeResult, EpisodeError> {
    let started = Instant::now();
    let mode = PromptMode::for_kind(instance.kind, config.reasoning);
    let budget = instance.budget(config.budget);
    let icl = match (client.wants_prompt(), config.reasoning) {
        (true, Reasoning::Icl) => Some(IclExample::for_kind(instance.kind)?),
        _ => None,
    };
    let mut state = instance.initial.clone();
    let mut history = vec![state.clone()];
    let mut steps = Vec::new();
    let mut used = 0u32;
    let status = loop {
        if state.is_terminal() {
            break state.status;
        }
        if used >= budget {
            break Status::Failure(FailureReason::StepBudgetExhausted);
        }
        let actions = generate_actions(&state)?;
        let options = present_options(&actions, seeds::option_seed(instance.seed, used))?;
        let prompt = if client.wants_prompt() {
            let frames = attached_frames(&history, mode, &config.render)?;
            Some(assemble(&instance.goal_text(), &options, mode, icl, frames))
        } else {
            None
        };
        let turn = Turn { instance, state: &state, options: &options, prompt: prompt.as_ref(), step: used };
        let response = ask(client, &turn, config.attempts)?;
        let decoded = decode_with_route(&response, &options);
        used += 1;
        let frame_hashes = prompt
            .as_ref()
            .map(|p| p.state_frames().into_iter().map(|f| f.hash.clone()).collect())
            .unwrap_or_default();
        let mut record = StepRecord {
            step: used - 1,
            permutation_seed: options.permutation_seed,
            frame_hashes,
            options: options.texts(),
            response,
            decoded: decoded.map(|(i, _)| options.options[i].letter),
            route: decoded.map(|(_, r)| r),
            action: None,
            status: state.status,
        };
        match decoded {
            Some((i, _)) => {
                let action = options.options[i].action.clone();
                state = apply_action(&state, &action)?;
                history.push(state.clone());
                record.action = Some(action);
                record.status = state.status;
                steps.push(record);
            }
            None => {
                steps.push(record);
                if config.invalid == InvalidPolicy::Fail {
                    break Status::Failure(FailureReason::InvalidResponse);
                }
            }
        }
    };
    let header = TranscriptHeader::new(instance, &client.name(), config);
    let transcript = Transcript { header, steps, status, steps_used: used, elapsed_ms: started.elapsed().as_millis() as u64 };
    Ok(EpisodeResult {
        success: status.is_success(),
        status,
        failure: match status {
            Status::Failure(r) => Some(r),
            _ => None,
        },
        steps_used: used,
        optimal_len: instance.optimal_len(),
        transcript,
    })
}

fn ask(client: &mut dyn AgentClient, turn: &Turn<'_>, attempts: u32) -> Result<String, EpisodeError> {
    let attempts = attempts.max(1);
    let mut last = None;
    for _ in 0..attempts {
        match client.respond(turn) {
            Ok(r) => return Ok(r),
            Err(e @ ClientError::Transport(_)) => last = Some(e),
            Err(e) => return Err(EpisodeError::Client(e)),
        }
    }
    Err(EpisodeError::Transport { attempts, last: last.unwrap() })
}
