use std::time::Duration;

use base64::Engine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::prompt::{MessageSequence, Part, Role};
use crate::procgen::TaskInstance;
use crate::tasks::solve;
use crate::world::{OptionList, WorldState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("client configuration: {0}")]
    Config(String),
    #[error("script exhausted after {0} responses")]
    ScriptExhausted(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClientCapabilities {
    pub accepts_images: bool,
    /// Earlier exchanges kept as conversation history; 0 for none.
    pub max_history: usize,
}

/// Everything an agent may look at for one step.
pub struct Turn<'a> {
    pub instance: &'a TaskInstance,
    pub state: &'a WorldState,
    pub options: &'a OptionList,
    /// `None` when the client does not take prompts.
    pub prompt: Option<&'a MessageSequence>,
    pub step: u32,
}

pub trait AgentClient: Send {
    fn name(&self) -> String;

    fn capabilities(&self) -> ClientCapabilities;

    /// Whether the episode loop should build and render prompts.
    fn wants_prompt(&self) -> bool {
        self.capabilities().accepts_images
    }

    fn respond(&mut self, turn: &Turn<'_>) -> Result<String, ClientError>;
}

fn answer(letter: char) -> String {
    format!("<ANSWER> {letter} </ANSWER>")
}

/// Plays an optimal plan. Follows the stored witness while it applies and
/// re-plans from the current state otherwise.
#[derive(Debug, Default)]
pub struct Oracle;

impl AgentClient for Oracle {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn capabilities(&self) -> ClientCapabilities {
        ClientCapabilities { accepts_images: false, max_history: 0 }
    }

    fn respond(&mut self, turn: &Turn<'_>) -> Result<String, ClientError> {
        let planned = turn
            .instance
            .witness
            .get(turn.state.step_index as usize)
            .and_then(|a| turn.options.index_of_text(&a.text));
        let idx = planned
            .or_else(|| {
                let plan = solve(turn.state)?;
                turn.options.index_of_text(&plan.first()?.text)
            })
            .unwrap_or(0);
        Ok(answer(turn.options.options[idx].letter))
    }
}

/// Picks a letter uniformly at random among the offered options.
#[derive(Debug)]
pub struct UniformRandom {
    rng: ChaCha8Rng,
}

impl UniformRandom {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl AgentClient for UniformRandom {
    fn name(&self) -> String {
        "random".into()
    }

    fn capabilities(&self) -> ClientCapabilities {
        ClientCapabilities { accepts_images: false, max_history: 0 }
    }

    fn respond(&mut self, turn: &Turn<'_>) -> Result<String, ClientError> {
        let i = self.rng.gen_range(0..turn.options.len());
        Ok(answer(turn.options.options[i].letter))
    }
}

/// Returns canned responses in order; for tests and transcript replay.
#[derive(Debug, Clone)]
pub struct ScriptedMock {
    responses: Vec<String>,
    next: usize,
    wants_prompt: bool,
}

impl ScriptedMock {
    pub fn new<S: Into<String>>(responses: impl IntoIterator<Item = S>) -> Self {
        Self { responses: responses.into_iter().map(Into::into).collect(), next: 0, wants_prompt: false }
    }

    /// Also ask the loop to build prompts, so transcripts carry frame hashes.
    pub fn with_prompts(mut self) -> Self {
        self.wants_prompt = true;
        self
    }
}

impl AgentClient for ScriptedMock {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn capabilities(&self) -> ClientCapabilities {
        ClientCapabilities { accepts_images: self.wants_prompt, max_history: 0 }
    }

    fn respond(&mut self, _turn: &Turn<'_>) -> Result<String, ClientError> {
        let r = self.responses.get(self.next).cloned().ok_or(ClientError::ScriptExhausted(self.next))?;
        self.next += 1;
        Ok(r)
    }
}

/// An OpenAI-style chat completions endpoint. `KIDGYM_API_BASE` and
/// `KIDGYM_API_KEY` come from the environment.
pub struct ApiClient {
    pub model: String,
    base: String,
    key: String,
    agent: ureq::Agent,
    history: Vec<Value>,
    max_history: usize,
}

impl ApiClient {
    pub fn from_env(model: &str) -> Result<Self, ClientError> {
        let base = std::env::var("KIDGYM_API_BASE").map_err(|_| ClientError::Config("KIDGYM_API_BASE is not set".into()))?;
        let key = std::env::var("KIDGYM_API_KEY").map_err(|_| ClientError::Config("KIDGYM_API_KEY is not set".into()))?;
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        Ok(Self { model: model.to_string(), base, key, agent, history: Vec::new(), max_history: 16 })
    }

    /// Chat message JSON for a prompt; images go inline as data URLs.
    pub fn message_json(prompt: &MessageSequence) -> Vec<Value> {
        let b64 = base64::engine::general_purpose::STANDARD;
        prompt
            .messages
            .iter()
            .map(|m| {
                let content: Vec<Value> = m
                    .parts
                    .iter()
                    .map(|p| match p {
                        Part::Text(t) => json!({"type": "text", "text": t}),
                        Part::Image(img) => json!({
                            "type": "image_url",
                            "image_url": {"url": format!("data:image/png;base64,{}", b64.encode(img.png.as_slice()))}
                        }),
                    })
                    .collect();
                let role = match m.role {
                    Role::User => "user",
                    Role::Assistant => "assistant",
                };
                json!({"role": role, "content": content})
            })
            .collect()
    }
}

impl AgentClient for ApiClient {
    fn name(&self) -> String {
        format!("api:{}", self.model)
    }

    fn capabilities(&self) -> ClientCapabilities {
        ClientCapabilities { accepts_images: true, max_history: self.max_history }
    }

    fn respond(&mut self, turn: &Turn<'_>) -> Result<String, ClientError> {
        let prompt = turn.prompt.ok_or_else(|| ClientError::Config("api client needs a prompt".into()))?;
        let current = Self::message_json(prompt);
        let mut messages = self.history.clone();
        messages.extend(current.iter().cloned());
        let body = json!({"model": self.model, "temperature": 0, "messages": messages});
        let url = format!("{}/chat/completions", self.base.trim_end_matches('/'));
        let reply: Value = self
            .agent
            .post(&url)
            .header("Authorization", &format!("Bearer {}", self.key))
            .send_json(&body)
            .map_err(|e| ClientError::Transport(e.to_string()))?
            .body_mut()
            .read_json()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        let text = reply["choices"][0]["message"]["content"]
            .as_str()
            .ok_or_else(|| ClientError::Transport(format!("no content in reply: {reply}")))?
            .to_string();
        self.history.extend(current);
        self.history.push(json!({"role": "assistant", "content": text}));
        let keep = 2 * self.max_history;
        if self.history.len() > keep {
            self.history.drain(..self.history.len() - keep);
        }
        Ok(text)
    }
}
