use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::icl::IclExample;
use crate::procgen::TaskInstance;
use crate::render::{render_frame, Frame, RenderConfig, RenderError};
use crate::tasks::TaskKind;
use crate::world::{OptionList, WorldState};

pub const RULES_PREAMBLE: &str = "You are playing as a character in a 2D game scene -- the man dressed in a brown shirt and gray pants. During the game, you need to complete a task step by step by interacting with various items within the scene.\n\nThe following are the rules that you need to understand and follow:\n- Items in the scene are identified by numerical labels, such as 0, 1, 2, 3, etc.\n- At the bottom of the scene, there are four black squares representing your backpack slots, labeled A, B, C, and D.\n- You can directly interact with items in the scene (e.g., picking up an apple) or use items from your backpack to interact with other items. (e.g., unlocking a door with a key).";

pub const ICL_INTRO: &str =
    "To help you better understand the rules, let's go through an example step by step.";

pub const SNAPSHOT_CURRENT: &str = "Each step, I will provide you with a snapshot of the current state, along with a list of actionable options that you can choose to perform at this stage. Then you should analyze the given information and select the correct action to achieve the goal.";

pub const SNAPSHOT_HISTORY: &str = "Each step, I will provide you with a snapshot of the current state as well as a collection of all the previous states of the scene, along with a list of actionable options that you can choose to perform at this stage. Then you should analyze the given information and select the correct action to achieve the goal.";

pub const ANSWER_DIRECT: &str = "Please directly give your answer within <ANSWER></ANSWER> tags.\ni.e., <ANSWER> answer here </ANSWER>\nThe answer should only contain the uppercase letter.";

pub const ANSWER_COT: &str = "You should first think about the reasoning process in your mind and then provide the answer. The reasoning process and answer are enclosed within <THINK></THINK> and <ANSWER></ANSWER> tags, respectively.\ni.e., <THINK> reasoning process here </THINK> <ANSWER> answer here </ANSWER>.\nThe answer should only contain the uppercase letter.";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reasoning {
    #[default]
    ZeroShot,
    Cot,
    Icl,
}

impl std::str::FromStr for Reasoning {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero-shot" | "zeroshot" | "zero_shot" => Ok(Reasoning::ZeroShot),
            "cot" => Ok(Reasoning::Cot),
            "icl" => Ok(Reasoning::Icl),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptMode {
    pub reasoning: Reasoning,
    /// Attach every earlier frame, not just the current one.
    pub memory_history: bool,
}

impl PromptMode {
    pub fn for_kind(kind: TaskKind, reasoning: Reasoning) -> Self {
        PromptMode { reasoning, memory_history: kind.is_memory() }
    }
}

/// A rendered frame as attached to a prompt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameImage {
    pub png: Arc<Vec<u8>>,
    /// Hex sha256 of `png`.
    pub hash: String,
}

impl FrameImage {
    pub fn from_frame(frame: &Frame) -> Result<Self, RenderError> {
        let png = frame.png()?;
        let hash = crate::render::hex_sha256(&png);
        Ok(FrameImage { png: Arc::new(png), hash })
    }

    pub fn render(state: &WorldState, config: &RenderConfig) -> Result<Self, RenderError> {
        Self::from_frame(&render_frame(state, config)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part {
    Text(String),
    Image(FrameImage),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub role: Role,
    pub parts: Vec<Part>,
}

impl Message {
    pub fn text(&self) -> String {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Text(t) => Some(t.as_str()),
                Part::Image(_) => None,
            })
            .collect()
    }

    pub fn images(&self) -> impl Iterator<Item = &FrameImage> {
        self.parts.iter().filter_map(|p| match p {
            Part::Image(i) => Some(i),
            Part::Text(_) => None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MessageSequence {
    pub messages: Vec<Message>,
    /// Number of trailing images of the last message that show episode
    /// states (the rest belong to an ICL example).
    pub state_frame_count: usize,
}

impl MessageSequence {
    /// All text of the sequence, images omitted.
    pub fn text(&self) -> String {
        self.messages.iter().map(Message::text).collect::<Vec<_>>().join("\n")
    }

    /// Attached frames excluding those inside an ICL example.
    pub fn state_frames(&self) -> Vec<&FrameImage> {
        let all: Vec<&FrameImage> = self.messages.last().map(|m| m.images().collect()).unwrap_or_default();
        all[all.len().saturating_sub(self.state_frame_count)..].to_vec()
    }
}

/// `In this task, your goal is: ...` through the actions list.
pub fn goal_and_actions(goal: &str, options: &OptionList) -> String {
    let goal = goal.trim_end().trim_end_matches('.');
    format!(
        "In this task, your goal is: {goal}. Now the game starts!\nWhat is the action you will choose?  The actions you can choose from are: {}.",
        options.render()
    )
}

/// Full text of the step prompt, with `<EXAMPLE>` standing where the ICL
/// bundle goes.
pub fn prompt_text(goal: &str, options: &OptionList, mode: PromptMode) -> String {
    let mut s = String::from(RULES_PREAMBLE);
    if mode.reasoning == Reasoning::Icl {
        s.push_str("\n\n");
        s.push_str(ICL_INTRO);
        s.push_str("\n<EXAMPLE>");
    }
    s.push_str("\n\n");
    s.push_str(if mode.memory_history { SNAPSHOT_HISTORY } else { SNAPSHOT_CURRENT });
    s.push_str("\n\n");
    s.push_str(&goal_and_actions(goal, options));
    s.push_str("\n\n");
    s.push_str(if mode.reasoning == Reasoning::Cot { ANSWER_COT } else { ANSWER_DIRECT });
    s
}

/// Renders the frames a prompt attaches: the last state only, or all of
/// them for memory tasks.
pub fn attached_frames(
    history: &[WorldState],
    mode: PromptMode,
    config: &RenderConfig,
) -> Result<Vec<FrameImage>, RenderError> {
    let states = if mode.memory_history { history } else { &history[history.len().saturating_sub(1)..] };
    states.iter().map(|s| FrameImage::render(s, config)).collect()
}

/// One user message: prompt text (with the ICL example spliced in where
/// requested) followed by the state frames.
pub fn build_prompt(
    instance: &TaskInstance,
    history: &[WorldState],
    options: &OptionList,
    mode: PromptMode,
) -> Result<MessageSequence, RenderError> {
    let frames = attached_frames(history, mode, &RenderConfig::default())?;
    let icl = match mode.reasoning {
        Reasoning::Icl => Some(IclExample::for_kind(instance.kind)?),
        _ => None,
    };
    Ok(assemble(&instance.goal_text(), options, mode, icl, frames))
}

pub fn assemble(
    goal: &str,
    options: &OptionList,
    mode: PromptMode,
    icl: Option<&IclExample>,
    frames: Vec<FrameImage>,
) -> MessageSequence {
    let text = prompt_text(goal, options, mode);
    let mut parts = Vec::new();
    match (icl, text.split_once("<EXAMPLE>")) {
        (Some(ex), Some((before, after))) => {
            parts.push(Part::Text(before.to_string()));
            parts.extend(ex.parts());
            parts.push(Part::Text(after.to_string()));
        }
        _ => parts.push(Part::Text(text)),
    }
    let state_frame_count = frames.len();
    parts.extend(frames.into_iter().map(Part::Image));
    MessageSequence { messages: vec![Message { role: Role::User, parts }], state_frame_count }
}
