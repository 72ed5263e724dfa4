use serde::{Deserialize, Serialize};

use kidgym_core::harness::FrameImage;
use kidgym_core::procgen::{seeds, TaskInstance};
use kidgym_core::render::{render_frame_with, RenderConfig, Tileset};
use kidgym_core::tasks::step_outcome;
use kidgym_core::world::{
    apply_action, generate_actions, letter_index, present_options, OptionList, Status, WorldState,
};

use crate::PlayError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionView {
    pub letter: char,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRef {
    pub index: usize,
    pub url: String,
    pub hash: String,
}

/// What a participant sees at one step. Carries no budget, plan length or
/// solver output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepView {
    pub session: String,
    pub step: u32,
    pub goal: String,
    pub options: Vec<OptionView>,
    /// The current frame last; memory tasks also list every earlier frame.
    pub frames: Vec<FrameRef>,
    pub outcome: Status,
    pub finished: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub step: u32,
    pub letter: char,
    pub action: String,
    pub at_ms: u64,
}

/// One live episode. Every frame shown so far is kept so history requests
/// and resubmissions are answered without re-rendering.
pub struct Session {
    pub id: String,
    pub participant: String,
    pub instance: TaskInstance,
    pub created_ms: u64,
    pub finished_ms: Option<u64>,
    state: WorldState,
    options: OptionList,
    frames: Vec<FrameImage>,
    choices: Vec<Choice>,
    views: Vec<StepView>,
}

impl Session {
    pub fn start(
        id: String,
        participant: String,
        instance: TaskInstance,
        tiles: &Tileset,
        now_ms: u64,
    ) -> Result<Session, PlayError> {
        let state = instance.initial.clone();
        let mut s = Session {
            id,
            participant,
            instance,
            created_ms: now_ms,
            finished_ms: None,
            options: OptionList { options: Vec::new(), permutation_seed: 0 },
            state,
            frames: Vec::new(),
            choices: Vec::new(),
            views: Vec::new(),
        };
        s.advance(tiles, now_ms)?;
        Ok(s)
    }

    pub fn step(&self) -> u32 {
        self.choices.len() as u32
    }

    pub fn outcome(&self) -> Status {
        step_outcome(&self.instance, &self.state)
    }

    pub fn is_finished(&self) -> bool {
        self.outcome() != Status::Ongoing
    }

    pub fn view(&self) -> &StepView {
        self.views.last().expect("a session always has a view")
    }

    pub fn choices(&self) -> &[Choice] {
        &self.choices
    }

    pub fn options(&self) -> &OptionList {
        &self.options
    }

    pub fn state(&self) -> &WorldState {
        &self.state
    }

    /// Frame `k` if the participant may see it: the current one always,
    /// earlier ones only for memory tasks.
    pub fn frame(&self, k: usize) -> Option<&FrameImage> {
        let current = self.frames.len().checked_sub(1)?;
        if k == current || (k < current && self.instance.kind.is_memory()) {
            self.frames.get(k)
        } else {
            None
        }
    }

    pub fn current_frame(&self) -> &FrameImage {
        self.frames.last().expect("a session always has a frame")
    }

    /// Applies the option under `letter`. With `step` given, an answered
    /// step returns the view that answer produced, unchanged.
    pub fn submit(
        &mut self,
        letter: char,
        step: Option<u32>,
        tiles: &Tileset,
        now_ms: u64,
    ) -> Result<&StepView, PlayError> {
        let letter = letter.to_ascii_uppercase();
        let current = self.step();
        if let Some(s) = step {
            if s < current {
                let earlier = &self.choices[s as usize];
                if earlier.letter != letter {
                    return Err(PlayError::Conflict(format!("step {s} was answered with {}", earlier.letter)));
                }
                return Ok(&self.views[s as usize + 1]);
            }
            if s > current {
                return Err(PlayError::Conflict(format!("step {s} is ahead of step {current}")));
            }
        }
        if self.is_finished() {
            return Err(PlayError::Conflict("the episode has ended".into()));
        }
        let Some(action) = letter_index(letter).and_then(|i| self.options.action(i)).cloned() else {
            return Err(PlayError::BadRequest(format!(
                "no option {letter:?}; choose one of {}",
                self.options.options.iter().map(|o| o.letter).collect::<String>()
            )));
        };
        let next = apply_action(&self.state, &action).map_err(|e| PlayError::Internal(e.to_string()))?;
        self.state = next;
        self.choices.push(Choice { step: current, letter, action: action.text, at_ms: now_ms });
        self.advance(tiles, now_ms)?;
        Ok(self.view())
    }

    /// Renders the new frame and options, and records the view.
    fn advance(&mut self, tiles: &Tileset, now_ms: u64) -> Result<(), PlayError> {
        let render = |e: kidgym_core::render::RenderError| PlayError::Internal(e.to_string());
        let frame = render_frame_with(&self.state, &RenderConfig::default(), tiles).map_err(render)?;
        self.frames.push(FrameImage::from_frame(&frame).map_err(render)?);
        let finished = self.is_finished();
        self.options = if finished {
            OptionList { options: Vec::new(), permutation_seed: 0 }
        } else {
            let actions = generate_actions(&self.state).map_err(|e| PlayError::Internal(e.to_string()))?;
            present_options(&actions, seeds::option_seed(self.instance.seed, self.step()))
                .map_err(|e| PlayError::Internal(e.to_string()))?
        };
        if finished && self.finished_ms.is_none() {
            self.finished_ms = Some(now_ms);
        }
        let shown = if self.instance.kind.is_memory() { 0 } else { self.frames.len() - 1 };
        let frames = (shown..self.frames.len())
            .map(|k| FrameRef {
                index: k,
                url: format!("/sessions/{}/frames/{k}", self.id),
                hash: self.frames[k].hash.clone(),
            })
            .collect();
        self.views.push(StepView {
            session: self.id.clone(),
            step: self.step(),
            goal: self.instance.goal_text(),
            options: self
                .options
                .options
                .iter()
                .map(|o| OptionView { letter: o.letter, text: o.action.text.clone() })
                .collect(),
            frames,
            outcome: self.outcome(),
            finished,
        });
        Ok(())
    }
}
