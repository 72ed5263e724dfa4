//! Worked examples for in-context prompting, one per task kind, generated
//! from a fixed seed: every frame of an optimal play, the options at each
//! step, the right letter and a short reason.

use std::sync::OnceLock;

use super::prompt::{FrameImage, Part};
use crate::procgen::{sample_instance, seeds, TaskInstance};
use crate::render::{RenderConfig, RenderError};
use crate::tasks::{Level, TaskKind};
use crate::world::{apply_action, available_actions, present_options, Action, EntityKind, Operand, Verb, WorldState};

/// Seed of the example instances; evaluation suites never draw it because
/// their seeds come from the derivation tree.
pub const ICL_SEED: u64 = 0x1c1_e8a3_91e5;

#[derive(Clone, Debug)]
pub struct IclStep {
    pub frame: FrameImage,
    pub options: String,
    pub letter: char,
    pub action: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct IclExample {
    pub kind: TaskKind,
    pub goal: String,
    pub steps: Vec<IclStep>,
    pub final_frame: FrameImage,
}

impl IclExample {
    /// The cached example for `kind`.
    pub fn for_kind(kind: TaskKind) -> Result<&'static IclExample, RenderError> {
        static CACHE: [OnceLock<IclExample>; 12] = [const { OnceLock::new() }; 12];
        let cell = &CACHE[kind.index()];
        if let Some(ex) = cell.get() {
            return Ok(ex);
        }
        let ex = IclExample::generate(kind)?;
        Ok(cell.get_or_init(|| ex))
    }

    pub fn generate(kind: TaskKind) -> Result<IclExample, RenderError> {
        let inst = sample_instance(kind, Level::L1, ICL_SEED)
            .expect("example instances generate for every kind");
        Self::from_instance(&inst, &RenderConfig::default())
    }

    pub fn from_instance(inst: &TaskInstance, config: &RenderConfig) -> Result<IclExample, RenderError> {
        let mut state = inst.initial.clone();
        let mut steps = Vec::new();
        for (turn, action) in inst.witness.iter().enumerate() {
            let options = present_options(&available_actions(&state), seeds::option_seed(ICL_SEED, turn as u32))
                .expect("witness states offer actions");
            let idx = options.index_of_text(&action.text).expect("witness action is offered");
            steps.push(IclStep {
                frame: FrameImage::render(&state, config)?,
                options: options.render(),
                letter: options.options[idx].letter,
                action: action.text.clone(),
                reason: reason(&state, action),
            });
            state = apply_action(&state, action).expect("witness replays");
        }
        Ok(IclExample {
            kind: inst.kind,
            goal: inst.goal_text(),
            steps,
            final_frame: FrameImage::render(&state, config)?,
        })
    }

    /// Text and frames, interleaved, as spliced into the prompt.
    pub fn parts(&self) -> Vec<Part> {
        let mut out = vec![Part::Text(format!("Example goal: {}\n", self.goal))];
        for (i, s) in self.steps.iter().enumerate() {
            out.push(Part::Text(format!("Step {}: the state is shown in this image.\n", i + 1)));
            out.push(Part::Image(s.frame.clone()));
            out.push(Part::Text(format!(
                "The actions you can choose from are: {}. The correct answer is {}) {}, because {}.\n",
                s.options, s.letter, s.action, s.reason
            )));
        }
        out.push(Part::Text("After the last step the task is completed:\n".into()));
        out.push(Part::Image(self.final_frame.clone()));
        out
    }
}

fn reason(state: &WorldState, action: &Action) -> String {
    let subject_kind = match action.subject {
        Some(Operand::Label(l)) => state.by_label(l).map(|e| &e.kind),
        Some(Operand::Slot(s)) => state.backpack.slots[s as usize].map(|id| &state.entity(id).kind),
        _ => None,
    };
    let r = match (state.kind, action.verb) {
        (_, Verb::Continue) => "the content of the hint bar has been memorized and the task can begin",
        (TaskKind::Classification, Verb::PickUp) => "an item has to be in the backpack before it can go into a basket",
        (TaskKind::Classification, Verb::PutInto) => "the goal assigns this item to this basket",
        (TaskKind::Counting, Verb::PickUp) => "together with the piles taken so far this reaches the target without going over",
        (TaskKind::Counting, Verb::DeclareDone) => "the collected amount now equals the target",
        (TaskKind::Selection, _) => "this item was shown in the hint bar of the first image",
        (TaskKind::MemoryDecode, _) => "by the correspondence shown in the first image, the boxed item maps to this one",
        (TaskKind::Sorting, _) => "by the stated rule this animal ranks at this position",
        (TaskKind::Placement, _) => "the target lies on the opposite side of the reference item from the given position",
        (TaskKind::Filling | TaskKind::Puzzle | TaskKind::MemoryFilling, _) => {
            "this piece completes the target picture at this position"
        }
        (_, Verb::Unlock) => "the key in the backpack opens this door",
        (_, Verb::Obtain) => match subject_kind {
            Some(EntityKind::Key { .. }) => "this key opens a door on the way to the diamond",
            Some(EntityKind::Chest { .. }) => "this is the chest that holds the diamond",
            _ => "the diamond can now be reached",
        },
        _ => "it moves the task toward the goal",
    };
    r.to_string()
}
