//! The twelve task rule sets, goal texts, level parameters and the solver.

mod goal;
mod kind;
mod params;
pub mod rules;
mod solver;

pub use goal::{goal_text, GoalSpec};
pub use kind::{Level, TaskKind};
pub use params::*;
pub use rules::{count_noun, held_count};
pub use solver::{solve, solve_bfs};

use crate::procgen::TaskInstance;
use crate::world::{Action, FailureReason, Status, WorldState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaskError {
    #[error("unknown task kind {0:?}")]
    UnknownKind(String),
    #[error("unknown level {0:?}")]
    UnknownLevel(String),
    #[error("unsolvable")]
    Unsolvable,
}

/// Episode outcome as seen by the harness: the task status plus budget.
pub type Outcome = Status;

impl Status {
    /// `completed` for success, the failure reason otherwise.
    pub fn reason(self) -> Option<&'static str> {
        match self {
            Status::Ongoing => None,
            Status::Success => Some("completed"),
            Status::Failure(r) => Some(r.as_str()),
        }
    }
}

/// How many steps an episode may take relative to the optimal plan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    /// Exactly the optimal plan length.
    #[default]
    Strict,
    /// Twice the optimal plan length.
    Relaxed,
}

impl BudgetMode {
    pub fn budget(self, optimal: usize) -> u32 {
        match self {
            BudgetMode::Strict => optimal as u32,
            BudgetMode::Relaxed => 2 * optimal as u32,
        }
    }
}

/// Outcome of `state` under the strict budget of `instance`.
pub fn step_outcome(instance: &TaskInstance, state: &WorldState) -> Outcome {
    step_outcome_with(instance, state, BudgetMode::Strict)
}

pub fn step_outcome_with(instance: &TaskInstance, state: &WorldState, mode: BudgetMode) -> Outcome {
    match state.status {
        Status::Ongoing if state.step_index >= mode.budget(instance.witness.len()) => {
            Status::Failure(FailureReason::StepBudgetExhausted)
        }
        s => s,
    }
}

/// A shortest successful plan for the instance's initial state.
pub fn optimal_plan(instance: &TaskInstance) -> Result<Vec<Action>, TaskError> {
    solve(&instance.initial).ok_or(TaskError::Unsolvable)
}
