//! Seeded instance generation, solvability checks and state-space counting.

mod catalog;
mod gen;
pub mod seeds;
mod space;

pub use catalog::*;
pub use gen::known_value;
pub use space::{state_space_size, StateSpaceConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::tasks::{expected_plan_len, solve, BudgetMode, GoalSpec, Level, TaskKind};
use crate::world::{Action, WorldState};

pub const INSTANCE_SCHEMA_VERSION: u32 = 1;
pub const MAX_REJECTIONS: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProcgenError {
    #[error("generation-exhausted: {kind} {level} seed {seed} ({last})")]
    GenerationExhausted { kind: TaskKind, level: Level, seed: u64, last: String },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("unsupported")]
    Unsupported,
}

/// An immutable episode definition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub schema_version: u32,
    pub kind: TaskKind,
    pub level: Level,
    pub seed: u64,
    pub theme: String,
    pub goal: GoalSpec,
    pub initial: WorldState,
    /// A shortest successful plan.
    pub witness: Vec<Action>,
}

impl TaskInstance {
    pub fn optimal_len(&self) -> usize {
        self.witness.len()
    }

    pub fn budget(&self, mode: BudgetMode) -> u32 {
        mode.budget(self.witness.len())
    }

    pub fn goal_text(&self) -> String {
        self.goal.text()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Samples with the shipped catalog.
pub fn sample_instance(kind: TaskKind, level: Level, seed: u64) -> Result<TaskInstance, ProcgenError> {
    sample_instance_with(Catalog::shipped(), kind, level, seed)
}

/// Draws layouts from `seed` until one is solvable with the plan length the
/// level calls for. Attempt `i` uses its own stream derived from the seed.
pub fn sample_instance_with(
    catalog: &Catalog,
    kind: TaskKind,
    level: Level,
    seed: u64,
) -> Result<TaskInstance, ProcgenError> {
    let mut last = String::new();
    for attempt in 0..MAX_REJECTIONS {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, attempt as u64));
        let sampled = match gen::sample(kind, level, catalog, &mut rng) {
            Ok(s) => s,
            Err(gen::Reject(why)) => {
                last = why.to_string();
                continue;
            }
        };
        if let Err(e) = sampled.state.check_invariants() {
            last = e;
            continue;
        }
        let Some(witness) = solve(&sampled.state) else {
            last = "unsolvable layout".into();
            continue;
        };
        if expected_plan_len(kind, level).is_some_and(|n| n != witness.len()) {
            last = format!("plan length {}", witness.len());
            continue;
        }
        return Ok(TaskInstance {
            schema_version: INSTANCE_SCHEMA_VERSION,
            kind,
            level,
            seed,
            theme: sampled.theme,
            goal: sampled.goal,
            initial: sampled.state,
            witness,
        });
    }
    Err(ProcgenError::GenerationExhausted { kind, level, seed, last })
}

/// A shortest successful plan from the instance's initial state, if any.
pub fn check_solvable(instance: &TaskInstance) -> Option<Vec<Action>> {
    solve(&instance.initial)
}

/// Fewest piles summing to `target` (at most four), as used by counting.
pub fn min_pile_subset(counts: &[u8], target: u8) -> Option<usize> {
    gen::min_subset(counts, target)
}
