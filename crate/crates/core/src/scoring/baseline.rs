use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ScoringError;
use crate::harness::{run_episode, EpisodeConfig, UniformRandom};
use crate::procgen::{sample_instance, seeds, TaskInstance};
use crate::tasks::{level_params, BudgetMode, Level, LevelParams, TaskKind};
use crate::world::{available_actions, StateKey, WorldState};
use crate::tasks::rules::apply_unchecked;

/// Success probability of uniform choice, for kinds where each step has a
/// fixed number of options and a fixed number of them are right.
///
/// Selection picks `t` targets among `m` one at a time; each filling step
/// offers every remaining piece at every open position, and exactly one
/// piece fits each position; placement is one pick among the positions.
pub fn analytic_random_baseline(kind: TaskKind, level: Level) -> Result<f64, ScoringError> {
    let p = match (kind, level_params(kind, level)) {
        (TaskKind::Selection, LevelParams::Selection { targets, candidates }) => (0..targets)
            .map(|i| (targets - i) as f64 / (candidates - i) as f64)
            .product(),
        (
            TaskKind::Filling | TaskKind::Puzzle | TaskKind::MemoryFilling,
            LevelParams::Filling { missing, pieces },
        ) => (0..missing).map(|j| 1.0 / (pieces - j) as f64).product(),
        (TaskKind::Sorting, LevelParams::Sorting { animals }) => {
            (1..=animals).map(|j| 1.0 / j as f64).product()
        }
        (TaskKind::Placement, LevelParams::Placement { positions, .. }) => 1.0 / positions as f64,
        (TaskKind::MemoryDecode, LevelParams::MemoryDecode { candidates, .. }) => {
            1.0 / candidates as f64
        }
        _ => return Err(ScoringError::Unsupported(kind, level)),
    };
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub kind: TaskKind,
    pub level: Level,
    pub rounds: u32,
    pub successes: u32,
    pub rate: f64,
    pub std_error: f64,
    /// 95% normal-approximation half-width.
    pub half_width: f64,
}

impl MonteCarloEstimate {
    fn from_counts(kind: TaskKind, level: Level, successes: u32, rounds: u32) -> Self {
        let n = rounds.max(1) as f64;
        let rate = successes as f64 / n;
        let std_error = (rate * (1.0 - rate) / n).sqrt();
        Self { kind, level, rounds, successes, rate, std_error, half_width: 1.96 * std_error }
    }
}

/// Seed of the suite used for baseline estimates unless one is given.
pub const BASELINE_SEED: u64 = 0x6b69_6467_796d_0001;

/// Runs `rounds` episodes with the uniform-random client.
pub fn estimate_random_baseline(kind: TaskKind, level: Level, rounds: u32) -> MonteCarloEstimate {
    estimate_random_baseline_with(kind, level, rounds, BASELINE_SEED, BudgetMode::Strict)
}

pub fn estimate_random_baseline_with(
    kind: TaskKind,
    level: Level,
    rounds: u32,
    seed: u64,
    budget: BudgetMode,
) -> MonteCarloEstimate {
    let config = EpisodeConfig { budget, ..EpisodeConfig::default() };
    let successes: u32 = (0..rounds)
        .into_par_iter()
        .map(|r| {
            let s = seeds::round_seed(seed, kind, level, r as u64);
            let Ok(inst) = sample_instance(kind, level, s) else { return 0 };
            let mut client = UniformRandom::new(seeds::derive(s, 0x5241_4e44));
            match run_episode(&inst, &mut client, &config) {
                Ok(res) if res.success => 1,
                _ => 0,
            }
        })
        .sum();
    MonteCarloEstimate::from_counts(kind, level, successes, rounds)
}

/// Exact probability that uniform choice among the offered actions succeeds
/// on this instance within the budget. Recursion over the action graph,
/// memoised on (state, steps left).
pub fn exact_random_success(instance: &TaskInstance, budget: BudgetMode) -> f64 {
    fn go(state: &WorldState, left: u32, memo: &mut HashMap<(StateKey, u32), f64>) -> f64 {
        if state.status.is_success() {
            return 1.0;
        }
        if state.is_terminal() || left == 0 {
            return 0.0;
        }
        let key = (state.canonical_key(), left);
        if let Some(&p) = memo.get(&key) {
            return p;
        }
        let actions = available_actions(state);
        let p = if actions.is_empty() {
            0.0
        } else {
            actions
                .iter()
                .map(|a| go(&apply_unchecked(state, a), left - 1, memo))
                .sum::<f64>()
                / actions.len() as f64
        };
        memo.insert(key, p);
        p
    }
    go(&instance.initial, instance.budget(budget), &mut HashMap::new())
}
