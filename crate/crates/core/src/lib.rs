//! Procedural grid-world benchmark engine.
//!
//! Twelve task kinds at three difficulty levels are generated from a seed,
//! played through a lettered multiple-choice loop, rendered to PNG frames and
//! aggregated into five capability scores.
//!
//! ```
//! use kidgym_core::{procgen, tasks::{Level, TaskKind}, world};
//!
//! let inst = procgen::sample_instance(TaskKind::Classification, Level::L1, 7).unwrap();
//! let mut state = inst.initial.clone();
//! for action in &inst.witness {
//!     state = world::apply_action(&state, action).unwrap();
//! }
//! assert!(state.status.is_success());
//! ```

pub mod harness;
pub mod procgen;
pub mod render;
pub mod scoring;
pub mod tasks;
pub mod world;

pub use procgen::{Catalog, TaskInstance};
pub use tasks::{Level, TaskKind};
pub use world::{Action, OptionList, WorldState};
