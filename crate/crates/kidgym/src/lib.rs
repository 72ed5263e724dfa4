//! Benchmark engine and play service in one crate.
//!
//! ```
//! use kidgym::{harness, procgen, TaskKind, Level};
//!
//! let inst = procgen::sample_instance(TaskKind::Sorting, Level::L2, 3).unwrap();
//! let result = harness::run_episode(&inst, &mut harness::Oracle, &Default::default()).unwrap();
//! assert!(result.success);
//! ```

pub use kidgym_core::*;
pub use kidgym_play as play;
