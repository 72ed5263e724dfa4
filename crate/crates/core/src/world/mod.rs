//! Grid layout, entities, episode state and the lettered option machinery.
//!
//! States are plain values: [`apply_action`] returns a new state and never
//! mutates its input.

mod action;
mod entity;
mod geometry;
mod state;

pub use action::*;
pub use entity::*;
pub use geometry::*;
pub use state::*;

pub use crate::tasks::rules::{apply_action, available_actions, generate_actions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorldError {
    #[error("episode-finished")]
    EpisodeFinished,
    #[error("rejected-action: {0}")]
    RejectedAction(String),
    #[error("no-actions")]
    NoActions,
    #[error("more than 26 actions ({0}) cannot be lettered")]
    TooManyActions(usize),
    #[error("cell ({row}, {col}) is outside the grid")]
    OutOfRange { row: u8, col: u8 },
    #[error("cell size {0}px is not one of 32, 64, 96")]
    UnsupportedResolution(u32),
}
