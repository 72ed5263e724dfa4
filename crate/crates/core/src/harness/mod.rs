//! The evaluation loop: prompts, agent clients, answer decoding, episodes,
//! suites and transcripts.

mod client;
mod decode;
mod episode;
mod icl;
mod prompt;
mod suite;
mod transcript;

pub use client::*;
pub use decode::*;
pub use episode::*;
pub use icl::*;
pub use prompt::*;
pub use suite::*;
pub use transcript::*;
