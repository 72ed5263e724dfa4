//! Print the prompt a model receives at the first step of a task.
//!
//! cargo run -p kidgym --example prompt -- SO cot

use kidgym::harness::{build_prompt, PromptMode, Reasoning};
use kidgym::procgen::{sample_instance, seeds};
use kidgym::world::{generate_actions, present_options};
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: TaskKind = args.next().unwrap_or_else(|| "SO".into()).parse()?;
    let reasoning: Reasoning = args.next().unwrap_or_else(|| "zero-shot".into()).parse().map_err(anyhow::Error::msg)?;
    let inst = sample_instance(kind, Level::L1, 1)?;
    let options = present_options(&generate_actions(&inst.initial)?, seeds::option_seed(inst.seed, 0))?;
    let prompt = build_prompt(&inst, &[inst.initial.clone()], &options, PromptMode::for_kind(kind, reasoning))?;
    println!("{}", prompt.text());
    let frames = prompt.state_frames();
    println!("\n[{} state frame(s), first {}]", frames.len(), &frames[0].hash[..12]);
    Ok(())
}
