//! Play one episode with the oracle and one with random choice, then replay
//! the stored transcript.
//!
//! cargo run -p kidgym --example episode

use kidgym::harness::{run_episode, EpisodeConfig, Oracle, Transcript, UniformRandom};
use kidgym::procgen::sample_instance;
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    let inst = sample_instance(TaskKind::Counting, Level::L2, 5)?;
    let config = EpisodeConfig::default();
    println!("goal: {}", inst.goal_text());

    let best = run_episode(&inst, &mut Oracle, &config)?;
    println!("oracle: success={} in {} steps", best.success, best.steps_used);

    let random = run_episode(&inst, &mut UniformRandom::new(1), &config)?;
    println!("random: {:?} after {} steps", random.status, random.steps_used);

    let text = random.transcript.to_jsonl();
    print!("{text}");
    let again = Transcript::from_jsonl(&text)?.replay(&inst)?;
    assert_eq!(again.summary(), random.summary());
    println!("replay matches");
    Ok(())
}
