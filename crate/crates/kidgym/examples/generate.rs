//! Sample an instance, print its goal and optimal plan, and save it.
//!
//! cargo run -p kidgym --example generate -- MA 3 42

use kidgym::procgen::sample_instance;
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: TaskKind = args.next().unwrap_or_else(|| "CL".into()).parse()?;
    let level: Level = args.next().unwrap_or_else(|| "1".into()).parse()?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);

    let inst = sample_instance(kind, level, seed)?;
    println!("{kind} {level} seed {seed}");
    println!("goal: {}", inst.goal_text());
    for (i, a) in inst.witness.iter().enumerate() {
        println!("  {}. {}", i + 1, a.text);
    }
    let path = std::env::temp_dir().join(format!("{}-{level}-{seed}.json", kind.code()));
    std::fs::write(&path, inst.to_json())?;
    println!("saved {}", path.display());
    Ok(())
}
