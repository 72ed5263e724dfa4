//! Drive the play service in-process: one participant solves a task, another
//! fails it, and the human table is printed.
//!
//! cargo run -p kidgym --example play
//! (`kidgym serve --port 8080` exposes the same service over HTTP.)

use kidgym::play::{aggregate_human_table, PlayService};
use kidgym::procgen::sample_instance;
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    let svc = PlayService::in_memory(1);
    let inst = sample_instance(TaskKind::Classification, Level::L1, 10)?;
    for (who, follow_plan) in [("ada", true), ("bob", false)] {
        let (id, _, mut view) = svc.create(who, TaskKind::Classification, Level::L1, Some(10))?;
        println!("{who}: {}", view.goal);
        while !view.finished {
            let want = &inst.witness[view.step as usize].text;
            let pick = view
                .options
                .iter()
                .find(|o| (o.text == *want) == follow_plan)
                .unwrap_or(&view.options[0]);
            println!("  {}) {}", pick.letter, pick.text);
            view = svc.choose(&id, pick.letter, Some(view.step))?;
        }
        println!("  -> {:?}", view.outcome);
    }
    print!("{}", aggregate_human_table(&svc.records()).to_csv());
    Ok(())
}
