//! Random-choice success: closed form, exact recursion and simulation.
//!
//! cargo run -p kidgym --release --example baseline

use kidgym::procgen::sample_instance;
use kidgym::scoring::{analytic_random_baseline, estimate_random_baseline, exact_random_success};
use kidgym::tasks::BudgetMode;
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    println!("cell     analytic  exact(seed 0)  simulated(500)");
    for kind in TaskKind::ALL {
        let level = Level::L1;
        let analytic = analytic_random_baseline(kind, level).map(|p| format!("{p:.3}")).unwrap_or("-".into());
        let exact = exact_random_success(&sample_instance(kind, level, 0)?, BudgetMode::Strict);
        let est = estimate_random_baseline(kind, level, 500);
        println!(
            "{:<4}{}   {analytic:>8}  {exact:>13.3}  {:.3} +- {:.3}",
            kind.code(),
            level,
            est.rate,
            est.half_width
        );
    }
    Ok(())
}
