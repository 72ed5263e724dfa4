//! Run a small suite with two clients that face the same instances.
//!
//! cargo run -p kidgym --release --example suite

use kidgym::harness::{run_suite, ClientSpec, SuiteConfig};
use kidgym::{Level, TaskKind};

fn main() {
    let config = SuiteConfig {
        tasks: vec![TaskKind::Selection, TaskKind::Sorting, TaskKind::Placement],
        levels: Level::ALL.to_vec(),
        rounds: 50,
        seed: 2024,
        ..SuiteConfig::default()
    };
    for client in [ClientSpec::Oracle, ClientSpec::Random { seed: 9 }] {
        let report = run_suite(&config, &client);
        println!("{client:?}");
        print!("{}", report.table.to_csv());
    }
}
