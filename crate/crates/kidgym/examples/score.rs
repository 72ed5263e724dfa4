//! Capability scores and radar payload from a success table.
//!
//! cargo run -p kidgym --example score

use kidgym::scoring::{capability_profile, CapabilityMap, SuccessTable};

const TABLE: &str = "task,L1,L2,L3
CL,0.95,0.80,0.60
SE,0.90,0.55,0.30
SO,0.85,0.40,0.20
MA,0.70,0.45,0.25
FI,0.80,0.50,0.30
PU,0.60,0.30,0.10
PL,0.50,0.20,0.10
CO,0.75,0.50,0.35
DMA,0.40,0.20,0.05
MMA,0.35,0.15,0.05
MDE,0.60,0.40,0.25
MFI,0.55,0.30,0.15
";

fn main() -> anyhow::Result<()> {
    let table = SuccessTable::from_csv(TABLE)?;
    let profile = capability_profile(&table, CapabilityMap::shipped())?;
    println!("{}", serde_json::to_string_pretty(&profile.radar_json("example"))?);
    Ok(())
}
