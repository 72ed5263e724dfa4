//! Size of the classification layout space.
//!
//! cargo run -p kidgym --example state_space

use kidgym::procgen::{state_space_size, StateSpaceConfig};
use kidgym::{Catalog, Level, TaskKind};

fn main() -> anyhow::Result<()> {
    for level in Level::ALL {
        let cfg = StateSpaceConfig::classification(Catalog::shipped(), level);
        let n = state_space_size(TaskKind::Classification, level)?;
        println!("CL {level}: {n} layouts ({} digits) from {cfg:?}", n.to_string().len());
    }
    Ok(())
}
