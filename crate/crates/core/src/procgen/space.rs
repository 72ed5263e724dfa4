//! Exact counts of distinct initial configurations.

use num_bigint::BigUint;

use super::{Catalog, ProcgenError};
use crate::tasks::{level_params, Level, LevelParams, TaskKind};

/// Inputs of the classification counting formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSpaceConfig {
    pub play_cells: u64,
    /// Item identities the kinds are drawn from.
    pub identities: u64,
    /// Basket colours.
    pub colors: u64,
    /// Item kinds (and baskets) per episode.
    pub kinds: u64,
    /// Copies of each kind.
    pub copies: u64,
    pub themes: u64,
}

fn fact(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |a, k| a * k)
}

/// `n! / (n - k)!`, zero when `k > n`.
fn falling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    (n - k + 1..=n).fold(BigUint::from(1u32), |a, x| a * x)
}

fn choose(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    falling(n, k) / fact(k)
}

impl StateSpaceConfig {
    /// agent cell, item identities, item cells (copies interchangeable),
    /// basket colours and cells, kind-to-basket assignment, label order and
    /// theme.
    pub fn count(&self) -> BigUint {
        let (k, c) = (self.kinds, self.copies);
        if self.play_cells == 0 {
            return BigUint::ZERO;
        }
        let rest = self.play_cells - 1;
        let items = if c * k > rest {
            BigUint::ZERO
        } else {
            falling(rest, c * k) / fact(c).pow(k as u32)
        };
        let baskets = choose(self.colors, k) * falling(rest.saturating_sub(c * k), k);
        BigUint::from(self.play_cells)
            * choose(self.identities, k)
            * items
            * baskets
            * fact(k)
            * fact(c * k + k)
            * BigUint::from(self.themes)
    }

    pub fn classification(catalog: &Catalog, level: Level) -> Self {
        let LevelParams::Classification { copies, kinds, .. } =
            level_params(TaskKind::Classification, level)
        else {
            unreachable!()
        };
        StateSpaceConfig {
            play_cells: 25,
            identities: catalog.all_items().count() as u64,
            colors: catalog.basket_colors.len() as u64,
            kinds: kinds as u64,
            copies: copies as u64,
            themes: catalog.themes_for(TaskKind::Classification).len() as u64,
        }
    }
}

/// Distinct initial configurations of `kind` at `level` with the shipped
/// catalog. Only classification has a closed form.
pub fn state_space_size(kind: TaskKind, level: Level) -> Result<BigUint, ProcgenError> {
    match kind {
        TaskKind::Classification => {
            Ok(StateSpaceConfig::classification(Catalog::shipped(), level).count())
        }
        _ => Err(ProcgenError::Unsupported),
    }
}
