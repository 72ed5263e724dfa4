//! Weighted task rates, capability profiles and random baselines.

mod baseline;
mod table;

pub use baseline::*;
pub use table::*;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::tasks::{Level, TaskKind};

/// Level weights for the task-level rate.
pub const LEVEL_WEIGHTS: [f64; 3] = [0.2, 0.3, 0.5];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScoringError {
    #[error("rate {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("missing cells: {}", fmt_cells(.0))]
    MissingCells(Vec<(TaskKind, Level)>),
    #[error("no closed form for {0} {1}")]
    Unsupported(TaskKind, Level),
    #[error("parse: {0}")]
    Parse(String),
    #[error("capability map: {0}")]
    Map(String),
}

fn fmt_cells(cells: &[(TaskKind, Level)]) -> String {
    cells.iter().map(|(k, l)| format!("{k}-{l}")).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Capability {
    #[serde(rename = "E")]
    Execution,
    #[serde(rename = "M")]
    Memory,
    #[serde(rename = "L")]
    Learning,
    #[serde(rename = "P")]
    Planning,
    #[serde(rename = "PR")]
    PerceptionReasoning,
}

impl Capability {
    pub const ALL: [Capability; 5] = [
        Capability::Execution,
        Capability::Memory,
        Capability::Learning,
        Capability::Planning,
        Capability::PerceptionReasoning,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Capability::Execution => "E",
            Capability::Memory => "M",
            Capability::Learning => "L",
            Capability::Planning => "P",
            Capability::PerceptionReasoning => "PR",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Capability::Execution => "Execution",
            Capability::Memory => "Memory",
            Capability::Learning => "Learning",
            Capability::Planning => "Planning",
            Capability::PerceptionReasoning => "Perception Reasoning",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Capability {
    type Err = ScoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Capability::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(t) || c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| ScoringError::Parse(format!("unknown capability {s:?}")))
    }
}

/// `0.2 p1 + 0.3 p2 + 0.5 p3`, unrounded.
pub fn weighted_rate(p1: f64, p2: f64, p3: f64) -> Result<f64, ScoringError> {
    for p in [p1, p2, p3] {
        if !(0.0..=1.0).contains(&p) {
            return Err(ScoringError::OutOfRange(p));
        }
    }
    Ok(LEVEL_WEIGHTS[0] * p1 + LEVEL_WEIGHTS[1] * p2 + LEVEL_WEIGHTS[2] * p3)
}

/// Which tasks measure which capability. Loaded from data so extended task
/// sets can declare their own tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityMap {
    pub schema_version: u32,
    pub sets: BTreeMap<Capability, Vec<TaskKind>>,
}

impl CapabilityMap {
    pub fn shipped() -> &'static CapabilityMap {
        static MAP: OnceLock<CapabilityMap> = OnceLock::new();
        MAP.get_or_init(|| {
            CapabilityMap::from_json(include_str!("../../data/capability_map.json"))
                .expect("shipped capability map is valid")
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ScoringError> {
        let map: CapabilityMap =
            serde_json::from_str(text).map_err(|e| ScoringError::Map(e.to_string()))?;
        map.validate()?;
        Ok(map)
    }

    pub fn tasks(&self, c: Capability) -> &[TaskKind] {
        self.sets.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Capabilities that `kind` contributes to, in axis order.
    pub fn capabilities_of(&self, kind: TaskKind) -> Vec<Capability> {
        Capability::ALL.into_iter().filter(|c| self.tasks(*c).contains(&kind)).collect()
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        if self.schema_version != 1 {
            return Err(ScoringError::Map(format!("schema version {}", self.schema_version)));
        }
        for c in Capability::ALL {
            let tasks = self.tasks(c);
            if tasks.is_empty() {
                return Err(ScoringError::Map(format!("{c} has no tasks")));
            }
            let mut sorted = tasks.to_vec();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != tasks.len() {
                return Err(ScoringError::Map(format!("{c} lists a task twice")));
            }
        }
        Ok(())
    }
}

/// Five integer scores in `[0, 100]` plus the unrounded values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapabilityProfile {
    pub scores: [u8; 5],
    pub raw: [f64; 5],
}

impl CapabilityProfile {
    pub fn score(&self, c: Capability) -> u8 {
        self.scores[c.index()]
    }

    pub fn raw(&self, c: Capability) -> f64 {
        self.raw[c.index()]
    }

    /// Radar chart payload: one axis per capability.
    pub fn radar_json(&self, label: &str) -> serde_json::Value {
        let axes: Vec<_> = Capability::ALL
            .iter()
            .map(|&c| {
                serde_json::json!({
                    "capability": c.name(),
                    "code": c.code(),
                    "score": self.score(c),
                    "raw": self.raw(c),
                })
            })
            .collect();
        serde_json::json!({ "label": label, "max": 100, "axes": axes })
    }
}

/// Half-up rounding. The small bias keeps sums such as `100 * 0.745` that
/// land a hair under `.5` in binary from rounding down.
pub fn round_half_up(x: f64) -> u8 {
    (x + 0.5 + 1e-9).floor().clamp(0.0, 100.0) as u8
}

/// `Score(c) = 100 * mean over T_c of w_t`, rounded half-up.
pub fn capability_profile(
    table: &SuccessTable,
    map: &CapabilityMap,
) -> Result<CapabilityProfile, ScoringError> {
    let needed: Vec<TaskKind> = {
        let mut v: Vec<TaskKind> = map.sets.values().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    };
    let missing: Vec<(TaskKind, Level)> = needed
        .iter()
        .flat_map(|&k| Level::ALL.map(|l| (k, l)))
        .filter(|&(k, l)| table.rate(k, l).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(ScoringError::MissingCells(missing));
    }
    let mut raw = [0.0; 5];
    let mut scores = [0u8; 5];
    for c in Capability::ALL {
        let tasks = map.tasks(c);
        let mut sum = 0.0;
        for &k in tasks {
            sum += table.weighted(k)?;
        }
        let value = 100.0 * sum / tasks.len() as f64;
        raw[c.index()] = value;
        scores[c.index()] = round_half_up(value);
    }
    Ok(CapabilityProfile { scores, raw })
}
