use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::entity::*;
use super::geometry::{Cell, GridGeometry};
use crate::tasks::{Level, TaskKind};

/// Version of the serialized state layout.
pub const STATE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitingContinue,
    Active,
    Terminal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    WrongTerminalChoice,
    Overshoot,
    StepBudgetExhausted,
    InvalidResponse,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::WrongTerminalChoice => "wrong-terminal-choice",
            FailureReason::Overshoot => "overshoot",
            FailureReason::StepBudgetExhausted => "step-budget-exhausted",
            FailureReason::InvalidResponse => "invalid-response",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    Success,
    Failure(FailureReason),
}

impl Status {
    pub fn is_success(self) -> bool {
        self == Status::Success
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Failure(_))
    }
}

/// Which key opens which door in the maze family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KeyRule {
    SameColor,
    /// `(key colour, door colour)` pairs.
    Mapping { pairs: Vec<(String, String)> },
}

impl KeyRule {
    pub fn opens(&self, key: &str, door: &str) -> bool {
        match self {
            KeyRule::SameColor => key == door,
            KeyRule::Mapping { pairs } => pairs.iter().any(|(k, d)| k == key && d == door),
        }
    }
}

/// Task-specific facts the transition function needs. These are hidden from
/// agents; only the rendered frame, goal and options are shown.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum Rules {
    Classification { assignment: Vec<(String, EntityId)> },
    Counting { item: String, plural: String, target: u8 },
    Selection { targets: Vec<String>, noun: String },
    MemoryDecode { answer: EntityId },
    /// `order[i]` belongs at position `i`; `known[i]` is its value on the
    /// rule's known axis (grams or millimetres).
    Sorting { order: Vec<EntityId>, known: Vec<u64> },
    /// Expected piece per position.
    Filling { expected: Vec<PieceArt> },
    Placement { item: String, correct: u8 },
    Maze { keys: KeyRule },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorldState {
    pub schema_version: u32,
    pub kind: TaskKind,
    pub level: Level,
    pub geometry: GridGeometry,
    pub theme: String,
    pub entities: Vec<Entity>,
    pub backpack: Backpack,
    pub hint: HintBar,
    pub positions: Vec<GridPosition>,
    /// Impassable cells (maze tasks).
    pub walls: Vec<Cell>,
    pub agent: Cell,
    pub step_index: u32,
    pub phase: Phase,
    pub declared_done: bool,
    pub status: Status,
    pub rules: Rules,
}

/// The parts of a state that change during play. Two states with equal keys
/// offer the same actions and reach the same outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateKey {
    locations: Vec<Location>,
    kinds_flip: bool,
    slots: [Option<EntityId>; 4],
    occupants: Vec<Option<EntityId>>,
    phase: Phase,
    declared_done: bool,
    status: Status,
}

impl WorldState {
    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id as usize]
    }

    pub fn entity_mut(&mut self, id: EntityId) -> &mut Entity {
        &mut self.entities[id as usize]
    }

    pub fn by_label(&self, label: u8) -> Option<&Entity> {
        self.entities.iter().find(|e| e.label == Some(label))
    }

    /// Entities currently drawn in the scene.
    pub fn scene_entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities
            .iter()
            .filter(move |e| e.in_scene() && e.visible_in(self.phase))
    }

    pub fn is_terminal(&self) -> bool {
        self.phase == Phase::Terminal
    }

    pub fn canonical_key(&self) -> StateKey {
        StateKey {
            locations: self.entities.iter().map(|e| e.location).collect(),
            kinds_flip: self
                .entities
                .iter()
                .any(|e| matches!(e.kind, EntityKind::Chest { holds_diamond: true })),
            slots: self.backpack.slots,
            occupants: self.positions.iter().map(|p| p.occupant).collect(),
            phase: self.phase,
            declared_done: self.declared_done,
            status: self.status,
        }
    }

    /// Cells the agent can walk to: play-area cells that are neither walls nor
    /// locked doors, connected to the agent cell.
    pub fn reachable_cells(&self) -> HashSet<Cell> {
        let play = self.geometry.play_region();
        let blocked: HashSet<Cell> = self
            .walls
            .iter()
            .copied()
            .chain(self.entities.iter().filter_map(|e| match e.kind {
                EntityKind::Door { .. } => e.cell(),
                _ => None,
            }))
            .collect();
        let mut seen = HashSet::from([self.agent]);
        let mut queue = VecDeque::from([self.agent]);
        while let Some(c) = queue.pop_front() {
            for n in c.neighbours(self.geometry.total_rows, self.geometry.total_cols) {
                if play.contains(n) && !blocked.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    /// Checks the structural invariants: every entity sits in exactly one
    /// place, backpack and positions agree with entity locations, labels are
    /// unique and dense, and interactive entities stay in the play area.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, e) in self.entities.iter().enumerate() {
            if e.id as usize != i {
                return Err(format!("entity {i} has id {}", e.id));
            }
            match e.location {
                Location::Backpack(s) => {
                    if self.backpack.slots.get(s as usize).copied().flatten() != Some(e.id) {
                        return Err(format!("entity {} claims slot {s}", e.id));
                    }
                }
                Location::AtPosition(p) => {
                    if self.positions.get(p as usize).and_then(|p| p.occupant) != Some(e.id) {
                        return Err(format!("entity {} claims position {p}", e.id));
                    }
                }
                Location::Scene(c) => {
                    if e.label.is_some() && !self.geometry.play_region().contains(c) {
                        return Err(format!("labelled entity {} outside play area", e.id));
                    }
                }
                Location::Inside(other) if other as usize >= self.entities.len() => {
                    return Err(format!("entity {} inside missing {other}", e.id));
                }
                _ => {}
            }
        }
        for (s, id) in self.backpack.occupied() {
            if self.entity(id).location != Location::Backpack(s) {
                return Err(format!("slot {s} holds {id} which is elsewhere"));
            }
        }
        if self.backpack.compact {
            let n = self.backpack.len();
            if self.backpack.slots[..n].iter().any(Option::is_none) {
                return Err("compact backpack has a gap".into());
            }
        }
        for (i, p) in self.positions.iter().enumerate() {
            if let Some(id) = p.occupant {
                if self.entity(id).location != Location::AtPosition(i as u8) {
                    return Err(format!("position {i} holds {id} which is elsewhere"));
                }
            }
        }
        let mut labels: Vec<u8> = self.entities.iter().filter_map(|e| e.label).collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l as usize != i) {
            return Err(format!("labels not dense from 0: {labels:?}"));
        }
        let mut cells = HashSet::new();
        for e in self.entities.iter().filter(|e| e.visible_in(self.phase)) {
            if let Some(c) = e.cell() {
                if !cells.insert(c) {
                    return Err(format!("two visible entities share {c:?}"));
                }
            }
        }
        if cells.contains(&self.agent) {
            return Err("agent shares a cell with an entity".into());
        }
        Ok(())
    }
}
