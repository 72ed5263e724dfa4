use serde::{Deserialize, Serialize};

use super::{Level, TaskKind};

/// Size parameters for one kind at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum LevelParams {
    Classification { copies: u8, kinds: u8, baskets: u8 },
    Selection { targets: u8, candidates: u8 },
    Sorting { animals: u8 },
    Maze { doors: u8 },
    Filling { missing: u8, pieces: u8 },
    Placement { positions: u8, rotate: bool },
    Counting { piles: u8, target_min: u8, target_max: u8 },
    MemoryDecode { pairs: u8, candidates: u8 },
}

pub fn level_params(kind: TaskKind, level: Level) -> LevelParams {
    let n = level.number();
    match kind {
        TaskKind::Classification => LevelParams::Classification { copies: n, kinds: 2, baskets: 2 },
        TaskKind::Selection => LevelParams::Selection { targets: n, candidates: 2 + 2 * n },
        TaskKind::Sorting => LevelParams::Sorting { animals: n + 1 },
        TaskKind::Maze | TaskKind::DecodeMaze | TaskKind::MemoryMaze => {
            LevelParams::Maze { doors: n }
        }
        TaskKind::Filling | TaskKind::Puzzle | TaskKind::MemoryFilling => {
            LevelParams::Filling { missing: n, pieces: 4 }
        }
        TaskKind::Placement => LevelParams::Placement {
            positions: if level == Level::L1 { 4 } else { 8 },
            rotate: level == Level::L3,
        },
        TaskKind::Counting => {
            let (lo, hi) = [(1, 3), (2, 6), (3, 9)][level.index()];
            LevelParams::Counting { piles: n + 2, target_min: lo, target_max: hi }
        }
        TaskKind::MemoryDecode => LevelParams::MemoryDecode { pairs: n, candidates: 2 + 2 * n },
    }
}

/// Length of the shortest successful plan implied by construction, where
/// the kind fixes it. Counting depends on the pile layout.
pub fn expected_plan_len(kind: TaskKind, level: Level) -> Option<usize> {
    let n = level.number() as usize;
    Some(match kind {
        TaskKind::Classification => 2 * 2 * n,
        TaskKind::Selection => n + 1,
        TaskKind::Sorting => n + 1,
        TaskKind::Maze | TaskKind::DecodeMaze => 2 * n + 1,
        TaskKind::MemoryMaze => 2 * n + 2,
        TaskKind::Filling | TaskKind::Puzzle => n,
        TaskKind::MemoryFilling => n + 1,
        TaskKind::Placement => 1,
        TaskKind::MemoryDecode => 2,
        TaskKind::Counting => return None,
    })
}

/// The eight compass directions in clockwise order from north.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    North,
    Northeast,
    East,
    Southeast,
    South,
    Southwest,
    West,
    Northwest,
}

impl Direction {
    pub const RING: [Direction; 8] = [
        Direction::North,
        Direction::Northeast,
        Direction::East,
        Direction::Southeast,
        Direction::South,
        Direction::Southwest,
        Direction::West,
        Direction::Northwest,
    ];

    pub const ORTHOGONAL: [Direction; 4] =
        [Direction::North, Direction::East, Direction::South, Direction::West];

    fn ring_index(self) -> usize {
        Self::RING.iter().position(|&d| d == self).unwrap()
    }

    pub fn opposite(self) -> Direction {
        Self::RING[(self.ring_index() + 4) % 8]
    }

    /// One step around the ring of eight neighbours.
    pub fn turn(self, rotation: Rotation) -> Direction {
        let step = match rotation {
            Rotation::Clockwise => 1,
            Rotation::Counterclockwise => 7,
        };
        Self::RING[(self.ring_index() + step) % 8]
    }

    /// `(row, col)` offset, rows growing southward.
    pub fn offset(self) -> (i8, i8) {
        match self {
            Direction::North => (-1, 0),
            Direction::Northeast => (-1, 1),
            Direction::East => (0, 1),
            Direction::Southeast => (1, 1),
            Direction::South => (1, 0),
            Direction::Southwest => (1, -1),
            Direction::West => (0, -1),
            Direction::Northwest => (-1, -1),
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::Northeast => "northeast",
            Direction::East => "east",
            Direction::Southeast => "southeast",
            Direction::South => "south",
            Direction::Southwest => "southwest",
            Direction::West => "west",
            Direction::Northwest => "northwest",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    Clockwise,
    Counterclockwise,
}

impl Rotation {
    pub fn word(self) -> &'static str {
        match self {
            Rotation::Clockwise => "clockwise",
            Rotation::Counterclockwise => "counterclockwise",
        }
    }
}

/// The axis whose values the agent is expected to know.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownAxis {
    Weight,
    Height,
}

/// The axis the rule defines and the agent ranks by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankedAxis {
    Speed,
    Strength,
}

/// "The lighter the animal is, the faster it is", plus the ranking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SortRule {
    pub known: KnownAxis,
    /// heavier / taller rather than lighter / shorter
    pub known_more: bool,
    pub ranked: RankedAxis,
    /// faster / stronger rather than slower / weaker
    pub ranked_more: bool,
    /// Position I holds the fastest / strongest animal.
    pub high_first: bool,
}

impl SortRule {
    pub fn known_word(&self) -> &'static str {
        match (self.known, self.known_more) {
            (KnownAxis::Weight, true) => "heavier",
            (KnownAxis::Weight, false) => "lighter",
            (KnownAxis::Height, true) => "taller",
            (KnownAxis::Height, false) => "shorter",
        }
    }

    pub fn ranked_word(&self) -> &'static str {
        match (self.ranked, self.ranked_more) {
            (RankedAxis::Speed, true) => "faster",
            (RankedAxis::Speed, false) => "slower",
            (RankedAxis::Strength, true) => "stronger",
            (RankedAxis::Strength, false) => "weaker",
        }
    }

    fn pole(&self, high: bool) -> &'static str {
        match (self.ranked, high) {
            (RankedAxis::Speed, true) => "fast",
            (RankedAxis::Speed, false) => "slow",
            (RankedAxis::Strength, true) => "strong",
            (RankedAxis::Strength, false) => "weak",
        }
    }

    pub fn property(&self) -> &'static str {
        match self.ranked {
            RankedAxis::Speed => "speed",
            RankedAxis::Strength => "strength",
        }
    }

    /// Rule sentence without a trailing period.
    pub fn sentence(&self) -> String {
        format!("The {} the animal is, the {} it is", self.known_word(), self.ranked_word())
    }

    /// `from fast to slow`
    pub fn ranking_phrase(&self) -> String {
        format!("from {} to {}", self.pole(self.high_first), self.pole(!self.high_first))
    }

    /// True when the rule runs against everyday knowledge (heavier animals
    /// being faster, for instance).
    pub fn counterfactual(&self) -> bool {
        let natural = match (self.known, self.ranked) {
            (KnownAxis::Weight, RankedAxis::Speed) => self.known_more != self.ranked_more,
            _ => self.known_more == self.ranked_more,
        };
        !natural
    }

    /// Score that increases with the ranked property under this rule.
    pub fn ranked_score(&self, known_value: f64) -> f64 {
        if self.known_more == self.ranked_more {
            known_value
        } else {
            -known_value
        }
    }
}
