use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TaskError;
use crate::scoring::Capability;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    #[serde(rename = "CL")]
    Classification,
    #[serde(rename = "SE")]
    Selection,
    #[serde(rename = "SO")]
    Sorting,
    #[serde(rename = "MA")]
    Maze,
    #[serde(rename = "FI")]
    Filling,
    #[serde(rename = "PU")]
    Puzzle,
    #[serde(rename = "PL")]
    Placement,
    #[serde(rename = "CO")]
    Counting,
    #[serde(rename = "DMA")]
    DecodeMaze,
    #[serde(rename = "MMA")]
    MemoryMaze,
    #[serde(rename = "MDE")]
    MemoryDecode,
    #[serde(rename = "MFI")]
    MemoryFilling,
}

impl TaskKind {
    /// All kinds in the usual table column order.
    pub const ALL: [TaskKind; 12] = [
        TaskKind::Classification,
        TaskKind::Selection,
        TaskKind::Sorting,
        TaskKind::Maze,
        TaskKind::Filling,
        TaskKind::Puzzle,
        TaskKind::Placement,
        TaskKind::Counting,
        TaskKind::DecodeMaze,
        TaskKind::MemoryMaze,
        TaskKind::MemoryDecode,
        TaskKind::MemoryFilling,
    ];

    pub fn code(self) -> &'static str {
        match self {
            TaskKind::Classification => "CL",
            TaskKind::Selection => "SE",
            TaskKind::Sorting => "SO",
            TaskKind::Maze => "MA",
            TaskKind::Filling => "FI",
            TaskKind::Puzzle => "PU",
            TaskKind::Placement => "PL",
            TaskKind::Counting => "CO",
            TaskKind::DecodeMaze => "DMA",
            TaskKind::MemoryMaze => "MMA",
            TaskKind::MemoryDecode => "MDE",
            TaskKind::MemoryFilling => "MFI",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Classification => "Classification",
            TaskKind::Selection => "Selection",
            TaskKind::Sorting => "Sorting",
            TaskKind::Maze => "Maze",
            TaskKind::Filling => "Filling",
            TaskKind::Puzzle => "Puzzle",
            TaskKind::Placement => "Placement",
            TaskKind::Counting => "Counting",
            TaskKind::DecodeMaze => "Decode Maze",
            TaskKind::MemoryMaze => "Memory Maze",
            TaskKind::MemoryDecode => "Memory Decode",
            TaskKind::MemoryFilling => "Memory Filling",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).unwrap()
    }

    /// Memory tasks show their key content only before `continue`, and the
    /// agent sees every earlier frame.
    pub fn is_memory(self) -> bool {
        matches!(
            self,
            TaskKind::Selection
                | TaskKind::MemoryMaze
                | TaskKind::MemoryDecode
                | TaskKind::MemoryFilling
        )
    }

    pub fn is_maze(self) -> bool {
        matches!(self, TaskKind::Maze | TaskKind::DecodeMaze | TaskKind::MemoryMaze)
    }

    /// Items start in the backpack and are placed at numbered positions.
    pub fn is_prestocked(self) -> bool {
        matches!(
            self,
            TaskKind::Sorting
                | TaskKind::Filling
                | TaskKind::Puzzle
                | TaskKind::MemoryFilling
                | TaskKind::Placement
        )
    }

    pub fn capabilities(self) -> &'static [Capability] {
        use Capability::*;
        match self {
            TaskKind::Classification => &[Execution],
            TaskKind::Selection => &[Memory],
            TaskKind::Sorting => &[Learning],
            TaskKind::Maze => &[Planning],
            TaskKind::Filling => &[PerceptionReasoning],
            TaskKind::Puzzle => &[PerceptionReasoning],
            TaskKind::Placement => &[Learning, PerceptionReasoning],
            TaskKind::Counting => &[PerceptionReasoning, Planning],
            TaskKind::DecodeMaze => &[Learning, Planning],
            TaskKind::MemoryMaze => &[Memory, Planning],
            TaskKind::MemoryDecode => &[Memory, Learning],
            TaskKind::MemoryFilling => &[PerceptionReasoning, Memory],
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for TaskKind {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        TaskKind::ALL
            .into_iter()
            .find(|k| k.code() == up || k.name().to_ascii_uppercase() == up)
            .ok_or_else(|| TaskError::UnknownKind(s.to_string()))
    }
}

/// Serialized as the number; also read from `"L2"` or `"2"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LevelRepr", into = "u8")]
pub enum Level {
    L1,
    L2,
    L3,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::L1, Level::L2, Level::L3];

    pub fn number(self) -> u8 {
        match self {
            Level::L1 => 1,
            Level::L2 => 2,
            Level::L3 => 3,
        }
    }

    pub fn index(self) -> usize {
        self.number() as usize - 1
    }
}

impl TryFrom<u8> for Level {
    type Error = TaskError;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        match n {
            1 => Ok(Level::L1),
            2 => Ok(Level::L2),
            3 => Ok(Level::L3),
            _ => Err(TaskError::UnknownLevel(n.to_string())),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LevelRepr {
    Number(u8),
    Text(String),
}

impl TryFrom<LevelRepr> for Level {
    type Error = TaskError;

    fn try_from(r: LevelRepr) -> Result<Self, Self::Error> {
        match r {
            LevelRepr::Number(n) => Level::try_from(n),
            LevelRepr::Text(s) => s.parse(),
        }
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        l.number()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.number())
    }
}

impl FromStr for Level {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['L', 'l']);
        t.parse::<u8>()
            .ok()
            .and_then(|n| Level::try_from(n).ok())
            .ok_or_else(|| TaskError::UnknownLevel(s.to_string()))
    }
}
