use serde::{Deserialize, Serialize};

use super::geometry::Cell;
use super::Phase;

pub type EntityId = u16;

/// When an entity or hint entry is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reveal {
    Always,
    /// Only while the episode waits for `continue`.
    PreStartOnly,
    /// Only once the episode is running.
    ActiveOnly,
}

impl Reveal {
    pub fn visible_in(self, phase: Phase) -> bool {
        match self {
            Reveal::Always => true,
            Reveal::PreStartOnly => phase == Phase::AwaitingContinue,
            Reveal::ActiveOnly => phase != Phase::AwaitingContinue,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum PictureSource {
    /// A figurative animal picture keyed by catalog name.
    Animal(String),
    /// An abstract block pattern; the seed fixes the pattern.
    Blocks(u64),
}

/// A 2x2 picture assembled from four quadrant pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Picture {
    pub source: PictureSource,
    /// Palette colour name that replaces the main colour, if recoloured.
    pub tint: Option<String>,
}

/// One quadrant of a picture. Quadrants are numbered row-major: 0 top-left,
/// 1 top-right, 2 bottom-left, 3 bottom-right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PieceArt {
    pub picture: Picture,
    pub quadrant: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntityKind {
    Item { name: String, category: String },
    Basket { color: String },
    Key { color: String },
    Door { color: String },
    Diamond,
    Chest { holds_diamond: bool },
    Pile { item: String, count: u8 },
    Piece { art: PieceArt },
}

impl EntityKind {
    pub fn type_name(&self) -> &'static str {
        match self {
            EntityKind::Item { .. } => "item",
            EntityKind::Basket { .. } => "basket",
            EntityKind::Key { .. } => "key",
            EntityKind::Door { .. } => "door",
            EntityKind::Diamond => "diamond",
            EntityKind::Chest { .. } => "chest",
            EntityKind::Pile { .. } => "pile",
            EntityKind::Piece { .. } => "piece",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "at", content = "value", rename_all = "snake_case")]
pub enum Location {
    Scene(Cell),
    /// Backpack slot index, 0 = A.
    Backpack(u8),
    /// Put into a container entity.
    Inside(EntityId),
    /// Placed at the numbered grid position (index into `positions`).
    AtPosition(u8),
    /// Chosen or obtained and removed from play.
    Collected,
    /// Used up by an unlock.
    Consumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    /// Numeric label drawn on the entity; `None` for fixed scenery.
    pub label: Option<u8>,
    #[serde(flatten)]
    pub kind: EntityKind,
    pub location: Location,
    pub reveal: Reveal,
}

impl Entity {
    pub fn cell(&self) -> Option<Cell> {
        match self.location {
            Location::Scene(c) => Some(c),
            _ => None,
        }
    }

    pub fn in_scene(&self) -> bool {
        matches!(self.location, Location::Scene(_))
    }

    pub fn visible_in(&self, phase: Phase) -> bool {
        self.reveal.visible_in(phase)
    }
}

/// Content shown in the hint bar.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HintContent {
    /// An item to remember.
    Item { name: String, category: String },
    /// `from` corresponds to `to`; drawn across both hint columns with an arrow.
    Pair { from: String, from_category: String, to: String, to_category: String },
    /// The key colour that opens the door colour; drawn like `Pair`.
    KeyDoor { key: String, door: String },
    /// A full 2x2 target picture anchored at the entry cell.
    Picture { picture: Picture },
    /// The boxed target item for a correspondence lookup.
    TargetBox { name: String, category: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HintEntry {
    pub cell: Cell,
    pub reveal: Reveal,
    #[serde(flatten)]
    pub content: HintContent,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HintBar {
    pub entries: Vec<HintEntry>,
}

impl HintBar {
    pub fn visible(&self, phase: Phase) -> impl Iterator<Item = &HintEntry> {
        self.entries.iter().filter(move |e| e.reveal.visible_in(phase))
    }
}

pub const SLOT_LETTERS: [char; 4] = ['A', 'B', 'C', 'D'];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Backpack {
    pub slots: [Option<EntityId>; 4],
    /// Close gaps after an item leaves, so held items always start at A.
    pub compact: bool,
}

impl Backpack {
    pub fn first_free(&self) -> Option<u8> {
        self.slots.iter().position(Option::is_none).map(|i| i as u8)
    }

    pub fn occupied(&self) -> impl Iterator<Item = (u8, EntityId)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|id| (i as u8, id)))
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A numbered target cell (I, II, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPosition {
    /// 1-based numeral.
    pub numeral: u8,
    pub cell: Cell,
    pub occupant: Option<EntityId>,
}

pub fn roman(n: u8) -> &'static str {
    const R: [&str; 13] =
        ["", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"];
    R.get(n as usize).copied().unwrap_or("?")
}
