use serde::{Deserialize, Serialize};

use super::WorldError;

/// A grid cell in absolute coordinates (row 0 is the top edge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: u8,
    pub col: u8,
}

impl Cell {
    pub const fn new(row: u8, col: u8) -> Self {
        Self { row, col }
    }

    /// Orthogonal neighbours that stay inside a `rows` x `cols` grid.
    pub fn neighbours(self, rows: u8, cols: u8) -> impl Iterator<Item = Cell> {
        let (r, c) = (self.row as i16, self.col as i16);
        [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
            .into_iter()
            .filter(move |&(r, c)| r >= 0 && c >= 0 && r < rows as i16 && c < cols as i16)
            .map(|(r, c)| Cell::new(r as u8, c as u8))
    }
}

/// Axis-aligned block of cells, `rows` x `cols` starting at `origin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub origin: Cell,
    pub rows: u8,
    pub cols: u8,
}

impl Rect {
    pub const fn new(row: u8, col: u8, rows: u8, cols: u8) -> Self {
        Self { origin: Cell::new(row, col), rows, cols }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= self.origin.row
            && cell.row < self.origin.row + self.rows
            && cell.col >= self.origin.col
            && cell.col < self.origin.col + self.cols
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols).map(move |c| Cell::new(self.origin.row + r, self.origin.col + c))
        })
    }

    pub fn len(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What a cell is used for in the frame layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Hint,
    Play,
    Decor,
    Backpack,
}

pub const ALLOWED_CELL_PX: [u32; 3] = [32, 64, 96];

/// The fixed 9x9 layout.
///
/// The left two columns hold the hint bar, the bottom row right of column 0
/// holds the backpack strip, and the remaining 8x7 block is the scene field
/// whose centered 5x5 sub-block is the play area. Cell (8, 1) belongs to the
/// backpack so that the strip is eight cells long.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridGeometry {
    pub total_rows: u8,
    pub total_cols: u8,
    pub cell_px: u32,
}

impl Default for GridGeometry {
    fn default() -> Self {
        Self { total_rows: 9, total_cols: 9, cell_px: 64 }
    }
}

impl GridGeometry {
    pub fn with_cell_px(cell_px: u32) -> Result<Self, WorldError> {
        if !ALLOWED_CELL_PX.contains(&cell_px) {
            return Err(WorldError::UnsupportedResolution(cell_px));
        }
        Ok(Self { cell_px, ..Self::default() })
    }

    pub fn image_width(&self) -> u32 {
        self.total_cols as u32 * self.cell_px
    }

    pub fn image_height(&self) -> u32 {
        self.total_rows as u32 * self.cell_px
    }

    pub fn hint_region(&self) -> Rect {
        Rect::new(0, 0, self.total_rows, 2)
    }

    pub fn field_region(&self) -> Rect {
        Rect::new(0, 2, self.total_rows - 1, self.total_cols - 2)
    }

    pub fn play_region(&self) -> Rect {
        let field = self.field_region();
        let (rows, cols) = (5, 5);
        Rect::new(
            field.origin.row + (field.rows - rows) / 2,
            field.origin.col + (field.cols - cols) / 2,
            rows,
            cols,
        )
    }

    pub fn backpack_region(&self) -> Rect {
        Rect::new(self.total_rows - 1, 1, 1, self.total_cols - 1)
    }

    /// Cell holding backpack slot `slot` (0 = A). The four active slots sit
    /// under the play area.
    pub fn slot_cell(&self, slot: u8) -> Cell {
        let play = self.play_region();
        Cell::new(self.total_rows - 1, play.origin.col + slot)
    }

    /// Absolute cell for play-area coordinates.
    pub fn play_cell(&self, row: u8, col: u8) -> Cell {
        let play = self.play_region();
        Cell::new(play.origin.row + row, play.origin.col + col)
    }

    /// Inverse of [`GridGeometry::play_cell`].
    pub fn play_coords(&self, cell: Cell) -> Option<(u8, u8)> {
        let play = self.play_region();
        play.contains(cell)
            .then(|| (cell.row - play.origin.row, cell.col - play.origin.col))
    }

    pub fn region_of(&self, row: u8, col: u8) -> Result<RegionKind, WorldError> {
        if row >= self.total_rows || col >= self.total_cols {
            return Err(WorldError::OutOfRange { row, col });
        }
        let cell = Cell::new(row, col);
        Ok(if self.backpack_region().contains(cell) {
            RegionKind::Backpack
        } else if self.hint_region().contains(cell) {
            RegionKind::Hint
        } else if self.play_region().contains(cell) {
            RegionKind::Play
        } else {
            RegionKind::Decor
        })
    }
}

/// Free-function form of [`GridGeometry::region_of`].
pub fn region_of(row: u8, col: u8, geometry: &GridGeometry) -> Result<RegionKind, WorldError> {
    geometry.region_of(row, col)
}
