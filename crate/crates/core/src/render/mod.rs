//! Deterministic rasterisation of a state into an RGB frame and PNG.

pub mod font;
mod leak;
mod sprites;

pub use leak::{hidden_content_leaks, sprite_present_at};
pub use sprites::*;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::world::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("tileset-incomplete: {0}")]
    TilesetIncomplete(String),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("png: {0}")]
    Encode(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderConfig {
    pub cell_px: u32,
    pub tileset: String,
    pub font: String,
    /// Draw content of every phase at once. Debug only.
    pub show_hidden: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            cell_px: 64,
            tileset: TILESET_ID.into(),
            font: font::FONT_ID.into(),
            show_hidden: false,
        }
    }
}

impl RenderConfig {
    pub fn with_cell_px(cell_px: u32) -> Self {
        RenderConfig { cell_px, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Floor,
    Decor,
    Wall,
    Position,
    Entity,
    Label,
    Agent,
    Hint,
    Backpack,
}

/// One sprite or overlay drawn into a frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawOp {
    pub layer: Layer,
    pub key: String,
    pub cell: Cell,
    /// Pixel rectangle `[x, y, w, h]` the op covered.
    pub rect: [u32; 4],
    /// Content the agent has to remember from the first frame.
    pub memorized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB.
    pub rgb: Vec<u8>,
    pub ops: Vec<DrawOp>,
}

impl Frame {
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = ((y * self.width + x) * 3) as usize;
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    /// PNG bytes with fixed encoder settings and no ancillary chunks.
    pub fn png(&self) -> Result<Vec<u8>, RenderError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_compression(png::Compression::Fast);
            enc.set_filter(png::Filter::Sub);
            let mut w = enc.write_header().map_err(|e| RenderError::Encode(e.to_string()))?;
            w.write_image_data(&self.rgb).map_err(|e| RenderError::Encode(e.to_string()))?;
            w.finish().map_err(|e| RenderError::Encode(e.to_string()))?;
        }
        Ok(out)
    }

    /// Hex sha256 of the PNG encoding.
    pub fn hash(&self) -> String {
        hex_sha256(&self.png().expect("in-memory encoding"))
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Canvas<'a> {
    frame: Frame,
    px: u32,
    tiles: &'a Tileset,
}

impl Canvas<'_> {
    fn fill(&mut self, x: u32, y: u32, w: u32, h: u32, c: Rgb) {
        for yy in y..(y + h).min(self.frame.height) {
            for xx in x..(x + w).min(self.frame.width) {
                let i = ((yy * self.frame.width + xx) * 3) as usize;
                self.frame.rgb[i..i + 3].copy_from_slice(&c);
            }
        }
    }

    fn outline_rect(&mut self, x: u32, y: u32, w: u32, h: u32, t: u32, c: Rgb) {
        self.fill(x, y, w, t, c);
        self.fill(x, y + h - t, w, t, c);
        self.fill(x, y, t, h, c);
        self.fill(x + w - t, y, t, h, c);
    }

    fn blit(&mut self, s: &Sprite, x: u32, y: u32, scale: u32) {
        for sy in 0..s.h {
            for sx in 0..s.w {
                if let Some(c) = s.get(sx, sy) {
                    self.fill(x + sx as u32 * scale, y + sy as u32 * scale, scale, scale, c);
                }
            }
        }
    }

    fn cell_origin(&self, cell: Cell) -> (u32, u32) {
        (cell.col as u32 * self.px, cell.row as u32 * self.px)
    }

    /// Standard scale and offset for a 12x12 sprite in a cell.
    fn sprite_fit(&self) -> (u32, u32) {
        let scale = (self.px - 8) / 12;
        (scale, (self.px - 12 * scale) / 2)
    }

    fn log(&mut self, layer: Layer, key: &str, cell: Cell, rect: [u32; 4], memorized: bool) {
        self.frame.ops.push(DrawOp { layer, key: key.to_string(), cell, rect, memorized });
    }

    fn sprite_in_cell(&mut self, layer: Layer, key: &str, s: &Sprite, cell: Cell, memorized: bool) {
        let (scale, off) = self.sprite_fit();
        let (x, y) = self.cell_origin(cell);
        self.blit(s, x + off, y + off, scale);
        self.log(layer, key, cell, [x + off, y + off, 12 * scale, 12 * scale], memorized);
    }

    fn keyed(&mut self, layer: Layer, key: &str, cell: Cell, memorized: bool) {
        let s = self.tiles.sprite(key).clone();
        self.sprite_in_cell(layer, key, &s, cell, memorized);
    }

    /// A 12x12 sprite scaled to fill the cell edge to edge.
    fn full_cell(&mut self, layer: Layer, key: &str, s: &Sprite, cell: Cell, memorized: bool) {
        let scale = self.px / 12;
        let off = (self.px - 12 * scale) / 2;
        let (x, y) = self.cell_origin(cell);
        self.blit(s, x + off, y + off, scale);
        self.log(layer, key, cell, [x + off, y + off, 12 * scale, 12 * scale], memorized);
    }

    fn text(&mut self, text: &str, x: u32, y: u32, scale: u32, c: Rgb) {
        let mut cx = x;
        for ch in text.chars() {
            if let Some(rows) = font::glyph(ch) {
                for (ry, bits) in rows.iter().enumerate() {
                    for rx in 0..3u32 {
                        if bits >> (2 - rx) & 1 == 1 {
                            self.fill(cx + rx * scale, y + ry as u32 * scale, scale, scale, c);
                        }
                    }
                }
            }
            cx += (font::GLYPH_W + 1) * scale;
        }
    }

    /// White box with a black numeral in the cell's top-left corner.
    fn label(&mut self, n: u8, cell: Cell) {
        let s = font::label_scale(self.px);
        let text = n.to_string();
        let (x, y) = self.cell_origin(cell);
        let (w, h) = (font::text_width(&text, s) + 2 * s, font::GLYPH_H * s + 2 * s);
        self.fill(x, y, w, h, WHITE);
        self.outline_rect(x, y, w, h, 1.max(s / 3), OUTLINE);
        self.text(&text, x + s, y + s, s, OUTLINE);
        self.log(Layer::Label, &format!("label/{n}"), cell, [x, y, w, h], false);
    }
}

fn entity_key(tiles: &Tileset, kind: &EntityKind) -> String {
    match kind {
        EntityKind::Item { name, category } => {
            tiles.item_key(category, name).unwrap_or("agent").to_string()
        }
        EntityKind::Basket { color } => format!("basket/{color}"),
        EntityKind::Key { color } => format!("key/{color}"),
        EntityKind::Door { color } => format!("door/{color}"),
        EntityKind::Diamond => "diamond".into(),
        EntityKind::Chest { .. } => "chest".into(),
        EntityKind::Pile { item, .. } => tiles
            .items
            .iter()
            .filter(|((_, n), _)| n == item)
            .map(|(_, k)| k.clone())
            .min()
            .unwrap_or_else(|| "agent".into()),
        EntityKind::Piece { .. } => "piece".into(),
    }
}

/// Renders with the shipped tileset.
pub fn render_frame(state: &WorldState, config: &RenderConfig) -> Result<Frame, RenderError> {
    render_frame_with(state, config, Tileset::shipped())
}

pub fn render_frame_with(
    state: &WorldState,
    config: &RenderConfig,
    tiles: &Tileset,
) -> Result<Frame, RenderError> {
    let geometry = GridGeometry::with_cell_px(config.cell_px)?;
    let px = geometry.cell_px;
    let (w, h) = (geometry.image_width(), geometry.image_height());
    let mut cv = Canvas {
        frame: Frame { width: w, height: h, rgb: vec![0; (w * h * 3) as usize], ops: Vec::new() },
        px,
        tiles,
    };
    let visible = |r: Reveal| config.show_hidden || r.visible_in(state.phase);
    let memory = state.kind.is_memory();
    let (floor, decor) = tiles
        .themes
        .get(&state.theme)
        .cloned()
        .unwrap_or_else(|| (vec![[200, 200, 200]], String::new()));

    for row in 0..geometry.total_rows {
        for col in 0..geometry.total_cols {
            let cell = Cell::new(row, col);
            let (x, y) = cv.cell_origin(cell);
            match geometry.region_of(row, col)? {
                RegionKind::Hint => {
                    cv.fill(x, y, px, px, [52, 56, 62]);
                    cv.outline_rect(x, y, px, px, 1, [72, 76, 84]);
                }
                RegionKind::Backpack => cv.fill(x, y, px, px, [40, 40, 40]),
                RegionKind::Play | RegionKind::Decor => {
                    let c = floor[(row as usize + col as usize) % floor.len()];
                    cv.fill(x, y, px, px, c);
                    if geometry.region_of(row, col)? == RegionKind::Decor && !decor.is_empty() {
                        cv.keyed(Layer::Decor, &decor.clone(), cell, false);
                    }
                }
            }
        }
    }

    for &wall in &state.walls {
        let s = tiles.sprite("wall").clone();
        cv.full_cell(Layer::Wall, "wall", &s, wall, false);
    }

    let num_scale = 1.max(font::label_scale(px) / 2);
    for p in &state.positions {
        let (x, y) = cv.cell_origin(p.cell);
        cv.outline_rect(x + 1, y + 1, px - 2, px - 2, 1.max(px / 32), OUTLINE);
        let text = roman(p.numeral);
        let tw = font::text_width(text, num_scale);
        cv.text(text, x + (px - tw) / 2, y + px - (font::GLYPH_H + 2) * num_scale, num_scale, OUTLINE);
        cv.log(Layer::Position, &format!("position/{text}"), p.cell, [x, y, px, px], false);
    }

    for e in &state.entities {
        let cell = match e.location {
            Location::Scene(c) => c,
            Location::AtPosition(p) => state.positions[p as usize].cell,
            _ => continue,
        };
        if !visible(e.reveal) {
            continue;
        }
        let memorized = memory && e.kind == EntityKind::Diamond;
        draw_entity(&mut cv, state, e, cell, memorized);
        let contained: Vec<&Entity> = state
            .entities
            .iter()
            .filter(|o| o.location == Location::Inside(e.id))
            .collect();
        let (x, y) = cv.cell_origin(cell);
        let small = 1.max((px - 8) / 24);
        for (i, o) in contained.iter().enumerate() {
            let key = entity_key(tiles, &o.kind);
            let s = tiles.sprite(&key).clone();
            let ox = x + px - 12 * small - (i as u32 % 3) * 4 * small;
            let oy = y + px - 12 * small;
            cv.blit(&s, ox, oy, small);
            cv.log(Layer::Entity, &key, cell, [ox, oy, 12 * small, 12 * small], false);
        }
        if let Some(l) = e.label {
            cv.label(l, cell);
        }
    }

    let agent = tiles.sprite("agent").clone();
    cv.sprite_in_cell(Layer::Agent, "agent", &agent, state.agent, false);

    for entry in &state.hint.entries {
        if !visible(entry.reveal) {
            continue;
        }
        let memorized = entry.reveal == Reveal::PreStartOnly;
        draw_hint(&mut cv, entry, memorized);
    }

    let letter_scale = 1.max(font::label_scale(px) / 2);
    for slot in 0..4u8 {
        let cell = geometry.slot_cell(slot);
        let (x, y) = cv.cell_origin(cell);
        cv.fill(x + 1, y + 1, px - 2, px - 2, [0, 0, 0]);
        cv.outline_rect(x + 1, y + 1, px - 2, px - 2, 1, [150, 150, 150]);
        let letter = SLOT_LETTERS[slot as usize].to_string();
        cv.text(&letter, x + 2 + letter_scale, y + 2 + letter_scale, letter_scale, [200, 200, 200]);
        if let Some(id) = state.backpack.slots[slot as usize] {
            let e = state.entity(id);
            draw_entity(&mut cv, state, e, cell, false);
        }
    }
    Ok(cv.frame)
}

fn draw_entity(cv: &mut Canvas<'_>, _state: &WorldState, e: &Entity, cell: Cell, memorized: bool) {
    let tiles = cv.tiles;
    match &e.kind {
        EntityKind::Piece { art } => {
            let s = tiles.piece(art);
            let key = piece_key(art);
            cv.full_cell(Layer::Entity, &key, &s, cell, false);
        }
        EntityKind::Pile { count, .. } => {
            let key = entity_key(tiles, &e.kind);
            let s = tiles.sprite(&key).clone();
            let small = 1.max((cv.px - 8) / 24);
            let (x, y) = cv.cell_origin(cell);
            let span = 12 * small;
            let spots: &[(u32, u32)] = match count {
                1 => &[(1, 1)],
                2 => &[(0, 0), (2, 2)],
                _ => &[(1, 0), (0, 2), (2, 2)],
            };
            for &(gx, gy) in spots {
                let ox = x + (cv.px - span) * gx / 2;
                let oy = y + (cv.px - span) * gy / 2;
                cv.blit(&s, ox, oy, small);
            }
            cv.log(Layer::Entity, &format!("{key}#{count}"), cell, [x, y, cv.px, cv.px], memorized);
        }
        kind => {
            let key = entity_key(tiles, kind);
            cv.keyed(Layer::Entity, &key, cell, memorized);
        }
    }
}

pub fn piece_key(art: &PieceArt) -> String {
    let src = match &art.picture.source {
        PictureSource::Animal(n) => format!("animal:{n}"),
        PictureSource::Blocks(s) => format!("blocks:{s}"),
    };
    let tint = art.picture.tint.as_deref().unwrap_or("none");
    format!("piece/{src}/{tint}/{}", art.quadrant)
}

fn draw_hint(cv: &mut Canvas<'_>, entry: &HintEntry, memorized: bool) {
    let tiles = cv.tiles;
    let cell = entry.cell;
    let right = Cell::new(cell.row, cell.col + 1);
    match &entry.content {
        HintContent::Item { name, category } => {
            let key = tiles.item_key(category, name).unwrap_or("agent").to_string();
            cv.keyed(Layer::Hint, &key, cell, memorized);
        }
        HintContent::Pair { from, from_category, to, to_category } => {
            let a = tiles.item_key(from_category, from).unwrap_or("agent").to_string();
            let b = tiles.item_key(to_category, to).unwrap_or("agent").to_string();
            cv.keyed(Layer::Hint, &a, cell, memorized);
            cv.keyed(Layer::Hint, &b, right, memorized);
            draw_arrow(cv, cell, memorized);
        }
        HintContent::KeyDoor { key, door } => {
            cv.keyed(Layer::Hint, &format!("key/{key}"), cell, memorized);
            cv.keyed(Layer::Hint, &format!("door/{door}"), right, memorized);
            draw_arrow(cv, cell, memorized);
        }
        HintContent::Picture { picture } => {
            let s = tiles.picture(picture);
            let scale = cv.px / 12;
            let off = (cv.px - 12 * scale) / 2;
            let (x, y) = cv.cell_origin(cell);
            cv.blit(&s, x + off, y + off, scale);
            for q in 0..4u8 {
                let c = Cell::new(cell.row + q / 2, cell.col + q % 2);
                let (qx, qy) = cv.cell_origin(c);
                let art = PieceArt { picture: picture.clone(), quadrant: q };
                cv.log(
                    Layer::Hint,
                    &piece_key(&art),
                    c,
                    [qx + off, qy + off, 12 * scale, 12 * scale],
                    memorized,
                );
            }
        }
        HintContent::TargetBox { name, category } => {
            let (x, y) = cv.cell_origin(cell);
            cv.fill(x + 1, y + 1, cv.px - 2, cv.px - 2, [0, 0, 0]);
            cv.outline_rect(x + 1, y + 1, cv.px - 2, cv.px - 2, 1.max(cv.px / 32), WHITE);
            let key = tiles.item_key(category, name).unwrap_or("agent").to_string();
            cv.keyed(Layer::Hint, &key, cell, memorized);
        }
    }
}

/// Arrow centred on the boundary between a hint cell and its right neighbour.
fn draw_arrow(cv: &mut Canvas<'_>, cell: Cell, memorized: bool) {
    let s = cv.tiles.sprite("arrow").clone();
    let scale = 1.max(cv.px / 32);
    let (x, y) = cv.cell_origin(cell);
    let ax = x + cv.px - 3 * scale;
    let ay = y + (cv.px - 6 * scale) / 2;
    cv.blit(&s, ax, ay, scale);
    cv.log(Layer::Hint, "arrow", cell, [ax, ay, 6 * scale, 6 * scale], memorized);
}
