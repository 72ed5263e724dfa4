//! Procedurally drawn 12x12 sprites and the tileset that owns them.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use super::RenderError;
use crate::procgen::{parse_hex, Catalog};
use crate::world::{Picture, PictureSource, PieceArt};

pub const TILESET_ID: &str = "procedural-v1";
pub const SPRITE: usize = 12;

pub type Rgb = [u8; 3];

pub const OUTLINE: Rgb = [24, 24, 24];
pub const WHITE: Rgb = [250, 250, 250];

/// A small image with transparent pixels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sprite {
    pub w: usize,
    pub h: usize,
    pub px: Vec<Option<Rgb>>,
}

impl Sprite {
    pub fn blank(w: usize, h: usize) -> Self {
        Sprite { w, h, px: vec![None; w * h] }
    }

    pub fn get(&self, x: usize, y: usize) -> Option<Rgb> {
        self.px[y * self.w + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        if x < self.w && y < self.h {
            self.px[y * self.w + x] = Some(c);
        }
    }

    /// Parses rows of characters; `.` is transparent and other characters
    /// are looked up in `colors`.
    pub fn from_art(rows: &[&str], colors: &[(char, Rgb)]) -> Self {
        let h = rows.len();
        let w = rows[0].len();
        let mut s = Sprite::blank(w, h);
        for (y, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), w, "ragged sprite art");
            for (x, ch) in row.chars().enumerate() {
                if ch == '.' {
                    continue;
                }
                let c = colors
                    .iter()
                    .find(|(k, _)| *k == ch)
                    .map(|(_, c)| *c)
                    .unwrap_or_else(|| panic!("no colour for {ch:?}"));
                s.set(x, y, c);
            }
        }
        s
    }

    /// The `w`x`h` sub-image at (`x0`, `y0`).
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Sprite {
        let mut s = Sprite::blank(w, h);
        for y in 0..h {
            for x in 0..w {
                s.px[y * w + x] = self.get(x0 + x, y0 + y);
            }
        }
        s
    }

    /// Nearest-neighbour enlargement by an integer factor.
    pub fn upscale(&self, k: usize) -> Sprite {
        let mut s = Sprite::blank(self.w * k, self.h * k);
        for y in 0..s.h {
            for x in 0..s.w {
                s.px[y * s.w + x] = self.get(x / k, y / k);
            }
        }
        s
    }

    pub fn recolor(&self, f: impl Fn(Rgb) -> Rgb) -> Sprite {
        Sprite { px: self.px.iter().map(|p| p.map(&f)).collect(), ..self.clone() }
    }
}

pub fn shade(c: Rgb, num: u16, den: u16) -> Rgb {
    c.map(|v| ((v as u16 * num) / den).min(255) as u8)
}

pub fn mix(a: Rgb, b: Rgb) -> Rgb {
    [0, 1, 2].map(|i| ((a[i] as u16 + b[i] as u16) / 2) as u8)
}

fn digest(text: &str) -> [u8; 32] {
    let out = Sha256::digest(text.as_bytes());
    let mut b = [0u8; 32];
    b.copy_from_slice(&out);
    b
}

fn bit(bytes: &[u8], i: usize) -> bool {
    bytes[i / 8] >> (i % 8) & 1 == 1
}

/// Marks body pixels that touch transparency or the sprite edge as outline.
fn outline(mask: &[[bool; SPRITE]; SPRITE], body: Rgb) -> Sprite {
    let mut s = Sprite::blank(SPRITE, SPRITE);
    for y in 0..SPRITE {
        for x in 0..SPRITE {
            if !mask[y][x] {
                continue;
            }
            let edge = x == 0
                || y == 0
                || x == SPRITE - 1
                || y == SPRITE - 1
                || !mask[y - 1][x]
                || !mask[y + 1][x]
                || !mask[y][x - 1]
                || !mask[y][x + 1];
            s.set(x, y, if edge { OUTLINE } else { body });
        }
    }
    s
}

/// Item sprite: a category-specific silhouette in the item colour with a
/// spot pattern taken from a hash of the name.
pub fn item_sprite(category: &str, name: &str, color: Rgb) -> Sprite {
    let h = digest(&format!("{category}/{name}"));
    let mut m = [[false; SPRITE]; SPRITE];
    let dark = shade(color, 3, 5);
    match category {
        "animals" => {
            for (y, row) in m.iter_mut().enumerate() {
                for (x, v) in row.iter_mut().enumerate() {
                    let (fx, fy) = (x as f32 - 5.0, y as f32 - 6.5);
                    let body = (fx / 4.6).powi(2) + (fy / 3.2).powi(2) <= 1.0;
                    let (hx, hy) = (x as f32 - 8.5, y as f32 - 3.5);
                    let head = hx * hx + hy * hy <= 6.5;
                    let legs = (y == 10 || y == 11) && [2, 3, 6, 7].contains(&x);
                    *v = body || head || legs;
                }
            }
            if bit(&h, 0) {
                m[0][7] = true;
                m[1][7] = true;
            }
            if bit(&h, 1) {
                m[0][10] = true;
                m[1][10] = true;
            }
            if bit(&h, 2) {
                m[5][0] = true;
                m[4][0] = true;
            }
        }
        "fruits" => {
            for (y, row) in m.iter_mut().enumerate() {
                for (x, v) in row.iter_mut().enumerate() {
                    let (fx, fy) = (x as f32 - 5.5, y as f32 - 6.8);
                    let r = if bit(&h, 3) { 4.9 } else { 4.5 };
                    *v = (fx / r).powi(2) + (fy / 4.6).powi(2) <= 1.0 && y >= 2;
                }
            }
            m[0][6] = true;
            m[1][6] = true;
        }
        "food" => {
            for (y, row) in m.iter_mut().enumerate() {
                for (x, v) in row.iter_mut().enumerate() {
                    let plate = y >= 9 && y <= 10 && (1..=10).contains(&x);
                    let top = if bit(&h, 3) { 2 } else { 3 };
                    let food = (top..=9).contains(&y) && (2..=9).contains(&x);
                    let corner = (y == top || y == 9) && (x == 2 || x == 9);
                    *v = plate || (food && !corner);
                }
            }
        }
        _ => {
            for (y, row) in m.iter_mut().enumerate() {
                for (x, v) in row.iter_mut().enumerate() {
                    let (fx, fy) = (x as f32 - 5.5, y as f32 - 5.5);
                    *v = if bit(&h, 3) {
                        fx.abs() + fy.abs() <= 6.0
                    } else {
                        fx.abs().max(fy.abs()) <= 4.6
                    };
                }
            }
        }
    }
    let mut s = outline(&m, color);
    if category == "food" {
        for x in 2..=9 {
            if s.get(x, 9) == Some(color) {
                s.set(x, 9, WHITE);
            }
        }
    }
    for i in 0..9 {
        if bit(&h, 8 + i) {
            let (x, y) = (2 + (i % 3) * 2, 4 + (i / 3) * 2);
            if s.get(x, y) == Some(color) {
                s.set(x, y, dark);
            }
        }
    }
    match category {
        "animals" => {
            s.set(9, 3, WHITE);
            s.set(10, 3, OUTLINE);
        }
        "fruits" => {
            s.set(7, 1, [60, 160, 60]);
            s.set(8, 1, [60, 160, 60]);
            s.set(4, 4, WHITE);
        }
        _ => {}
    }
    s
}

pub fn agent_sprite() -> Sprite {
    Sprite::from_art(
        &[
            "....hhhh....",
            "...hhhhhh...",
            "...hssssh...",
            "...s#ss#s...",
            "...ssssss...",
            "....ssss....",
            "..bbbbbbbb..",
            ".sbbbbbbbbs.",
            ".s.bbbbbb.s.",
            "...gggggg...",
            "...gg..gg...",
            "...##..##...",
        ],
        &[
            ('h', [70, 45, 25]),
            ('s', [240, 200, 160]),
            ('#', OUTLINE),
            ('b', [140, 85, 40]),
            ('g', [128, 128, 128]),
        ],
    )
}

fn colored(rows: &[&str], color: Rgb) -> Sprite {
    Sprite::from_art(rows, &[('#', OUTLINE), ('c', color), ('k', shade(color, 3, 5)), ('w', WHITE)])
}

pub fn basket_sprite(color: Rgb) -> Sprite {
    colored(
        &[
            "............",
            "....####....",
            "...#....#...",
            "..#......#..",
            ".##########.",
            ".#cccccccc#.",
            ".#ckckckck#.",
            ".#cccccccc#.",
            ".#ckckckck#.",
            "..#cccccc#..",
            "..########..",
            "............",
        ],
        color,
    )
}

pub fn key_sprite(color: Rgb) -> Sprite {
    colored(
        &[
            "............",
            "...####.....",
            "..#cccc#....",
            "..#c##c#....",
            "..#cccc#....",
            "...#cc#.....",
            "....#c#.....",
            "....#cc#....",
            "....#c#.....",
            "....#cc#....",
            "....###.....",
            "............",
        ],
        color,
    )
}

pub fn door_sprite(color: Rgb) -> Sprite {
    colored(
        &[
            ".##########.",
            ".#cccccccc#.",
            ".#ckkkkkkc#.",
            ".#ckcccckc#.",
            ".#ckcccckc#.",
            ".#ckkkkkkc#.",
            ".#cccccw#c#.",
            ".#ckkkkkkc#.",
            ".#ckcccckc#.",
            ".#ckkkkkkc#.",
            ".#cccccccc#.",
            ".##########.",
        ],
        color,
    )
}

pub fn diamond_sprite() -> Sprite {
    Sprite::from_art(
        &[
            "............",
            "...######...",
            "..#wddddd#..",
            ".#wdddddde#.",
            "############",
            ".#dddddddd#.",
            "..#ddddde#..",
            "...#ddde#...",
            "....#de#....",
            ".....##.....",
            "............",
            "............",
        ],
        &[('#', OUTLINE), ('w', WHITE), ('d', [90, 210, 235]), ('e', [40, 140, 190])],
    )
}

pub fn chest_sprite() -> Sprite {
    Sprite::from_art(
        &[
            "............",
            "............",
            "..########..",
            ".#oooooooo#.",
            ".#oooooooo#.",
            ".##########.",
            ".#oooyyooo#.",
            ".#oooyyooo#.",
            ".#oooooooo#.",
            ".#oooooooo#.",
            ".##########.",
            "............",
        ],
        &[('#', OUTLINE), ('o', [150, 95, 45]), ('y', [240, 200, 40])],
    )
}

pub fn wall_sprite() -> Sprite {
    Sprite::from_art(
        &[
            "mmmmmmmmmmmm",
            "rrrrrmrrrrrm",
            "rrrrrmrrrrrm",
            "mmmmmmmmmmmm",
            "rrmrrrrrmrrr",
            "rrmrrrrrmrrr",
            "mmmmmmmmmmmm",
            "rrrrrmrrrrrm",
            "rrrrrmrrrrrm",
            "mmmmmmmmmmmm",
            "rrmrrrrrmrrr",
            "rrmrrrrrmrrr",
        ],
        &[('m', [60, 60, 60]), ('r', [120, 110, 100])],
    )
}

pub fn arrow_sprite() -> Sprite {
    Sprite::from_art(
        &["...#..", "...##.", "######", "######", "...##.", "...#.."],
        &[('#', WHITE)],
    )
}

pub fn decor_sprite(name: &str, color: Rgb) -> Option<Sprite> {
    let rows: [&str; 12] = match name {
        "shelf" => [
            "############",
            "#cccccccccc#",
            "#c..k..k..c#",
            "#cccccccccc#",
            "#c.k..k...c#",
            "#cccccccccc#",
            "#c..k...k.c#",
            "#cccccccccc#",
            "#c.k...k..c#",
            "#cccccccccc#",
            "#c........c#",
            "############",
        ],
        "table" => [
            "............",
            "............",
            "............",
            "############",
            "#cccccccccc#",
            "############",
            ".#k#....#k#.",
            ".#k#....#k#.",
            ".#k#....#k#.",
            ".#k#....#k#.",
            ".###....###.",
            "............",
        ],
        "fence" => [
            "............",
            ".#...#...#..",
            "#c#.#c#.#c#.",
            "#c#.#c#.#c#.",
            "############",
            "#cccccccccc#",
            "############",
            "#c#.#c#.#c#.",
            "#c#.#c#.#c#.",
            "############",
            "#cccccccccc#",
            "############",
        ],
        "rug" => [
            "............",
            ".##########.",
            ".#cccccccc#.",
            ".#ckkkkkkc#.",
            ".#ckcccckc#.",
            ".#ckckkckc#.",
            ".#ckckkckc#.",
            ".#ckcccckc#.",
            ".#ckkkkkkc#.",
            ".#cccccccc#.",
            ".##########.",
            "............",
        ],
        "tree" => [
            "....####....",
            "..##cccc##..",
            ".#cccckccc#.",
            "#cckccccccc#",
            "#cccccckcc#.",
            ".#ckcccccc#.",
            "..##cccc##..",
            "....#ww#....",
            "....#ww#....",
            "....#ww#....",
            "...#wwww#...",
            "...######...",
        ],
        "bush" => [
            "............",
            "............",
            "............",
            "....####....",
            "..##cccc##..",
            ".#ccckcccc#.",
            "#cccccckccc#",
            "#ckccccccck#",
            "#cccckccccc#",
            ".#cccccckc#.",
            "..########..",
            "............",
        ],
        "stone" => [
            "kkkkkkkkkkkk",
            "kcccckccccck",
            "kcccckccccck",
            "kkkkkkkkkkkk",
            "kcckcccccckc",
            "kcckcccccckc",
            "kkkkkkkkkkkk",
            "kcccckccccck",
            "kcccckccccck",
            "kkkkkkkkkkkk",
            "kcckcccccckc",
            "kcckcccccckc",
        ],
        _ => return None,
    };
    let trunk = [110, 75, 40];
    Some(Sprite::from_art(
        &rows,
        &[('#', OUTLINE), ('c', color), ('k', shade(color, 3, 5)), ('w', trunk)],
    ))
}

/// An abstract 4x4 block pattern (24x24). Every quadrant has at least two
/// colours, so recolouring always changes each quadrant.
pub fn blocks_picture(seed: u64, palette: &[Rgb]) -> Sprite {
    let h = digest(&format!("blocks/{seed}"));
    let mut cells = [[0usize; 4]; 4];
    for (i, v) in cells.iter_mut().flatten().enumerate() {
        *v = h[i] as usize % palette.len();
    }
    for q in 0..4 {
        let (r0, c0) = (q / 2 * 2, q % 2 * 2);
        let first = cells[r0][c0];
        let all_same = (0..4).all(|k| cells[r0 + k / 2][c0 + k % 2] == first);
        if all_same {
            cells[r0 + 1][c0 + 1] = (first + 1 + h[16 + q] as usize % (palette.len() - 1))
                % palette.len();
        }
    }
    let mut s = Sprite::blank(24, 24);
    for y in 0..24 {
        for x in 0..24 {
            let c = palette[cells[y / 6][x / 6]];
            let border = x % 6 == 0 || y % 6 == 0;
            s.set(x, y, if border { shade(c, 2, 3) } else { c });
        }
    }
    s
}

/// The sprite set used by the renderer, validated against a catalog.
#[derive(Clone, Debug)]
pub struct Tileset {
    pub id: String,
    pub sprites: BTreeMap<String, Sprite>,
    /// (category, item name) -> sprite key.
    pub items: HashMap<(String, String), String>,
    pub palette: BTreeMap<String, Rgb>,
    /// theme -> (floor colours, decor sprite key)
    pub themes: HashMap<String, (Vec<Rgb>, String)>,
}

impl Tileset {
    /// The procedural tileset for the shipped catalog.
    pub fn shipped() -> &'static Tileset {
        static T: OnceLock<Tileset> = OnceLock::new();
        T.get_or_init(|| Tileset::procedural(Catalog::shipped()).expect("shipped tileset is complete"))
    }

    /// Draws every sprite the catalog can reference.
    pub fn procedural(catalog: &Catalog) -> Result<Tileset, RenderError> {
        let mut sprites = BTreeMap::new();
        for (cat, item) in catalog.all_items() {
            let color = parse_hex(&item.color).ok_or_else(|| RenderError::TilesetIncomplete(item.sprite.clone()))?;
            sprites.insert(item.sprite.clone(), item_sprite(&cat.name, &item.name, color));
        }
        let palette: BTreeMap<String, Rgb> = catalog
            .palette
            .iter()
            .filter_map(|(k, v)| parse_hex(v).map(|c| (k.clone(), c)))
            .collect();
        for (name, &c) in &palette {
            sprites.insert(format!("basket/{name}"), basket_sprite(c));
            sprites.insert(format!("key/{name}"), key_sprite(c));
            sprites.insert(format!("door/{name}"), door_sprite(c));
        }
        sprites.insert("agent".into(), agent_sprite());
        sprites.insert("diamond".into(), diamond_sprite());
        sprites.insert("chest".into(), chest_sprite());
        sprites.insert("wall".into(), wall_sprite());
        sprites.insert("arrow".into(), arrow_sprite());
        for t in &catalog.themes {
            let color = parse_hex(&t.decor_color).unwrap_or([90, 90, 90]);
            if let Some(s) = decor_sprite(&t.decor, color) {
                sprites.insert(format!("decor/{}", t.name), s);
            }
        }
        Tileset::assemble(TILESET_ID, sprites, catalog)
    }

    /// Binds a sprite map to a catalog, failing on the first key the catalog
    /// needs that the map lacks.
    pub fn assemble(
        id: &str,
        sprites: BTreeMap<String, Sprite>,
        catalog: &Catalog,
    ) -> Result<Tileset, RenderError> {
        let mut need: Vec<String> = vec!["agent", "diamond", "chest", "wall", "arrow"]
            .into_iter()
            .map(String::from)
            .collect();
        let mut items = HashMap::new();
        for (cat, item) in catalog.all_items() {
            need.push(item.sprite.clone());
            items.insert((cat.name.clone(), item.name.clone()), item.sprite.clone());
        }
        for c in &catalog.basket_colors {
            need.push(format!("basket/{c}"));
        }
        for c in &catalog.key_colors {
            need.push(format!("key/{c}"));
            need.push(format!("door/{c}"));
        }
        let mut themes = HashMap::new();
        for t in &catalog.themes {
            let key = format!("decor/{}", t.name);
            need.push(key.clone());
            let floor = t.floor.iter().filter_map(|f| parse_hex(f)).collect();
            themes.insert(t.name.clone(), (floor, key));
        }
        if let Some(missing) = need.iter().find(|k| !sprites.contains_key(*k)) {
            return Err(RenderError::TilesetIncomplete(missing.clone()));
        }
        let palette = catalog
            .palette
            .iter()
            .filter_map(|(k, v)| parse_hex(v).map(|c| (k.clone(), c)))
            .collect();
        Ok(Tileset { id: id.to_string(), sprites, items, palette, themes })
    }

    pub fn sprite(&self, key: &str) -> &Sprite {
        self.sprites.get(key).unwrap_or_else(|| panic!("sprite {key} validated at load"))
    }

    pub fn item_key(&self, category: &str, name: &str) -> Option<&str> {
        self.items.get(&(category.to_string(), name.to_string())).map(String::as_str)
    }

    pub fn color(&self, name: &str) -> Rgb {
        self.palette.get(name).copied().unwrap_or([128, 128, 128])
    }

    /// The full 24x24 picture including any recolouring.
    pub fn picture(&self, picture: &Picture) -> Sprite {
        let base = match &picture.source {
            PictureSource::Animal(name) => {
                let key = self.item_key("animals", name).unwrap_or("agent");
                self.sprite(key).upscale(2)
            }
            PictureSource::Blocks(seed) => {
                let pal: Vec<Rgb> = self.palette.values().copied().collect();
                blocks_picture(*seed, &pal)
            }
        };
        match &picture.tint {
            None => base,
            Some(t) => {
                let tint = self.color(t);
                base.recolor(|c| if c == OUTLINE { c } else { mix(c, tint) })
            }
        }
    }

    /// One quadrant of a picture (12x12).
    pub fn piece(&self, art: &PieceArt) -> Sprite {
        let q = art.quadrant as usize;
        self.picture(&art.picture).crop(q % 2 * 12, q / 2 * 12, 12, 12)
    }
}
