//! Checks that content shown only before `continue` is gone afterwards.

use super::{Frame, Layer, Sprite};
use crate::world::Cell;

/// True when every opaque pixel of `sprite`, drawn at (`x`, `y`) with
/// `scale`, matches the frame.
pub fn sprite_present_at(frame: &Frame, sprite: &Sprite, x: u32, y: u32, scale: u32) -> bool {
    if x + sprite.w as u32 * scale > frame.width || y + sprite.h as u32 * scale > frame.height {
        return false;
    }
    let mut any = false;
    for sy in 0..sprite.h {
        for sx in 0..sprite.w {
            if let Some(c) = sprite.get(sx, sy) {
                any = true;
                let (px, py) = (x + sx as u32 * scale, y + sy as u32 * scale);
                if frame.pixel(px, py) != c {
                    return false;
                }
            }
        }
    }
    any
}

fn same_rect(a: &Frame, b: &Frame, r: [u32; 4]) -> bool {
    let [x, y, w, h] = r;
    (y..y + h).all(|yy| (x..x + w).all(|xx| a.pixel(xx, yy) == b.pixel(xx, yy)))
}

/// Leaks of memorised content from `first` (the pre-start frame) into
/// `later`, found two ways: by the draw log, and by comparing the pixels
/// each memorised op covered. Each of `sprites` is also searched for at
/// every cell of `search` in `later`.
pub fn hidden_content_leaks(first: &Frame, later: &Frame, sprites: &[&Sprite], search: &[Cell]) -> Vec<String> {
    let mut leaks = Vec::new();
    let remembered: Vec<_> = first.ops.iter().filter(|o| o.memorized).collect();
    for op in later.ops.iter().filter(|o| o.memorized) {
        leaks.push(format!("log: memorised {} drawn at {:?}", op.key, op.cell));
    }
    for m in &remembered {
        if later.ops.iter().any(|o| o.key == m.key && o.cell == m.cell && o.layer != Layer::Floor) {
            leaks.push(format!("log: {} still drawn at {:?}", m.key, m.cell));
        }
        if same_rect(first, later, m.rect) {
            leaks.push(format!("pixels: {} unchanged at {:?}", m.key, m.cell));
        }
    }
    if first.width == later.width {
        let px = later.width / 9;
        let scale = (px - 8) / 12;
        let off = (px - 12 * scale) / 2;
        for s in sprites {
            for c in search {
                let (x, y) = (c.col as u32 * px + off, c.row as u32 * px + off);
                if sprite_present_at(later, s, x, y, scale) {
                    leaks.push(format!("pixels: sprite found at {c:?}"));
                }
            }
        }
    }
    leaks
}
