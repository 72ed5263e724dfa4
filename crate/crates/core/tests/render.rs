use kidgym_core::procgen::{sample_instance, Catalog};
use kidgym_core::render::*;
use kidgym_core::world::*;
use kidgym_core::{Level, TaskKind};

fn decode_png(bytes: &[u8]) -> (u32, u32, Vec<u8>) {
    let dec = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = dec.read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size().unwrap()];
    let info = reader.next_frame(&mut buf).unwrap();
    buf.truncate(info.buffer_size());
    (info.width, info.height, buf)
}

#[test]
fn frame_sizes_follow_cell_px() {
    let i = sample_instance(TaskKind::Classification, Level::L1, 1).unwrap();
    for (px, side) in [(32, 288), (64, 576), (96, 864)] {
        let f = render_frame(&i.initial, &RenderConfig::with_cell_px(px)).unwrap();
        assert_eq!((f.width, f.height), (side, side));
        let (w, h, rgb) = decode_png(&f.png().unwrap());
        assert_eq!((w, h), (side, side));
        assert_eq!(rgb, f.rgb);
    }
    assert!(render_frame(&i.initial, &RenderConfig::with_cell_px(40)).is_err());
}

#[test]
fn repeated_renders_are_byte_identical() {
    for kind in TaskKind::ALL {
        for level in Level::ALL {
            let i = sample_instance(kind, level, 8).unwrap();
            let mut s = i.initial.clone();
            for a in i.witness.iter().take(2) {
                s = apply_action(&s, a).unwrap();
            }
            let cfg = RenderConfig::default();
            let a = render_frame(&s, &cfg).unwrap().png().unwrap();
            let b = render_frame(&s, &cfg).unwrap().png().unwrap();
            assert_eq!(a, b, "{kind} {level}");
            let round = WorldState::clone(&serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap());
            assert_eq!(render_frame(&round, &cfg).unwrap().png().unwrap(), a);
        }
    }
}

#[test]
fn labels_are_legible() {
    for px in ALLOWED_CELL_PX {
        for kind in TaskKind::ALL {
            let i = sample_instance(kind, Level::L2, 2).unwrap();
            let mut s = i.initial.clone();
            if s.phase == Phase::AwaitingContinue {
                s = apply_action(&s, &i.witness[0]).unwrap();
            }
            let f = render_frame(&s, &RenderConfig::with_cell_px(px)).unwrap();
            let labels: Vec<&DrawOp> = f.ops.iter().filter(|o| o.layer == Layer::Label).collect();
            let expected = s.scene_entities().filter(|e| e.label.is_some() && e.visible_in(s.phase)).count();
            assert_eq!(labels.len(), expected, "{kind} at {px}px");
            for op in labels {
                assert!(op.rect[3] * 4 >= px, "{kind} label {} is {}px tall in a {px}px cell", op.key, op.rect[3]);
            }
        }
    }
}

/// Sprites drawn as memorised content in `first`, minus any the later
/// frame shows on purpose (a decode target box repeats one of them).
fn remembered_sprites<'a>(tiles: &'a Tileset, first: &Frame, later: &Frame) -> Vec<&'a Sprite> {
    let shown: Vec<&str> = later.ops.iter().filter(|o| !o.memorized).map(|o| o.key.as_str()).collect();
    first
        .ops
        .iter()
        .filter(|o| o.memorized && o.key != "arrow" && !shown.contains(&o.key.as_str()))
        .filter_map(|o| tiles.sprites.get(&o.key))
        .collect()
}

#[test]
fn hidden_frames_leak_nothing() {
    let tiles = Tileset::shipped();
    let memory = [TaskKind::Selection, TaskKind::MemoryDecode, TaskKind::MemoryFilling, TaskKind::MemoryMaze];
    for kind in memory {
        for level in Level::ALL {
            for seed in 0..10 {
                let i = sample_instance(kind, level, seed).unwrap();
                let cfg = RenderConfig::default();
                let first = render_frame(&i.initial, &cfg).unwrap();
                assert!(first.ops.iter().any(|o| o.memorized), "{kind} {level}: nothing to remember");
                let g = i.initial.geometry;
                let search: Vec<Cell> = if kind == TaskKind::MemoryMaze {
                    g.field_region().cells().chain(g.hint_region().cells()).collect()
                } else {
                    g.hint_region().cells().collect()
                };
                let mut s = i.initial.clone();
                for a in &i.witness {
                    s = apply_action(&s, a).unwrap();
                    let later = render_frame(&s, &cfg).unwrap();
                    let sprites = remembered_sprites(tiles, &first, &later);
                    let leaks = hidden_content_leaks(&first, &later, &sprites, &search);
                    assert!(leaks.is_empty(), "{kind} {level} seed {seed} step {}: {leaks:?}", s.step_index);
                }
                // the maze diamond turns into a chest; hint content stays in the state
                if kind != TaskKind::MemoryMaze {
                    let debug = RenderConfig { show_hidden: true, ..cfg.clone() };
                    let shown = render_frame(&s, &debug).unwrap();
                    assert!(shown.ops.iter().any(|o| o.memorized), "{kind} {level}: debug view hides content");
                }
            }
        }
    }
}

#[test]
fn leak_checker_sees_a_planted_leak() {
    let i = sample_instance(TaskKind::Selection, Level::L1, 3).unwrap();
    let cfg = RenderConfig::default();
    let first = render_frame(&i.initial, &cfg).unwrap();
    let later_state = apply_action(&i.initial, &i.witness[0]).unwrap();
    let debug = RenderConfig { show_hidden: true, ..cfg };
    let leaky = render_frame(&later_state, &debug).unwrap();
    let tiles = Tileset::shipped();
    let sprites = remembered_sprites(tiles, &first, &render_frame(&later_state, &RenderConfig::default()).unwrap());
    let search: Vec<Cell> = i.initial.geometry.hint_region().cells().collect();
    assert!(!hidden_content_leaks(&first, &leaky, &sprites, &search).is_empty());
}

#[test]
fn shipped_tileset_covers_the_catalog() {
    let cat = Catalog::shipped();
    let tiles = Tileset::procedural(cat).unwrap();
    assert_eq!(tiles.id, TILESET_ID);
    for (c, item) in cat.all_items() {
        let key = tiles.item_key(&c.name, &item.name).expect("item key");
        assert!(tiles.sprites.contains_key(key));
    }
    let mut bad = cat.clone();
    bad.categories[0].items[0].color = "not a colour".into();
    assert!(matches!(Tileset::procedural(&bad), Err(RenderError::TilesetIncomplete(_))));
}

#[test]
fn glyphs_cover_labels() {
    for ch in "0123456789ABCDIVX".chars() {
        assert!(font::glyph(ch).is_some(), "{ch}");
    }
    assert_eq!(font::text_width("12", 2), font::text_width("1", 2) * 2 + 2);
}
