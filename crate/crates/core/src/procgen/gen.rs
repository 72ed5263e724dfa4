//! Per-kind layout samplers. Each returns a candidate initial state that the
//! caller still has to verify with the solver.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::catalog::{Catalog, CatalogItem, Category};
use crate::tasks::*;
use crate::world::*;

/// A rejected draw; the caller retries with a fresh stream.
#[derive(Debug)]
pub(super) struct Reject(pub &'static str);

type Draw<T> = Result<T, Reject>;

pub(super) struct Sampled {
    pub theme: String,
    pub goal: GoalSpec,
    pub state: WorldState,
}

struct Scene {
    geometry: GridGeometry,
    entities: Vec<Entity>,
    labelled: Vec<EntityId>,
    used: HashSet<Cell>,
    hint: Vec<HintEntry>,
    positions: Vec<GridPosition>,
    walls: Vec<Cell>,
    backpack: Backpack,
}

impl Scene {
    fn new() -> Self {
        Scene {
            geometry: GridGeometry::default(),
            entities: Vec::new(),
            labelled: Vec::new(),
            used: HashSet::new(),
            hint: Vec::new(),
            positions: Vec::new(),
            walls: Vec::new(),
            backpack: Backpack::default(),
        }
    }

    fn play_cells(&self) -> Vec<Cell> {
        self.geometry.play_region().cells().collect()
    }

    fn reserve(&mut self, cell: Cell) {
        self.used.insert(cell);
    }

    /// A random unused cell among `pool`.
    fn take_from(&mut self, rng: &mut ChaCha8Rng, pool: &[Cell]) -> Draw<Cell> {
        let free: Vec<Cell> = pool.iter().copied().filter(|c| !self.used.contains(c)).collect();
        let cell = *free.choose(rng).ok_or(Reject("no free cell"))?;
        self.used.insert(cell);
        Ok(cell)
    }

    fn take(&mut self, rng: &mut ChaCha8Rng) -> Draw<Cell> {
        let pool = self.play_cells();
        self.take_from(rng, &pool)
    }

    fn add(&mut self, kind: EntityKind, location: Location, reveal: Reveal, labelled: bool) -> EntityId {
        let id = self.entities.len() as EntityId;
        self.entities.push(Entity { id, label: None, kind, location, reveal });
        if labelled {
            self.labelled.push(id);
        }
        id
    }

    fn stock(&mut self, kind: EntityKind) -> EntityId {
        let slot = self.backpack.first_free().expect("backpack has room for stock");
        let id = self.add(kind, Location::Backpack(slot), Reveal::Always, false);
        self.backpack.slots[slot as usize] = Some(id);
        id
    }

    fn hint(&mut self, row: u8, col: u8, reveal: Reveal, content: HintContent) {
        self.hint.push(HintEntry { cell: Cell::new(row, col), reveal, content });
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        mut self,
        rng: &mut ChaCha8Rng,
        kind: TaskKind,
        level: Level,
        theme: &str,
        agent: Option<Cell>,
        rules: Rules,
    ) -> Draw<WorldState> {
        let mut labels: Vec<u8> = (0..self.labelled.len() as u8).collect();
        labels.shuffle(rng);
        for (&id, l) in self.labelled.iter().zip(labels) {
            self.entities[id as usize].label = Some(l);
        }
        let agent = match agent {
            Some(c) => c,
            None => self.take(rng)?,
        };
        let phase = if kind.is_memory() { Phase::AwaitingContinue } else { Phase::Active };
        Ok(WorldState {
            schema_version: STATE_SCHEMA_VERSION,
            kind,
            level,
            geometry: self.geometry,
            theme: theme.to_string(),
            entities: self.entities,
            backpack: self.backpack,
            hint: HintBar { entries: self.hint },
            positions: self.positions,
            walls: self.walls,
            agent,
            step_index: 0,
            phase,
            declared_done: false,
            status: Status::Ongoing,
            rules,
        })
    }
}

fn pick_theme<'a>(cat: &'a Catalog, kind: TaskKind, rng: &mut ChaCha8Rng) -> &'a super::catalog::Theme {
    cat.themes_for(kind).choose(rng).copied().expect("validated catalog covers every kind")
}

fn theme_category<'a>(
    cat: &'a Catalog,
    theme: &super::catalog::Theme,
    rng: &mut ChaCha8Rng,
) -> Draw<&'a Category> {
    let name = theme.categories.choose(rng).ok_or(Reject("theme without categories"))?;
    cat.category(name).ok_or(Reject("unknown category"))
}

fn item_kind(cat: &Category, item: &CatalogItem) -> EntityKind {
    EntityKind::Item { name: item.name.clone(), category: cat.name.clone() }
}

pub(super) fn sample(
    kind: TaskKind,
    level: Level,
    cat: &Catalog,
    rng: &mut ChaCha8Rng,
) -> Draw<Sampled> {
    match kind {
        TaskKind::Classification => classification(level, cat, rng),
        TaskKind::Counting => counting(level, cat, rng),
        TaskKind::Selection => selection(level, cat, rng),
        TaskKind::MemoryDecode => memory_decode(level, cat, rng),
        TaskKind::Sorting => sorting(level, cat, rng),
        TaskKind::Filling | TaskKind::Puzzle | TaskKind::MemoryFilling => {
            filling(kind, level, cat, rng)
        }
        TaskKind::Placement => placement(level, cat, rng),
        TaskKind::Maze | TaskKind::DecodeMaze | TaskKind::MemoryMaze => maze(kind, level, cat, rng),
    }
}

fn classification(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Classification { copies, kinds, .. } =
        level_params(TaskKind::Classification, level)
    else {
        unreachable!()
    };
    let theme = pick_theme(cat, TaskKind::Classification, rng);
    let pool: Vec<_> = cat.all_items().collect();
    let chosen: Vec<_> = pool.choose_multiple(rng, kinds as usize).copied().collect();
    if chosen[0].1.name == chosen[1].1.name {
        return Err(Reject("item names collide across categories"));
    }
    let colors: Vec<&String> = cat.basket_colors.choose_multiple(rng, kinds as usize).collect();
    let mut scene = Scene::new();
    for (c, item) in &chosen {
        for _ in 0..copies {
            let cell = scene.take(rng)?;
            scene.add(item_kind(c, item), Location::Scene(cell), Reveal::Always, true);
        }
    }
    let mut assignment = Vec::new();
    let mut pairs = Vec::new();
    for ((_, item), color) in chosen.iter().zip(&colors) {
        let cell = scene.take(rng)?;
        let b = scene.add(
            EntityKind::Basket { color: (*color).clone() },
            Location::Scene(cell),
            Reveal::Always,
            true,
        );
        assignment.push((item.name.clone(), b));
        pairs.push((item.name.clone(), (*color).clone()));
    }
    let state = scene.finish(
        rng,
        TaskKind::Classification,
        level,
        &theme.name,
        None,
        Rules::Classification { assignment },
    )?;
    Ok(Sampled { theme: theme.name.clone(), goal: GoalSpec::Classification { pairs }, state })
}

/// Fewest piles whose counts sum to `target`, using at most four.
pub(super) fn min_subset(counts: &[u8], target: u8) -> Option<usize> {
    (0u32..1 << counts.len())
        .filter(|m| m.count_ones() <= 4)
        .filter(|m| {
            counts.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &c)| c as u32).sum::<u32>()
                == target as u32
        })
        .map(|m| m.count_ones() as usize)
        .min()
}

fn counting(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Counting { piles, target_min, target_max } =
        level_params(TaskKind::Counting, level)
    else {
        unreachable!()
    };
    let theme = pick_theme(cat, TaskKind::Counting, rng);
    let category = theme_category(cat, theme, rng)?;
    let item = category.items.choose(rng).unwrap();
    let counts: Vec<u8> = (0..piles).map(|_| rng.gen_range(1..=3)).collect();
    let target = rng.gen_range(target_min..=target_max);
    if min_subset(&counts, target).is_none() {
        return Err(Reject("target is not a subset sum"));
    }
    let mut scene = Scene::new();
    for &count in &counts {
        let cell = scene.take(rng)?;
        scene.add(
            EntityKind::Pile { item: item.name.clone(), count },
            Location::Scene(cell),
            Reveal::Always,
            true,
        );
    }
    let rules = Rules::Counting { item: item.name.clone(), plural: item.plural.clone(), target };
    let state = scene.finish(rng, TaskKind::Counting, level, &theme.name, None, rules)?;
    Ok(Sampled {
        theme: theme.name.clone(),
        goal: GoalSpec::Counting {
            target,
            singular: item.name.clone(),
            plural: item.plural.clone(),
        },
        state,
    })
}

fn selection(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Selection { targets, candidates } = level_params(TaskKind::Selection, level)
    else {
        unreachable!()
    };
    let theme = pick_theme(cat, TaskKind::Selection, rng);
    let category = theme_category(cat, theme, rng)?;
    let picked: Vec<&CatalogItem> =
        category.items.choose_multiple(rng, candidates as usize).collect();
    let mut scene = Scene::new();
    for (i, item) in picked[..targets as usize].iter().enumerate() {
        scene.hint(
            2 + 2 * i as u8,
            0,
            Reveal::PreStartOnly,
            HintContent::Item { name: item.name.clone(), category: category.name.clone() },
        );
    }
    let mut order = picked.clone();
    order.shuffle(rng);
    for item in order {
        let cell = scene.take(rng)?;
        scene.add(item_kind(category, item), Location::Scene(cell), Reveal::ActiveOnly, true);
    }
    let rules = Rules::Selection {
        targets: picked[..targets as usize].iter().map(|i| i.name.clone()).collect(),
        noun: category.singular.clone(),
    };
    let state = scene.finish(rng, TaskKind::Selection, level, &theme.name, None, rules)?;
    Ok(Sampled { theme: theme.name.clone(), goal: GoalSpec::Selection { count: targets }, state })
}

fn memory_decode(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::MemoryDecode { pairs, candidates } =
        level_params(TaskKind::MemoryDecode, level)
    else {
        unreachable!()
    };
    let n = pairs as usize;
    let theme = pick_theme(cat, TaskKind::MemoryDecode, rng);
    let from_cat = theme_category(cat, theme, rng)?;
    let to_cat = theme_category(cat, theme, rng)?;
    let from: Vec<&CatalogItem> = from_cat.items.choose_multiple(rng, n).collect();
    let to_pool: Vec<&CatalogItem> = to_cat
        .items
        .iter()
        .filter(|i| !(from_cat.name == to_cat.name && from.iter().any(|f| f.name == i.name)))
        .collect();
    let to: Vec<&CatalogItem> = to_pool.choose_multiple(rng, candidates as usize).copied().collect();
    if to.len() < candidates as usize {
        return Err(Reject("not enough candidate items"));
    }
    let mut scene = Scene::new();
    for i in 0..n {
        scene.hint(
            2 + 2 * i as u8,
            0,
            Reveal::PreStartOnly,
            HintContent::Pair {
                from: from[i].name.clone(),
                from_category: from_cat.name.clone(),
                to: to[i].name.clone(),
                to_category: to_cat.name.clone(),
            },
        );
    }
    let target = rng.gen_range(0..n);
    scene.hint(
        0,
        0,
        Reveal::ActiveOnly,
        HintContent::TargetBox { name: from[target].name.clone(), category: from_cat.name.clone() },
    );
    let mut ids = Vec::new();
    for item in &to {
        let cell = scene.take(rng)?;
        ids.push(scene.add(item_kind(to_cat, item), Location::Scene(cell), Reveal::ActiveOnly, true));
    }
    let rules = Rules::MemoryDecode { answer: ids[target] };
    let state = scene.finish(rng, TaskKind::MemoryDecode, level, &theme.name, None, rules)?;
    Ok(Sampled { theme: theme.name.clone(), goal: GoalSpec::MemoryDecode, state })
}

/// Value of an animal on a known axis in integer units (grams, millimetres).
pub fn known_value(item: &CatalogItem, axis: KnownAxis) -> u64 {
    let v = match axis {
        KnownAxis::Weight => item.weight_kg.unwrap_or(0.0) * 1000.0,
        KnownAxis::Height => item.height_cm.unwrap_or(0.0) * 10.0,
    };
    v.round() as u64
}

/// Row of positions centred in the play area on play row 2.
fn position_row(scene: &mut Scene, count: u8) {
    let start = (5 - count) / 2;
    for i in 0..count {
        let cell = scene.geometry.play_cell(2, start + i);
        scene.reserve(cell);
        scene.positions.push(GridPosition { numeral: i + 1, cell, occupant: None });
    }
}

fn sorting(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Sorting { animals } = level_params(TaskKind::Sorting, level) else {
        unreachable!()
    };
    let theme = pick_theme(cat, TaskKind::Sorting, rng);
    let category = cat.category("animals").expect("validated");
    let rule = SortRule {
        known: if rng.gen() { KnownAxis::Weight } else { KnownAxis::Height },
        known_more: rng.gen(),
        ranked: if rng.gen() { RankedAxis::Speed } else { RankedAxis::Strength },
        ranked_more: rng.gen(),
        high_first: rng.gen(),
    };
    let picked: Vec<&CatalogItem> = category.items.choose_multiple(rng, animals as usize).collect();
    let values: Vec<u64> = picked.iter().map(|i| known_value(i, rule.known)).collect();
    if values.iter().collect::<HashSet<_>>().len() != values.len() {
        return Err(Reject("tied animal values"));
    }
    let mut scene = Scene::new();
    scene.backpack.compact = true;
    let ids: Vec<EntityId> = picked.iter().map(|i| scene.stock(item_kind(category, i))).collect();
    position_row(&mut scene, animals);
    let mut ranked: Vec<(f64, EntityId, u64)> = ids
        .iter()
        .zip(&values)
        .map(|(&id, &v)| (rule.ranked_score(v as f64), id, v))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    if rule.high_first {
        ranked.reverse();
    }
    let rules = Rules::Sorting {
        order: ranked.iter().map(|r| r.1).collect(),
        known: ranked.iter().map(|r| r.2).collect(),
    };
    let state = scene.finish(rng, TaskKind::Sorting, level, &theme.name, None, rules)?;
    Ok(Sampled {
        theme: theme.name.clone(),
        goal: GoalSpec::Sorting { rule, positions: animals },
        state,
    })
}

fn filling(kind: TaskKind, level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Filling { missing, pieces } = level_params(kind, level) else {
        unreachable!()
    };
    let theme = pick_theme(cat, kind, rng);
    let source = if kind == TaskKind::Puzzle {
        PictureSource::Blocks(rng.gen())
    } else {
        let animals = cat.category("animals").expect("validated");
        PictureSource::Animal(animals.items.choose(rng).unwrap().name.clone())
    };
    let picture = Picture { source, tint: None };
    let mut quads: Vec<u8> = (0..4).collect();
    quads.shuffle(rng);
    let mut gaps = quads[..missing as usize].to_vec();
    gaps.sort_unstable();
    let mut scene = Scene::new();
    scene.backpack.compact = true;
    let quad_cell = |g: &GridGeometry, q: u8| g.play_cell(1 + q / 2, 1 + q % 2);
    for q in 0..4u8 {
        let cell = quad_cell(&scene.geometry, q);
        scene.reserve(cell);
        if !gaps.contains(&q) {
            let art = PieceArt { picture: picture.clone(), quadrant: q };
            scene.add(EntityKind::Piece { art }, Location::Scene(cell), Reveal::Always, false);
        }
    }
    let expected: Vec<PieceArt> =
        gaps.iter().map(|&q| PieceArt { picture: picture.clone(), quadrant: q }).collect();
    for (i, &q) in gaps.iter().enumerate() {
        let cell = quad_cell(&scene.geometry, q);
        scene.positions.push(GridPosition { numeral: i as u8 + 1, cell, occupant: None });
    }
    let mut decoys: Vec<PieceArt> = (0..4u8)
        .filter(|q| !gaps.contains(q))
        .map(|q| PieceArt { picture: picture.clone(), quadrant: q })
        .collect();
    for color in cat.key_colors.iter() {
        for &q in &gaps {
            let tinted = Picture { tint: Some(color.clone()), ..picture.clone() };
            decoys.push(PieceArt { picture: tinted, quadrant: q });
        }
    }
    // Decoys must also differ on screen: quadrant swaps can coincide with a
    // gap quadrant when the picture has repeated blocks.
    let tiles = crate::render::Tileset::shipped();
    let mut seen: HashSet<crate::render::Sprite> = HashSet::new();
    for art in &expected {
        if !seen.insert(tiles.piece(art)) {
            return Err(Reject("gap quadrants look alike"));
        }
    }
    decoys.retain(|art| seen.insert(tiles.piece(art)));
    if decoys.len() < (pieces - missing) as usize {
        return Err(Reject("too few distinct decoys"));
    }
    let mut stock: Vec<PieceArt> = expected.clone();
    stock.extend(decoys.choose_multiple(rng, (pieces - missing) as usize).cloned());
    stock.shuffle(rng);
    for art in stock {
        scene.stock(EntityKind::Piece { art });
    }
    let reveal = if kind.is_memory() { Reveal::PreStartOnly } else { Reveal::Always };
    scene.hint(0, 0, reveal, HintContent::Picture { picture });
    let state = scene.finish(rng, kind, level, &theme.name, None, Rules::Filling { expected })?;
    let goal = if kind.is_memory() { GoalSpec::MemoryFilling } else { GoalSpec::Filling };
    Ok(Sampled { theme: theme.name.clone(), goal, state })
}

fn placement(level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let LevelParams::Placement { positions, rotate } = level_params(TaskKind::Placement, level)
    else {
        unreachable!()
    };
    let theme = pick_theme(cat, TaskKind::Placement, rng);
    let c1 = theme_category(cat, theme, rng)?;
    let c2 = theme_category(cat, theme, rng)?;
    let item = c1.items.choose(rng).unwrap();
    let anchor = c2.items.choose(rng).unwrap();
    if item.name == anchor.name {
        return Err(Reject("placed item equals anchor"));
    }
    let dirs: &[Direction] =
        if positions == 4 { &Direction::ORTHOGONAL } else { &Direction::RING };
    let mut scene = Scene::new();
    scene.backpack.compact = true;
    scene.stock(item_kind(c1, item));
    let (ar, ac) = (rng.gen_range(1..=3u8), rng.gen_range(1..=3u8));
    let anchor_cell = scene.geometry.play_cell(ar, ac);
    scene.reserve(anchor_cell);
    scene.add(item_kind(c2, anchor), Location::Scene(anchor_cell), Reveal::Always, false);
    let mut numerals: Vec<u8> = (1..=positions).collect();
    numerals.shuffle(rng);
    for (d, numeral) in dirs.iter().zip(numerals) {
        let (dr, dc) = d.offset();
        let cell =
            scene.geometry.play_cell((ar as i8 + dr) as u8, (ac as i8 + dc) as u8);
        scene.reserve(cell);
        scene.positions.push(GridPosition { numeral, cell, occupant: None });
    }
    let given = *dirs.choose(rng).unwrap();
    let rotation = rotate.then(|| {
        if rng.gen() {
            Rotation::Clockwise
        } else {
            Rotation::Counterclockwise
        }
    });
    let target = match rotation {
        Some(r) => given.opposite().turn(r),
        None => given.opposite(),
    };
    let correct = dirs.iter().position(|&d| d == target).expect("target in ring") as u8;
    let rules = Rules::Placement { item: item.name.clone(), correct };
    let state = scene.finish(rng, TaskKind::Placement, level, &theme.name, None, rules)?;
    Ok(Sampled {
        theme: theme.name.clone(),
        goal: GoalSpec::Placement {
            given,
            item: item.name.clone(),
            anchor: anchor.name.clone(),
            rotation,
        },
        state,
    })
}

/// Maze template in 5x5 play coordinates: walls, doors in path order, and
/// one seed cell per room (room `i` lies before door `i`).
pub(super) struct MazeTemplate {
    pub walls: Vec<(u8, u8)>,
    pub doors: Vec<(u8, u8)>,
    pub rooms: Vec<(u8, u8)>,
}

pub(super) fn maze_template(level: Level, rng: &mut ChaCha8Rng) -> MazeTemplate {
    match level {
        Level::L1 => {
            let door_row = rng.gen_range(0..5u8);
            MazeTemplate {
                walls: (0..5).filter(|&r| r != door_row).map(|r| (r, 2)).collect(),
                doors: vec![(door_row, 2)],
                rooms: vec![(0, 0), (0, 4)],
            }
        }
        Level::L2 => MazeTemplate {
            walls: vec![(1, 2), (2, 0), (2, 1), (2, 2), (2, 4)],
            doors: vec![(0, 2), (2, 3)],
            rooms: vec![(0, 0), (0, 4), (4, 0)],
        },
        Level::L3 => MazeTemplate {
            walls: vec![(1, 2), (2, 0), (2, 1), (2, 2), (2, 4), (3, 2)],
            doors: vec![(0, 2), (2, 3), (4, 2)],
            rooms: vec![(0, 0), (0, 4), (4, 4), (4, 0)],
        },
    }
}

/// One of the eight symmetries of the 5x5 square.
pub(super) fn dihedral(t: u8, (r, c): (u8, u8)) -> (u8, u8) {
    let (r2, c2) = if t & 4 != 0 { (r, 4 - c) } else { (r, c) };
    match t & 3 {
        0 => (r2, c2),
        1 => (c2, 4 - r2),
        2 => (4 - r2, 4 - c2),
        _ => (4 - c2, r2),
    }
}

/// Cells of the room containing `seed`, flood-filled around walls and doors.
fn room_cells(seed: (u8, u8), blocked: &HashSet<(u8, u8)>) -> Vec<(u8, u8)> {
    let mut seen = vec![seed];
    let mut i = 0;
    while i < seen.len() {
        let (r, c) = seen[i];
        i += 1;
        let steps = [(-1i8, 0i8), (1, 0), (0, -1), (0, 1)];
        for (dr, dc) in steps {
            let (nr, nc) = (r as i8 + dr, c as i8 + dc);
            if !(0..5).contains(&nr) || !(0..5).contains(&nc) {
                continue;
            }
            let n = (nr as u8, nc as u8);
            if !blocked.contains(&n) && !seen.contains(&n) {
                seen.push(n);
            }
        }
    }
    seen
}

fn maze(kind: TaskKind, level: Level, cat: &Catalog, rng: &mut ChaCha8Rng) -> Draw<Sampled> {
    let n = level.number() as usize;
    let theme = pick_theme(cat, kind, rng);
    let t = rng.gen_range(0..8u8);
    let tpl = maze_template(level, rng);
    let map = |p: (u8, u8)| dihedral(t, p);
    let walls: Vec<(u8, u8)> = tpl.walls.iter().map(|&p| map(p)).collect();
    let doors: Vec<(u8, u8)> = tpl.doors.iter().map(|&p| map(p)).collect();
    let blocked: HashSet<(u8, u8)> = walls.iter().chain(&doors).copied().collect();
    let mut scene = Scene::new();
    let g = scene.geometry;
    let rooms: Vec<Vec<Cell>> = tpl
        .rooms
        .iter()
        .map(|&s| room_cells(map(s), &blocked).into_iter().map(|(r, c)| g.play_cell(r, c)).collect())
        .collect();
    scene.walls = walls.iter().map(|&(r, c)| g.play_cell(r, c)).collect();
    for w in scene.walls.clone() {
        scene.reserve(w);
    }
    let colors: Vec<String> =
        cat.key_colors.choose_multiple(rng, 2 * n).cloned().collect();
    let door_colors = &colors[..n];
    let key_colors: Vec<String> = if kind == TaskKind::DecodeMaze {
        colors[n..].to_vec()
    } else {
        door_colors.to_vec()
    };
    let agent = scene.take_from(rng, &rooms[0])?;
    for (i, &(r, c)) in doors.iter().enumerate() {
        let cell = g.play_cell(r, c);
        scene.reserve(cell);
        scene.add(
            EntityKind::Door { color: door_colors[i].clone() },
            Location::Scene(cell),
            Reveal::Always,
            true,
        );
    }
    for (i, room) in rooms.iter().take(n).enumerate() {
        let cell = scene.take_from(rng, room)?;
        scene.add(
            EntityKind::Key { color: key_colors[i].clone() },
            Location::Scene(cell),
            Reveal::Always,
            true,
        );
        if kind == TaskKind::DecodeMaze {
            let cell = scene.take_from(rng, room)?;
            scene.add(
                EntityKind::Key { color: door_colors[i].clone() },
                Location::Scene(cell),
                Reveal::Always,
                true,
            );
        }
    }
    let cell = scene.take_from(rng, &rooms[n])?;
    scene.add(EntityKind::Diamond, Location::Scene(cell), Reveal::Always, true);
    if kind == TaskKind::MemoryMaze {
        let all: Vec<Cell> = rooms.iter().flatten().copied().collect();
        for _ in 0..2 {
            let cell = scene.take_from(rng, &all)?;
            scene.add(
                EntityKind::Chest { holds_diamond: false },
                Location::Scene(cell),
                Reveal::ActiveOnly,
                true,
            );
        }
    }
    let keys = if kind == TaskKind::DecodeMaze {
        for i in 0..n {
            scene.hint(
                2 + 2 * i as u8,
                0,
                Reveal::Always,
                HintContent::KeyDoor { key: key_colors[i].clone(), door: door_colors[i].clone() },
            );
        }
        KeyRule::Mapping {
            pairs: key_colors.iter().cloned().zip(door_colors.iter().cloned()).collect(),
        }
    } else {
        KeyRule::SameColor
    };
    let state = scene.finish(rng, kind, level, &theme.name, Some(agent), Rules::Maze { keys })?;
    let goal = match kind {
        TaskKind::Maze => GoalSpec::Maze,
        TaskKind::DecodeMaze => GoalSpec::DecodeMaze,
        _ => GoalSpec::MemoryMaze,
    };
    Ok(Sampled { theme: theme.name.clone(), goal, state })
}
