//! Per-task transition rules: which actions are listed and what they do.

use super::TaskKind;
use crate::world::*;

fn slot_letter(slot: u8) -> char {
    SLOT_LETTERS[slot as usize]
}

fn continue_action() -> Action {
    Action::new(Verb::Continue, None, None, "continue".into())
}

/// Every currently executable action in canonical order. Terminal states
/// have none; a state waiting for `continue` has only that.
pub fn available_actions(state: &WorldState) -> Vec<Action> {
    let mut out = match state.phase {
        Phase::Terminal => return Vec::new(),
        Phase::AwaitingContinue => return vec![continue_action()],
        Phase::Active => active_actions(state),
    };
    canonical_sort(&mut out);
    out
}

/// Like [`available_actions`] but refuses terminal states.
pub fn generate_actions(state: &WorldState) -> Result<Vec<Action>, WorldError> {
    if state.is_terminal() {
        return Err(WorldError::EpisodeFinished);
    }
    Ok(available_actions(state))
}

fn labelled<'a>(state: &'a WorldState) -> impl Iterator<Item = (u8, &'a Entity)> {
    state.scene_entities().filter_map(|e| e.label.map(|l| (l, e)))
}

fn placements(state: &WorldState, out: &mut Vec<Action>, text: impl Fn(u8, usize) -> String) {
    for (slot, _) in state.backpack.occupied() {
        for (i, p) in state.positions.iter().enumerate() {
            if p.occupant.is_none() {
                out.push(Action::new(
                    Verb::PlaceAt,
                    Some(Operand::Slot(slot)),
                    Some(Operand::Position(i as u8)),
                    text(slot, i),
                ));
            }
        }
    }
}

fn active_actions(state: &WorldState) -> Vec<Action> {
    let mut out = Vec::new();
    let free = state.backpack.first_free().is_some();
    match state.kind {
        TaskKind::Classification => {
            for (l, e) in labelled(state) {
                if free && matches!(e.kind, EntityKind::Item { .. }) {
                    out.push(Action::new(
                        Verb::PickUp,
                        Some(Operand::Label(l)),
                        None,
                        format!("pick up item with label {l}"),
                    ));
                }
            }
            for (slot, _) in state.backpack.occupied() {
                for (l, e) in labelled(state) {
                    if matches!(e.kind, EntityKind::Basket { .. }) {
                        out.push(Action::new(
                            Verb::PutInto,
                            Some(Operand::Slot(slot)),
                            Some(Operand::Label(l)),
                            format!(
                                "put the item from backpack {} into the basket with label {l}",
                                slot_letter(slot)
                            ),
                        ));
                    }
                }
            }
        }
        TaskKind::Counting => {
            let Rules::Counting { plural, target, item } = &state.rules else {
                unreachable!("counting state without counting rules")
            };
            for (l, e) in labelled(state) {
                if free && matches!(e.kind, EntityKind::Pile { .. }) {
                    out.push(Action::new(
                        Verb::PickUp,
                        Some(Operand::Label(l)),
                        None,
                        format!("pick up {item} with label {l}"),
                    ));
                }
            }
            out.push(Action::new(
                Verb::DeclareDone,
                None,
                None,
                format!("I have already collected {target} {}", count_noun(*target, item, plural)),
            ));
        }
        TaskKind::Selection | TaskKind::MemoryDecode => {
            let noun = match &state.rules {
                Rules::Selection { noun, .. } => noun.as_str(),
                _ => "item",
            };
            for (l, e) in labelled(state) {
                if matches!(e.kind, EntityKind::Item { .. }) {
                    out.push(Action::new(
                        Verb::Choose,
                        Some(Operand::Label(l)),
                        None,
                        format!("choose {noun} with label {l}"),
                    ));
                }
            }
        }
        TaskKind::Sorting => placements(state, &mut out, |s, i| {
            format!(
                "place animal from backpack {} into the grid at position {}",
                slot_letter(s),
                roman(state.positions[i].numeral)
            )
        }),
        TaskKind::Filling | TaskKind::Puzzle => placements(state, &mut out, |s, i| {
            format!(
                "place the piece from backpack {} into the grid at position {}",
                slot_letter(s),
                roman(state.positions[i].numeral)
            )
        }),
        TaskKind::MemoryFilling => placements(state, &mut out, |s, i| {
            format!(
                "place piece from backpack {} into the grid at position {}",
                slot_letter(s),
                roman(state.positions[i].numeral)
            )
        }),
        TaskKind::Placement => {
            let Rules::Placement { item, .. } = &state.rules else {
                unreachable!("placement state without placement rules")
            };
            placements(state, &mut out, |_, i| {
                format!(
                    "place {item} into the grid at position {}",
                    roman(state.positions[i].numeral)
                )
            })
        }
        TaskKind::Maze | TaskKind::DecodeMaze | TaskKind::MemoryMaze => {
            for (l, e) in labelled(state) {
                let listed = match e.kind {
                    EntityKind::Key { .. } => free,
                    EntityKind::Diamond | EntityKind::Chest { .. } => true,
                    _ => false,
                };
                if listed {
                    out.push(Action::new(
                        Verb::Obtain,
                        Some(Operand::Label(l)),
                        None,
                        format!("obtain item with label {l}"),
                    ));
                }
            }
            for (slot, id) in state.backpack.occupied() {
                if !matches!(state.entity(id).kind, EntityKind::Key { .. }) {
                    continue;
                }
                for (l, e) in labelled(state) {
                    if matches!(e.kind, EntityKind::Door { .. }) {
                        out.push(Action::new(
                            Verb::Unlock,
                            Some(Operand::Slot(slot)),
                            Some(Operand::Label(l)),
                            format!(
                                "use the key in backpack {} to unlock door with label {l}",
                                slot_letter(slot)
                            ),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// `3 pizzas`, `1 egg`.
pub fn count_noun<'a>(n: u8, singular: &'a str, plural: &'a str) -> &'a str {
    if n == 1 {
        singular
    } else {
        plural
    }
}

/// Applies a listed action and returns the successor state. Anything not in
/// [`available_actions`] is rejected and the input state is left unchanged.
pub fn apply_action(state: &WorldState, action: &Action) -> Result<WorldState, WorldError> {
    if !available_actions(state).contains(action) {
        return Err(WorldError::RejectedAction(action.text.clone()));
    }
    Ok(apply_unchecked(state, action))
}

fn label_id(state: &WorldState, op: Option<Operand>) -> EntityId {
    match op {
        Some(Operand::Label(l)) => state.by_label(l).expect("listed label exists").id,
        other => panic!("expected a label operand, got {other:?}"),
    }
}

fn slot_of(op: Option<Operand>) -> u8 {
    match op {
        Some(Operand::Slot(s)) => s,
        other => panic!("expected a slot operand, got {other:?}"),
    }
}

fn position_of(op: Option<Operand>) -> u8 {
    match op {
        Some(Operand::Position(p)) => p,
        other => panic!("expected a position operand, got {other:?}"),
    }
}

fn store(state: &mut WorldState, id: EntityId) {
    let slot = state.backpack.first_free().expect("listed pick-up has a free slot");
    state.backpack.slots[slot as usize] = Some(id);
    state.entity_mut(id).location = Location::Backpack(slot);
}

fn take(state: &mut WorldState, slot: u8) -> EntityId {
    let id = state.backpack.slots[slot as usize].take().expect("listed slot is occupied");
    if state.backpack.compact {
        let held: Vec<EntityId> = state.backpack.slots.iter().flatten().copied().collect();
        state.backpack.slots = [None; 4];
        for (i, h) in held.into_iter().enumerate() {
            state.backpack.slots[i] = Some(h);
            state.entity_mut(h).location = Location::Backpack(i as u8);
        }
    }
    id
}

fn fail(state: &mut WorldState, reason: FailureReason) {
    state.status = Status::Failure(reason);
}

/// Transition without the legality check. Callers must pass a listed action.
pub(crate) fn apply_unchecked(state: &WorldState, action: &Action) -> WorldState {
    let mut next = state.clone();
    next.step_index += 1;
    match action.verb {
        Verb::Continue => {
            next.phase = Phase::Active;
            for e in &mut next.entities {
                if e.kind == EntityKind::Diamond && next.kind == TaskKind::MemoryMaze {
                    e.kind = EntityKind::Chest { holds_diamond: true };
                }
            }
        }
        Verb::PickUp => {
            let id = label_id(&next, action.subject);
            store(&mut next, id);
            if let Rules::Counting { target, .. } = next.rules {
                if held_count(&next) > target as u32 {
                    fail(&mut next, FailureReason::Overshoot);
                }
            }
        }
        Verb::PutInto => {
            let basket = label_id(&next, action.object);
            let id = take(&mut next, slot_of(action.subject));
            next.entity_mut(id).location = Location::Inside(basket);
            let Rules::Classification { assignment } = &next.rules else {
                unreachable!("put-into outside classification")
            };
            let name = match &next.entity(id).kind {
                EntityKind::Item { name, .. } => name,
                _ => unreachable!("only items are carried in classification"),
            };
            let ok = assignment.iter().any(|(n, b)| n == name && *b == basket);
            if !ok {
                fail(&mut next, FailureReason::WrongTerminalChoice);
            }
        }
        Verb::PlaceAt => {
            let pos = position_of(action.object);
            let id = take(&mut next, slot_of(action.subject));
            next.entity_mut(id).location = Location::AtPosition(pos);
            next.positions[pos as usize].occupant = Some(id);
            let ok = match &next.rules {
                Rules::Sorting { order, .. } => order[pos as usize] == id,
                Rules::Filling { expected } => match &next.entity(id).kind {
                    EntityKind::Piece { art } => *art == expected[pos as usize],
                    _ => false,
                },
                Rules::Placement { correct, .. } => *correct == pos,
                _ => false,
            };
            if !ok {
                fail(&mut next, FailureReason::WrongTerminalChoice);
            }
        }
        Verb::Choose => {
            let id = label_id(&next, action.subject);
            next.entity_mut(id).location = Location::Collected;
            let ok = match &next.rules {
                Rules::Selection { targets, .. } => match &next.entity(id).kind {
                    EntityKind::Item { name, .. } => targets.contains(name),
                    _ => false,
                },
                Rules::MemoryDecode { answer } => *answer == id,
                _ => false,
            };
            if !ok {
                fail(&mut next, FailureReason::WrongTerminalChoice);
            }
        }
        Verb::DeclareDone => {
            next.declared_done = true;
            if let Rules::Counting { target, .. } = next.rules {
                if held_count(&next) != target as u32 {
                    fail(&mut next, FailureReason::WrongTerminalChoice);
                }
            }
        }
        Verb::Obtain => {
            let id = label_id(&next, action.subject);
            let cell = next.entity(id).cell().expect("obtainable entities are in the scene");
            if next.reachable_cells().contains(&cell) {
                match next.entity(id).kind {
                    EntityKind::Key { .. } => store(&mut next, id),
                    EntityKind::Diamond => next.entity_mut(id).location = Location::Collected,
                    EntityKind::Chest { holds_diamond } => {
                        next.entity_mut(id).location = Location::Collected;
                        if !holds_diamond {
                            fail(&mut next, FailureReason::WrongTerminalChoice);
                        }
                    }
                    _ => unreachable!("obtain lists keys, diamonds and chests only"),
                }
            }
        }
        Verb::Unlock => {
            let slot = slot_of(action.subject);
            let door = label_id(&next, action.object);
            let key = next.backpack.slots[slot as usize].expect("listed slot holds a key");
            let (EntityKind::Key { color: kc }, EntityKind::Door { color: dc }) =
                (&next.entity(key).kind, &next.entity(door).kind)
            else {
                unreachable!("unlock pairs a key with a door")
            };
            let Rules::Maze { keys } = &next.rules else { unreachable!("unlock outside a maze") };
            let opens = keys.opens(kc, dc);
            let door_cell = next.entity(door).cell().unwrap();
            let reach = next.reachable_cells();
            let adjacent = door_cell
                .neighbours(next.geometry.total_rows, next.geometry.total_cols)
                .any(|n| reach.contains(&n));
            if opens && adjacent {
                take(&mut next, slot);
                next.entity_mut(key).location = Location::Consumed;
                next.entity_mut(door).location = Location::Consumed;
            }
        }
    }
    if next.status == Status::Ongoing && is_complete(&next) {
        next.status = Status::Success;
    }
    if next.status != Status::Ongoing {
        next.phase = Phase::Terminal;
    }
    next
}

/// Items collected so far in a counting episode.
pub fn held_count(state: &WorldState) -> u32 {
    state
        .backpack
        .occupied()
        .map(|(_, id)| match state.entity(id).kind {
            EntityKind::Pile { count, .. } => count as u32,
            _ => 0,
        })
        .sum()
}

fn is_complete(state: &WorldState) -> bool {
    match &state.rules {
        Rules::Classification { .. } => state
            .entities
            .iter()
            .filter(|e| matches!(e.kind, EntityKind::Item { .. }))
            .all(|e| matches!(e.location, Location::Inside(_))),
        Rules::Counting { target, .. } => {
            state.declared_done && held_count(state) == *target as u32
        }
        Rules::Selection { targets, .. } => state.entities.iter().all(|e| match &e.kind {
            EntityKind::Item { name, .. } if e.label.is_some() && targets.contains(name) => {
                e.location == Location::Collected
            }
            _ => true,
        }),
        Rules::MemoryDecode { answer } => state.entity(*answer).location == Location::Collected,
        Rules::Sorting { .. } | Rules::Filling { .. } => {
            state.positions.iter().all(|p| p.occupant.is_some())
        }
        Rules::Placement { .. } => state.positions.iter().any(|p| p.occupant.is_some()),
        Rules::Maze { .. } => state.entities.iter().any(|e| {
            e.location == Location::Collected
                && matches!(e.kind, EntityKind::Diamond | EntityKind::Chest { holds_diamond: true })
        }),
    }
}

/// A lower bound on the actions still needed; never overestimates and drops
/// by at most one per action.
pub(crate) fn remaining_lower_bound(state: &WorldState) -> u32 {
    if state.is_terminal() {
        return 0;
    }
    let start = u32::from(state.phase == Phase::AwaitingContinue);
    let rest = match &state.rules {
        Rules::Classification { .. } => state
            .entities
            .iter()
            .filter(|e| matches!(e.kind, EntityKind::Item { .. }))
            .map(|e| match e.location {
                Location::Scene(_) => 2,
                Location::Backpack(_) => 1,
                _ => 0,
            })
            .sum(),
        Rules::Selection { targets, .. } => state
            .entities
            .iter()
            .filter(|e| {
                e.in_scene()
                    && e.label.is_some()
                    && matches!(&e.kind, EntityKind::Item { name, .. } if targets.contains(name))
            })
            .count() as u32,
        Rules::Sorting { .. } | Rules::Filling { .. } => {
            state.positions.iter().filter(|p| p.occupant.is_none()).count() as u32
        }
        _ => 1,
    };
    start + rest
}
