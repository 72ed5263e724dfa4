//! Shortest successful plans over the high-level action graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use super::rules::{apply_unchecked, available_actions, remaining_lower_bound};
use crate::world::{Action, StateKey, WorldState};

struct Node {
    state: WorldState,
    parent: Option<(usize, Action)>,
}

fn unwind(nodes: &[Node], mut i: usize) -> Vec<Action> {
    let mut plan = Vec::new();
    while let Some((p, a)) = &nodes[i].parent {
        plan.push(a.clone());
        i = *p;
    }
    plan.reverse();
    plan
}

/// Shortest plan from `initial` to success, or `None` when no plan exists.
///
/// Best-first search ordered by steps taken plus an admissible, consistent
/// lower bound on steps remaining, so the first success popped is optimal.
/// Ties go to the deeper node. States that already failed are pruned and
/// states are deduplicated on [`WorldState::canonical_key`].
pub fn solve(initial: &WorldState) -> Option<Vec<Action>> {
    if initial.status.is_success() {
        return Some(Vec::new());
    }
    let mut nodes = vec![Node { state: initial.clone(), parent: None }];
    let mut best: HashMap<StateKey, u32> = HashMap::from([(initial.canonical_key(), 0)]);
    let mut closed: HashSet<StateKey> = HashSet::new();
    let mut heap = BinaryHeap::new();
    let h0 = remaining_lower_bound(initial);
    heap.push((Reverse(h0), 0u32, Reverse(0usize)));
    while let Some((_, g, Reverse(i))) = heap.pop() {
        let key = nodes[i].state.canonical_key();
        if !closed.insert(key) {
            continue;
        }
        if nodes[i].state.status.is_success() {
            return Some(unwind(&nodes, i));
        }
        for action in available_actions(&nodes[i].state) {
            let next = apply_unchecked(&nodes[i].state, &action);
            if next.status.is_failure() {
                continue;
            }
            let k = next.canonical_key();
            let g2 = g + 1;
            if closed.contains(&k) || best.get(&k).is_some_and(|&b| b <= g2) {
                continue;
            }
            best.insert(k, g2);
            let f = g2 + remaining_lower_bound(&next);
            let j = nodes.len();
            nodes.push(Node { state: next, parent: Some((i, action)) });
            heap.push((Reverse(f), g2, Reverse(j)));
        }
    }
    None
}

/// Plain breadth-first search. Slower than [`solve`] on wide tasks; kept as
/// a second route to the same optimum.
pub fn solve_bfs(initial: &WorldState) -> Option<Vec<Action>> {
    if initial.status.is_success() {
        return Some(Vec::new());
    }
    let mut nodes = vec![Node { state: initial.clone(), parent: None }];
    let mut seen = HashSet::from([initial.canonical_key()]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for action in available_actions(&nodes[i].state) {
            let next = apply_unchecked(&nodes[i].state, &action);
            if next.status.is_failure() || !seen.insert(next.canonical_key()) {
                continue;
            }
            let done = next.status.is_success();
            nodes.push(Node { state: next, parent: Some((i, action)) });
            if done {
                return Some(unwind(&nodes, nodes.len() - 1));
            }
            queue.push_back(nodes.len() - 1);
        }
    }
    None
}
