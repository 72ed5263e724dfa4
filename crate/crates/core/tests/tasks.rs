use kidgym_core::procgen::{check_solvable, sample_instance, TaskInstance};
use kidgym_core::tasks::*;
use kidgym_core::world::*;

fn inst(kind: TaskKind, level: Level, seed: u64) -> TaskInstance {
    sample_instance(kind, level, seed).unwrap()
}

fn play(state: &WorldState, plan: &[Action]) -> WorldState {
    plan.iter().fold(state.clone(), |s, a| apply_action(&s, a).unwrap())
}

/// Plain iterative deepening over `available_actions`; shares nothing with
/// the solver but the transition function.
fn iddfs_min(initial: &WorldState, cap: usize) -> Option<usize> {
    fn dfs(s: &WorldState, depth: usize) -> bool {
        if s.status.is_success() {
            return true;
        }
        if depth == 0 || s.is_terminal() {
            return false;
        }
        available_actions(s).iter().any(|a| dfs(&apply_action(s, a).unwrap(), depth - 1))
    }
    (0..=cap).find(|&d| dfs(initial, d))
}

#[test]
fn classification_goal_text() {
    let goal = GoalSpec::Classification {
        pairs: vec![("strawberry".into(), "red".into()), ("orange".into(), "yellow".into())],
    };
    assert_eq!(goal.text(), "Place strawberry in red basket and orange in yellow basket respectively.");
    let re = regex::Regex::new(r"^Place [a-z ]+ in [a-z]+ basket and [a-z ]+ in [a-z]+ basket respectively\.$").unwrap();
    for seed in 0..50 {
        let i = inst(TaskKind::Classification, Level::L1, seed);
        assert!(re.is_match(&goal_text(&i)), "{}", goal_text(&i));
    }
}

#[test]
fn other_goal_texts() {
    for seed in 0..20 {
        let co = inst(TaskKind::Counting, Level::L2, seed);
        assert!(co.goal_text().contains("no more and no less"));
        let so = inst(TaskKind::Sorting, Level::L1, seed);
        let text = so.goal_text();
        assert!(text.starts_with("The "), "{text}");
        assert!(text.contains(". Rank the animal in the backpack from "), "{text}");
        assert!(text.ends_with(" in position I, II"), "{text}");
        for kind in [TaskKind::Selection, TaskKind::MemoryDecode, TaskKind::MemoryFilling] {
            let g = inst(kind, Level::L1, seed).goal_text();
            assert!(g.contains("'continue'"), "{kind}: {g}");
        }
    }
    let pl = inst(TaskKind::Placement, Level::L3, 3).goal_text();
    assert!(pl.contains("Then turn one grid "), "{pl}");
    let so = GoalSpec::Sorting {
        rule: SortRule {
            known: KnownAxis::Weight,
            known_more: false,
            ranked: RankedAxis::Speed,
            ranked_more: true,
            high_first: true,
        },
        positions: 2,
    };
    assert_eq!(
        so.text(),
        "The lighter the animal is, the faster it is. Rank the animal in the backpack from fast to slow by speed in position I, II"
    );
}

#[test]
fn fresh_episode_is_ongoing() {
    for kind in TaskKind::ALL {
        for level in Level::ALL {
            let i = inst(kind, level, 11);
            assert_eq!(step_outcome(&i, &i.initial), Status::Ongoing, "{kind} {level}");
        }
    }
}

#[test]
fn budget_exhaustion_depends_on_mode() {
    let i = inst(TaskKind::Classification, Level::L1, 4);
    let mut s = i.initial.clone();
    s.step_index = i.witness.len() as u32;
    assert_eq!(step_outcome(&i, &s), Status::Failure(FailureReason::StepBudgetExhausted));
    assert_eq!(step_outcome_with(&i, &s, BudgetMode::Relaxed), Status::Ongoing);
    s.step_index = 2 * i.witness.len() as u32;
    assert!(step_outcome_with(&i, &s, BudgetMode::Relaxed).is_failure());
    assert_eq!(BudgetMode::Strict.budget(5), 5);
    assert_eq!(BudgetMode::Relaxed.budget(5), 10);
}

#[test]
fn fixed_plan_lengths() {
    for seed in 0..40 {
        assert_eq!(inst(TaskKind::Classification, Level::L1, seed).witness.len(), 4);
        let ma = inst(TaskKind::Maze, Level::L1, seed);
        let verbs: Vec<Verb> = ma.witness.iter().map(|a| a.verb).collect();
        assert_eq!(verbs, [Verb::Obtain, Verb::Unlock, Verb::Obtain]);
        let end = play(&ma.initial, &ma.witness);
        assert!(end.status.is_success());
        let mma = inst(TaskKind::MemoryMaze, Level::L1, seed);
        assert_eq!(mma.witness.len(), 4);
        assert_eq!(mma.witness[0].verb, Verb::Continue);
    }
}

#[test]
fn maze_l3_needs_three_doors() {
    for seed in 0..1000 {
        let i = inst(TaskKind::Maze, Level::L3, seed);
        assert_eq!(i.witness.len(), 7, "seed {seed}");
        assert_eq!(i.witness.iter().filter(|a| a.verb == Verb::Unlock).count(), 3);
    }
}

#[test]
fn every_cell_replays_to_success() {
    for kind in TaskKind::ALL {
        for level in Level::ALL {
            for seed in 0..25 {
                let i = inst(kind, level, seed);
                let end = play(&i.initial, &i.witness);
                assert!(end.status.is_success(), "{kind} {level} seed {seed}");
                if let Some(n) = expected_plan_len(kind, level) {
                    assert_eq!(i.witness.len(), n);
                }
                let plan = optimal_plan(&i).unwrap();
                assert_eq!(plan.len(), i.witness.len());
            }
        }
    }
}

#[test]
fn astar_agrees_with_breadth_first() {
    for kind in TaskKind::ALL {
        for level in [Level::L1, Level::L2] {
            for seed in 0..8 {
                let i = inst(kind, level, seed);
                let bfs = solve_bfs(&i.initial).unwrap();
                assert_eq!(bfs.len(), solve(&i.initial).unwrap().len(), "{kind} {level} seed {seed}");
            }
        }
    }
}

#[test]
fn level_one_witnesses_are_minimal() {
    for kind in TaskKind::ALL {
        for seed in 0..30 {
            let i = inst(kind, Level::L1, seed);
            let n = i.witness.len();
            assert_eq!(iddfs_min(&i.initial, n), Some(n), "{kind} seed {seed}");
        }
    }
}

#[test]
fn counting_overshoot_fails_on_the_pick() {
    let mut found = false;
    for seed in 0..5000 {
        let i = inst(TaskKind::Counting, Level::L2, seed);
        let Rules::Counting { target: 3, .. } = i.initial.rules else { continue };
        let twos: Vec<u8> = i
            .initial
            .entities
            .iter()
            .filter(|e| matches!(e.kind, EntityKind::Pile { count: 2, .. }))
            .filter_map(|e| e.label)
            .collect();
        if twos.len() < 2 {
            continue;
        }
        let pick = |s: &WorldState, l: u8| {
            let a = available_actions(s)
                .into_iter()
                .find(|a| a.verb == Verb::PickUp && a.subject == Some(Operand::Label(l)))
                .unwrap();
            apply_action(s, &a).unwrap()
        };
        let s = pick(&i.initial, twos[0]);
        assert_eq!(s.status, Status::Ongoing);
        let s = pick(&s, twos[1]);
        assert_eq!(s.status, Status::Failure(FailureReason::Overshoot));
        assert!(available_actions(&s).is_empty());
        found = true;
        break;
    }
    assert!(found, "no target-3 layout with two 2-piles");
}

#[test]
fn counting_declare_short_is_wrong() {
    let i = inst(TaskKind::Counting, Level::L1, 2);
    let declare = available_actions(&i.initial).into_iter().find(|a| a.verb == Verb::DeclareDone).unwrap();
    let s = apply_action(&i.initial, &declare).unwrap();
    assert_eq!(s.status, Status::Failure(FailureReason::WrongTerminalChoice));
}

#[test]
fn opposite_is_an_involution() {
    for d in Direction::RING {
        assert_eq!(d.opposite().opposite(), d);
        assert_ne!(d.opposite(), d);
        assert_eq!(d.turn(Rotation::Clockwise).turn(Rotation::Counterclockwise), d);
        let (r, c) = d.offset();
        assert_eq!(d.opposite().offset(), (-r, -c));
    }
    for d in Direction::ORTHOGONAL {
        assert!(Direction::ORTHOGONAL.contains(&d.opposite()));
    }
    assert_eq!(Direction::North.turn(Rotation::Clockwise), Direction::Northeast);
}

#[test]
fn sorting_order_is_strict() {
    for level in Level::ALL {
        for seed in 0..100 {
            let i = inst(TaskKind::Sorting, level, seed);
            let (Rules::Sorting { order, known }, GoalSpec::Sorting { rule, .. }) = (&i.initial.rules, &i.goal)
            else {
                panic!("sorting instance without sorting rules")
            };
            assert_eq!(order.len(), known.len());
            let scores: Vec<f64> = known.iter().map(|&v| rule.ranked_score(v as f64)).collect();
            for w in scores.windows(2) {
                if rule.high_first {
                    assert!(w[0] > w[1], "{level} seed {seed}");
                } else {
                    assert!(w[0] < w[1], "{level} seed {seed}");
                }
            }
        }
    }
}

#[test]
fn wrong_placement_fails_immediately() {
    let i = inst(TaskKind::Sorting, Level::L2, 9);
    let right = &i.witness[0];
    let wrong = available_actions(&i.initial)
        .into_iter()
        .find(|a| a.subject == right.subject && a.object != right.object)
        .unwrap();
    let s = apply_action(&i.initial, &wrong).unwrap();
    assert_eq!(s.status, Status::Failure(FailureReason::WrongTerminalChoice));
}

#[test]
fn key_behind_its_own_door_is_unsolvable() {
    let mut i = inst(TaskKind::Maze, Level::L1, 5);
    let reach = i.initial.reachable_cells();
    let occupied: Vec<Cell> = i.initial.entities.iter().filter_map(|e| e.cell()).collect();
    let play = i.initial.geometry.play_region();
    let behind = play
        .cells()
        .find(|c| !reach.contains(c) && !occupied.contains(c) && !i.initial.walls.contains(c))
        .expect("a free cell past the door");
    let key = i.initial.entities.iter().position(|e| matches!(e.kind, EntityKind::Key { .. })).unwrap();
    i.initial.entities[key].location = Location::Scene(behind);
    assert!(check_solvable(&i).is_none());
    assert!(solve_bfs(&i.initial).is_none());
}

#[test]
fn labels_are_dense() {
    for kind in TaskKind::ALL {
        for level in Level::ALL {
            let i = inst(kind, level, 21);
            let mut labels: Vec<u8> = i.initial.entities.iter().filter_map(|e| e.label).collect();
            labels.sort();
            assert_eq!(labels, (0..labels.len() as u8).collect::<Vec<_>>(), "{kind} {level}");
            let play = i.initial.geometry.play_region();
            for e in i.initial.entities.iter().filter(|e| e.label.is_some()) {
                if let Some(c) = e.cell() {
                    assert!(play.contains(c), "{kind} {level}: label {:?} at {c:?}", e.label);
                }
            }
        }
    }
}

#[test]
fn codes_round_trip() {
    for kind in TaskKind::ALL {
        assert_eq!(kind.code().parse::<TaskKind>().unwrap(), kind);
    }
    assert!("XX".parse::<TaskKind>().is_err());
    for level in Level::ALL {
        assert_eq!(level.to_string().parse::<Level>().unwrap(), level);
    }
}
