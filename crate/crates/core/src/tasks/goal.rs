//! Goal templates with their bound parameters.

use serde::{Deserialize, Serialize};

use super::{Direction, Rotation, SortRule};
use crate::procgen::TaskInstance;

/// Template id plus parameters. Rendering is [`GoalSpec::text`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "snake_case")]
pub enum GoalSpec {
    Classification { pairs: Vec<(String, String)> },
    Counting { target: u8, singular: String, plural: String },
    Selection { count: u8 },
    MemoryDecode,
    Filling,
    MemoryFilling,
    Maze,
    DecodeMaze,
    MemoryMaze,
    Sorting { rule: SortRule, positions: u8 },
    Placement { given: Direction, item: String, anchor: String, rotation: Option<Rotation> },
}

pub fn goal_text(instance: &TaskInstance) -> String {
    instance.goal.text()
}

impl GoalSpec {
    pub fn text(&self) -> String {
        match self {
            GoalSpec::Classification { pairs } => {
                let parts: Vec<String> =
                    pairs.iter().map(|(item, color)| format!("{item} in {color} basket")).collect();
                let joined = match parts.len() {
                    0 | 1 => parts.concat(),
                    n => format!("{} and {}", parts[..n - 1].join(", "), parts[n - 1]),
                };
                format!("Place {joined} respectively.")
            }
            GoalSpec::Counting { target, singular, plural } => {
                let noun = super::count_noun(*target, singular, plural);
                format!(
                    "Collect {target} {noun}. Make sure you have gathered exactly this amount, no more \
                     and no less. You should be aware that there may be 1 to 3 items of different \
                     quantities in one grid. Once you have collected this number of {noun}, select \
                     the action: \"I have already collected {target} {noun}\"."
                )
            }
            GoalSpec::Selection { count } => {
                let (shown, recall) = if *count == 1 {
                    ("an item will be shown".to_string(), "the one")
                } else {
                    (format!("{count} items will be shown"), "the ones")
                };
                format!(
                    "In the first image, {shown} on the left margin that you need to remember. In the \
                     following images, several random items will be generated in the scene, and you \
                     need to select {recall} you recall. If you understand the rules, select the \
                     'continue' action to start the task."
                )
            }
            GoalSpec::MemoryDecode => "In the first image, arrow-connected items with one-to-one \
                correspondence(s) will be shown on the left margin that you need to remember. In the \
                following images, the correspondence(s) will not be shown, and a target item will be \
                generated in the black box in the upper left corner. You need to select the correct \
                corresponding item for the target based on the pairing you remembered in the first \
                image. If you understand the rules, choose 'continue' to begin the task."
                .into(),
            GoalSpec::Filling => "There is a target item shown on the left margin. You need to fill \
                the correct piece(s) from the backpack to complete the missing part(s) of the frame in \
                the scene, ensuring they match and align with the target item."
                .into(),
            GoalSpec::MemoryFilling => "In the first image, a target item will be shown on the left \
                margin that you need to remember. In the following images, the target item will not \
                be shown. You need to fill the correct piece(s) from the backpack to complete the \
                missing part(s) of the frame in the scene, ensuring they match and align with the \
                target item. If you understand the rules, choose 'continue' to begin the task."
                .into(),
            GoalSpec::Maze => "There is a diamond shown in the scene, and you need to obtain the \
                diamond. When your path is blocked by a door, you can use a key of the same color to \
                unlock it. Note: You must pick up the key first before you can use it to unlock doors."
                .into(),
            GoalSpec::DecodeMaze => "There is a diamond in the scene, and your goal is to obtain it. \
                Some paths are blocked by doors, and the key required to unlock each door color is \
                shown in the left hint panel. You must consult the hint panel and use the specified \
                key to open the corresponding door."
                .into(),
            GoalSpec::MemoryMaze => "In the first image, a diamond will be shown in the scene that \
                you need to remember its location. In the following images, the diamond will not be \
                shown and several treasure boxes will be generated in the scene. You must choose to \
                open the treasure box located at the diamond's original position to obtain the \
                diamond. When your path is blocked by a door, you can use a key of the same color to \
                unlock it. Note: You must obtain the key before you can use it to unlock doors. If you \
                understand the rules, choose 'continue' to begin the task."
                .into(),
            GoalSpec::Sorting { rule, positions } => {
                let numerals: Vec<&str> =
                    (1..=*positions).map(crate::world::roman).collect();
                format!(
                    "{}. Rank the animal in the backpack {} by {} in position {}",
                    rule.sentence(),
                    rule.ranking_phrase(),
                    rule.property(),
                    numerals.join(", ")
                )
            }
            GoalSpec::Placement { given, item, anchor, rotation } => {
                let mut s = format!(
                    "A direction will be provided: {}. Determine its opposite direction, and then \
                     place {item} in the corresponding location around {anchor}.",
                    given.word()
                );
                if let Some(r) = rotation {
                    s.push_str(&format!(" Then turn one grid {} around {anchor}.", r.word()));
                }
                s
            }
        }
    }
}
