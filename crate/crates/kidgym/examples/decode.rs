//! Map free-text answers onto lettered options.
//!
//! cargo run -p kidgym --example decode

use kidgym::harness::decode_with_route;
use kidgym::world::{present_options, Action, Operand, Verb};

fn main() -> anyhow::Result<()> {
    let actions: Vec<Action> = [0u8, 1, 2, 12]
        .iter()
        .map(|&l| Action::new(Verb::PickUp, Some(Operand::Label(l)), None, format!("pick up item with label {l}")))
        .collect();
    let options = present_options(&actions, 11)?;
    println!("options: {}", options.render());
    for text in [
        "<ANSWER> C </ANSWER>",
        "<THINK> the apple is label 12 </THINK> <ANSWER> pick up item with label 12 </ANSWER>",
        "I would go with B.",
        "I cannot tell from the picture.",
    ] {
        match decode_with_route(text, &options) {
            Some((i, route)) => println!("{text:?} -> {} ({route:?})", options.options[i].letter),
            None => println!("{text:?} -> no option"),
        }
    }
    Ok(())
}
