use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::WorldError;

/// Verbs in canonical order; options are sorted by verb before shuffling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verb {
    PickUp,
    PutInto,
    PlaceAt,
    Obtain,
    Unlock,
    Choose,
    DeclareDone,
    Continue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Operand {
    Label(u8),
    /// Backpack slot, 0 = A.
    Slot(u8),
    /// Index into the state's numbered positions.
    Position(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Action {
    pub verb: Verb,
    pub subject: Option<Operand>,
    pub object: Option<Operand>,
    /// The exact string shown to the agent.
    pub text: String,
}

impl Action {
    pub fn new(verb: Verb, subject: Option<Operand>, object: Option<Operand>, text: String) -> Self {
        Self { verb, subject, object, text }
    }

    fn sort_key(&self) -> (Verb, Option<Operand>, Option<Operand>) {
        (self.verb, self.subject, self.object)
    }
}

/// Sorts into canonical order: verb, then subject, then object.
pub fn canonical_sort(actions: &mut [Action]) {
    actions.sort_by_key(Action::sort_key);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetteredOption {
    pub letter: char,
    pub action: Action,
}

/// Actions lettered A, B, C, ... in shuffled order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionList {
    pub options: Vec<LetteredOption>,
    pub permutation_seed: u64,
}

impl OptionList {
    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn action(&self, index: usize) -> Option<&Action> {
        self.options.get(index).map(|o| &o.action)
    }

    pub fn by_letter(&self, letter: char) -> Option<&Action> {
        let i = letter_index(letter)?;
        self.action(i)
    }

    pub fn index_of_text(&self, text: &str) -> Option<usize> {
        self.options.iter().position(|o| o.action.text == text)
    }

    pub fn texts(&self) -> Vec<String> {
        self.options.iter().map(|o| o.action.text.clone()).collect()
    }

    /// `A) text, B) text, ...`
    pub fn render(&self) -> String {
        self.options
            .iter()
            .map(|o| format!("{}) {}", o.letter, o.action.text))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn letter_for(index: usize) -> Option<char> {
    (index < 26).then(|| (b'A' + index as u8) as char)
}

pub fn letter_index(letter: char) -> Option<usize> {
    letter.is_ascii_uppercase().then(|| (letter as u8 - b'A') as usize)
}

/// Shuffles `actions` uniformly (Fisher-Yates over ChaCha8 seeded with
/// `seed`) and letters them from A.
pub fn present_options(actions: &[Action], seed: u64) -> Result<OptionList, WorldError> {
    if actions.is_empty() {
        return Err(WorldError::NoActions);
    }
    if actions.len() > 26 {
        return Err(WorldError::TooManyActions(actions.len()));
    }
    let mut shuffled = actions.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);
    let options = shuffled
        .into_iter()
        .enumerate()
        .map(|(i, action)| LetteredOption { letter: letter_for(i).unwrap(), action })
        .collect();
    Ok(OptionList { options, permutation_seed: seed })
}
