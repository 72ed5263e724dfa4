use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::world::{letter_index, OptionList};

/// How a response was mapped to an option.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeRoute {
    OptionText,
    Letter,
}

fn answer_tag() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?is)<\s*answer\s*>(.*?)<\s*/\s*answer\s*>").unwrap())
}

/// Contents of the first `<answer>...</answer>` pair, or the whole text.
pub fn strip_answer_tags(text: &str) -> &str {
    answer_tag()
        .captures(text)
        .and_then(|c| c.get(1))
        .map(|m| m.as_str())
        .unwrap_or(text)
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// `needle` occurs in `hay` with no word character glued to either end, so
/// "label 1" does not match inside "label 12".
pub fn contains_phrase(hay: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let mut from = 0;
    while let Some(off) = hay[from..].find(needle) {
        let start = from + off;
        let end = start + needle.len();
        let before = hay[..start].chars().next_back();
        let after = hay[end..].chars().next();
        let open = !needle.starts_with(is_word) || !before.is_some_and(is_word);
        let close = !needle.ends_with(is_word) || !after.is_some_and(is_word);
        if open && close {
            return true;
        }
        from = start + hay[start..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

/// First uppercase letter standing alone. The pronoun "I" is passed over
/// when it reads as a word ("I choose", "I'm").
pub fn first_lone_uppercase(text: &str) -> Option<char> {
    let chars: Vec<char> = text.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_ascii_uppercase() {
            continue;
        }
        let prev = i.checked_sub(1).map(|j| chars[j]);
        let next = chars.get(i + 1).copied();
        if prev.is_some_and(is_word) || next.is_some_and(is_word) {
            continue;
        }
        if c == 'I' {
            let pronoun = match (next, chars.get(i + 2)) {
                (Some('\''), _) | (Some('\u{2019}'), _) => true,
                (Some(' '), Some(n)) => n.is_lowercase(),
                _ => false,
            };
            if pronoun {
                continue;
            }
        }
        return Some(c);
    }
    None
}

/// Maps a raw response to an option index.
///
/// Steps, in order: take the inside of an answer tag if present; return the
/// first option (in presented order) whose text occurs in the response;
/// otherwise the first lone uppercase letter if it names an option;
/// otherwise nothing.
pub fn decode_answer(text: &str, options: &OptionList) -> Option<usize> {
    decode_with_route(text, options).map(|(i, _)| i)
}

pub fn decode_with_route(text: &str, options: &OptionList) -> Option<(usize, DecodeRoute)> {
    let body = strip_answer_tags(text);
    if let Some(i) = options.options.iter().position(|o| contains_phrase(body, &o.action.text)) {
        return Some((i, DecodeRoute::OptionText));
    }
    let idx = letter_index(first_lone_uppercase(body)?)?;
    (idx < options.len()).then_some((idx, DecodeRoute::Letter))
}
