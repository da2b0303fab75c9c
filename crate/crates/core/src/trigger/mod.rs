//! Finding new names next to trigger words, and guessing their type.
//!
//! A name candidate is a run of one to four capitalized words (particles
//! such as "van" or "al-" allowed inside) that sits directly next to a chain
//! of trigger words: "57-year-old former British Prime Minister Tony Blair".
//! Title-like triggers stand before the name; verb phrases stand after it;
//! age expressions may stand before it or follow it after a comma.

mod lexicon;
mod model;

use thiserror::Error;

use crate::merge::CandidateName;
use crate::types::EntityType;

pub use lexicon::{Trigger, TriggerClass, TriggerLexicon, WordPattern, WordSet};
pub use model::{features, train_type_model, TypeModel};

pub const MAX_NAME_WORDS: usize = 4;

const PARTICLES: &[&str] = &[
    "al", "el", "van", "von", "de", "der", "den", "du", "da", "di", "del", "della", "dos", "das", "la", "le", "bin",
    "ibn", "bint", "ben", "abu", "ter", "zu", "y",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriggerError {
    #[error("no type model has been trained")]
    UntrainedModel,
    #[error("training list for {0:?} is empty")]
    EmptyTrainingClass(EntityType),
    #[error("smoothing constant must be positive, got {0}")]
    InvalidSmoothing(f64),
    #[error("class prior must be positive, got {0}")]
    InvalidPrior(f64),
    #[error("lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
}

#[derive(Debug)]
struct Word<'a> {
    text: &'a str,
    start: usize,
    end: usize,
    /// Only whitespace separates this word from the previous one.
    joined: bool,
    /// As `joined`, but a single comma is allowed too.
    loosely_joined: bool,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '\'' | '\u{2019}')
}

fn tokenize(text: &str) -> Vec<Word<'_>> {
    let mut words: Vec<Word> = Vec::new();
    let mut prev_end = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if !is_word_char(c) {
            continue;
        }
        let mut end = start + c.len_utf8();
        while let Some(&(i, c)) = chars.peek() {
            if !is_word_char(c) {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        let raw = &text[start..end];
        let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
        if trimmed.is_empty() {
            continue;
        }
        let start = start + raw.find(trimmed).expect("substring");
        let end = start + trimmed.len();
        let gap = &text[prev_end..start];
        let has_prev = !words.is_empty();
        let joined = has_prev && !gap.is_empty() && gap.chars().all(char::is_whitespace);
        let loosely_joined = has_prev && {
            let g = gap.trim_start();
            let g = g.strip_prefix(',').unwrap_or(g);
            !gap.is_empty() && g.chars().all(char::is_whitespace)
        };
        words.push(Word {
            text: trimmed,
            start,
            end,
            joined,
            loosely_joined,
        });
        prev_end = end;
    }
    words
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(|c| c.is_uppercase())
}

fn is_particle(word: &str) -> bool {
    PARTICLES.contains(&word)
}

/// "al-Gaddafi", "van-Dijk": a particle glued to a capitalized word.
fn is_prefixed_name(word: &str) -> bool {
    word.split_once('-')
        .is_some_and(|(p, rest)| is_particle(&p.to_lowercase()) && is_capitalized(rest))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Role {
    Name,
    Particle,
    Stop,
    Other,
}

/// Candidate names in `text`, in order of appearance. The type guess uses
/// the organisation-word rule only; see [`guess_type`] for the classifier.
pub fn find_candidates(text: &str, lex: &TriggerLexicon) -> Vec<CandidateName> {
    let words = tokenize(text);
    let n = words.len();
    if n == 0 {
        return Vec::new();
    }
    let texts: Vec<&str> = words.iter().map(|w| w.text).collect();
    let lower: Vec<String> = texts.iter().map(|w| w.to_lowercase()).collect();
    let joined: Vec<bool> = words.iter().map(|w| w.joined).collect();

    // Non-overlapping trigger occurrences, longest first from the left.
    let mut trigger_at: Vec<Option<(usize, TriggerClass)>> = vec![None; n];
    let mut trigger_ending: Vec<Option<(usize, TriggerClass)>> = vec![None; n + 1];
    let mut i = 0;
    while i < n {
        match lex.longest_at(&texts, &lower, &joined, i) {
            Some((len, class)) => {
                trigger_at[i] = Some((i + len, class));
                trigger_ending[i + len] = Some((i, class));
                i += len;
            }
            None => i += 1,
        }
    }
    let mut in_trigger = vec![false; n];
    for (s, t) in trigger_at.iter().enumerate() {
        if let Some((e, _)) = t {
            in_trigger[s..*e].iter_mut().for_each(|x| *x = true);
        }
    }

    let roles: Vec<Role> = (0..n)
        .map(|k| {
            let w = texts[k];
            if in_trigger[k] {
                Role::Other
            } else if lex.stop_words.contains(w) {
                if is_capitalized(w) {
                    Role::Stop
                } else {
                    Role::Other
                }
            } else if is_capitalized(w) || is_prefixed_name(w) {
                Role::Name
            } else if is_particle(w) {
                Role::Particle
            } else {
                Role::Other
            }
        })
        .collect();

    // Maximal runs of names with particles strictly inside.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < n {
        if roles[k] != Role::Name {
            k += 1;
            continue;
        }
        let start = k;
        let mut end = k + 1;
        let mut probe = end;
        while probe < n && joined[probe] {
            match roles[probe] {
                Role::Name => {
                    probe += 1;
                    end = probe;
                }
                Role::Particle => probe += 1,
                _ => break,
            }
        }
        runs.push((start, end));
        k = end;
    }

    let chain_text = |from: usize, to: usize| text[words[from].start..words[to - 1].end].to_string();

    let mut out = Vec::new();
    for (start, end) in runs {
        let name_words = (start..end).filter(|&w| roles[w] == Role::Name).count();
        if name_words > MAX_NAME_WORDS {
            continue;
        }

        // Stop words trimmed off either side still count for adjacency.
        let mut left = start;
        while left > 0 && joined[left] && roles[left - 1] == Role::Stop {
            left -= 1;
        }
        let mut right = end;
        while right < n && joined[right] && roles[right] == Role::Stop {
            right += 1;
        }

        let mut before = None;
        let mut at = left;
        while at > 0 && joined[at] {
            match trigger_ending[at] {
                Some((s, class)) if class.precedes_name() => at = s,
                _ => break,
            }
        }
        if at < left {
            before = Some(chain_text(at, left));
        }

        let mut after = None;
        let mut at = right;
        while at < n {
            let Some((e, class)) = trigger_at[at] else { break };
            // An age after the name is set off by a comma: "Blair, 57".
            let attached = match (at == right, class) {
                (_, c) if !c.follows_name() => false,
                (true, TriggerClass::Age) => words[at].loosely_joined && !joined[at],
                (true, _) => words[at].loosely_joined,
                (false, _) => joined[at],
            };
            if !attached {
                break;
            }
            at = e;
        }
        if at > right {
            after = Some(chain_text(right, at));
        }

        if before.is_none() && after.is_none() {
            continue;
        }
        let surface = texts[start..end].join(" ");
        let etype = if texts[start..end].iter().any(|w| lex.org_words.contains(w)) {
            EntityType::Organisation
        } else {
            EntityType::Person
        };
        let mut cand = CandidateName::new(surface, lex.language, etype);
        cand.evidence = match (before, after) {
            (Some(b), Some(a)) => format!("{b} | {a}"),
            (Some(e), None) | (None, Some(e)) => e,
            (None, None) => unreachable!(),
        };
        out.push(cand);
    }
    out
}

/// Organisation with certainty if any word is an organisation word,
/// otherwise the classifier's decision.
pub fn guess_type(
    surface: &str,
    lex: &TriggerLexicon,
    model: Option<&TypeModel>,
) -> Result<(EntityType, f64), TriggerError> {
    if surface.split_whitespace().any(|w| lex.org_words.contains(w)) {
        return Ok((EntityType::Organisation, 1.0));
    }
    model.map(|m| m.classify(surface)).ok_or(TriggerError::UntrainedModel)
}
