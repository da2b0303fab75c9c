//! Finding known names in running text.
//!
//! A [`CompiledMatcher`] is built once per target language and is immutable
//! afterwards; share it behind an `Arc` and swap the `Arc` to reload.
//!
//! Matching rules:
//!
//! * word boundaries: the code points just before and after a match must be
//!   absent or non-letters;
//! * case: an uppercase letter in a stored name matches only itself, a
//!   lowercase letter matches itself or its uppercase form;
//! * whitespace: a space in a stored name matches any run of whitespace;
//! * overlaps: leftmost start wins, then the longest span; scanning resumes
//!   after it.
//!
//! Offsets and lengths count code points of the original text.

mod automaton;

use std::collections::HashMap;

use serde::Serialize;

use crate::repository::Repository;
use crate::types::{EntityId, LanguageScope};
use automaton::{Automaton, Builder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Match {
    pub id: EntityId,
    pub main_name: String,
    /// The text exactly as found.
    pub surface_found: String,
    pub offset: usize,
    pub length: usize,
}

#[derive(Debug, Clone)]
struct Pattern {
    chars: Vec<char>,
    /// (entity slot, variant index)
    payloads: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub struct CompiledMatcher {
    automaton: Automaton,
    patterns: Vec<Pattern>,
    entities: Vec<(EntityId, String)>,
    built_for: Option<LanguageScope>,
    /// Longest pattern, in view positions.
    max_len: usize,
}

fn single<I: Iterator<Item = char>>(mut it: I) -> Option<char> {
    let first = it.next()?;
    it.next().is_none().then_some(first)
}

/// Single-code-point uppercase, if it differs from `c`.
fn upper_of(c: char) -> Option<char> {
    single(c.to_uppercase()).filter(|&u| u != c)
}

/// Case-insensitive key used to drive the automaton. Two characters that
/// the case contract lets match always share a key.
#[inline]
fn fold(c: char) -> char {
    if c.is_ascii() {
        return c.to_ascii_lowercase();
    }
    let up = single(c.to_uppercase()).unwrap_or(c);
    single(up.to_lowercase()).unwrap_or(up)
}

/// The case contract for one code point.
#[inline]
pub(crate) fn char_matches(stored: char, text: char) -> bool {
    stored == text || (stored.is_lowercase() && upper_of(stored) == Some(text))
}

fn view_char(c: char) -> char {
    if c.is_whitespace() {
        ' '
    } else {
        c
    }
}

pub fn compile(repo: &Repository, language: Option<LanguageScope>) -> CompiledMatcher {
    let mut builder = Builder::new();
    let mut patterns: Vec<Pattern> = Vec::new();
    let mut index: HashMap<Vec<char>, u32> = HashMap::new();
    let mut entities = Vec::new();

    for entity in repo.entities() {
        let slot = entities.len() as u32;
        let mut used = false;
        for (vi, variant) in entity.variants().iter().enumerate() {
            if !variant.scope.active_in(language) {
                continue;
            }
            used = true;
            let chars: Vec<char> = variant.surface().chars().map(view_char).collect();
            let pid = *index.entry(chars.clone()).or_insert_with(|| {
                let pid = patterns.len() as u32;
                builder.insert(chars.iter().map(|&c| fold(c)), pid);
                patterns.push(Pattern {
                    chars,
                    payloads: Vec::new(),
                });
                pid
            });
            patterns[pid as usize].payloads.push((slot, vi as u32));
        }
        if used {
            entities.push((entity.id, entity.main_name().surface().to_string()));
        }
    }

    CompiledMatcher {
        max_len: patterns.iter().map(|p| p.chars.len()).max().unwrap_or(0),
        automaton: builder.build(),
        patterns,
        entities,
        built_for: language,
    }
}

impl CompiledMatcher {
    pub fn built_for(&self) -> Option<LanguageScope> {
        self.built_for
    }

    /// Distinct stored surfaces.
    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn payload_count(&self) -> usize {
        self.patterns.iter().map(|p| p.payloads.len()).sum()
    }

    pub fn state_count(&self) -> usize {
        self.automaton.state_count()
    }

    pub fn find_all(&self, text: &str) -> Vec<Match> {
        // Byte offsets of the last few positions of the whitespace-collapsed
        // view, enough to find where any pattern ending here started.
        let window = self.max_len + 1;
        let mut recent: Vec<usize> = vec![0; window];
        let mut slot = 0usize;
        let mut candidates: Vec<(usize, usize, u32)> = Vec::new();
        let mut state = self.automaton.start();
        let mut in_space = false;
        for (byte, c) in text.char_indices() {
            let c = if c.is_whitespace() {
                if in_space {
                    continue;
                }
                in_space = true;
                ' '
            } else {
                in_space = false;
                c
            };
            recent[slot] = byte;
            slot += 1;
            if slot == window {
                slot = 0;
            }
            state = self.automaton.next(state, fold(c));
            if self.automaton.has_output(state) {
                let end = byte + c.len_utf8();
                self.automaton.for_each_output(state, |pid| {
                    let len = self.patterns[pid as usize].chars.len();
                    candidates.push((recent[(slot + window - len) % window], end, pid));
                });
            }
        }

        candidates.retain(|&(start, end, pid)| {
            if text[..start].chars().next_back().is_some_and(char::is_alphabetic) {
                return false;
            }
            let mut rest = text[start..].chars().peekable();
            for &stored in &self.patterns[pid as usize].chars {
                let Some(c) = rest.next() else { return false };
                if stored == ' ' {
                    if !c.is_whitespace() {
                        return false;
                    }
                    while rest.next_if(|c| c.is_whitespace()).is_some() {}
                } else if !char_matches(stored, c) {
                    return false;
                }
            }
            !text[end..].chars().next().is_some_and(char::is_alphabetic)
        });
        candidates.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));

        let mut spans: Vec<(usize, usize, Vec<u32>)> = Vec::new();
        let mut free_from = 0;
        for (start, end, pid) in candidates {
            match spans.last_mut() {
                Some((s, e, pids)) if *s == start && *e == end => pids.push(pid),
                _ if start >= free_from => {
                    spans.push((start, end, vec![pid]));
                    free_from = end;
                }
                _ => {}
            }
        }

        let mut out = Vec::new();
        let mut cp = CodePointCounter::new(text);
        for (start, end, pids) in spans {
            let offset = cp.index_of(start);
            let length = text[start..end].chars().count();
            let mut slots: Vec<u32> = pids
                .iter()
                .flat_map(|&p| self.patterns[p as usize].payloads.iter().map(|&(slot, _)| slot))
                .collect();
            slots.sort_unstable();
            slots.dedup();
            for slot in slots {
                let (id, main) = &self.entities[slot as usize];
                out.push(Match {
                    id: *id,
                    main_name: main.clone(),
                    surface_found: text[start..end].to_string(),
                    offset,
                    length,
                });
            }
        }
        out
    }
}

/// Converts increasing byte offsets to code-point offsets in one pass.
struct CodePointCounter<'a> {
    text: &'a str,
    byte: usize,
    count: usize,
}

impl<'a> CodePointCounter<'a> {
    fn new(text: &'a str) -> Self {
        CodePointCounter {
            text,
            byte: 0,
            count: 0,
        }
    }

    fn index_of(&mut self, byte: usize) -> usize {
        debug_assert!(byte >= self.byte);
        self.count += self.text[self.byte..byte].chars().count();
        self.byte = byte;
        self.count
    }
}
