//! Reference implementations and generators shared by the integration tests.
//!
//! The oracles here are deliberately naive: quadratic scans and full
//! dynamic-programming tables, written straight from the behavioral rules.

#![allow(dead_code)]

use namebank::matcher::Match;
use namebank::merge::CandidateName;
use namebank::normalize::{NameKey, Normalizer};
use namebank::types::validate_surface;
use namebank::{EntityId, EntityRecord, EntityType, LanguageScope, NameVariant, Repository, VariantFlags};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- distance

/// Textbook full-table edit distance.
pub fn dp_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

fn ratio(a: &str, b: &str) -> f64 {
    let m = a.chars().count().max(b.chars().count());
    if m == 0 {
        1.0
    } else {
        1.0 - dp_levenshtein(a, b) as f64 / m as f64
    }
}

pub fn oracle_similarity(a: &NameKey, b: &NameKey) -> f64 {
    (ratio(&a.translit, &b.translit) + ratio(&a.normalized, &b.normalized)) / 2.0
}

// ------------------------------------------------------------------- merge

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Merged(EntityId, f64),
    Created(EntityId),
    Skipped,
}

/// Merge without blocking: every candidate is compared with every stored
/// variant and every earlier candidate, whatever their signatures.
pub fn brute_force_merge(
    repo: &mut Repository,
    candidates: &[CandidateName],
    threshold: f64,
    normalizer: &Normalizer,
) -> Vec<Expected> {
    let mut known: Vec<(EntityId, NameKey)> = repo
        .entities()
        .flat_map(|e| e.variants().iter().map(move |v| (e.id, v.surface().to_string())))
        .map(|(id, s)| (id, normalizer.key(&s)))
        .collect();
    let mut out = Vec::new();
    for cand in candidates {
        let key = normalizer.key(&cand.surface);
        if validate_surface(&cand.surface).is_err() || key.normalized.is_empty() {
            out.push(Expected::Skipped);
            continue;
        }
        let mut best: Option<(f64, EntityId)> = None;
        for (id, k) in &known {
            let s = oracle_similarity(&key, k);
            if s >= threshold {
                best = match best {
                    Some((bs, bid)) if bs > s || (bs == s && bid <= *id) => Some((bs, bid)),
                    _ => Some((s, *id)),
                };
            }
        }
        let flags = VariantFlags {
            frequency_eligible: cand.cluster_count >= 5,
            ..Default::default()
        };
        let variant = NameVariant::new(cand.surface.clone(), cand.language)
            .unwrap()
            .with_flags(flags);
        let owner = match best {
            Some((s, id)) => {
                repo.add_variant(id, variant);
                out.push(Expected::Merged(id, s));
                id
            }
            None => {
                let id = repo.create_entity(cand.guessed_type, variant);
                out.push(Expected::Created(id));
                id
            }
        };
        known.push((owner, key));
    }
    out
}

// ----------------------------------------------------------------- matcher

fn upper_single(c: char) -> Option<char> {
    let mut it = c.to_uppercase();
    let u = it.next()?;
    if it.next().is_some() || u == c {
        None
    } else {
        Some(u)
    }
}

fn same_char(stored: char, text: char) -> bool {
    stored == text || (stored.is_lowercase() && upper_single(stored) == Some(text))
}

/// End (exclusive) of a match of `pattern` at `start`, if any.
fn match_at(pattern: &[char], text: &[char], start: usize) -> Option<usize> {
    let mut j = start;
    for &p in pattern {
        if p.is_whitespace() {
            if j >= text.len() || !text[j].is_whitespace() {
                return None;
            }
            while j < text.len() && text[j].is_whitespace() {
                j += 1;
            }
        } else {
            if j >= text.len() || !same_char(p, text[j]) {
                return None;
            }
            j += 1;
        }
    }
    if j < text.len() && text[j].is_alphabetic() {
        return None;
    }
    Some(j)
}

/// Tries every stored variant at every position, then keeps leftmost-longest
/// spans.
pub fn naive_find_all(repo: &Repository, language: Option<LanguageScope>, text: &str) -> Vec<Match> {
    let patterns: Vec<(Vec<char>, EntityId, String)> = repo
        .entities()
        .flat_map(|e| {
            e.variants()
                .iter()
                .filter(move |v| v.scope.active_in(language))
                .map(move |v| (v.surface().chars().collect(), e.id, e.main_name().surface().to_string()))
        })
        .collect();
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if i > 0 && chars[i - 1].is_alphabetic() {
            i += 1;
            continue;
        }
        let mut best_end = None;
        let mut hits: Vec<(EntityId, String)> = Vec::new();
        for (p, id, main) in &patterns {
            if let Some(end) = match_at(p, &chars, i) {
                match best_end {
                    Some(b) if end < b => {}
                    Some(b) if end == b => hits.push((*id, main.clone())),
                    _ => {
                        best_end = Some(end);
                        hits = vec![(*id, main.clone())];
                    }
                }
            }
        }
        match best_end {
            Some(end) => {
                hits.sort();
                hits.dedup();
                let found: String = chars[i..end].iter().collect();
                for (id, main) in hits {
                    out.push(Match {
                        id,
                        main_name: main,
                        surface_found: found.clone(),
                        offset: i,
                        length: end - i,
                    });
                }
                i = end;
            }
            None => i += 1,
        }
    }
    out
}

// -------------------------------------------------------------- generators

pub const LANGS: [&str; 5] = ["fr", "sv", "de", "en", "sl"];

pub fn random_scope(rng: &mut impl Rng) -> LanguageScope {
    if rng.random_bool(0.6) {
        LanguageScope::Universal
    } else {
        LanguageScope::lang(LANGS.choose(rng).unwrap()).unwrap()
    }
}

/// A surface from `alphabet`: 1-3 words of 1-`max_len` letters.
pub fn random_surface(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let words = rng.random_range(1..=3);
    (0..words)
        .map(|_| {
            let n = rng.random_range(1..=max_len);
            (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A repository of random entities with roughly `variants` variants in total.
pub fn random_repository(rng: &mut impl Rng, alphabet: &[char], variants: usize, max_len: usize) -> Repository {
    let mut repo = Repository::new();
    let mut total = 0;
    let mut next_id = 1u64;
    while total < variants {
        next_id += rng.random_range(1..50);
        let id = EntityId::new(next_id).unwrap();
        let etype = if rng.random_bool(0.5) {
            EntityType::Person
        } else {
            EntityType::Organisation
        };
        let main = NameVariant::new(random_surface(rng, alphabet, max_len), random_scope(rng)).unwrap();
        let mut record = EntityRecord::new(id, etype, main);
        total += 1;
        for _ in 0..rng.random_range(0..4) {
            if total >= variants {
                break;
            }
            let v = NameVariant::new(random_surface(rng, alphabet, max_len), random_scope(rng)).unwrap();
            if record.add_variant(v) {
                total += 1;
            }
        }
        repo.insert(record).unwrap();
    }
    repo
}

const SYLLABLES: &[&str] = &[
    "ka", "mar", "lu", "dou", "phi", "rek", "ste", "xan", "bor", "mi", "sa", "nov", "ti", "gel", "ru", "pa", "dek",
    "vo", "lin", "zo", "hal", "fi", "tra", "mon",
];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn random_latin_name(rng: &mut impl Rng) -> String {
    let words = rng.random_range(2..=3);
    (0..words)
        .map(|_| {
            let n = rng.random_range(2..=4);
            capitalize(&(0..n).map(|_| *SYLLABLES.choose(rng).unwrap()).collect::<String>())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Applies one spelling alternation that the default normalization rules
/// undo: doubled consonant, ou/u, ck/k, ph/f, ks/x, an accent, or an al-
/// particle. Returns `None` when no alternation applies.
pub fn alternate(rng: &mut impl Rng, name: &str) -> Option<String> {
    let mut options: Vec<String> = Vec::new();
    let chars: Vec<char> = name.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let lower = c.to_ascii_lowercase();
        if c.is_ascii_alphabetic()
            && !"aeiou".contains(lower)
            && chars.get(i + 1) != Some(&c)
            && (i == 0 || chars[i - 1] != c)
        {
            let mut s: String = chars[..=i].iter().collect();
            s.push(lower);
            s.extend(&chars[i + 1..]);
            options.push(s);
        }
        let accent = match c {
            'a' => Some('á'),
            'e' => Some('é'),
            'i' => Some('í'),
            'o' => Some('ó'),
            'u' => Some('ü'),
            _ => None,
        };
        if let Some(a) = accent {
            let mut s: String = chars[..i].iter().collect();
            s.push(a);
            s.extend(&chars[i + 1..]);
            options.push(s);
        }
    }
    for (from, to) in [
        ("ou", "u"),
        ("u", "ou"),
        ("k", "ck"),
        ("f", "ph"),
        ("ph", "f"),
        ("x", "ks"),
    ] {
        for (i, _) in name.match_indices(from) {
            let s = format!("{}{}{}", &name[..i], to, &name[i + from.len()..]);
            options.push(s);
        }
    }
    let words: Vec<&str> = name.split(' ').collect();
    if words.len() > 1 {
        let last = words.len() - 1;
        let mut w = words.clone();
        let prefixed = format!("al-{}", w[last]);
        w[last] = &prefixed;
        options.push(w.join(" "));
    }
    options.retain(|s| s != name && validate_surface(s).is_ok());
    options.choose(rng).cloned()
}

pub fn candidate(surface: &str) -> CandidateName {
    CandidateName::new(surface, LanguageScope::Universal, EntityType::Person)
}
