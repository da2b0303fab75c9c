//! The hand-written normalization cascade.

use std::collections::BTreeSet;

use unicode_normalization::char::{decompose_canonical, is_combining_mark};

use super::TableError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Anywhere,
    /// Start of any whitespace-separated token.
    TokenStart,
    NameStart,
    NameEnd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Accented letters to their base letter. Characters listed in `keep` are
    /// left alone because a later rule rewrites them explicitly.
    StripAccents {
        keep: BTreeSet<char>,
    },
    /// Any doubled letter other than a, e, i, o, u collapses to one.
    Degeminate,
    Rewrite {
        from: String,
        to: String,
        anchor: Anchor,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRuleSet {
    rules: Vec<Rule>,
}

const DEFAULT_RULES: &str = include_str!("../../data/rules/default.tsv");

// A cascade that keeps feeding itself is cut off here.
const MAX_PASSES: usize = 32;

impl Default for NormalizationRuleSet {
    fn default() -> Self {
        Self::parse(DEFAULT_RULES).expect("bundled rules are valid")
    }
}

impl NormalizationRuleSet {
    /// Parses the rule-file format: `@strip-accents` and `@degeminate`
    /// directives, and `<from>\t<to>\t<anchor>` rewrites with anchor one of
    /// `any`, `token`, `start`, `end`.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: &str| TableError {
                line,
                reason: reason.to_string(),
            };
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            match raw.trim_end() {
                "@strip-accents" => {
                    rules.push(Rule::StripAccents { keep: BTreeSet::new() });
                    continue;
                }
                "@degeminate" => {
                    rules.push(Rule::Degeminate);
                    continue;
                }
                _ => {}
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            let [from, to, anchor] = fields.as_slice() else {
                return Err(err("expected <from>\\t<to>\\t<anchor>"));
            };
            let anchor = match *anchor {
                "any" => Anchor::Anywhere,
                "token" => Anchor::TokenStart,
                "start" => Anchor::NameStart,
                "end" => Anchor::NameEnd,
                _ => return Err(err("anchor must be any, token, start or end")),
            };
            if from.is_empty() {
                return Err(err("empty source"));
            }
            if to.contains(from) {
                return Err(err("replacement contains its own source"));
            }
            rules.push(Rule::Rewrite {
                from: from.to_string(),
                to: to.to_string(),
                anchor,
            });
        }
        Ok(Self::new(rules))
    }

    pub fn new(mut rules: Vec<Rule>) -> Self {
        for i in 0..rules.len() {
            if let Rule::StripAccents { .. } = rules[i] {
                let later: BTreeSet<char> = rules[i + 1..]
                    .iter()
                    .filter_map(|r| match r {
                        Rule::Rewrite { from, .. } => Some(from.chars().filter(|c| !c.is_ascii())),
                        _ => None,
                    })
                    .flatten()
                    .collect();
                if let Rule::StripAccents { keep } = &mut rules[i] {
                    keep.extend(later);
                }
            }
        }
        NormalizationRuleSet { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// One pass of the cascade: each rule in order, each applied until it no
    /// longer changes the string.
    pub fn apply_once(&self, input: &str) -> String {
        let mut s = input.to_string();
        for rule in &self.rules {
            for _ in 0..MAX_PASSES {
                let next = apply_rule(rule, &s);
                if next == s {
                    break;
                }
                s = next;
            }
        }
        s
    }
}

fn apply_rule(rule: &Rule, s: &str) -> String {
    match rule {
        Rule::StripAccents { keep } => strip_accents(s, keep),
        Rule::Degeminate => degeminate(s),
        Rule::Rewrite { from, to, anchor } => rewrite(s, from, to, *anchor),
    }
}

fn strip_accents(s: &str, keep: &BTreeSet<char>) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c.is_ascii() || keep.contains(&c) {
            out.push(c);
            continue;
        }
        let special = match c {
            'ß' => Some("ss"),
            'æ' => Some("ae"),
            'œ' => Some("oe"),
            'ø' => Some("o"),
            'đ' | 'ð' => Some("d"),
            'ł' => Some("l"),
            'þ' => Some("th"),
            'ı' => Some("i"),
            'ħ' => Some("h"),
            _ => None,
        };
        if let Some(rep) = special {
            out.push_str(rep);
            continue;
        }
        decompose_canonical(c, |d| {
            if !is_combining_mark(d) {
                out.push(d);
            }
        });
    }
    out
}

fn is_plain_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn degeminate(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev: Option<char> = None;
    for c in s.chars() {
        if prev == Some(c) && c.is_alphabetic() && !is_plain_vowel(c) {
            continue;
        }
        out.push(c);
        prev = Some(c);
    }
    out
}

fn rewrite(s: &str, from: &str, to: &str, anchor: Anchor) -> String {
    match anchor {
        Anchor::Anywhere => s.replace(from, to),
        Anchor::NameStart => match s.strip_prefix(from) {
            Some(rest) => format!("{to}{rest}"),
            None => s.to_string(),
        },
        Anchor::NameEnd => match s.strip_suffix(from) {
            Some(rest) => format!("{rest}{to}"),
            None => s.to_string(),
        },
        Anchor::TokenStart => {
            let mut out = String::with_capacity(s.len());
            let mut rest = s;
            let mut at_token_start = true;
            while !rest.is_empty() {
                if at_token_start {
                    if let Some(after) = rest.strip_prefix(from) {
                        out.push_str(to);
                        rest = after;
                        at_token_start = to.is_empty() || to.ends_with(' ');
                        continue;
                    }
                }
                let c = rest.chars().next().expect("non-empty");
                out.push(c);
                rest = &rest[c.len_utf8()..];
                at_token_start = c == ' ';
            }
            out
        }
    }
}
