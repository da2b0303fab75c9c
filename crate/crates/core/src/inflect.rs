//! Pre-generated morphological and surface variants.
//!
//! Inflection rules are plain suffix alternations per language: every token
//! of a name may take one of the suffixes. The expansion is produced both as
//! a regular expression and as an explicit list that can be added to the
//! repository, so exact matching finds inflected forms and still reports the
//! base entity.

use std::collections::{BTreeSet, VecDeque};

use regex::Regex;
use thiserror::Error;

use crate::types::{validate_surface, LanguageScope, NameVariant};

/// Larger expansions are kept as a pattern only.
pub const MAX_ENUMERATED: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InflectError {
    #[error("rule set for {0} has no suffixes")]
    EmptyRuleSet(LanguageScope),
    #[error("{0:?} is not eligible for expansion (seen in too few clusters)")]
    NotEligible(String),
    #[error("rule file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone)]
pub struct InflectionRuleSet {
    pub language: LanguageScope,
    suffixes: Vec<String>,
    /// A token takes suffixes if it matches any of these; no predicates
    /// means every token does.
    applies_to: Vec<Regex>,
}

impl InflectionRuleSet {
    pub fn new(
        language: LanguageScope,
        suffixes: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, InflectError> {
        let mut seen = BTreeSet::new();
        let suffixes: Vec<String> = suffixes
            .into_iter()
            .map(Into::into)
            .filter(|s| seen.insert(s.clone()))
            .collect();
        if suffixes.is_empty() {
            return Err(InflectError::EmptyRuleSet(language));
        }
        Ok(InflectionRuleSet {
            language,
            suffixes,
            applies_to: Vec::new(),
        })
    }

    pub fn with_predicate(mut self, token_pattern: Regex) -> Self {
        self.applies_to.push(token_pattern);
        self
    }

    /// Parses the rule-file format:
    ///
    /// ```text
    /// lang sl
    /// # comment
    /// applies-to [^aeiou]$
    /// a
    /// om
    /// ```
    pub fn parse(text: &str) -> Result<Self, InflectError> {
        let mut language = None;
        let mut suffixes = Vec::new();
        let mut predicates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: String| InflectError::Parse { line, reason };
            let entry = raw.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            if let Some(code) = entry.strip_prefix("lang ") {
                if language.is_some() {
                    return Err(err("duplicate lang header".into()));
                }
                language = Some(code.trim().parse::<LanguageScope>().map_err(|e| err(e.to_string()))?);
            } else if let Some(pattern) = entry.strip_prefix("applies-to ") {
                predicates.push(Regex::new(pattern.trim()).map_err(|e| err(e.to_string()))?);
            } else if language.is_none() {
                return Err(err("expected `lang <code>` header first".into()));
            } else if entry.contains(char::is_whitespace) {
                return Err(err(format!("suffix {entry:?} contains whitespace")));
            } else {
                suffixes.push(entry.to_string());
            }
        }
        let language = language.ok_or(InflectError::Parse {
            line: 0,
            reason: "missing `lang <code>` header".into(),
        })?;
        let mut rules = InflectionRuleSet::new(language, suffixes)?;
        rules.applies_to = predicates;
        Ok(rules)
    }

    pub fn suffixes(&self) -> &[String] {
        &self.suffixes
    }

    fn effective_suffixes(&self) -> impl Iterator<Item = &str> {
        self.suffixes.iter().map(String::as_str).filter(|s| !s.is_empty())
    }

    fn applies(&self, token: &str) -> bool {
        self.applies_to.is_empty() || self.applies_to.iter().any(|r| r.is_match(token))
    }
}

#[derive(Debug, Clone)]
pub struct VariantExpansion {
    pub base: NameVariant,
    pub pattern: String,
    /// All forms including the base, or `None` past [`MAX_ENUMERATED`].
    pub enumerated: Option<Vec<NameVariant>>,
}

impl VariantExpansion {
    /// The pattern anchored to a whole string.
    pub fn regex(&self) -> Regex {
        Regex::new(&format!("^(?:{})$", self.pattern)).expect("generated pattern is valid")
    }

    /// Enumerated forms other than the base surface.
    pub fn generated(&self) -> impl Iterator<Item = &NameVariant> {
        self.enumerated
            .iter()
            .flatten()
            .filter(move |v| v.surface() != self.base.surface())
    }
}

/// Number of forms the cross product would produce.
pub fn expansion_size(name: &str, rules: &InflectionRuleSet) -> usize {
    let per_token = rules.effective_suffixes().count() + 1;
    name.split(' ')
        .map(|t| if rules.applies(t) { per_token } else { 1 })
        .fold(1usize, |acc, n| acc.saturating_mul(n))
}

pub fn expand_inflections(name: &NameVariant, rules: &InflectionRuleSet) -> Result<VariantExpansion, InflectError> {
    if !name.flags.frequency_eligible {
        return Err(InflectError::NotEligible(name.surface().to_string()));
    }
    let suffixes: Vec<&str> = rules.effective_suffixes().collect();
    let group = if suffixes.is_empty() {
        String::new()
    } else {
        let alts: Vec<String> = suffixes.iter().map(|s| regex::escape(s)).collect();
        format!("({})?", alts.join("|"))
    };
    let tokens: Vec<&str> = name.surface().split(' ').collect();
    let pattern = tokens
        .iter()
        .map(|t| {
            if rules.applies(t) {
                format!("{}{group}", regex::escape(t))
            } else {
                regex::escape(t)
            }
        })
        .collect::<Vec<_>>()
        .join(r"\s+");

    let enumerated = (expansion_size(name.surface(), rules) <= MAX_ENUMERATED).then(|| {
        let mut forms = vec![String::new()];
        for (i, token) in tokens.iter().enumerate() {
            let options: Vec<String> = std::iter::once(token.to_string())
                .chain(
                    rules
                        .applies(token)
                        .then(|| suffixes.iter().map(move |s| format!("{token}{s}")))
                        .into_iter()
                        .flatten(),
                )
                .collect();
            forms = forms
                .iter()
                .flat_map(|prefix| {
                    options
                        .iter()
                        .map(move |o| if i == 0 { o.clone() } else { format!("{prefix} {o}") })
                })
                .collect();
        }
        forms
            .into_iter()
            .map(|s| NameVariant::new(s, rules.language).expect("suffixes carry no whitespace"))
            .collect()
    });

    Ok(VariantExpansion {
        base: name.clone(),
        pattern,
        enumerated,
    })
}

fn is_particle(token: &str) -> bool {
    token.eq_ignore_ascii_case("al") || token.eq_ignore_ascii_case("el")
}

fn one_step(surface: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (i, _) in surface.match_indices('-') {
        let mut s = surface.to_string();
        s.replace_range(i..i + 1, " ");
        out.push(s);
    }
    let tokens: Vec<&str> = surface.split(' ').collect();
    for (i, token) in tokens.iter().enumerate() {
        let replacement = if is_particle(token) && i + 1 < tokens.len() {
            Some(None)
        } else {
            match token.split_once('-') {
                Some((p, rest)) if is_particle(p) && !rest.is_empty() => Some(Some(rest)),
                _ => None,
            }
        };
        if let Some(rep) = replacement {
            let rebuilt: Vec<&str> = tokens
                .iter()
                .enumerate()
                .filter_map(|(j, t)| if j == i { rep } else { Some(*t) })
                .collect();
            out.push(rebuilt.join(" "));
        }
    }
    out.retain(|s| validate_surface(s).is_ok());
    out
}

/// Hyphen-to-space and particle-dropping variants, closed under repetition.
/// The input itself is never returned.
pub fn surface_variants(name: &NameVariant) -> Vec<NameVariant> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(name.surface().to_string());
    let mut order = Vec::new();
    let mut queue = VecDeque::from([name.surface().to_string()]);
    while let Some(s) = queue.pop_front() {
        for next in one_step(&s) {
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    order
        .into_iter()
        .map(|s| NameVariant::new(s, name.scope).expect("validated in one_step"))
        .collect()
}
