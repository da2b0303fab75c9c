use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use regex::Regex;

use super::TriggerError;
use crate::types::LanguageScope;

/// What kind of context a trigger is; decides on which side of it a name
/// may appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriggerClass {
    Title,
    Profession,
    CountryAdjective,
    Age,
    VerbPhrase,
    Modifier,
}

impl TriggerClass {
    /// Name follows the trigger ("President X").
    pub fn precedes_name(self) -> bool {
        self != TriggerClass::VerbPhrase
    }

    /// Name precedes the trigger ("X said", "X, 57").
    pub fn follows_name(self) -> bool {
        matches!(self, TriggerClass::VerbPhrase | TriggerClass::Age)
    }

    fn as_str(self) -> &'static str {
        match self {
            TriggerClass::Title => "title",
            TriggerClass::Profession => "profession",
            TriggerClass::CountryAdjective => "country-adjective",
            TriggerClass::Age => "age",
            TriggerClass::VerbPhrase => "verb-phrase",
            TriggerClass::Modifier => "modifier",
        }
    }
}

impl fmt::Display for TriggerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TriggerClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "title" => TriggerClass::Title,
            "profession" => TriggerClass::Profession,
            "country-adjective" => TriggerClass::CountryAdjective,
            "age" => TriggerClass::Age,
            "verb-phrase" => TriggerClass::VerbPhrase,
            "modifier" => TriggerClass::Modifier,
            other => return Err(format!("unknown trigger class {other:?}")),
        })
    }
}

/// A literal phrase (matched case-insensitively, token by token) or a
/// regular expression that must match one whole token.
#[derive(Debug, Clone)]
pub enum WordPattern {
    Literal(Vec<String>),
    Regex(Regex),
}

impl WordPattern {
    fn parse(entry: &str) -> Result<Self, String> {
        match entry.strip_prefix("re:") {
            Some(re) => Regex::new(&format!("^(?:{re})$"))
                .map(WordPattern::Regex)
                .map_err(|e| e.to_string()),
            None => {
                let words: Vec<String> = entry.split_whitespace().map(str::to_lowercase).collect();
                if words.is_empty() {
                    Err("empty entry".into())
                } else {
                    Ok(WordPattern::Literal(words))
                }
            }
        }
    }

    fn key(&self) -> String {
        match self {
            WordPattern::Literal(w) => w.join(" "),
            WordPattern::Regex(r) => format!("re:{}", r.as_str()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trigger {
    pub pattern: WordPattern,
    pub class: TriggerClass,
}

/// Single-token word list: literals compared case-insensitively, plus
/// regular expressions.
#[derive(Debug, Clone, Default)]
pub struct WordSet {
    literals: BTreeSet<String>,
    patterns: Vec<Regex>,
}

impl WordSet {
    pub fn contains(&self, token: &str) -> bool {
        self.literals.contains(&token.to_lowercase()) || self.patterns.iter().any(|r| r.is_match(token))
    }

    pub fn insert(&mut self, word: &str) -> bool {
        self.literals.insert(word.to_lowercase())
    }

    fn add(&mut self, entry: &str) -> Result<(), String> {
        match WordPattern::parse(entry)? {
            WordPattern::Literal(words) if words.len() == 1 => {
                self.literals.insert(words.into_iter().next().expect("one word"));
            }
            WordPattern::Literal(_) => return Err("entry must be a single word".into()),
            WordPattern::Regex(r) => {
                if !self.patterns.iter().any(|p| p.as_str() == r.as_str()) {
                    self.patterns.push(r);
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.literals.len() + self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct TriggerLexicon {
    pub language: LanguageScope,
    triggers: Vec<Trigger>,
    /// Literal triggers indexed by their first word.
    by_first_word: HashMap<String, Vec<usize>>,
    regex_triggers: Vec<usize>,
    pub org_words: WordSet,
    pub stop_words: WordSet,
}

#[derive(Clone, Copy)]
enum Section {
    Triggers,
    OrgWords,
    StopWords,
}

impl TriggerLexicon {
    pub fn new(language: LanguageScope) -> Self {
        TriggerLexicon {
            language,
            triggers: Vec::new(),
            by_first_word: HashMap::new(),
            regex_triggers: Vec::new(),
            org_words: WordSet::default(),
            stop_words: WordSet::default(),
        }
    }

    /// Reads a lexicon file. An optional `lang <code>` line may precede the
    /// sections; trigger lines may carry a class after a tab (default
    /// `title`).
    pub fn parse(text: &str) -> Result<Self, TriggerError> {
        let mut lex = TriggerLexicon::new(LanguageScope::Universal);
        let mut section = None;
        for (i, raw) in text.lines().enumerate() {
            let err = |reason: String| TriggerError::Lexicon { line: i + 1, reason };
            let entry = raw.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            match entry {
                "[triggers]" => section = Some(Section::Triggers),
                "[org_words]" => section = Some(Section::OrgWords),
                "[stop_words]" => section = Some(Section::StopWords),
                _ if entry.starts_with('[') => return Err(err(format!("unknown section {entry}"))),
                _ => match section {
                    None => match entry.strip_prefix("lang ") {
                        Some(code) => lex.language = code.trim().parse().map_err(|e| err(format!("{e}")))?,
                        None => return Err(err("entry outside of any section".into())),
                    },
                    Some(Section::Triggers) => {
                        let (pattern, class) = match entry.split_once('\t') {
                            Some((p, c)) => (p.trim(), c.trim().parse().map_err(err)?),
                            None => (entry, TriggerClass::Title),
                        };
                        lex.add_trigger(pattern, class).map_err(err)?;
                    }
                    Some(Section::OrgWords) => lex.org_words.add(entry).map_err(err)?,
                    Some(Section::StopWords) => lex.stop_words.add(entry).map_err(err)?,
                },
            }
        }
        Ok(lex)
    }

    /// Adds a trigger; an entry already present is ignored.
    pub fn add_trigger(&mut self, entry: &str, class: TriggerClass) -> Result<(), String> {
        let pattern = WordPattern::parse(entry)?;
        let key = pattern.key();
        if self.triggers.iter().any(|t| t.pattern.key() == key) {
            return Ok(());
        }
        let idx = self.triggers.len();
        match &pattern {
            WordPattern::Literal(words) => self.by_first_word.entry(words[0].clone()).or_default().push(idx),
            WordPattern::Regex(_) => self.regex_triggers.push(idx),
        }
        self.triggers.push(Trigger { pattern, class });
        Ok(())
    }

    pub fn triggers(&self) -> &[Trigger] {
        &self.triggers
    }

    /// Adds stop words kept elsewhere, typically the repository's list for
    /// this lexicon's language.
    pub fn extend_stop_words<'a>(&mut self, words: impl IntoIterator<Item = &'a str>) {
        for w in words {
            self.stop_words.insert(w);
        }
    }

    /// Longest trigger starting at word `i`, as (word count, class).
    /// `lower` holds the lowercased words and `joined[k]` tells whether
    /// word `k` follows word `k - 1` across whitespace only.
    pub(super) fn longest_at(
        &self,
        words: &[&str],
        lower: &[String],
        joined: &[bool],
        i: usize,
    ) -> Option<(usize, TriggerClass)> {
        let mut best: Option<(usize, TriggerClass)> = None;
        let mut consider = |len: usize, class: TriggerClass| {
            if best.is_none_or(|(l, _)| len > l) {
                best = Some((len, class));
            }
        };
        if let Some(candidates) = self.by_first_word.get(&lower[i]) {
            for &t in candidates {
                let trigger = &self.triggers[t];
                let WordPattern::Literal(phrase) = &trigger.pattern else {
                    continue;
                };
                let end = i + phrase.len();
                if end <= words.len()
                    && phrase.iter().zip(&lower[i..end]).all(|(p, w)| p == w)
                    && joined[i + 1..end].iter().all(|&j| j)
                {
                    consider(phrase.len(), trigger.class);
                }
            }
        }
        for &t in &self.regex_triggers {
            let trigger = &self.triggers[t];
            if let WordPattern::Regex(r) = &trigger.pattern {
                if r.is_match(words[i]) {
                    consider(1, trigger.class);
                }
            }
        }
        best
    }
}
