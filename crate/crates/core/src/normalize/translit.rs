//! Rule-table transliteration into lowercase Latin script.

use std::collections::HashMap;

use super::TableError;

/// A character the table could not map; it is dropped from the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unmapped {
    /// Code-point index in the input.
    pub index: usize,
    pub ch: char,
}

/// Grapheme-sequence rewrite rules grouped by source script.
///
/// File format: one rule per line, `<source>\t<replacement>`, `#` comments.
#[derive(Debug, Clone, Default)]
pub struct TransliterationTable {
    scripts: Vec<(String, Vec<(String, String)>)>,
    lookup: HashMap<String, String>,
    max_source_len: usize,
}

const CYRILLIC: &str = include_str!("../../data/translit/cyrillic.tsv");
const GREEK: &str = include_str!("../../data/translit/greek.tsv");

impl TransliterationTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled Cyrillic and Greek tables.
    pub fn bundled() -> Self {
        let mut table = Self::empty();
        table.load("cyrillic", CYRILLIC).expect("bundled table is valid");
        table.load("greek", GREEK).expect("bundled table is valid");
        table
    }

    /// Adds the rules of one script from the plain-text table format.
    pub fn load(&mut self, script: &str, text: &str) -> Result<(), TableError> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (source, replacement) = raw.split_once('\t').ok_or(TableError {
                line,
                reason: "expected <source>\\t<replacement>".into(),
            })?;
            if source.is_empty() || replacement.contains('\t') {
                return Err(TableError {
                    line,
                    reason: "empty source or extra column".into(),
                });
            }
            rules.push((source.to_string(), replacement.to_lowercase()));
        }
        for (source, replacement) in &rules {
            self.max_source_len = self.max_source_len.max(source.chars().count());
            self.lookup.insert(source.clone(), replacement.clone());
        }
        self.scripts.push((script.to_string(), rules));
        Ok(())
    }

    pub fn scripts(&self) -> impl Iterator<Item = &str> {
        self.scripts.iter().map(|(s, _)| s.as_str())
    }

    pub fn rule_count(&self) -> usize {
        self.lookup.len()
    }

    fn find(&self, chars: &[char]) -> Option<(usize, &str)> {
        let longest = self.max_source_len.min(chars.len());
        let mut buf = String::new();
        for len in (1..=longest).rev() {
            buf.clear();
            buf.extend(&chars[..len]);
            if let Some(r) = self.lookup.get(&buf) {
                return Some((len, r));
            }
            let lower = buf.to_lowercase();
            if lower != buf {
                if let Some(r) = self.lookup.get(&lower) {
                    return Some((len, r));
                }
            }
        }
        None
    }
}

/// Latin-script letters and marks are passed through (lowercased) rather than
/// looked up: accents survive until normalization.
fn is_latin_passthrough(c: char) -> bool {
    c.is_ascii()
        || matches!(c as u32,
            0x00C0..=0x024F | 0x1E00..=0x1EFF | 0x2C60..=0x2C7F | 0xA720..=0xA7FF
            | 0x0300..=0x036F)
            && c != '\u{00D7}'
            && c != '\u{00F7}'
}

/// Transliterates and lowercases `name`, reporting dropped characters.
pub fn transliterate_with_report(name: &str, table: &TransliterationTable) -> (String, Vec<Unmapped>) {
    let chars: Vec<char> = name.chars().collect();
    let mut out = String::with_capacity(name.len());
    let mut unmapped = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if let Some((len, replacement)) = table.find(&chars[i..]) {
            out.push_str(replacement);
            i += len;
            continue;
        }
        let c = chars[i];
        if c.is_whitespace() {
            out.push(' ');
        } else if is_latin_passthrough(c) {
            out.extend(c.to_lowercase());
        } else {
            unmapped.push(Unmapped { index: i, ch: c });
        }
        i += 1;
    }
    (out, unmapped)
}

pub fn transliterate(name: &str, table: &TransliterationTable) -> String {
    transliterate_with_report(name, table).0
}
