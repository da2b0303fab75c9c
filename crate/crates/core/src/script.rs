//! Writing-system detection and resource statistics.

use std::collections::{BTreeMap, BTreeSet};

use crate::repository::Repository;
use crate::types::EntityType;

/// ISO 15924 script of a name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Script {
    Latin,
    Cyrillic,
    Arabic,
    /// Han mixed with Hiragana or Katakana, or kana alone.
    Japanese,
    Han,
    Hebrew,
    /// Hangul, possibly mixed with Han.
    Korean,
    Devanagari,
    Greek,
    Thai,
    Georgian,
    Bengali,
    Tamil,
    Malayalam,
    Armenian,
    Kannada,
    Telugu,
    Ethiopic,
    Other,
    /// No letters at all.
    Common,
}

impl Script {
    pub fn code(self) -> &'static str {
        match self {
            Script::Latin => "Latn",
            Script::Cyrillic => "Cyrl",
            Script::Arabic => "Arab",
            Script::Japanese => "Jpan",
            Script::Han => "Hani",
            Script::Hebrew => "Hebr",
            Script::Korean => "Kore",
            Script::Devanagari => "Deva",
            Script::Greek => "Grek",
            Script::Thai => "Thai",
            Script::Georgian => "Geor",
            Script::Bengali => "Beng",
            Script::Tamil => "Taml",
            Script::Malayalam => "Mlym",
            Script::Armenian => "Armn",
            Script::Kannada => "Knda",
            Script::Telugu => "Telu",
            Script::Ethiopic => "Ethi",
            Script::Other => "Zzzz",
            Script::Common => "Zyyy",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Script::Latin => "Latin",
            Script::Cyrillic => "Cyrillic",
            Script::Arabic => "Arabic",
            Script::Japanese => "Japanese (Han+Hiragana+Katakana)",
            Script::Han => "Han",
            Script::Hebrew => "Hebrew",
            Script::Korean => "Korean (Hangul+Han)",
            Script::Devanagari => "Devanagari",
            Script::Greek => "Greek",
            Script::Thai => "Thai",
            Script::Georgian => "Georgian",
            Script::Bengali => "Bengali",
            Script::Tamil => "Tamil",
            Script::Malayalam => "Malayalam",
            Script::Armenian => "Armenian",
            Script::Kannada => "Kannada",
            Script::Telugu => "Telugu",
            Script::Ethiopic => "Ethiopic",
            Script::Other => "Unknown",
            Script::Common => "Common",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Block {
    Kana,
    Hangul,
    Single(Script),
}

fn block_of(c: char) -> Block {
    let s = match c as u32 {
        0x0041..=0x024F | 0x1E00..=0x1EFF | 0x2C60..=0x2C7F | 0xA720..=0xA7FF | 0xFF21..=0xFF5A => Script::Latin,
        0x0370..=0x03FF | 0x1F00..=0x1FFF => Script::Greek,
        0x0400..=0x052F | 0x1C80..=0x1C8F | 0x2DE0..=0x2DFF | 0xA640..=0xA69F => Script::Cyrillic,
        0x0530..=0x058F => Script::Armenian,
        0x0590..=0x05FF | 0xFB1D..=0xFB4F => Script::Hebrew,
        0x0600..=0x06FF | 0x0750..=0x077F | 0x08A0..=0x08FF | 0xFB50..=0xFDFF | 0xFE70..=0xFEFF => Script::Arabic,
        0x0900..=0x097F => Script::Devanagari,
        0x0980..=0x09FF => Script::Bengali,
        0x0B80..=0x0BFF => Script::Tamil,
        0x0C00..=0x0C7F => Script::Telugu,
        0x0C80..=0x0CFF => Script::Kannada,
        0x0D00..=0x0D7F => Script::Malayalam,
        0x0E00..=0x0E7F => Script::Thai,
        0x10A0..=0x10FF | 0x1C90..=0x1CBF => Script::Georgian,
        0x1200..=0x139F | 0x2D80..=0x2DDF => Script::Ethiopic,
        0x3040..=0x30FF | 0x31F0..=0x31FF | 0xFF66..=0xFF9F => return Block::Kana,
        0x1100..=0x11FF | 0x3130..=0x318F | 0xAC00..=0xD7AF => return Block::Hangul,
        0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF | 0x20000..=0x3134F => Script::Han,
        _ => Script::Other,
    };
    Block::Single(s)
}

/// The script most of the letters of `name` are written in. Kana or
/// Hangul anywhere in the name makes it Japanese or Korean.
pub fn script_of(name: &str) -> Script {
    let mut counts: BTreeMap<Script, usize> = BTreeMap::new();
    let (mut kana, mut hangul) = (false, false);
    for c in name.chars().filter(|c| c.is_alphabetic()) {
        match block_of(c) {
            Block::Kana => kana = true,
            Block::Hangul => hangul = true,
            Block::Single(s) => *counts.entry(s).or_default() += 1,
        }
    }
    if hangul {
        return Script::Korean;
    }
    if kana {
        return Script::Japanese;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map_or(Script::Common, |(s, _)| s)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub entities: usize,
    pub variants: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResourceStats {
    pub entities: usize,
    pub variants: usize,
    /// Sorted by variant count, largest first.
    pub by_script: Vec<(Script, Tally)>,
    pub by_type: BTreeMap<EntityType, Tally>,
    /// Number of entities having exactly k names (main name included).
    pub names_per_entity: BTreeMap<usize, usize>,
}

impl ResourceStats {
    pub fn compute(repo: &Repository) -> Self {
        let mut scripts: BTreeMap<Script, (usize, BTreeSet<u64>)> = BTreeMap::new();
        let mut stats = ResourceStats::default();
        for e in repo.entities() {
            let n = e.variants().len();
            stats.entities += 1;
            stats.variants += n;
            let t = stats.by_type.entry(e.etype).or_default();
            t.entities += 1;
            t.variants += n;
            *stats.names_per_entity.entry(n).or_default() += 1;
            for v in e.variants() {
                let slot = scripts.entry(script_of(v.surface())).or_default();
                slot.0 += 1;
                slot.1.insert(e.id.get());
            }
        }
        stats.by_script = scripts
            .into_iter()
            .map(|(s, (variants, ids))| {
                (
                    s,
                    Tally {
                        entities: ids.len(),
                        variants,
                    },
                )
            })
            .collect();
        stats
            .by_script
            .sort_by(|a, b| b.1.variants.cmp(&a.1.variants).then(a.0.cmp(&b.0)));
        stats
    }

    /// Entities with at least `k` names.
    pub fn entities_with_at_least(&self, k: usize) -> usize {
        self.names_per_entity.range(k..).map(|(_, n)| n).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::parse_resource;

    #[test]
    fn scripts() {
        assert_eq!(script_of("Muammar Gaddafi"), Script::Latin);
        assert_eq!(script_of("Муамар Каддафи"), Script::Cyrillic);
        assert_eq!(script_of("معمر القذافي"), Script::Arabic);
        assert_eq!(script_of("Κωνσταντίνος"), Script::Greek);
        assert_eq!(script_of("ムアンマル・カダフィ"), Script::Japanese);
        assert_eq!(script_of("安倍晋三"), Script::Han);
        assert_eq!(script_of("무아마르 카다피"), Script::Korean);
        assert_eq!(script_of("מועמר קדאפי"), Script::Hebrew);
        assert_eq!(script_of("मुअम्मर गद्दाफ़ी"), Script::Devanagari);
        assert_eq!(script_of("მუამარ კადაფი"), Script::Georgian);
        assert_eq!(script_of("123"), Script::Common);
        assert_eq!(script_of("ФН FN Ф"), Script::Cyrillic);
    }

    #[test]
    fn sample_stats() {
        let repo = parse_resource(include_bytes!("../tests/data/sample.tsv")).unwrap();
        let s = ResourceStats::compute(&repo);
        assert_eq!((s.entities, s.variants), (2, 10));
        assert_eq!(s.by_script[0].0, Script::Latin);
        let total: usize = s.by_script.iter().map(|(_, t)| t.variants).sum();
        assert_eq!(total, 10);
        assert_eq!(s.by_type[&EntityType::Organisation].entities, 2);
        assert_eq!(s.entities_with_at_least(1), 2);
    }
}
