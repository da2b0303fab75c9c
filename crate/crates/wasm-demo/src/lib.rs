//! Browser bindings for the name resource: annotate text, compare two
//! spellings, and expand a name with inflection suffixes.
//!
//! Every export returns a JSON string. The `*_json` functions hold the logic
//! and run natively as well.

use namebank::inflect::{expand_inflections, expansion_size, InflectionRuleSet};
use namebank::matcher::{compile, Match};
use namebank::merge::{merge_decision, Decision, MergerConfig};
use namebank::normalize::{similarity, NameKey, Normalizer};
use namebank::{parse_resource, LanguageScope, NameVariant, Repository};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Forms listed by [`inflect`]; the count is always exact.
pub const MAX_LISTED_FORMS: usize = 200;

fn scope(lang: &str) -> Result<Option<LanguageScope>, String> {
    match lang.trim() {
        "" => Ok(None),
        code => code.parse().map(Some).map_err(|e| format!("{e}")),
    }
}

#[wasm_bindgen]
pub struct Annotator {
    repo: Repository,
}

impl Annotator {
    pub fn parse(resource: &str) -> Result<Annotator, String> {
        parse_resource(resource.as_bytes())
            .map(|repo| Annotator { repo })
            .map_err(|e| e.to_string())
    }

    pub fn annotate_json(&self, text: &str, lang: &str) -> Result<String, String> {
        let hits: Vec<Match> = compile(&self.repo, scope(lang)?).find_all(text);
        serde_json::to_string(&hits).map_err(|e| e.to_string())
    }
}

#[wasm_bindgen]
impl Annotator {
    #[wasm_bindgen(constructor)]
    pub fn new(resource: &str) -> Result<Annotator, JsError> {
        Annotator::parse(resource).map_err(|e| JsError::new(&e))
    }

    pub fn entities(&self) -> usize {
        self.repo.len()
    }

    pub fn variants(&self) -> usize {
        self.repo.variant_count()
    }

    /// Matches in `text` for a build in `lang` (empty for universal only).
    pub fn annotate(&self, text: &str, lang: &str) -> Result<String, JsError> {
        self.annotate_json(text, lang).map_err(|e| JsError::new(&e))
    }
}

#[derive(Serialize)]
struct Keyed<'a> {
    name: &'a str,
    translit: &'a str,
    normalized: &'a str,
    signature: &'a str,
}

impl<'a> Keyed<'a> {
    fn new(name: &'a str, key: &'a NameKey) -> Self {
        Keyed {
            name,
            translit: &key.translit,
            normalized: &key.normalized,
            signature: &key.signature,
        }
    }
}

#[derive(Serialize)]
struct Comparison<'a> {
    a: Keyed<'a>,
    b: Keyed<'a>,
    similarity: f64,
    same_block: bool,
    merge: bool,
}

pub fn compare_json(a: &str, b: &str, threshold: f64) -> Result<String, String> {
    let cfg = MergerConfig::new(threshold).map_err(|e| e.to_string())?;
    let n = Normalizer::default();
    let (ka, kb) = (n.key(a), n.key(b));
    let merge = matches!(merge_decision(&ka, &kb, &cfg), Ok(Decision::Merge(_)));
    let out = Comparison {
        similarity: similarity(&ka, &kb),
        same_block: ka.signature == kb.signature,
        merge,
        a: Keyed::new(a, &ka),
        b: Keyed::new(b, &kb),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Normalized forms, signatures and similarity of two spellings, and
/// whether they would merge at `threshold`.
#[wasm_bindgen]
pub fn compare(a: &str, b: &str, threshold: f64) -> Result<String, JsError> {
    compare_json(a, b, threshold).map_err(|e| JsError::new(&e))
}

#[derive(Serialize)]
struct Inflection<'a> {
    language: String,
    pattern: &'a str,
    count: usize,
    forms: Vec<&'a str>,
}

pub fn inflect_json(name: &str, rules: &str) -> Result<String, String> {
    let rules = InflectionRuleSet::parse(rules).map_err(|e| e.to_string())?;
    let mut base = NameVariant::new(name.trim(), LanguageScope::Universal).map_err(|e| e.to_string())?;
    base.flags.frequency_eligible = true;
    let exp = expand_inflections(&base, &rules).map_err(|e| e.to_string())?;
    let forms = exp
        .enumerated
        .iter()
        .flatten()
        .take(MAX_LISTED_FORMS)
        .map(NameVariant::surface)
        .collect();
    let out = Inflection {
        language: rules.language.to_string(),
        pattern: &exp.pattern,
        count: expansion_size(base.surface(), &rules),
        forms,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Suffix pattern and inflected forms of `name` under a rule file.
#[wasm_bindgen]
pub fn inflect(name: &str, rules: &str) -> Result<String, JsError> {
    inflect_json(name, rules).map_err(|e| JsError::new(&e))
}
