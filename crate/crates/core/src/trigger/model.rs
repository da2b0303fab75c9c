use std::collections::{BTreeSet, HashMap};

use super::TriggerError;
use crate::types::EntityType;

const CLASSES: [EntityType; 2] = [EntityType::Person, EntityType::Organisation];

fn slot(class: EntityType) -> usize {
    match class {
        EntityType::Person => 0,
        EntityType::Organisation => 1,
    }
}

/// Lowercased word unigrams (`w:`) and per-word character trigrams (`c:`)
/// with `^`/`$` boundary marks.
pub fn features(name: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in name.split_whitespace() {
        let word = word.to_lowercase();
        out.push(format!("w:{word}"));
        let padded: Vec<char> = std::iter::once('^')
            .chain(word.chars())
            .chain(std::iter::once('$'))
            .collect();
        for gram in padded.windows(3) {
            out.push(format!("c:{}", gram.iter().collect::<String>()));
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
struct ClassCounts {
    counts: HashMap<String, u64>,
    total: u64,
}

/// Multinomial naive Bayes over name features with add-k smoothing.
#[derive(Debug, Clone)]
pub struct TypeModel {
    classes: [ClassCounts; 2],
    vocabulary: BTreeSet<String>,
    smoothing: f64,
    priors: [f64; 2],
}

pub fn train_type_model<S: AsRef<str>>(persons: &[S], orgs: &[S], smoothing: f64) -> Result<TypeModel, TriggerError> {
    if !(smoothing.is_finite() && smoothing > 0.0) {
        return Err(TriggerError::InvalidSmoothing(smoothing));
    }
    let mut classes: [ClassCounts; 2] = Default::default();
    let mut vocabulary = BTreeSet::new();
    for (class, names) in CLASSES.iter().zip([persons, orgs]) {
        if names.is_empty() {
            return Err(TriggerError::EmptyTrainingClass(*class));
        }
        let counts = &mut classes[slot(*class)];
        for name in names {
            for f in features(name.as_ref()) {
                *counts.counts.entry(f.clone()).or_default() += 1;
                counts.total += 1;
                vocabulary.insert(f);
            }
        }
    }
    Ok(TypeModel {
        classes,
        vocabulary,
        smoothing,
        priors: [persons.len() as f64, orgs.len() as f64],
    })
}

impl TypeModel {
    /// Replaces the class priors (taken from the training list sizes by
    /// default). Only their ratio matters.
    pub fn with_priors(mut self, person: f64, organisation: f64) -> Result<Self, TriggerError> {
        for w in [person, organisation] {
            if !(w.is_finite() && w > 0.0) {
                return Err(TriggerError::InvalidPrior(w));
            }
        }
        self.priors = [person, organisation];
        Ok(self)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.vocabulary.iter().map(String::as_str)
    }

    /// Smoothed P(feature | class); `None` outside the vocabulary.
    pub fn probability(&self, class: EntityType, feature: &str) -> Option<f64> {
        if !self.vocabulary.contains(feature) {
            return None;
        }
        let c = &self.classes[slot(class)];
        let n = c.counts.get(feature).copied().unwrap_or(0) as f64;
        Some((n + self.smoothing) / (c.total as f64 + self.smoothing * self.vocabulary.len() as f64))
    }

    fn log_score(&self, class: EntityType, feats: &[String]) -> f64 {
        let prior = self.priors[slot(class)] / self.priors.iter().sum::<f64>();
        feats
            .iter()
            .filter_map(|f| self.probability(class, f))
            .map(f64::ln)
            .sum::<f64>()
            + prior.ln()
    }

    /// Most probable class and its posterior. Features never seen in
    /// training are ignored; an exact tie goes to Person.
    pub fn classify(&self, name: &str) -> (EntityType, f64) {
        let feats = features(name);
        let p = self.log_score(EntityType::Person, &feats);
        let o = self.log_score(EntityType::Organisation, &feats);
        let (class, best, other) = if o > p {
            (EntityType::Organisation, o, p)
        } else {
            (EntityType::Person, p, o)
        };
        (class, 1.0 / (1.0 + (other - best).exp()))
    }
}
