//! Deciding whether newly found names are variants of known entities.
//!
//! Names are grouped by consonant signature and only compared within a
//! group. A candidate that reaches the threshold against any variant in its
//! group joins the best-scoring entity; otherwise it becomes a new entity.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::normalize::{similarity, NameKey, Normalizer};
use crate::repository::Repository;
use crate::resource::{decode_surface, encode_surface};
use crate::types::{validate_surface, EntityId, EntityType, LanguageScope, NameVariant, VariantFlags};

/// Number of distinct news clusters a name must appear in before it is
/// eligible for release and inflection.
pub const CLUSTER_THRESHOLD: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergerConfig {
    threshold: f64,
    /// Merge when the score equals the threshold exactly.
    pub treat_equal_as_merge: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error("threshold {0} is outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("signatures differ: {0:?} vs {1:?}")]
    SignatureMismatch(String, String),
}

impl Default for MergerConfig {
    fn default() -> Self {
        MergerConfig {
            threshold: 0.94,
            treat_equal_as_merge: true,
        }
    }
}

impl MergerConfig {
    pub fn new(threshold: f64) -> Result<Self, MergeError> {
        if threshold > 0.0 && threshold <= 1.0 {
            Ok(MergerConfig {
                threshold,
                ..Default::default()
            })
        } else {
            Err(MergeError::InvalidThreshold(threshold))
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn accepts(&self, score: f64) -> bool {
        if self.treat_equal_as_merge {
            score >= self.threshold
        } else {
            score > self.threshold
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateName {
    pub surface: String,
    pub language: LanguageScope,
    pub guessed_type: EntityType,
    /// Trigger words seen next to the name.
    pub evidence: String,
    pub cluster_count: u32,
}

impl CandidateName {
    pub fn new(surface: impl Into<String>, language: LanguageScope, guessed_type: EntityType) -> Self {
        CandidateName {
            surface: surface.into(),
            language,
            guessed_type,
            evidence: String::new(),
            cluster_count: 1,
        }
    }

    fn flags(&self) -> VariantFlags {
        VariantFlags {
            frequency_eligible: self.cluster_count >= CLUSTER_THRESHOLD,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decision {
    Merge(f64),
    Separate(f64),
}

impl Decision {
    pub fn score(self) -> f64 {
        match self {
            Decision::Merge(s) | Decision::Separate(s) => s,
        }
    }
}

pub fn merge_decision(a: &NameKey, b: &NameKey, cfg: &MergerConfig) -> Result<Decision, MergeError> {
    if a.signature != b.signature {
        return Err(MergeError::SignatureMismatch(a.signature.clone(), b.signature.clone()));
    }
    let score = similarity(a, b);
    Ok(if cfg.accepts(score) {
        Decision::Merge(score)
    } else {
        Decision::Separate(score)
    })
}

/// One signature group.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bucket {
    /// Indices into the candidate list.
    pub candidates: Vec<(usize, NameKey)>,
    pub existing: Vec<(EntityId, NameKey)>,
}

/// Groups candidates and existing variants by signature. Only groups holding
/// at least one candidate are returned.
pub fn block_by_signature(
    candidates: &[CandidateName],
    repo: &Repository,
    normalizer: &Normalizer,
) -> BTreeMap<String, Bucket> {
    let mut buckets: BTreeMap<String, Bucket> = BTreeMap::new();
    for (i, c) in candidates.iter().enumerate() {
        let key = normalizer.key(&c.surface);
        buckets
            .entry(key.signature.clone())
            .or_default()
            .candidates
            .push((i, key));
    }
    if buckets.is_empty() {
        return buckets;
    }
    for entity in repo.entities() {
        for v in entity.variants() {
            let key = normalizer.key(v.surface());
            if let Some(bucket) = buckets.get_mut(&key.signature) {
                bucket.existing.push((entity.id, key));
            }
        }
    }
    buckets
}

#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    Merged { id: EntityId, score: f64 },
    Created { id: EntityId, best_score: Option<f64> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MergeReport {
    /// One entry per input candidate, in input order.
    pub resolutions: Vec<(String, Resolution)>,
}

impl MergeReport {
    pub fn merged(&self) -> impl Iterator<Item = (&str, EntityId, f64)> {
        self.resolutions.iter().filter_map(|(s, r)| match r {
            Resolution::Merged { id, score } => Some((s.as_str(), *id, *score)),
            _ => None,
        })
    }

    pub fn created(&self) -> impl Iterator<Item = (&str, EntityId)> {
        self.resolutions.iter().filter_map(|(s, r)| match r {
            Resolution::Created { id, .. } => Some((s.as_str(), *id)),
            _ => None,
        })
    }

    pub fn skipped(&self) -> impl Iterator<Item = (&str, &str)> {
        self.resolutions.iter().filter_map(|(s, r)| match r {
            Resolution::Skipped { reason } => Some((s.as_str(), reason.as_str())),
            _ => None,
        })
    }

    pub fn merged_count(&self) -> usize {
        self.merged().count()
    }

    pub fn created_count(&self) -> usize {
        self.created().count()
    }
}

impl fmt::Display for MergeReport {
    /// `surface \t decision \t entity \t score`, surfaces `+`-encoded,
    /// scores to four decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (surface, r) in &self.resolutions {
            let surface = crate::resource::encode_surface(surface);
            match r {
                Resolution::Merged { id, score } => writeln!(f, "{surface}\tmerged\t{id}\t{score:.4}")?,
                Resolution::Created { id, best_score } => {
                    writeln!(f, "{surface}\tcreated\t{id}\t{:.4}", best_score.unwrap_or(0.0))?
                }
                Resolution::Skipped { reason } => writeln!(f, "{surface}\tskipped\t-\t{reason}")?,
            }
        }
        Ok(())
    }
}

/// Resolves a batch of candidates against `repo` in input order.
///
/// A candidate is compared with every existing variant in its signature
/// group and with every earlier candidate of the batch that landed there.
/// The best score wins, ties going to the lower entity id.
pub fn merge_batch(
    repo: &mut Repository,
    candidates: &[CandidateName],
    cfg: &MergerConfig,
    normalizer: &Normalizer,
) -> MergeReport {
    let mut report = MergeReport::default();
    let mut buckets = block_by_signature(candidates, repo, normalizer);
    let mut keys: Vec<Option<NameKey>> = vec![None; candidates.len()];
    for bucket in buckets.values() {
        for (i, key) in &bucket.candidates {
            keys[*i] = Some(key.clone());
        }
    }

    for (i, cand) in candidates.iter().enumerate() {
        let key = keys[i].take().expect("every candidate is bucketed");
        if let Err(e) = validate_surface(&cand.surface) {
            report
                .resolutions
                .push((cand.surface.clone(), Resolution::Skipped { reason: e.to_string() }));
            continue;
        }
        if key.normalized.is_empty() {
            report.resolutions.push((
                cand.surface.clone(),
                Resolution::Skipped {
                    reason: "no Latin letters after transliteration".into(),
                },
            ));
            continue;
        }
        let bucket = buckets.get_mut(&key.signature).expect("bucket exists");
        let mut best: Option<(f64, EntityId)> = None;
        let mut best_any: Option<f64> = None;
        for (id, existing) in &bucket.existing {
            let decision = merge_decision(&key, existing, cfg).expect("same bucket, same signature");
            best_any = Some(best_any.map_or(decision.score(), |b: f64| b.max(decision.score())));
            if let Decision::Merge(score) = decision {
                let better = match best {
                    None => true,
                    Some((s, bid)) => score > s || (score == s && *id < bid),
                };
                if better {
                    best = Some((score, *id));
                }
            }
        }
        let variant = NameVariant::new(cand.surface.clone(), cand.language)
            .expect("validated above")
            .with_flags(cand.flags());
        let resolution = match best {
            Some((score, id)) => {
                repo.add_variant(id, variant);
                Resolution::Merged { id, score }
            }
            None => {
                let id = repo.create_entity(cand.guessed_type, variant);
                Resolution::Created {
                    id,
                    best_score: best_any,
                }
            }
        };
        let owner = match resolution {
            Resolution::Merged { id, .. } | Resolution::Created { id, .. } => id,
            Resolution::Skipped { .. } => unreachable!(),
        };
        bucket.existing.push((owner, key));
        report.resolutions.push((cand.surface.clone(), resolution));
    }
    report
}

/// Distinct entity ids that received at least one candidate.
pub fn touched_entities(report: &MergeReport) -> HashSet<EntityId> {
    report
        .resolutions
        .iter()
        .filter_map(|(_, r)| match r {
            Resolution::Merged { id, .. } | Resolution::Created { id, .. } => Some(*id),
            Resolution::Skipped { .. } => None,
        })
        .collect()
}

/// A candidate-file line that could not be read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateLineError {
    pub line: usize,
    pub reason: String,
}

/// Reads the candidate file: `surface \t language \t type \t cluster_count`
/// with an optional fifth evidence column. Bad lines are returned separately
/// so the rest of the batch can proceed.
pub fn parse_candidates(text: &str) -> (Vec<CandidateName>, Vec<CandidateLineError>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let parsed = (|| -> Result<CandidateName, String> {
            if !(4..=5).contains(&fields.len()) {
                return Err(format!("expected 4 or 5 fields, found {}", fields.len()));
            }
            let surface = decode_surface(fields[0]);
            validate_surface(&surface).map_err(|e| e.to_string())?;
            let language = fields[1].parse::<LanguageScope>().map_err(|e| e.to_string())?;
            let guessed_type = fields[2].parse::<EntityType>().map_err(|e| e.to_string())?;
            let cluster_count: u32 = fields[3]
                .parse()
                .map_err(|_| format!("cluster count {:?} is not a number", fields[3]))?;
            let mut cand = CandidateName::new(surface, language, guessed_type);
            cand.cluster_count = cluster_count;
            cand.evidence = fields.get(4).map(|e| e.to_string()).unwrap_or_default();
            Ok(cand)
        })();
        match parsed {
            Ok(c) => ok.push(c),
            Err(reason) => bad.push(CandidateLineError { line: i + 1, reason }),
        }
    }
    (ok, bad)
}

impl fmt::Display for CandidateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            encode_surface(&self.surface),
            self.language,
            self.guessed_type,
            self.cluster_count
        )?;
        if !self.evidence.is_empty() {
            write!(f, "\t{}", self.evidence.replace(['\t', '\n', '\r'], " "))?;
        }
        Ok(())
    }
}
