//! The four-column resource file and its optional metadata sidecar.
//!
//! Each resource line is `id \t type \t language \t surface`, where spaces
//! inside the surface are written as `+`. All lines sharing an id form one
//! entity; the first of them carries the main name.
//!
//! The sidecar keeps what the four-column format cannot: release flags,
//! name stop words and the id allocator.
//!
//! ```text
//! NEXT  <id>
//! FLAG  <id> <scope> <surface> <V|W|F letters>
//! STOP  <lang|u> <word>
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::repository::Repository;
use crate::types::{validate_surface, EntityId, EntityRecord, EntityType, LanguageScope, NameVariant, VariantFlags};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("input is not valid UTF-8 (byte {0})")]
    Utf8(usize),
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: invalid entity type {value:?}")]
    InvalidType { line: usize, value: String },
    #[error("line {line}: invalid language {value:?}")]
    InvalidLanguage { line: usize, value: String },
    #[error("line {line}: duplicate variant {surface:?} for entity {id}")]
    DuplicateVariant { line: usize, id: EntityId, surface: String },
    #[error("line {line}: entity {id} was previously declared with another type")]
    InconsistentType { line: usize, id: EntityId },
}

impl ResourceError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ResourceError::Utf8(_) => None,
            ResourceError::MalformedLine { line, .. }
            | ResourceError::InvalidType { line, .. }
            | ResourceError::InvalidLanguage { line, .. }
            | ResourceError::DuplicateVariant { line, .. }
            | ResourceError::InconsistentType { line, .. } => Some(*line),
        }
    }
}

/// Converts a stored surface to its on-disk form.
pub fn encode_surface(surface: &str) -> String {
    surface.replace(' ', "+")
}

/// Converts an on-disk surface to its stored form: every `+` becomes a space.
/// Literal spaces are accepted as-is.
pub fn decode_surface(field: &str) -> String {
    field.replace('+', " ")
}

fn malformed(line: usize, reason: impl Into<String>) -> ResourceError {
    ResourceError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Parses a resource file. Empty lines are ignored; `\r\n` endings are
/// tolerated.
pub fn parse_resource(bytes: &[u8]) -> Result<Repository, ResourceError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ResourceError::Utf8(e.valid_up_to()))?;

    let mut records: BTreeMap<EntityId, EntityRecord> = BTreeMap::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 4 {
            return Err(malformed(
                line,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let id: EntityId = fields[0]
            .parse()
            .map_err(|_| malformed(line, format!("invalid id {:?}", fields[0])))?;
        let etype: EntityType = fields[1].parse().map_err(|_| ResourceError::InvalidType {
            line,
            value: fields[1].to_string(),
        })?;
        let scope: LanguageScope = fields[2].parse().map_err(|_| ResourceError::InvalidLanguage {
            line,
            value: fields[2].to_string(),
        })?;
        let surface = decode_surface(fields[3]);
        validate_surface(&surface).map_err(|e| malformed(line, e.to_string()))?;
        let variant = NameVariant::new(surface, scope).map_err(|e| malformed(line, e.to_string()))?;

        match records.get_mut(&id) {
            None => {
                records.insert(id, EntityRecord::new(id, etype, variant));
            }
            Some(record) => {
                if record.etype != etype {
                    return Err(ResourceError::InconsistentType { line, id });
                }
                if record.contains(variant.surface(), scope) {
                    return Err(ResourceError::DuplicateVariant {
                        line,
                        id,
                        surface: variant.surface().to_string(),
                    });
                }
                record.add_variant(variant);
            }
        }
    }
    // Records are internally consistent at this point.
    Ok(Repository::from_records(records.into_values()).expect("validated records"))
}

/// Writes one line per variant: entities by ascending id, main name first,
/// then the remaining variants in stored order.
pub fn serialize_resource(repo: &Repository) -> Vec<u8> {
    let mut out = String::new();
    for entity in repo.entities() {
        for v in entity.variants() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                entity.id,
                entity.etype,
                v.scope,
                encode_surface(v.surface())
            );
        }
    }
    out.into_bytes()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetadataError {
    #[error("metadata is not valid UTF-8")]
    Utf8,
    #[error("metadata line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Applies a metadata sidecar to an already parsed repository. Flags for
/// variants that no longer exist are ignored.
pub fn apply_metadata(repo: &mut Repository, bytes: &[u8]) -> Result<(), MetadataError> {
    let text = std::str::from_utf8(bytes).map_err(|_| MetadataError::Utf8)?;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let bad = |reason: &str| MetadataError::Malformed {
            line,
            reason: reason.to_string(),
        };
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        match fields.as_slice() {
            ["NEXT", id] => {
                let id: EntityId = id.parse().map_err(|_| bad("invalid id"))?;
                repo.reserve_ids_below(id);
            }
            ["FLAG", id, scope, surface, code] => {
                let id: EntityId = id.parse().map_err(|_| bad("invalid id"))?;
                let scope: LanguageScope = scope.parse().map_err(|_| bad("invalid language"))?;
                let flags = VariantFlags::from_code(code).ok_or_else(|| bad("invalid flags"))?;
                let surface = decode_surface(surface);
                if let Some(entity) = repo.get_mut(id) {
                    if let Some(i) = entity.position(&surface, scope) {
                        entity.variants_mut()[i].flags = flags;
                    }
                }
            }
            ["STOP", lang, word] => {
                let lang: LanguageScope = lang.parse().map_err(|_| bad("invalid language"))?;
                if word.is_empty() {
                    return Err(bad("empty stop word"));
                }
                repo.add_stop_word(lang, word);
            }
            _ => return Err(bad("unrecognised record")),
        }
    }
    Ok(())
}

pub fn serialize_metadata(repo: &Repository) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(out, "NEXT\t{}", repo.next_id());
    for entity in repo.entities() {
        for v in entity.variants().iter().filter(|v| !v.flags.is_empty()) {
            let _ = writeln!(
                out,
                "FLAG\t{}\t{}\t{}\t{}",
                entity.id,
                v.scope,
                encode_surface(v.surface()),
                v.flags.code()
            );
        }
    }
    for (lang, word) in repo.stop_words() {
        let _ = writeln!(out, "STOP\t{lang}\t{word}");
    }
    out.into_bytes()
}
