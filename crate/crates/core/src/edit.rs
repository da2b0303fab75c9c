//! Moderation edits and the tab-separated edit log.

use std::fmt;

use thiserror::Error;

use crate::repository::Repository;
use crate::resource::{decode_surface, encode_surface};
use crate::types::{EntityId, EntityType, LanguageScope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModerationEdit {
    /// Moves every variant of `loser` onto `winner` and deletes `loser`.
    MergeEntities {
        winner: EntityId,
        loser: EntityId,
    },
    SetMainName {
        id: EntityId,
        surface: String,
    },
    SetType {
        id: EntityId,
        etype: EntityType,
    },
    AddStopWord {
        language: LanguageScope,
        word: String,
    },
    RestrictVariant {
        id: EntityId,
        surface: String,
        scope: LanguageScope,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("entity {id} has no variant {surface:?}")]
    UnknownVariant { id: EntityId, surface: String },
    #[error("cannot merge entity {0} into itself")]
    SelfMerge(EntityId),
}

/// Applies one edit in place. On error the repository is left untouched.
pub fn apply_edit(repo: &mut Repository, edit: &ModerationEdit) -> Result<(), EditError> {
    match edit {
        ModerationEdit::MergeEntities { winner, loser } => {
            if winner == loser {
                return Err(EditError::SelfMerge(*winner));
            }
            if repo.get(*winner).is_none() {
                return Err(EditError::UnknownEntity(*winner));
            }
            let loser_record = repo.remove(*loser).ok_or(EditError::UnknownEntity(*loser))?;
            let target = repo.get_mut(*winner).expect("checked above");
            for variant in loser_record.into_variants() {
                target.add_variant(variant);
            }
        }
        ModerationEdit::SetMainName { id, surface } => {
            let entity = repo.get_mut(*id).ok_or(EditError::UnknownEntity(*id))?;
            let pos = entity
                .variants()
                .iter()
                .position(|v| v.surface() == surface)
                .ok_or_else(|| EditError::UnknownVariant {
                    id: *id,
                    surface: surface.clone(),
                })?;
            let variant = entity.variants_mut().remove(pos);
            entity.variants_mut().insert(0, variant);
        }
        ModerationEdit::SetType { id, etype } => {
            repo.get_mut(*id).ok_or(EditError::UnknownEntity(*id))?.etype = *etype;
        }
        ModerationEdit::AddStopWord { language, word } => {
            repo.add_stop_word(*language, word);
        }
        ModerationEdit::RestrictVariant { id, surface, scope } => {
            let entity = repo.get_mut(*id).ok_or(EditError::UnknownEntity(*id))?;
            let pos = entity
                .variants()
                .iter()
                .position(|v| v.surface() == surface)
                .ok_or_else(|| EditError::UnknownVariant {
                    id: *id,
                    surface: surface.clone(),
                })?;
            match entity.position(surface, *scope) {
                Some(existing) if existing != pos => {
                    // the restricted form already exists; collapse onto the earlier one
                    let keep = existing.min(pos);
                    let drop = existing.max(pos);
                    let variants = entity.variants_mut();
                    let dropped = variants.remove(drop);
                    variants[keep].scope = *scope;
                    variants[keep].flags = variants[keep].flags.union(dropped.flags);
                }
                _ => entity.variants_mut()[pos].scope = *scope,
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("edit log line {line}: {reason}")]
pub struct EditLogError {
    pub line: usize,
    pub reason: String,
}

impl ModerationEdit {
    /// Parses one edit-log line (tab-separated, surfaces `+`-encoded).
    pub fn parse_line(line: &str) -> Result<ModerationEdit, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        let id = |s: &str| s.parse::<EntityId>().map_err(|e| e.to_string());
        let surface = |s: &str| {
            let decoded = decode_surface(s);
            crate::types::validate_surface(&decoded).map_err(|e| e.to_string())?;
            Ok::<_, String>(decoded)
        };
        match fields.as_slice() {
            ["MERGE", winner, loser] => Ok(ModerationEdit::MergeEntities {
                winner: id(winner)?,
                loser: id(loser)?,
            }),
            ["MAIN", i, s] => Ok(ModerationEdit::SetMainName {
                id: id(i)?,
                surface: surface(s)?,
            }),
            ["TYPE", i, t] => Ok(ModerationEdit::SetType {
                id: id(i)?,
                etype: t.parse().map_err(|e: crate::types::ValueError| e.to_string())?,
            }),
            ["STOP", lang, word] if !word.is_empty() => Ok(ModerationEdit::AddStopWord {
                language: lang.parse().map_err(|e: crate::types::ValueError| e.to_string())?,
                word: word.to_string(),
            }),
            ["SCOPE", i, s, lang] => Ok(ModerationEdit::RestrictVariant {
                id: id(i)?,
                surface: surface(s)?,
                scope: lang.parse().map_err(|e: crate::types::ValueError| e.to_string())?,
            }),
            _ => Err(format!("unrecognised edit {line:?}")),
        }
    }
}

impl fmt::Display for ModerationEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModerationEdit::MergeEntities { winner, loser } => write!(f, "MERGE\t{winner}\t{loser}"),
            ModerationEdit::SetMainName { id, surface } => {
                write!(f, "MAIN\t{id}\t{}", encode_surface(surface))
            }
            ModerationEdit::SetType { id, etype } => write!(f, "TYPE\t{id}\t{etype}"),
            ModerationEdit::AddStopWord { language, word } => write!(f, "STOP\t{language}\t{word}"),
            ModerationEdit::RestrictVariant { id, surface, scope } => {
                write!(f, "SCOPE\t{id}\t{}\t{scope}", encode_surface(surface))
            }
        }
    }
}

/// Parses a whole edit log; blank lines and `#` comments are skipped. Each
/// edit is returned with its 1-based line number.
pub fn parse_edit_log(text: &str) -> Result<Vec<(usize, ModerationEdit)>, EditLogError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            ModerationEdit::parse_line(l.strip_suffix('\r').unwrap_or(l))
                .map(|e| (i + 1, e))
                .map_err(|reason| EditLogError { line: i + 1, reason })
        })
        .collect()
}

/// Applies a log in order to a copy of `repo`; the first failure aborts and
/// reports its line, leaving the input untouched.
pub fn apply_edit_log(repo: &Repository, edits: &[(usize, ModerationEdit)]) -> Result<Repository, EditLogError> {
    let mut work = repo.clone();
    for (line, edit) in edits {
        apply_edit(&mut work, edit).map_err(|e| EditLogError {
            line: *line,
            reason: e.to_string(),
        })?;
    }
    Ok(work)
}
