use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::types::{EntityId, EntityRecord, EntityType, LanguageScope, NameVariant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepositoryError {
    #[error("entity {0} already exists")]
    DuplicateId(EntityId),
    #[error("entity {id} lists variant {surface:?} ({scope}) twice")]
    DuplicateVariant {
        id: EntityId,
        surface: String,
        scope: LanguageScope,
    },
}

/// The mutable entity database plus its name stop-word lists.
///
/// Single writer: every mutation goes through `&mut self`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repository {
    entities: BTreeMap<EntityId, EntityRecord>,
    stop_words: BTreeMap<LanguageScope, BTreeSet<String>>,
    next_id: EntityId,
}

impl Default for Repository {
    fn default() -> Self {
        Self::new()
    }
}

/// One row of [`Repository::export_variants`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportRow {
    pub id: EntityId,
    pub etype: EntityType,
    pub scope: LanguageScope,
    pub surface: String,
}

impl Repository {
    pub fn new() -> Self {
        Repository {
            entities: BTreeMap::new(),
            stop_words: BTreeMap::new(),
            next_id: EntityId::new(1).expect("1 is a valid id"),
        }
    }

    /// Builds a repository from complete records, rejecting duplicate ids and
    /// duplicate (surface, scope) pairs within a record.
    pub fn from_records(records: impl IntoIterator<Item = EntityRecord>) -> Result<Self, RepositoryError> {
        let mut repo = Repository::new();
        for record in records {
            repo.insert(record)?;
        }
        Ok(repo)
    }

    pub fn insert(&mut self, record: EntityRecord) -> Result<(), RepositoryError> {
        if self.entities.contains_key(&record.id) {
            return Err(RepositoryError::DuplicateId(record.id));
        }
        let variants = record.variants();
        for (i, v) in variants.iter().enumerate() {
            if variants[..i].iter().any(|w| w.same_name(v)) {
                return Err(RepositoryError::DuplicateVariant {
                    id: record.id,
                    surface: v.surface().to_string(),
                    scope: v.scope,
                });
            }
        }
        self.bump_next_id(record.id);
        self.entities.insert(record.id, record);
        Ok(())
    }

    /// Allocates a fresh id and stores a new single-variant entity.
    pub fn create_entity(&mut self, etype: EntityType, main: NameVariant) -> EntityId {
        let id = self.next_id;
        self.next_id = id.next();
        self.entities.insert(id, EntityRecord::new(id, etype, main));
        id
    }

    fn bump_next_id(&mut self, seen: EntityId) {
        if seen >= self.next_id {
            self.next_id = seen.next();
        }
    }

    /// Raises the allocator so that no id below `next` is handed out again.
    pub fn reserve_ids_below(&mut self, next: EntityId) {
        if next > self.next_id {
            self.next_id = next;
        }
    }

    pub fn next_id(&self) -> EntityId {
        self.next_id
    }

    pub fn get(&self, id: EntityId) -> Option<&EntityRecord> {
        self.entities.get(&id)
    }

    pub(crate) fn get_mut(&mut self, id: EntityId) -> Option<&mut EntityRecord> {
        self.entities.get_mut(&id)
    }

    pub(crate) fn remove(&mut self, id: EntityId) -> Option<EntityRecord> {
        self.entities.remove(&id)
    }

    /// Adds a variant to an existing entity. Returns `None` for an unknown id,
    /// otherwise whether the variant was new.
    pub fn add_variant(&mut self, id: EntityId, variant: NameVariant) -> Option<bool> {
        self.entities.get_mut(&id).map(|e| e.add_variant(variant))
    }

    /// Entities in ascending id order.
    pub fn entities(&self) -> impl Iterator<Item = &EntityRecord> {
        self.entities.values()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn variant_count(&self) -> usize {
        self.entities.values().map(|e| e.variants().len()).sum()
    }

    pub fn add_stop_word(&mut self, language: LanguageScope, word: &str) -> bool {
        self.stop_words.entry(language).or_default().insert(word.to_string())
    }

    /// Stop words that apply to `language`: its own list plus the universal one.
    pub fn stop_words_for(&self, language: LanguageScope) -> impl Iterator<Item = &str> {
        let own = self.stop_words.get(&language).into_iter().flatten();
        let universal = (!language.is_universal())
            .then(|| self.stop_words.get(&LanguageScope::Universal))
            .flatten()
            .into_iter()
            .flatten();
        own.chain(universal).map(String::as_str)
    }

    pub fn stop_words(&self) -> impl Iterator<Item = (LanguageScope, &str)> {
        self.stop_words
            .iter()
            .flat_map(|(lang, words)| words.iter().map(move |w| (*lang, w.as_str())))
    }

    /// Every variant whose scope is universal or equals `filter`, in
    /// serialization order. Without a filter every variant is listed.
    pub fn export_variants(&self, filter: Option<LanguageScope>) -> Vec<ExportRow> {
        self.entities
            .values()
            .flat_map(|e| {
                e.variants().iter().filter_map(move |v| {
                    let keep = match filter {
                        None => true,
                        Some(lang) => v.scope.is_universal() || v.scope == lang,
                    };
                    keep.then(|| ExportRow {
                        id: e.id,
                        etype: e.etype,
                        scope: v.scope,
                        surface: v.surface().to_string(),
                    })
                })
            })
            .collect()
    }

    /// The publishable subset: entities with at least one variant meeting a
    /// release condition (frequency, validation or Wikipedia origin).
    pub fn release_subset(&self) -> Repository {
        let mut out = self.clone();
        out.entities
            .retain(|_, e| e.variants().iter().any(NameVariant::is_releasable));
        out
    }
}
