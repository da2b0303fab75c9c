//! Multilingual person and organisation name resource.
//!
//! The crate covers the whole life cycle of a name list:
//!
//! * [`resource`]: the four-column resource file and its metadata sidecar,
//! * [`edit`]: moderation edits (merge, rename, retype, stop words, scoping),
//! * [`normalize`]: transliteration, the normalization cascade and similarity,
//! * [`merge`]: deciding whether a newly found name is a variant or a new entity,
//! * [`matcher`]: compiling the list into a multi-pattern automaton and
//!   finding every known name in text,
//! * [`inflect`]: pre-generating inflected and hyphen/particle variants,
//! * [`trigger`]: trigger-word candidate extraction and type guessing,
//! * [`script`]: per-script statistics.

pub mod edit;
pub mod inflect;
pub mod matcher;
pub mod merge;
pub mod normalize;
pub mod repository;
pub mod resource;
pub mod script;
pub mod trigger;
pub mod types;

pub use edit::{apply_edit, ModerationEdit};
pub use repository::{ExportRow, Repository};
pub use resource::{parse_resource, serialize_resource};
pub use types::{EntityId, EntityRecord, EntityType, LanguageScope, NameVariant, VariantFlags};
