//! Domain types shared by every part of the toolkit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numeric entity identifier. Always `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(u64);

impl EntityId {
    pub fn new(value: u64) -> Option<Self> {
        (value >= 1).then_some(Self(value))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub(crate) fn next(self) -> Self {
        Self(self.0 + 1)
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for EntityId {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ValueError::EntityId(s.to_string()));
        }
        s.parse::<u64>()
            .ok()
            .and_then(EntityId::new)
            .ok_or_else(|| ValueError::EntityId(s.to_string()))
    }
}

/// Errors raised when a single field fails to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("invalid entity id {0:?}")]
    EntityId(String),
    #[error("invalid entity type {0:?} (expected P or O)")]
    EntityType(String),
    #[error("invalid language {0:?} (expected u or two lowercase letters)")]
    Language(String),
    #[error("invalid name surface {0:?}: {1}")]
    Surface(String, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityType {
    Person,
    Organisation,
}

impl EntityType {
    pub fn code(self) -> &'static str {
        match self {
            EntityType::Person => "P",
            EntityType::Organisation => "O",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for EntityType {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" => Ok(EntityType::Person),
            "O" => Ok(EntityType::Organisation),
            _ => Err(ValueError::EntityType(s.to_string())),
        }
    }
}

/// Where a name variant may be looked up: everywhere (`u`) or in a single
/// language identified by a two-letter code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LanguageScope {
    Universal,
    Lang([u8; 2]),
}

impl LanguageScope {
    pub fn lang(code: &str) -> Result<Self, ValueError> {
        match code.as_bytes() {
            [a, b] if a.is_ascii_lowercase() && b.is_ascii_lowercase() => Ok(LanguageScope::Lang([*a, *b])),
            _ => Err(ValueError::Language(code.to_string())),
        }
    }

    pub fn is_universal(self) -> bool {
        self == LanguageScope::Universal
    }

    /// True when a variant with this scope is active in a build for `target`.
    /// A universal-only build (`None`) admits universal variants only.
    pub fn active_in(self, target: Option<LanguageScope>) -> bool {
        match self {
            LanguageScope::Universal => true,
            scope => target == Some(scope),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            LanguageScope::Universal => "u",
            // both bytes are ASCII lowercase by construction
            LanguageScope::Lang(code) => std::str::from_utf8(code).unwrap_or("u"),
        }
    }
}

impl fmt::Display for LanguageScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LanguageScope {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "u" {
            Ok(LanguageScope::Universal)
        } else {
            LanguageScope::lang(s)
        }
    }
}

impl Serialize for LanguageScope {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LanguageScope {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Release conditions attached to a single variant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VariantFlags {
    pub validated: bool,
    pub from_wikipedia: bool,
    /// Seen in at least five distinct news clusters.
    pub frequency_eligible: bool,
}

impl VariantFlags {
    pub fn is_empty(self) -> bool {
        !(self.validated || self.from_wikipedia || self.frequency_eligible)
    }

    pub fn union(self, other: VariantFlags) -> VariantFlags {
        VariantFlags {
            validated: self.validated || other.validated,
            from_wikipedia: self.from_wikipedia || other.from_wikipedia,
            frequency_eligible: self.frequency_eligible || other.frequency_eligible,
        }
    }

    /// Compact letter code used by the metadata sidecar: `V`, `W`, `F`.
    pub fn code(self) -> String {
        let mut s = String::new();
        if self.validated {
            s.push('V');
        }
        if self.from_wikipedia {
            s.push('W');
        }
        if self.frequency_eligible {
            s.push('F');
        }
        s
    }

    pub fn from_code(code: &str) -> Option<VariantFlags> {
        let mut flags = VariantFlags::default();
        for c in code.chars() {
            match c {
                'V' => flags.validated = true,
                'W' => flags.from_wikipedia = true,
                'F' => flags.frequency_eligible = true,
                '-' => {}
                _ => return None,
            }
        }
        Some(flags)
    }
}

/// Checks the surface invariants: non-empty, no tab/newline/'+', no
/// leading/trailing whitespace, no double spaces.
pub fn validate_surface(surface: &str) -> Result<(), ValueError> {
    let err = |why| Err(ValueError::Surface(surface.to_string(), why));
    if surface.is_empty() {
        return err("empty");
    }
    if surface.contains(['\t', '\n', '\r']) {
        return err("contains a tab or line break");
    }
    if surface.contains('+') {
        return err("contains '+'");
    }
    if surface.starts_with(char::is_whitespace) || surface.ends_with(char::is_whitespace) {
        return err("leading or trailing whitespace");
    }
    if surface.contains("  ") {
        return err("consecutive spaces");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameVariant {
    surface: String,
    pub scope: LanguageScope,
    pub flags: VariantFlags,
}

impl NameVariant {
    pub fn new(surface: impl Into<String>, scope: LanguageScope) -> Result<Self, ValueError> {
        let surface = surface.into();
        validate_surface(&surface)?;
        Ok(NameVariant {
            surface,
            scope,
            flags: VariantFlags::default(),
        })
    }

    pub fn with_flags(mut self, flags: VariantFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn same_name(&self, other: &NameVariant) -> bool {
        self.surface == other.surface && self.scope == other.scope
    }

    /// Satisfies at least one release condition.
    pub fn is_releasable(&self) -> bool {
        !self.flags.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRecord {
    pub id: EntityId,
    pub etype: EntityType,
    variants: Vec<NameVariant>,
}

impl EntityRecord {
    pub fn new(id: EntityId, etype: EntityType, main: NameVariant) -> Self {
        EntityRecord {
            id,
            etype,
            variants: vec![main],
        }
    }

    pub fn main_name(&self) -> &NameVariant {
        &self.variants[0]
    }

    pub fn variants(&self) -> &[NameVariant] {
        &self.variants
    }

    pub fn position(&self, surface: &str, scope: LanguageScope) -> Option<usize> {
        self.variants
            .iter()
            .position(|v| v.surface == surface && v.scope == scope)
    }

    pub fn contains(&self, surface: &str, scope: LanguageScope) -> bool {
        self.position(surface, scope).is_some()
    }

    /// Appends `variant` unless the same (surface, scope) is already present,
    /// in which case the flags are merged. Returns true if a variant was added.
    pub fn add_variant(&mut self, variant: NameVariant) -> bool {
        match self.position(&variant.surface, variant.scope) {
            Some(i) => {
                self.variants[i].flags = self.variants[i].flags.union(variant.flags);
                false
            }
            None => {
                self.variants.push(variant);
                true
            }
        }
    }

    pub(crate) fn variants_mut(&mut self) -> &mut Vec<NameVariant> {
        &mut self.variants
    }

    pub(crate) fn into_variants(self) -> Vec<NameVariant> {
        self.variants
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_parsing() {
        assert_eq!("u".parse::<LanguageScope>().unwrap(), LanguageScope::Universal);
        assert_eq!("fr".parse::<LanguageScope>().unwrap().as_str(), "fr");
        for bad in ["", "U", "FR", "fra", "f", "f1"] {
            assert!(bad.parse::<LanguageScope>().is_err(), "{bad}");
        }
    }

    #[test]
    fn entity_id_rejects_zero_and_junk() {
        assert!("0".parse::<EntityId>().is_err());
        assert!("-3".parse::<EntityId>().is_err());
        assert!("+3".parse::<EntityId>().is_err());
        assert_eq!("3202".parse::<EntityId>().unwrap().get(), 3202);
    }

    #[test]
    fn surface_invariants() {
        assert!(validate_surface("United Nations").is_ok());
        for bad in ["", " FN", "FN ", "A  B", "A+B", "A\tB", "A\nB"] {
            assert!(validate_surface(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn scope_activity() {
        let fr = LanguageScope::lang("fr").unwrap();
        let sv = LanguageScope::lang("sv").unwrap();
        assert!(LanguageScope::Universal.active_in(None));
        assert!(LanguageScope::Universal.active_in(Some(fr)));
        assert!(fr.active_in(Some(fr)));
        assert!(!sv.active_in(Some(fr)));
        assert!(!sv.active_in(None));
    }

    #[test]
    fn flag_codes() {
        let f = VariantFlags::from_code("VF").unwrap();
        assert!(f.validated && f.frequency_eligible && !f.from_wikipedia);
        assert_eq!(f.code(), "VF");
        assert!(VariantFlags::from_code("X").is_none());
    }
}
