//! Element identity.
//!
//! Ids are derived from qualified names, `<kind>:<dotted path>[#ordinal]`,
//! so two parses of the same text always agree on them. Transitions and
//! connectors have no name of their own and always carry an ordinal among
//! siblings with the same endpoints; any other element only carries one
//! when it duplicates an earlier sibling's name.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const KEYWORDS: [&str; 14] = [
    "model",
    "protocol",
    "capsule",
    "port",
    "part",
    "connect",
    "to",
    "statemachine",
    "state",
    "initial",
    "in",
    "out",
    "msg",
    "on",
];

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// An identifier usable as a declared name: lexically valid and not reserved.
pub fn is_name(s: &str) -> bool {
    is_identifier(s) && !is_keyword(s)
}

pub(crate) fn check_name(s: &str) -> Result<()> {
    if is_name(s) {
        Ok(())
    } else {
        Err(Error::Malformed(format!("{s:?} is not a valid name")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Model,
    Protocol,
    Msg,
    Capsule,
    Port,
    Part,
    Connector,
    Sm,
    State,
    Initial,
    Trans,
}

impl ElementKind {
    pub const ALL: [ElementKind; 11] = [
        ElementKind::Model,
        ElementKind::Protocol,
        ElementKind::Msg,
        ElementKind::Capsule,
        ElementKind::Port,
        ElementKind::Part,
        ElementKind::Connector,
        ElementKind::Sm,
        ElementKind::State,
        ElementKind::Initial,
        ElementKind::Trans,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ElementKind::Model => "model",
            ElementKind::Protocol => "protocol",
            ElementKind::Msg => "msg",
            ElementKind::Capsule => "capsule",
            ElementKind::Port => "port",
            ElementKind::Part => "part",
            ElementKind::Connector => "connector",
            ElementKind::Sm => "sm",
            ElementKind::State => "state",
            ElementKind::Initial => "initial",
            ElementKind::Trans => "trans",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        ElementKind::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ElementId(String);

impl ElementId {
    /// Builds the canonical id for `kind` at `segments`.
    pub fn new<S: AsRef<str>>(kind: ElementKind, segments: &[S], ordinal: Option<usize>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Malformed("element id needs at least one path segment".into()));
        }
        if let Some(bad) = segments.iter().find(|s| !is_identifier(s.as_ref())) {
            return Err(Error::Malformed(format!("invalid id segment {:?}", bad.as_ref())));
        }
        if kind == ElementKind::Trans && ordinal.is_none() {
            return Err(Error::Malformed("transition ids need an ordinal".into()));
        }
        let path = segments.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(".");
        Ok(ElementId::build(kind, &path, ordinal))
    }

    pub(crate) fn build(kind: ElementKind, path: &str, ordinal: Option<usize>) -> Self {
        match ordinal {
            Some(k) => ElementId(format!("{}:{path}#{k}", kind.tag())),
            None => ElementId(format!("{}:{path}", kind.tag())),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> ElementKind {
        let tag = self.0.split_once(':').map(|(t, _)| t).unwrap_or_default();
        ElementKind::from_tag(tag).expect("ElementId is always constructed with a known kind")
    }

    /// The dotted path without kind tag or ordinal.
    pub fn path(&self) -> &str {
        let rest = self.0.split_once(':').map(|(_, r)| r).unwrap_or_default();
        rest.split_once('#').map(|(p, _)| p).unwrap_or(rest)
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.path().split('.')
    }

    pub fn ordinal(&self) -> Option<usize> {
        self.0.rsplit_once('#').and_then(|(_, k)| k.parse().ok())
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ElementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::Malformed(format!("malformed element id {s:?}"));
        let (tag, rest) = s.split_once(':').ok_or_else(malformed)?;
        let kind = ElementKind::from_tag(tag).ok_or_else(malformed)?;
        let (path, ordinal) = match rest.split_once('#') {
            Some((p, k)) => (p, Some(k.parse::<usize>().map_err(|_| malformed())?)),
            None => (rest, None),
        };
        let segments: Vec<&str> = path.split('.').collect();
        if segments.iter().any(|s| !is_identifier(s)) {
            return Err(malformed());
        }
        Ok(ElementId::build(kind, path, ordinal))
    }
}

impl TryFrom<String> for ElementId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ElementId> for String {
    fn from(id: ElementId) -> String {
        id.0
    }
}
