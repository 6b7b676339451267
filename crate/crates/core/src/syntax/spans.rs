use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::id::ElementId;
use crate::resolve::RefSlot;
use crate::span::SourceSpan;

/// Source positions recorded for one declaration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeclSpans {
    /// The whole declaration, through its `;` or closing `}`.
    pub full: SourceSpan,
    /// The declared name token, for named elements.
    pub name: Option<SourceSpan>,
    /// Name tokens of the references the declaration makes.
    pub refs: Vec<(RefSlot, SourceSpan)>,
}

/// Source mapping from element ids to text spans for one parse.
///
/// The table remembers a fingerprint of the text it was built from so that
/// splicing against a different document is detected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanTable {
    entries: BTreeMap<ElementId, DeclSpans>,
    source_len: usize,
    source_hash: u64,
}

pub(crate) fn fingerprint(text: &str) -> u64 {
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    h.finish()
}

impl SpanTable {
    pub(crate) fn new(entries: BTreeMap<ElementId, DeclSpans>, source: &str) -> Self {
        SpanTable { entries, source_len: source.len(), source_hash: fingerprint(source) }
    }

    pub fn get(&self, id: &ElementId) -> Option<SourceSpan> {
        self.entries.get(id).map(|d| d.full)
    }

    pub fn decl(&self, id: &ElementId) -> Option<&DeclSpans> {
        self.entries.get(id)
    }

    pub fn name_span(&self, id: &ElementId) -> Option<SourceSpan> {
        self.entries.get(id).and_then(|d| d.name)
    }

    pub fn ref_span(&self, id: &ElementId, slot: RefSlot) -> Option<SourceSpan> {
        self.entries.get(id)?.refs.iter().find(|(s, _)| *s == slot).map(|(_, span)| *span)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ElementId, SourceSpan)> {
        self.entries.iter().map(|(id, d)| (id, d.full))
    }

    /// Whether this table was built from exactly `text`.
    pub fn matches(&self, text: &str) -> bool {
        self.source_len == text.len() && self.source_hash == fingerprint(text)
    }

    /// The reference token covering `offset`, with the element making it.
    pub fn reference_at(&self, offset: usize) -> Option<(&ElementId, RefSlot, SourceSpan)> {
        self.entries.iter().find_map(|(id, d)| {
            d.refs
                .iter()
                .find(|(_, span)| span.start <= offset && offset <= span.end)
                .map(|(slot, span)| (id, *slot, *span))
        })
    }
}
