//! Minimal text edits for graphical changes.
//!
//! Graphical mutations are written back as one [`TextEdit`] whose new text is
//! canonical; everything outside its span, comments included, stays as the
//! user left it.

use serde::{Deserialize, Serialize};

use super::serialize::serialize_subtree;
use super::spans::SpanTable;
use crate::error::{Error, Result};
use crate::id::{ElementId, ElementKind};
use crate::model::Model;
use crate::mutation::Mutation;
use crate::resolve::references;
use crate::span::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TextEdit {
    pub span: SourceSpan,
    pub new_text: String,
}

impl TextEdit {
    pub fn apply(&self, text: &str) -> String {
        let mut out = String::with_capacity(text.len() + self.new_text.len());
        out.push_str(&text[..self.span.start]);
        out.push_str(&self.new_text);
        out.push_str(&text[self.span.end..]);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditTarget {
    Replace(ElementId),
    Delete(ElementId),
    Insert { offset: usize },
}

fn can_contain(container: ElementKind, child: ElementKind) -> bool {
    use ElementKind::*;
    matches!(
        (container, child),
        (Model, Protocol | Capsule)
            | (Protocol, Msg)
            | (Capsule, Port | Part | Connector | Sm)
            | (Sm | State, State | Initial | Trans)
    )
}

/// Offset just before the closing `}` of `container`.
///
/// A simple state has no braces and therefore cannot hold children.
pub fn insertion_point(text: &str, spans: &SpanTable, container: &ElementId, child: ElementKind) -> Result<usize> {
    let invalid = || Error::InvalidContainer { container: container.clone(), child };
    if !can_contain(container.kind(), child) {
        return Err(invalid());
    }
    if !spans.matches(text) {
        return Err(Error::StaleSpan);
    }
    let span = spans.get(container).ok_or_else(invalid)?;
    let body = &text[span.start..span.end];
    if !body.ends_with('}') {
        return Err(invalid());
    }
    Ok(span.end - 1)
}

fn line_start(text: &str, offset: usize) -> usize {
    text[..offset].rfind('\n').map_or(0, |i| i + 1)
}

/// Applies `fragment` at `target` and returns the new document and the edit.
///
/// Inserted fragments go on their own line before the `}` at `offset`;
/// replacements drop the fragment's leading indent and trailing newline so
/// they sit where the old declaration did; deletes take the whole line when
/// the declaration is alone on it.
pub fn splice(text: &str, spans: &SpanTable, target: &EditTarget, fragment: &str) -> Result<(String, TextEdit)> {
    if !spans.matches(text) {
        return Err(Error::StaleSpan);
    }
    let edit = match target {
        EditTarget::Insert { offset } => {
            let offset = *offset;
            if offset > text.len() || !text.is_char_boundary(offset) {
                return Err(Error::StaleSpan);
            }
            let start = line_start(text, offset);
            if text[start..offset].trim().is_empty() {
                TextEdit { span: SourceSpan::new(start, start), new_text: fragment.to_owned() }
            } else {
                TextEdit { span: SourceSpan::new(offset, offset), new_text: format!("\n{fragment}") }
            }
        }
        EditTarget::Replace(id) => {
            let span = spans.get(id).ok_or_else(|| Error::TargetMissing(id.clone()))?;
            let new_text = fragment.trim_start_matches(' ').trim_end_matches('\n').to_owned();
            TextEdit { span, new_text }
        }
        EditTarget::Delete(id) => {
            let span = spans.get(id).ok_or_else(|| Error::TargetMissing(id.clone()))?;
            let start = line_start(text, span.start);
            let end = text[span.end..].find('\n').map_or(text.len(), |i| span.end + i + 1);
            let alone = text[start..span.start].trim().is_empty() && text[span.end..end].trim().is_empty();
            let span = if alone { SourceSpan::new(start, end) } else { span };
            TextEdit { span, new_text: String::new() }
        }
    };
    Ok((edit.apply(text), edit))
}

/// The edit that carries `mutation` (already applied to give `new_model`)
/// into `text`. `affected` is the id reported by the mutation.
pub fn edit_for_mutation(
    text: &str,
    spans: &SpanTable,
    old_model: &Model,
    new_model: &Model,
    mutation: &Mutation,
    affected: &ElementId,
) -> Result<(String, TextEdit)> {
    match mutation {
        Mutation::Delete { target } => splice(text, spans, &EditTarget::Delete(target.clone()), ""),
        Mutation::Rename { target, name } => rename_edit(text, spans, old_model, target, name),
        Mutation::SetTransitionTrigger { target, .. }
        | Mutation::SetTransitionGuard { target, .. }
        | Mutation::SetTransitionAction { target, .. } => {
            let fragment = serialize_subtree(new_model, affected)?;
            splice(text, spans, &EditTarget::Replace(target.clone()), &fragment)
        }
        Mutation::SetInitial { .. } if spans.get(affected).is_some() => {
            let fragment = serialize_subtree(new_model, affected)?;
            splice(text, spans, &EditTarget::Replace(affected.clone()), &fragment)
        }
        _ => {
            let child = mutation.created_kind().unwrap_or(ElementKind::Initial);
            let offset = insertion_point(text, spans, mutation.subject(), child)?;
            let mut fragment = serialize_subtree(new_model, affected)?;
            if container_has_children(old_model, mutation.subject()) && child_is_top_level(child) {
                fragment.insert(0, '\n');
            }
            splice(text, spans, &EditTarget::Insert { offset }, &fragment)
        }
    }
}

fn child_is_top_level(kind: ElementKind) -> bool {
    matches!(kind, ElementKind::Protocol | ElementKind::Capsule)
}

fn container_has_children(model: &Model, container: &ElementId) -> bool {
    container.kind() == ElementKind::Model && (!model.protocols.is_empty() || !model.capsules.is_empty())
}

/// Rewrites the declared name and every reference to it as one edit
/// spanning the first through the last touched token.
fn rename_edit(text: &str, spans: &SpanTable, model: &Model, target: &ElementId, name: &str) -> Result<(String, TextEdit)> {
    if !spans.matches(text) {
        return Err(Error::StaleSpan);
    }
    let mut tokens = vec![spans.name_span(target).ok_or_else(|| Error::NotApplicable(target.clone()))?];
    for r in references(model) {
        if r.target.as_ref() == Some(target) {
            tokens.push(spans.ref_span(&r.from, r.slot).ok_or(Error::StaleSpan)?);
        }
    }
    tokens.sort_by_key(|s| s.start);
    tokens.dedup();
    let hull = tokens.iter().skip(1).fold(tokens[0], |acc, s| acc.cover(s));
    let mut new_text = String::new();
    let mut at = hull.start;
    for s in &tokens {
        new_text.push_str(&text[at..s.start]);
        new_text.push_str(name);
        at = s.end;
    }
    new_text.push_str(&text[at..hull.end]);
    let edit = TextEdit { span: hull, new_text };
    Ok((edit.apply(text), edit))
}
