//! Semantic checks (`E101`..`E106`).

use std::collections::{HashMap, HashSet};

use crate::diagnostic::{Code, Diagnostic, Severity};
use crate::id::{ElementId, ElementKind};
use crate::model::*;
use crate::query::{elements, Loc};
use crate::resolve::{references, RefSlot};
use crate::syntax::SpanTable;

/// All semantic violations of `model`.
///
/// With a span table, diagnostics carry element spans and are ordered by
/// span start; without one, spans are empty and the order is canonical
/// element order. Either way the sort is stable.
pub fn validate(model: &Model, spans: Option<&SpanTable>) -> Vec<Diagnostic> {
    let mut found: Vec<(ElementId, Code, String)> = Vec::new();
    let entries = elements(model);

    // E101: an id carrying an ordinal on a named kind means an earlier
    // sibling already used the name. Ports and parts share one namespace,
    // as do protocols and capsules.
    for e in &entries {
        let named = !matches!(e.id.kind(), ElementKind::Trans | ElementKind::Connector | ElementKind::Initial);
        if named && e.id.ordinal().is_some() {
            let name = e.element.name().unwrap_or_default();
            found.push((e.id.clone(), Code::E101, format!("duplicate name '{name}'")));
        }
    }
    for (ci, c) in model.capsules.iter().enumerate() {
        let ports: HashSet<&str> = c.ports.iter().map(|p| p.name.as_str()).collect();
        for (pi, p) in c.parts.iter().enumerate() {
            if ports.contains(p.name.as_str()) {
                let id = entry_id(&entries, &Loc::Part(ci, pi));
                found.push((id, Code::E101, format!("part '{}' reuses a port name", p.name)));
            }
        }
    }
    let protocol_names: HashSet<&str> = model.protocols.iter().map(|p| p.name.as_str()).collect();
    for (ci, c) in model.capsules.iter().enumerate() {
        if protocol_names.contains(c.name.as_str()) {
            let id = entry_id(&entries, &Loc::Capsule(ci));
            found.push((id, Code::E101, format!("capsule '{}' reuses a protocol name", c.name)));
        }
    }

    // E102 / E105 from name resolution.
    let refs = references(model);
    let mut bad_transitions: HashSet<ElementId> = HashSet::new();
    for r in &refs {
        if r.target.is_some() {
            continue;
        }
        match r.slot {
            RefSlot::TransitionSource | RefSlot::TransitionTarget => {
                bad_transitions.insert(r.from.clone());
            }
            RefSlot::InitialTarget => {
                found.push((r.from.clone(), Code::E102, format!("initial target '{}' is not a state of this region", r.name)))
            }
            _ => found.push((r.from.clone(), Code::E102, format!("unresolved reference '{}'", r.name))),
        }
    }
    for e in &entries {
        if bad_transitions.contains(&e.id) {
            found.push((e.id.clone(), Code::E105, "transition endpoints must be sibling states".into()));
        }
    }

    // E103: both ends resolve to ports; they must share the protocol and
    // differ in conjugation.
    for e in &entries {
        let Loc::Connector(ci, ki) = &e.loc else { continue };
        let capsule = &model.capsules[*ci];
        let conn = &capsule.connectors[*ki];
        let (Some(a), Some(b)) = (end_port(model, capsule, &conn.end_a), end_port(model, capsule, &conn.end_b)) else {
            continue;
        };
        if a.protocol != b.protocol {
            found.push((e.id.clone(), Code::E103, format!("connected ports use protocols '{}' and '{}'", a.protocol, b.protocol)));
        } else if a.conjugated == b.conjugated {
            found.push((e.id.clone(), Code::E103, "connected ports must have opposite conjugation".into()));
        }
    }

    // E104: every initial after the first in a region.
    for e in &entries {
        if let Loc::Initial(_, _, i) = &e.loc {
            if *i > 0 {
                found.push((e.id.clone(), Code::E104, "region already has an initial transition".into()));
            }
        }
    }

    // E106
    for e in &entries {
        let Loc::Part(ci, pi) = &e.loc else { continue };
        let owner = &model.capsules[*ci];
        let part = &owner.parts[*pi];
        if instantiates(model, &part.capsule, &owner.name) {
            found.push((e.id.clone(), Code::E106, format!("part '{}' instantiates its owner '{}'", part.name, owner.name)));
        }
    }

    let order: HashMap<&ElementId, usize> = entries.iter().enumerate().map(|(i, e)| (&e.id, i)).collect();
    let mut diags: Vec<(usize, Diagnostic)> = found
        .into_iter()
        .map(|(id, code, message)| {
            let span = spans.and_then(|s| s.get(&id)).unwrap_or_default();
            let rank = order.get(&id).copied().unwrap_or(usize::MAX);
            (rank, Diagnostic { code, severity: Severity::Error, span, message, element: Some(id) })
        })
        .collect();
    diags.sort_by_key(|(rank, d)| (spans.map(|_| d.span.start).unwrap_or(0), *rank, d.code));
    diags.into_iter().map(|(_, d)| d).collect()
}

fn entry_id(entries: &[crate::query::Entry<'_>], loc: &Loc) -> ElementId {
    entries.iter().find(|e| &e.loc == loc).map(|e| e.id.clone()).expect("loc from the same model")
}

fn end_port<'a>(model: &'a Model, capsule: &'a CapsuleDecl, end: &PortRef) -> Option<&'a PortDecl> {
    match &end.part {
        None => capsule.port(&end.port),
        Some(part) => model.capsule(&capsule.part(part)?.capsule)?.port(&end.port),
    }
}

/// Whether capsule `from` (or anything it instantiates) is `owner`.
pub(crate) fn instantiates(model: &Model, from: &str, owner: &str) -> bool {
    let mut seen = HashSet::new();
    let mut stack = vec![from];
    while let Some(name) = stack.pop() {
        if name == owner {
            return true;
        }
        if !seen.insert(name) {
            continue;
        }
        if let Some(c) = model.capsule(name) {
            stack.extend(c.parts.iter().map(|p| p.capsule.as_str()));
        }
    }
    false
}
