//! Corpus access and graphical-operation case generation shared by the
//! integration suites.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hybridls_core::id::ElementKind;
use hybridls_core::model::Direction;
use hybridls_core::query::{elements, Entry};
use hybridls_core::view::{list_views, palette_for, ViewId};
use hybridls_core::{ElementId, Model, Mutation, MutationKind};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn rt_files(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rt"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Files expected to parse, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    rt_files(&corpus_dir())
}

/// Files with syntax errors.
pub fn invalid_corpus() -> Vec<(String, String)> {
    rt_files(&corpus_dir().join("invalid"))
}

/// Corpus files whose models validate without errors.
pub const CLEAN: [&str; 11] = [
    "composite3.rt",
    "empty.rt",
    "guards_actions.rt",
    "large_500.rt",
    "messy.rt",
    "nested_parts.rt",
    "ping_pong.rt",
    "structure_only.rt",
    "toggle.rt",
    "traffic.rt",
    "unreachable.rt",
];

fn children<'a>(entries: &'a [Entry<'a>], parent: &ElementId, kind: ElementKind) -> Vec<&'a Entry<'a>> {
    entries.iter().filter(|e| e.parent.as_ref() == Some(parent) && e.id.kind() == kind).collect()
}

fn name_of(e: &Entry) -> String {
    e.element.name().unwrap_or_default().to_owned()
}

fn id(text: &str) -> ElementId {
    text.parse().expect("generated id is well formed")
}

/// Region owner for a behavior view: the machine, or the composite state
/// at `path`.
fn region_owner(capsule: &str, path: &[String]) -> ElementId {
    if path.is_empty() {
        id(&format!("sm:{capsule}.sm"))
    } else {
        id(&format!("state:{capsule}.sm.{}", path.join(".")))
    }
}

/// Candidate arguments for one palette item in one view. Some of them are
/// legitimately rejected (collisions, referenced deletes); callers count
/// only accepted cases.
fn cases_for(model: &Model, entries: &[Entry], view: &ViewId, kind: MutationKind) -> Vec<Mutation> {
    let model_id = entries[0].id.clone();
    let top = |k: ElementKind| children(entries, &model_id, k);
    let mut out = Vec::new();
    match view {
        ViewId::Root => match kind {
            MutationKind::AddProtocol => out.push(Mutation::AddProtocol { container: model_id.clone(), name: "Fresh".into() }),
            MutationKind::AddCapsule => out.push(Mutation::AddCapsule { container: model_id.clone(), name: "FreshCapsule".into() }),
            MutationKind::Rename => {
                for e in top(ElementKind::Protocol).into_iter().chain(top(ElementKind::Capsule)).take(3) {
                    out.push(Mutation::Rename { target: e.id.clone(), name: format!("{}Renamed", name_of(e)) });
                }
            }
            MutationKind::Delete => {
                for e in top(ElementKind::Protocol).into_iter().chain(top(ElementKind::Capsule)).take(3) {
                    out.push(Mutation::Delete { target: e.id.clone() });
                }
            }
            _ => {}
        },
        ViewId::Structure(q) => {
            let cap = id(&format!("capsule:{q}"));
            let ports = children(entries, &cap, ElementKind::Port);
            let parts = children(entries, &cap, ElementKind::Part);
            let connectors = children(entries, &cap, ElementKind::Connector);
            match kind {
                MutationKind::AddPort => {
                    for (i, p) in top(ElementKind::Protocol).into_iter().take(2).enumerate() {
                        out.push(Mutation::AddPort {
                            container: cap.clone(),
                            name: format!("fresh{i}"),
                            protocol: p.id.clone(),
                            conjugated: i % 2 == 1,
                        });
                    }
                }
                MutationKind::AddPart => {
                    for c in top(ElementKind::Capsule).into_iter().filter(|c| c.id != cap).take(2) {
                        out.push(Mutation::AddPart { container: cap.clone(), name: format!("the{}", name_of(c)), capsule: c.id.clone() });
                    }
                }
                MutationKind::AddConnector => {
                    // Own port to each port on each part; mismatches are rejected.
                    let cname = q.split_once('.').unwrap().1;
                    let capsule = model.capsule(cname).unwrap();
                    for own in capsule.ports.iter().take(1) {
                        for part in capsule.parts.iter().take(2) {
                            if let Some(inner) = model.capsule(&part.capsule) {
                                for port in inner.ports.iter().take(2) {
                                    out.push(Mutation::AddConnector {
                                        container: cap.clone(),
                                        end_a: own.name.clone(),
                                        end_b: format!("{}.{}", part.name, port.name),
                                    });
                                }
                            }
                        }
                    }
                }
                MutationKind::Rename => {
                    for e in ports.iter().chain(parts.iter()).take(3) {
                        out.push(Mutation::Rename { target: e.id.clone(), name: format!("{}2", name_of(e)) });
                    }
                }
                MutationKind::Delete => {
                    for e in connectors.iter().chain(parts.iter()).chain(ports.iter()).take(3) {
                        out.push(Mutation::Delete { target: e.id.clone() });
                    }
                }
                _ => {}
            }
        }
        ViewId::Behavior { capsule, path } => {
            let owner = region_owner(capsule, path);
            let states = children(entries, &owner, ElementKind::State);
            let transitions = children(entries, &owner, ElementKind::Trans);
            let cname = capsule.split_once('.').unwrap().1;
            let cap = model.capsule(cname).unwrap();
            let triggers: Vec<String> = cap
                .ports
                .iter()
                .filter_map(|p| model.protocol(&p.protocol).and_then(|pr| pr.messages.first()).map(|m| format!("{}.{}", p.name, m.name)))
                .take(2)
                .collect();
            match kind {
                MutationKind::AddState => out.push(Mutation::AddState { container: owner.clone(), name: "Fresh".into() }),
                MutationKind::AddCompositeState => {
                    out.push(Mutation::AddCompositeState { container: owner.clone(), name: "FreshComposite".into() })
                }
                MutationKind::AddTransition => {
                    for w in states.windows(2).take(2) {
                        out.push(Mutation::AddTransition { container: owner.clone(), source: w[1].id.clone(), target: w[0].id.clone() });
                    }
                    if let Some(s) = states.first() {
                        out.push(Mutation::AddTransition { container: owner.clone(), source: s.id.clone(), target: s.id.clone() });
                    }
                }
                MutationKind::SetInitial => {
                    for s in states.iter().rev().take(2) {
                        out.push(Mutation::SetInitial { container: owner.clone(), target: s.id.clone() });
                    }
                }
                MutationKind::SetTransitionTrigger => {
                    for t in transitions.iter().take(2) {
                        for trig in &triggers {
                            out.push(Mutation::SetTransitionTrigger { target: t.id.clone(), trigger: Some(trig.clone()) });
                        }
                        out.push(Mutation::SetTransitionTrigger { target: t.id.clone(), trigger: None });
                    }
                }
                MutationKind::SetTransitionGuard => {
                    for t in transitions.iter().take(2) {
                        out.push(Mutation::SetTransitionGuard { target: t.id.clone(), guard: Some("count > 1".into()) });
                        out.push(Mutation::SetTransitionGuard { target: t.id.clone(), guard: None });
                    }
                }
                MutationKind::SetTransitionAction => {
                    for t in transitions.iter().take(2) {
                        out.push(Mutation::SetTransitionAction { target: t.id.clone(), action: Some("tick(1)".into()) });
                        out.push(Mutation::SetTransitionAction { target: t.id.clone(), action: None });
                    }
                }
                MutationKind::Rename => {
                    for s in states.iter().take(2) {
                        out.push(Mutation::Rename { target: s.id.clone(), name: format!("{}Next", name_of(s)) });
                    }
                }
                MutationKind::Delete => {
                    for e in transitions.iter().take(2).chain(states.iter().rev().take(1)) {
                        out.push(Mutation::Delete { target: e.id.clone() });
                    }
                }
                _ => {}
            }
        }
        ViewId::ReachTree(_) => {}
    }
    out
}

/// Every (view, mutation) candidate for `model`, walking views in listing
/// order and palette items in palette order.
pub fn operation_cases(model: &Model) -> Vec<(ViewId, Mutation)> {
    let entries = elements(model);
    let mut out = Vec::new();
    for v in list_views(model) {
        for item in palette_for(v.view_id.category()) {
            for m in cases_for(model, &entries, &v.view_id, item.operation_kind) {
                out.push((v.view_id.clone(), m));
            }
        }
    }
    out
}

/// Messages are only added through the model API, never a palette.
pub fn add_message(model: &Model) -> Option<Mutation> {
    let p = model.protocols.first()?;
    Some(Mutation::AddMessage { container: id(&format!("protocol:{}.{}", model.name, p.name)), name: "fresh".into(), direction: Direction::Out })
}

use hybridls_core::view::{GGraph, GNode, NodeKind, Rect};

/// Minimum gap between a container's border and its children.
pub const CHILD_PADDING: f64 = 10.0;

fn check_siblings(owner: &str, nodes: &[&GNode], out: &mut Vec<String>) {
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            if let (Some(ra), Some(rb)) = (a.bounds, b.bounds) {
                if ra.overlaps(&rb) {
                    out.push(format!("{owner}: {} overlaps {}", a.id, b.id));
                }
            }
        }
    }
}

fn check_children(parent: &GNode, pb: Rect, out: &mut Vec<String>) {
    for c in &parent.children {
        let Some(cb) = c.bounds else {
            out.push(format!("{} has no bounds", c.id));
            continue;
        };
        if c.kind == NodeKind::PortNode {
            let straddles = cb.y < pb.y && pb.y < cb.bottom() && cb.x >= pb.x && cb.right() <= pb.right();
            if !straddles {
                out.push(format!("port {} does not straddle the top edge of {}", c.id, parent.id));
            }
        } else if !pb.inset(CHILD_PADDING).contains_rect(&cb) {
            out.push(format!("{} is not inside {} with padding", c.id, parent.id));
        }
    }
    let kids: Vec<&GNode> = parent.children.iter().collect();
    check_siblings(&parent.id, &kids, out);
    for c in &parent.children {
        if let Some(cb) = c.bounds {
            check_children(c, cb, out);
        }
    }
}

/// Geometry rule violations of a laid-out graph; empty when it is sound.
pub fn layout_violations(graph: &GGraph) -> Vec<String> {
    let mut out = Vec::new();
    let top: Vec<&GNode> = graph.nodes().collect();
    for n in &top {
        match n.bounds {
            Some(b) => check_children(n, b, &mut out),
            None => out.push(format!("{} has no bounds", n.id)),
        }
    }
    check_siblings("top level", &top, &mut out);
    for e in graph.edges() {
        if e.routing_points.len() < 2 {
            out.push(format!("edge {} has {} routing points", e.id, e.routing_points.len()));
        }
    }
    out
}

/// Reachability unfolding written directly against the model: each visit
/// of a state yields its name, children are explored until `depth`.
pub fn unfold_labels(model: &Model, capsule: &str, depth: usize) -> Option<Vec<String>> {
    let region = &model.capsule(capsule)?.machine.as_ref()?.region;
    let start = region.initials.first()?.target.clone();
    region.states.iter().find(|s| s.name == start)?;
    let mut labels = Vec::new();
    let mut level = vec![start];
    for d in 0..=depth {
        labels.extend(level.iter().cloned());
        if d == depth {
            break;
        }
        let mut next = Vec::new();
        for s in &level {
            for t in region.transitions.iter().filter(|t| &t.source == s) {
                if region.states.iter().any(|x| x.name == t.target) {
                    next.push(t.target.clone());
                }
            }
        }
        level = next;
    }
    labels.sort();
    Some(labels)
}
