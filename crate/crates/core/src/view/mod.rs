//! Projections of the model into per-view graphs.
//!
//! Each view shows one level of containment only. Nested content is reached
//! by drilling into the view named by a node's `drillTarget`.

mod graph;
mod palette;
mod reach;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use graph::{EdgeKind, GEdge, GElement, GGraph, GNode, NodeKind, Point, Rect};
pub use palette::{palette_for, ArgSpec, ArgType, PaletteItem};
pub use reach::{reach_tree, DEFAULT_REACH_DEPTH, REACH_NODE_LIMIT};

use crate::error::{Error, Result};
use crate::id::{is_name, ElementId};
use crate::model::{CapsuleDecl, Model, Region};
use crate::query::{elements, Entry, ElementRef, Loc};
use crate::resolve::{references, RefSlot};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViewId {
    Root,
    /// Capsule qualified name, `M.C`.
    Structure(String),
    Behavior { capsule: String, path: Vec<String> },
    ReachTree(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewCategory {
    Root,
    Structure,
    Behavior,
    Analysis,
}

impl ViewId {
    pub fn behavior(capsule: impl Into<String>) -> Self {
        ViewId::Behavior { capsule: capsule.into(), path: Vec::new() }
    }

    pub fn category(&self) -> ViewCategory {
        match self {
            ViewId::Root => ViewCategory::Root,
            ViewId::Structure(_) => ViewCategory::Structure,
            ViewId::Behavior { .. } => ViewCategory::Behavior,
            ViewId::ReachTree(_) => ViewCategory::Analysis,
        }
    }

    pub fn capsule(&self) -> Option<&str> {
        match self {
            ViewId::Root => None,
            ViewId::Structure(q) | ViewId::ReachTree(q) | ViewId::Behavior { capsule: q, .. } => Some(q),
        }
    }
}

impl fmt::Display for ViewId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViewId::Root => f.write_str("root"),
            ViewId::Structure(q) => write!(f, "structure:{q}"),
            ViewId::Behavior { capsule, path } => {
                write!(f, "behavior:{capsule}")?;
                for seg in path {
                    write!(f, "/{seg}")?;
                }
                Ok(())
            }
            ViewId::ReachTree(q) => write!(f, "analysis:reachtree:{q}"),
        }
    }
}

fn capsule_qname(text: &str) -> Option<String> {
    let (m, c) = text.split_once('.')?;
    (is_name(m) && is_name(c)).then(|| text.to_owned())
}

impl FromStr for ViewId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownView(s.to_owned());
        if s == "root" {
            return Ok(ViewId::Root);
        }
        if let Some(q) = s.strip_prefix("structure:") {
            return capsule_qname(q).map(ViewId::Structure).ok_or_else(bad);
        }
        if let Some(q) = s.strip_prefix("analysis:reachtree:") {
            return capsule_qname(q).map(ViewId::ReachTree).ok_or_else(bad);
        }
        if let Some(rest) = s.strip_prefix("behavior:") {
            let mut segs = rest.split('/');
            let capsule = segs.next().and_then(capsule_qname).ok_or_else(bad)?;
            let path: Vec<String> = segs.map(str::to_owned).collect();
            if path.iter().any(|p| !is_name(p)) {
                return Err(bad());
            }
            return Ok(ViewId::Behavior { capsule, path });
        }
        Err(bad())
    }
}

impl Serialize for ViewId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ViewId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewDescriptor {
    pub view_id: ViewId,
    pub title: String,
    pub category: ViewCategory,
}

fn title(view: &ViewId) -> String {
    let short = |q: &str| q.split_once('.').map_or(q, |(_, c)| c).to_owned();
    match view {
        ViewId::Root => "Model".to_owned(),
        ViewId::Structure(q) => format!("Structure of {}", short(q)),
        ViewId::Behavior { capsule, path } if path.is_empty() => format!("Behavior of {}", short(capsule)),
        ViewId::Behavior { capsule, path } => format!("Behavior of {}/{}", short(capsule), path.join("/")),
        ViewId::ReachTree(q) => format!("Reachability tree of {}", short(q)),
    }
}

fn composite_paths(region: &Region, prefix: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
    for s in &region.states {
        if let Some(inner) = &s.region {
            prefix.push(s.name.clone());
            out.push(prefix.clone());
            composite_paths(inner, prefix, out);
            prefix.pop();
        }
    }
}

pub fn list_views(model: &Model) -> Vec<ViewDescriptor> {
    let mut ids = vec![ViewId::Root];
    for c in &model.capsules {
        let q = format!("{}.{}", model.name, c.name);
        ids.push(ViewId::Structure(q.clone()));
        if let Some(sm) = &c.machine {
            ids.push(ViewId::behavior(q.clone()));
            let mut paths = Vec::new();
            composite_paths(&sm.region, &mut Vec::new(), &mut paths);
            ids.extend(paths.into_iter().map(|path| ViewId::Behavior { capsule: q.clone(), path }));
            if reach::initial_state(&sm.region).is_some() {
                ids.push(ViewId::ReachTree(q));
            }
        }
    }
    // Duplicate capsule names yield the same view twice; keep the first.
    let mut seen = std::collections::HashSet::new();
    ids.retain(|v| seen.insert(v.clone()));
    ids.into_iter().map(|v| ViewDescriptor { title: title(&v), category: v.category(), view_id: v }).collect()
}

pub fn view_exists(model: &Model, view: &ViewId) -> bool {
    list_views(model).iter().any(|d| &d.view_id == view)
}

/// The capsule a qualified name refers to, with its index.
pub(crate) fn capsule_by_qname<'a>(model: &'a Model, q: &str) -> Option<(usize, &'a CapsuleDecl)> {
    let (m, c) = q.split_once('.')?;
    if m != model.name {
        return None;
    }
    model.capsules.iter().enumerate().find(|(_, cap)| cap.name == c)
}

/// Unpositioned graph for `view` at revision 0.
pub fn render(model: &Model, view: &ViewId) -> Result<GGraph> {
    let unknown = || Error::UnknownView(view.to_string());
    if !view_exists(model, view) {
        return Err(unknown());
    }
    let ctx = Context::new(model);
    let mut graph = GGraph::new(view.clone());
    match view {
        ViewId::Root => ctx.root(&mut graph),
        ViewId::Structure(q) => {
            let (ci, _) = capsule_by_qname(model, q).ok_or_else(unknown)?;
            ctx.structure(ci, &mut graph);
        }
        ViewId::Behavior { capsule, path } => {
            let (ci, _) = capsule_by_qname(model, capsule).ok_or_else(unknown)?;
            ctx.behavior(ci, path, &mut graph).ok_or_else(unknown)?;
        }
        ViewId::ReachTree(q) => return reach_tree(model, q, DEFAULT_REACH_DEPTH),
    }
    Ok(graph)
}

/// The model element behind a graph-local id.
pub fn source_of(graph: &GGraph, local_id: &str) -> Result<ElementId> {
    if let Some(n) = graph.node(local_id) {
        return Ok(n.source_id.clone());
    }
    if let Some(e) = graph.edge(local_id) {
        return Ok(e.source_id.clone());
    }
    Err(Error::Malformed(format!("no graph element {local_id:?} in {}", graph.view_id)))
}

struct Context<'a> {
    model: &'a Model,
    entries: Vec<Entry<'a>>,
    targets: HashMap<(ElementId, RefSlot), ElementId>,
}

impl<'a> Context<'a> {
    fn new(model: &'a Model) -> Self {
        let targets = references(model)
            .into_iter()
            .filter_map(|r| r.target.map(|t| ((r.from, r.slot), t)))
            .collect();
        Context { model, entries: elements(model), targets }
    }

    fn target(&self, from: &ElementId, slot: RefSlot) -> Option<&ElementId> {
        self.targets.get(&(from.clone(), slot))
    }

    fn id_of(&self, loc: &Loc) -> &ElementId {
        &self.entries.iter().find(|e| &e.loc == loc).expect("loc exists").id
    }

    fn children(&self, parent: &ElementId) -> impl Iterator<Item = &Entry<'a>> {
        let parent = parent.clone();
        self.entries.iter().filter(move |e| e.parent.as_ref() == Some(&parent))
    }

    fn qname(&self, c: &CapsuleDecl) -> String {
        format!("{}.{}", self.model.name, c.name)
    }

    fn root(&self, graph: &mut GGraph) {
        for e in self.children(self.id_of(&Loc::Model)) {
            let node = match e.element {
                ElementRef::Protocol(p) => GNode::of(&e.id, NodeKind::ProtocolNode, &p.name),
                ElementRef::Capsule(c) => {
                    let mut n = GNode::of(&e.id, NodeKind::CapsuleNode, &c.name);
                    n.drill_target = Some(ViewId::Structure(self.qname(c)));
                    n
                }
                _ => continue,
            };
            graph.elements.push(GElement::Node(node));
        }
    }

    fn structure(&self, ci: usize, graph: &mut GGraph) {
        let capsule = &self.model.capsules[ci];
        let cid = self.id_of(&Loc::Capsule(ci));
        let mut frame = GNode::of(cid, NodeKind::CapsuleNode, &capsule.name);
        if capsule.machine.is_some() {
            frame.drill_target = Some(ViewId::behavior(self.qname(capsule)));
        }
        let mut edges = Vec::new();
        for e in self.children(cid) {
            match e.element {
                ElementRef::Port(p) => frame.children.push(GNode::of(&e.id, NodeKind::PortNode, &p.name)),
                ElementRef::Part(p) => {
                    let mut node = GNode::of(&e.id, NodeKind::PartNode, format!("{} : {}", p.name, p.capsule));
                    if let Some(ty_id) = self.target(&e.id, RefSlot::PartCapsule) {
                        let Loc::Capsule(ti) = self.entries.iter().find(|x| &x.id == ty_id).expect("resolved").loc else {
                            unreachable!("part types are capsules")
                        };
                        node.drill_target = Some(ViewId::Structure(self.qname(&self.model.capsules[ti])));
                        for port in self.children(ty_id).filter(|x| matches!(x.element, ElementRef::Port(_))) {
                            let ElementRef::Port(pd) = port.element else { unreachable!() };
                            node.children.push(GNode::new(
                                format!("{}/{}", e.id, port.id),
                                port.id.clone(),
                                NodeKind::PortNode,
                                &pd.name,
                            ));
                        }
                    }
                    frame.children.push(node);
                }
                ElementRef::Connector(_) => {
                    let end = |part: RefSlot, port: RefSlot| -> Option<String> {
                        let port = self.target(&e.id, port)?;
                        Some(match self.target(&e.id, part) {
                            Some(part) => format!("{part}/{port}"),
                            None => port.to_string(),
                        })
                    };
                    let a = end(RefSlot::ConnectorPartA, RefSlot::ConnectorPortA);
                    let b = end(RefSlot::ConnectorPartB, RefSlot::ConnectorPortB);
                    if let (Some(a), Some(b)) = (a, b) {
                        edges.push(GEdge {
                            id: e.id.to_string(),
                            source_id: e.id.clone(),
                            kind: EdgeKind::ConnectorEdge,
                            source_node_id: a,
                            target_node_id: b,
                            label: String::new(),
                            routing_points: Vec::new(),
                        });
                    }
                }
                _ => {}
            }
        }
        // A connector may name a part port that the node list lacks when the
        // part's own type failed to resolve; drop such edges.
        let present: std::collections::HashSet<String> = frame.walk().iter().map(|n| n.id.clone()).collect();
        edges.retain(|e| present.contains(&e.source_node_id) && present.contains(&e.target_node_id));
        graph.elements.push(GElement::Node(frame));
        graph.elements.extend(edges.into_iter().map(GElement::Edge));
    }

    fn behavior(&self, ci: usize, path: &[String], graph: &mut GGraph) -> Option<()> {
        let capsule = &self.model.capsules[ci];
        let sm = capsule.machine.as_ref()?;
        let mut owner = self.id_of(&Loc::Machine(ci)).clone();
        let mut region = &sm.region;
        let mut chain = Vec::new();
        for seg in path {
            let idx = region.state_index(seg)?;
            region = region.states[idx].region.as_ref()?;
            chain.push(idx);
            owner = self.id_of(&Loc::State(ci, chain.clone())).clone();
        }

        let mut edges = Vec::new();
        let mut nodes = Vec::new();
        for e in self.children(&owner) {
            match e.element {
                ElementRef::Initial(_) => {
                    nodes.push(GNode::of(&e.id, NodeKind::InitialNode, ""));
                    if let Some(t) = self.target(&e.id, RefSlot::InitialTarget) {
                        edges.push(GEdge {
                            id: format!("{}/edge", e.id),
                            source_id: e.id.clone(),
                            kind: EdgeKind::InitialEdge,
                            source_node_id: e.id.to_string(),
                            target_node_id: t.to_string(),
                            label: String::new(),
                            routing_points: Vec::new(),
                        });
                    }
                }
                ElementRef::State(s) => {
                    let node = if s.is_composite() {
                        let mut n = GNode::of(&e.id, NodeKind::CompositeStateNode, &s.name);
                        let mut sub = path.to_vec();
                        sub.push(s.name.clone());
                        n.drill_target = Some(ViewId::Behavior { capsule: self.qname(capsule), path: sub });
                        n
                    } else {
                        GNode::of(&e.id, NodeKind::StateNode, &s.name)
                    };
                    nodes.push(node);
                }
                ElementRef::Transition(t) => {
                    let src = self.target(&e.id, RefSlot::TransitionSource);
                    let tgt = self.target(&e.id, RefSlot::TransitionTarget);
                    if let (Some(src), Some(tgt)) = (src, tgt) {
                        edges.push(GEdge {
                            id: e.id.to_string(),
                            source_id: e.id.clone(),
                            kind: EdgeKind::TransitionEdge,
                            source_node_id: src.to_string(),
                            target_node_id: tgt.to_string(),
                            label: t.label(),
                            routing_points: Vec::new(),
                        });
                    }
                }
                _ => {}
            }
        }
        // Endpoints outside this region (an E105 error) have no node here.
        let present: std::collections::HashSet<&str> = nodes.iter().map(|n| n.id.as_str()).collect();
        edges.retain(|e| present.contains(e.source_node_id.as_str()) && present.contains(e.target_node_id.as_str()));
        graph.elements.extend(nodes.into_iter().map(GElement::Node));
        graph.elements.extend(edges.into_iter().map(GElement::Edge));
        Some(())
    }
}
