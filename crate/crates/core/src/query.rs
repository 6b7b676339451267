//! Id assignment and navigation over a [`Model`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::id::{ElementId, ElementKind};
use crate::model::*;

/// Structural position of an element: indices into the model's lists.
///
/// A region is addressed by its capsule index plus the chain of state
/// indices leading to the composite state that owns it (empty for the top
/// region of the state machine).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Loc {
    Model,
    Protocol(usize),
    Message(usize, usize),
    Capsule(usize),
    Port(usize, usize),
    Part(usize, usize),
    Connector(usize, usize),
    Machine(usize),
    /// Capsule index and the state-index chain ending at this state.
    State(usize, Vec<usize>),
    Initial(usize, Vec<usize>, usize),
    Transition(usize, Vec<usize>, usize),
}

impl Loc {
    /// The region this element owns, if it is a region owner.
    pub fn owned_region(&self) -> Option<(usize, Vec<usize>)> {
        match self {
            Loc::Machine(c) => Some((*c, Vec::new())),
            Loc::State(c, path) => Some((*c, path.clone())),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ElementRef<'a> {
    Model(&'a Model),
    Protocol(&'a ProtocolDecl),
    Message(&'a MessageDecl),
    Capsule(&'a CapsuleDecl),
    Port(&'a PortDecl),
    Part(&'a PartDecl),
    Connector(&'a ConnectorDecl),
    Machine(&'a StateMachine),
    State(&'a StateNode),
    Initial(&'a InitialDecl),
    Transition(&'a TransitionDecl),
}

impl ElementRef<'_> {
    pub fn kind(&self) -> ElementKind {
        match self {
            ElementRef::Model(_) => ElementKind::Model,
            ElementRef::Protocol(_) => ElementKind::Protocol,
            ElementRef::Message(_) => ElementKind::Msg,
            ElementRef::Capsule(_) => ElementKind::Capsule,
            ElementRef::Port(_) => ElementKind::Port,
            ElementRef::Part(_) => ElementKind::Part,
            ElementRef::Connector(_) => ElementKind::Connector,
            ElementRef::Machine(_) => ElementKind::Sm,
            ElementRef::State(_) => ElementKind::State,
            ElementRef::Initial(_) => ElementKind::Initial,
            ElementRef::Transition(_) => ElementKind::Trans,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            ElementRef::Model(m) => Some(&m.name),
            ElementRef::Protocol(p) => Some(&p.name),
            ElementRef::Message(m) => Some(&m.name),
            ElementRef::Capsule(c) => Some(&c.name),
            ElementRef::Port(p) => Some(&p.name),
            ElementRef::Part(p) => Some(&p.name),
            ElementRef::State(s) => Some(&s.name),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry<'a> {
    pub id: ElementId,
    pub parent: Option<ElementId>,
    pub element: ElementRef<'a>,
    pub loc: Loc,
}

/// Hands out ids, adding `#k` to repeated `(kind, path)` pairs.
#[derive(Default)]
struct IdAllocator {
    seen: HashMap<(ElementKind, String), usize>,
}

impl IdAllocator {
    fn named(&mut self, kind: ElementKind, path: &str) -> ElementId {
        let n = self.bump(kind, path);
        ElementId::build(kind, path, (n > 0).then_some(n))
    }

    fn ordinal(&mut self, kind: ElementKind, path: &str) -> ElementId {
        let n = self.bump(kind, path);
        ElementId::build(kind, path, Some(n))
    }

    fn bump(&mut self, kind: ElementKind, path: &str) -> usize {
        let slot = self.seen.entry((kind, path.to_owned())).or_insert(0);
        let n = *slot;
        *slot += 1;
        n
    }
}

/// Dotted path of the region owned by the machine or composite state.
pub(crate) fn machine_path(model: &Model, capsule: &CapsuleDecl) -> String {
    format!("{}.{}.sm", model.name, capsule.name)
}

/// Every element of the model in canonical pre-order with its id.
///
/// Canonical order is the serializer's order: protocols (each followed by
/// its messages), then capsules (ports, parts, connectors, state machine);
/// inside a region the initial marker, then states depth-first, then
/// transitions.
pub fn elements(model: &Model) -> Vec<Entry<'_>> {
    let mut out = Vec::new();
    let mut ids = IdAllocator::default();
    let root = ids.named(ElementKind::Model, &model.name);
    out.push(Entry { id: root.clone(), parent: None, element: ElementRef::Model(model), loc: Loc::Model });

    for (pi, p) in model.protocols.iter().enumerate() {
        let ppath = format!("{}.{}", model.name, p.name);
        let pid = ids.named(ElementKind::Protocol, &ppath);
        out.push(Entry { id: pid.clone(), parent: Some(root.clone()), element: ElementRef::Protocol(p), loc: Loc::Protocol(pi) });
        for (mi, m) in p.messages.iter().enumerate() {
            let id = ids.named(ElementKind::Msg, &format!("{ppath}.{}", m.name));
            out.push(Entry { id, parent: Some(pid.clone()), element: ElementRef::Message(m), loc: Loc::Message(pi, mi) });
        }
    }

    for (ci, c) in model.capsules.iter().enumerate() {
        let cpath = format!("{}.{}", model.name, c.name);
        let cid = ids.named(ElementKind::Capsule, &cpath);
        out.push(Entry { id: cid.clone(), parent: Some(root.clone()), element: ElementRef::Capsule(c), loc: Loc::Capsule(ci) });
        for (i, p) in c.ports.iter().enumerate() {
            let id = ids.named(ElementKind::Port, &format!("{cpath}.{}", p.name));
            out.push(Entry { id, parent: Some(cid.clone()), element: ElementRef::Port(p), loc: Loc::Port(ci, i) });
        }
        for (i, p) in c.parts.iter().enumerate() {
            let id = ids.named(ElementKind::Part, &format!("{cpath}.{}", p.name));
            out.push(Entry { id, parent: Some(cid.clone()), element: ElementRef::Part(p), loc: Loc::Part(ci, i) });
        }
        for (i, k) in c.connectors.iter().enumerate() {
            let mut segs = vec![cpath.as_str()];
            segs.extend(k.end_a.segments());
            segs.push("to");
            segs.extend(k.end_b.segments());
            let id = ids.ordinal(ElementKind::Connector, &segs.join("."));
            out.push(Entry { id, parent: Some(cid.clone()), element: ElementRef::Connector(k), loc: Loc::Connector(ci, i) });
        }
        if let Some(sm) = &c.machine {
            let spath = machine_path(model, c);
            let sid = ids.named(ElementKind::Sm, &spath);
            out.push(Entry { id: sid.clone(), parent: Some(cid.clone()), element: ElementRef::Machine(sm), loc: Loc::Machine(ci) });
            walk_region(&sm.region, &spath, &sid, ci, &mut Vec::new(), &mut ids, &mut out);
        }
    }
    out
}

fn walk_region<'a>(
    region: &'a Region,
    rpath: &str,
    owner: &ElementId,
    ci: usize,
    chain: &mut Vec<usize>,
    ids: &mut IdAllocator,
    out: &mut Vec<Entry<'a>>,
) {
    for (i, init) in region.initials.iter().enumerate() {
        let id = ids.named(ElementKind::Initial, rpath);
        out.push(Entry { id, parent: Some(owner.clone()), element: ElementRef::Initial(init), loc: Loc::Initial(ci, chain.clone(), i) });
    }
    for (i, s) in region.states.iter().enumerate() {
        let spath = format!("{rpath}.{}", s.name);
        let id = ids.named(ElementKind::State, &spath);
        chain.push(i);
        out.push(Entry { id: id.clone(), parent: Some(owner.clone()), element: ElementRef::State(s), loc: Loc::State(ci, chain.clone()) });
        if let Some(inner) = &s.region {
            walk_region(inner, &spath, &id, ci, chain, ids, out);
        }
        chain.pop();
    }
    for (i, t) in region.transitions.iter().enumerate() {
        let id = ids.ordinal(ElementKind::Trans, &format!("{rpath}.{}.{}", t.source, t.target));
        out.push(Entry { id, parent: Some(owner.clone()), element: ElementRef::Transition(t), loc: Loc::Transition(ci, chain.clone(), i) });
    }
}

/// The element with `id`, if any.
pub fn lookup<'a>(model: &'a Model, id: &ElementId) -> Option<ElementRef<'a>> {
    find(model, id).map(|e| e.element)
}

pub fn find<'a>(model: &'a Model, id: &ElementId) -> Option<Entry<'a>> {
    elements(model).into_iter().find(|e| &e.id == id)
}

pub fn locate(model: &Model, id: &ElementId) -> Option<Loc> {
    find(model, id).map(|e| e.loc)
}

pub fn id_at(model: &Model, loc: &Loc) -> Option<ElementId> {
    elements(model).into_iter().find(|e| &e.loc == loc).map(|e| e.id)
}

/// Direct children of `id` in canonical order.
pub fn children_of(model: &Model, id: &ElementId) -> Result<Vec<ElementId>> {
    let all = elements(model);
    if !all.iter().any(|e| &e.id == id) {
        return Err(Error::TargetMissing(id.clone()));
    }
    Ok(all.into_iter().filter(|e| e.parent.as_ref() == Some(id)).map(|e| e.id).collect())
}

pub fn region<'a>(model: &'a Model, capsule: usize, chain: &[usize]) -> Option<&'a Region> {
    let mut region = &model.capsules.get(capsule)?.machine.as_ref()?.region;
    for &i in chain {
        region = region.states.get(i)?.region.as_ref()?;
    }
    Some(region)
}

pub fn region_mut<'a>(model: &'a mut Model, capsule: usize, chain: &[usize]) -> Option<&'a mut Region> {
    let mut region = &mut model.capsules.get_mut(capsule)?.machine.as_mut()?.region;
    for &i in chain {
        region = region.states.get_mut(i)?.region.as_mut()?;
    }
    Some(region)
}
