//! Palette-driven model edits.
//!
//! A mutation never leaves behind a new semantic error: additions that
//! would duplicate a name, dangle a reference or build a recursive part are
//! rejected with the code they would have produced, and deletes of
//! referenced elements are rejected with `E107`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Code, Diagnostic};
use crate::error::{Error, Result};
use crate::id::{check_name, ElementId, ElementKind};
use crate::model::*;
use crate::query::{elements, find, id_at, region, region_mut, ElementRef, Loc};
use crate::resolve::{references, set_reference};
use crate::validate::{instantiates, validate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all_fields = "camelCase")]
pub enum Mutation {
    AddProtocol { container: ElementId, name: String },
    AddMessage { container: ElementId, name: String, direction: Direction },
    AddCapsule { container: ElementId, name: String },
    AddPort {
        container: ElementId,
        name: String,
        protocol: ElementId,
        #[serde(default)]
        conjugated: bool,
    },
    AddPart { container: ElementId, name: String, capsule: ElementId },
    /// Ends are port references as written in text: `p` or `part.port`.
    AddConnector { container: ElementId, end_a: String, end_b: String },
    AddStateMachine { container: ElementId },
    AddState { container: ElementId, name: String },
    AddCompositeState { container: ElementId, name: String },
    SetInitial { container: ElementId, target: ElementId },
    AddTransition { container: ElementId, source: ElementId, target: ElementId },
    /// `port.message`; absent or empty clears the trigger.
    SetTransitionTrigger {
        target: ElementId,
        #[serde(default)]
        trigger: Option<String>,
    },
    SetTransitionGuard {
        target: ElementId,
        #[serde(default)]
        guard: Option<String>,
    },
    SetTransitionAction {
        target: ElementId,
        #[serde(default)]
        action: Option<String>,
    },
    Rename { target: ElementId, name: String },
    Delete { target: ElementId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    AddProtocol,
    AddMessage,
    AddCapsule,
    AddPort,
    AddPart,
    AddConnector,
    AddStateMachine,
    AddState,
    AddCompositeState,
    SetInitial,
    AddTransition,
    SetTransitionTrigger,
    SetTransitionGuard,
    SetTransitionAction,
    Rename,
    Delete,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mutation {
    pub fn kind(&self) -> MutationKind {
        match self {
            Mutation::AddProtocol { .. } => MutationKind::AddProtocol,
            Mutation::AddMessage { .. } => MutationKind::AddMessage,
            Mutation::AddCapsule { .. } => MutationKind::AddCapsule,
            Mutation::AddPort { .. } => MutationKind::AddPort,
            Mutation::AddPart { .. } => MutationKind::AddPart,
            Mutation::AddConnector { .. } => MutationKind::AddConnector,
            Mutation::AddStateMachine { .. } => MutationKind::AddStateMachine,
            Mutation::AddState { .. } => MutationKind::AddState,
            Mutation::AddCompositeState { .. } => MutationKind::AddCompositeState,
            Mutation::SetInitial { .. } => MutationKind::SetInitial,
            Mutation::AddTransition { .. } => MutationKind::AddTransition,
            Mutation::SetTransitionTrigger { .. } => MutationKind::SetTransitionTrigger,
            Mutation::SetTransitionGuard { .. } => MutationKind::SetTransitionGuard,
            Mutation::SetTransitionAction { .. } => MutationKind::SetTransitionAction,
            Mutation::Rename { .. } => MutationKind::Rename,
            Mutation::Delete { .. } => MutationKind::Delete,
        }
    }

    /// The container for additive mutations, the target otherwise.
    pub fn subject(&self) -> &ElementId {
        match self {
            Mutation::AddProtocol { container, .. }
            | Mutation::AddMessage { container, .. }
            | Mutation::AddCapsule { container, .. }
            | Mutation::AddPort { container, .. }
            | Mutation::AddPart { container, .. }
            | Mutation::AddConnector { container, .. }
            | Mutation::AddStateMachine { container }
            | Mutation::AddState { container, .. }
            | Mutation::AddCompositeState { container, .. }
            | Mutation::SetInitial { container, .. }
            | Mutation::AddTransition { container, .. } => container,
            Mutation::SetTransitionTrigger { target, .. }
            | Mutation::SetTransitionGuard { target, .. }
            | Mutation::SetTransitionAction { target, .. }
            | Mutation::Rename { target, .. }
            | Mutation::Delete { target } => target,
        }
    }

    /// Kind of element an additive mutation creates.
    pub fn created_kind(&self) -> Option<ElementKind> {
        Some(match self {
            Mutation::AddProtocol { .. } => ElementKind::Protocol,
            Mutation::AddMessage { .. } => ElementKind::Msg,
            Mutation::AddCapsule { .. } => ElementKind::Capsule,
            Mutation::AddPort { .. } => ElementKind::Port,
            Mutation::AddPart { .. } => ElementKind::Part,
            Mutation::AddConnector { .. } => ElementKind::Connector,
            Mutation::AddStateMachine { .. } => ElementKind::Sm,
            Mutation::AddState { .. } | Mutation::AddCompositeState { .. } => ElementKind::State,
            Mutation::AddTransition { .. } => ElementKind::Trans,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub model: Model,
    /// Created or modified element; for `Delete`, the former parent.
    pub affected: ElementId,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn apply_mutation(model: &Model, mutation: &Mutation) -> Result<Applied> {
    let mut next = model.clone();
    let loc = apply(&mut next, model, mutation)?;
    let affected = match loc {
        Affected::At(loc) => id_at(&next, &loc).expect("mutation produced an element at this loc"),
        Affected::Id(id) => id,
    };
    let diagnostics = validate(&next, None);
    Ok(Applied { model: next, affected, diagnostics })
}

enum Affected {
    At(Loc),
    Id(ElementId),
}

fn entry_loc(model: &Model, id: &ElementId) -> Result<Loc> {
    find(model, id).map(|e| e.loc).ok_or_else(|| Error::TargetMissing(id.clone()))
}

fn expect_kind(id: &ElementId, kinds: &[ElementKind], child: ElementKind) -> Result<()> {
    if kinds.contains(&id.kind()) {
        Ok(())
    } else {
        Err(Error::InvalidContainer { container: id.clone(), child })
    }
}

fn duplicate(name: &str, what: &str) -> Error {
    Error::rejected(Code::E101, format!("{what} '{name}' already exists"))
}

fn top_level_taken(model: &Model, name: &str) -> bool {
    model.protocols.iter().any(|p| p.name == name) || model.capsules.iter().any(|c| c.name == name)
}

fn capsule_member_taken(c: &CapsuleDecl, name: &str) -> bool {
    c.ports.iter().any(|p| p.name == name) || c.parts.iter().any(|p| p.name == name)
}

/// Region owned by the sm or composite state `container`.
fn region_of(model: &Model, container: &ElementId, child: ElementKind) -> Result<(usize, Vec<usize>)> {
    expect_kind(container, &[ElementKind::Sm, ElementKind::State], child)?;
    let loc = entry_loc(model, container)?;
    let (ci, chain) = loc.owned_region().expect("sm or state");
    if region(model, ci, &chain).is_none() {
        return Err(Error::InvalidContainer { container: container.clone(), child });
    }
    Ok((ci, chain))
}

/// Index of `state` if it is a direct child of the region `(ci, chain)`.
fn state_in_region(model: &Model, state: &ElementId, ci: usize, chain: &[usize]) -> Result<usize> {
    if state.kind() != ElementKind::State {
        return Err(Error::Malformed(format!("{state} is not a state")));
    }
    match entry_loc(model, state)? {
        Loc::State(c, path) if c == ci && path.len() == chain.len() + 1 && path.starts_with(chain) => {
            Ok(*path.last().expect("non-empty"))
        }
        _ => Err(Error::rejected(Code::E105, format!("{state} is not a state of this region"))),
    }
}

fn apply(next: &mut Model, model: &Model, mutation: &Mutation) -> Result<Affected> {
    match mutation {
        Mutation::AddProtocol { container, name } | Mutation::AddCapsule { container, name } => {
            let child = mutation.created_kind().expect("additive");
            expect_kind(container, &[ElementKind::Model], child)?;
            entry_loc(model, container)?;
            check_name(name)?;
            if top_level_taken(model, name) {
                return Err(duplicate(name, "top-level declaration"));
            }
            if child == ElementKind::Protocol {
                next.protocols.push(ProtocolDecl { name: name.clone(), messages: Vec::new() });
                Ok(Affected::At(Loc::Protocol(next.protocols.len() - 1)))
            } else {
                next.capsules.push(CapsuleDecl::new(name.clone()));
                Ok(Affected::At(Loc::Capsule(next.capsules.len() - 1)))
            }
        }
        Mutation::AddMessage { container, name, direction } => {
            expect_kind(container, &[ElementKind::Protocol], ElementKind::Msg)?;
            let Loc::Protocol(pi) = entry_loc(model, container)? else { unreachable!() };
            check_name(name)?;
            let p = &mut next.protocols[pi];
            if p.messages.iter().any(|m| &m.name == name) {
                return Err(duplicate(name, "message"));
            }
            p.messages.push(MessageDecl { name: name.clone(), direction: *direction });
            Ok(Affected::At(Loc::Message(pi, p.messages.len() - 1)))
        }
        Mutation::AddPort { container, name, protocol, conjugated } => {
            expect_kind(container, &[ElementKind::Capsule], ElementKind::Port)?;
            let Loc::Capsule(ci) = entry_loc(model, container)? else { unreachable!() };
            check_name(name)?;
            let Some(ElementRef::Protocol(proto)) = find(model, protocol).map(|e| e.element) else {
                return Err(Error::TargetMissing(protocol.clone()));
            };
            let c = &mut next.capsules[ci];
            if capsule_member_taken(c, name) {
                return Err(duplicate(name, "port or part"));
            }
            c.ports.push(PortDecl { name: name.clone(), protocol: proto.name.clone(), conjugated: *conjugated });
            Ok(Affected::At(Loc::Port(ci, c.ports.len() - 1)))
        }
        Mutation::AddPart { container, name, capsule } => {
            expect_kind(container, &[ElementKind::Capsule], ElementKind::Part)?;
            let Loc::Capsule(ci) = entry_loc(model, container)? else { unreachable!() };
            check_name(name)?;
            let Some(ElementRef::Capsule(ty)) = find(model, capsule).map(|e| e.element) else {
                return Err(Error::TargetMissing(capsule.clone()));
            };
            let owner = &model.capsules[ci];
            if capsule_member_taken(owner, name) {
                return Err(duplicate(name, "port or part"));
            }
            if instantiates(model, &ty.name, &owner.name) {
                return Err(Error::rejected(Code::E106, format!("part of type '{}' would instantiate '{}'", ty.name, owner.name)));
            }
            let c = &mut next.capsules[ci];
            c.parts.push(PartDecl { name: name.clone(), capsule: ty.name.clone() });
            Ok(Affected::At(Loc::Part(ci, c.parts.len() - 1)))
        }
        Mutation::AddConnector { container, end_a, end_b } => {
            expect_kind(container, &[ElementKind::Capsule], ElementKind::Connector)?;
            let Loc::Capsule(ci) = entry_loc(model, container)? else { unreachable!() };
            let (a, b) = (PortRef::parse(end_a)?, PortRef::parse(end_b)?);
            let owner = &model.capsules[ci];
            let resolve = |end: &PortRef| -> Result<&PortDecl> {
                let found = match &end.part {
                    None => owner.port(&end.port),
                    Some(part) => owner.part(part).and_then(|p| model.capsule(&p.capsule)).and_then(|c| c.port(&end.port)),
                };
                found.ok_or_else(|| Error::rejected(Code::E102, format!("port '{end}' does not resolve")))
            };
            let (pa, pb) = (resolve(&a)?, resolve(&b)?);
            if pa.protocol != pb.protocol || pa.conjugated == pb.conjugated {
                return Err(Error::rejected(Code::E103, format!("'{a}' and '{b}' are not compatible")));
            }
            let c = &mut next.capsules[ci];
            c.connectors.push(ConnectorDecl { end_a: a, end_b: b });
            Ok(Affected::At(Loc::Connector(ci, c.connectors.len() - 1)))
        }
        Mutation::AddStateMachine { container } => {
            expect_kind(container, &[ElementKind::Capsule], ElementKind::Sm)?;
            let Loc::Capsule(ci) = entry_loc(model, container)? else { unreachable!() };
            let c = &mut next.capsules[ci];
            if c.machine.is_some() {
                return Err(Error::rejected(Code::E101, format!("capsule '{}' already has a state machine", c.name)));
            }
            c.machine = Some(StateMachine::default());
            Ok(Affected::At(Loc::Machine(ci)))
        }
        Mutation::AddState { container, name } | Mutation::AddCompositeState { container, name } => {
            let (ci, chain) = region_of(model, container, ElementKind::State)?;
            check_name(name)?;
            let r = region_mut(next, ci, &chain).expect("checked");
            if r.state(name).is_some() {
                return Err(duplicate(name, "state"));
            }
            let composite = matches!(mutation, Mutation::AddCompositeState { .. });
            r.states.push(StateNode { name: name.clone(), region: composite.then(Region::default) });
            let mut path = chain;
            path.push(r.states.len() - 1);
            Ok(Affected::At(Loc::State(ci, path)))
        }
        Mutation::SetInitial { container, target } => {
            let (ci, chain) = region_of(model, container, ElementKind::Initial)?;
            let si = state_in_region(model, target, ci, &chain)?;
            let r = region_mut(next, ci, &chain).expect("checked");
            let name = r.states[si].name.clone();
            match r.initials.first_mut() {
                Some(init) => init.target = name,
                None => r.initials.push(InitialDecl { target: name }),
            }
            Ok(Affected::At(Loc::Initial(ci, chain, 0)))
        }
        Mutation::AddTransition { container, source, target } => {
            let (ci, chain) = region_of(model, container, ElementKind::Trans)?;
            let s = state_in_region(model, source, ci, &chain)?;
            let t = state_in_region(model, target, ci, &chain)?;
            let r = region_mut(next, ci, &chain).expect("checked");
            let tr = TransitionDecl::new(r.states[s].name.clone(), r.states[t].name.clone());
            r.transitions.push(tr);
            Ok(Affected::At(Loc::Transition(ci, chain, r.transitions.len() - 1)))
        }
        Mutation::SetTransitionTrigger { target, trigger } => {
            let (ci, chain, ti) = transition_loc(model, target)?;
            let trigger = match trigger.as_deref().map(str::trim) {
                None | Some("") => None,
                Some(text) => {
                    let trig = Trigger::parse(text)?;
                    let capsule = &model.capsules[ci];
                    let message = capsule
                        .port(&trig.port)
                        .and_then(|p| model.protocol(&p.protocol))
                        .and_then(|p| p.messages.iter().find(|m| m.name == trig.message));
                    if message.is_none() {
                        return Err(Error::rejected(Code::E102, format!("trigger '{trig}' does not resolve")));
                    }
                    Some(trig)
                }
            };
            region_mut(next, ci, &chain).expect("checked").transitions[ti].trigger = trigger;
            Ok(Affected::Id(target.clone()))
        }
        Mutation::SetTransitionGuard { target, guard } => {
            let (ci, chain, ti) = transition_loc(model, target)?;
            let guard = match guard.as_deref().map(str::trim) {
                None | Some("") => None,
                Some(text) => Some(GuardText::new(text)?),
            };
            region_mut(next, ci, &chain).expect("checked").transitions[ti].guard = guard;
            Ok(Affected::Id(target.clone()))
        }
        Mutation::SetTransitionAction { target, action } => {
            let (ci, chain, ti) = transition_loc(model, target)?;
            let action = match action.as_deref().map(str::trim) {
                None | Some("") => None,
                Some(text) => Some(ActionText::new(text)?),
            };
            region_mut(next, ci, &chain).expect("checked").transitions[ti].action = action;
            Ok(Affected::Id(target.clone()))
        }
        Mutation::Rename { target, name } => rename(next, model, target, name),
        Mutation::Delete { target } => delete(next, model, target),
    }
}

fn transition_loc(model: &Model, id: &ElementId) -> Result<(usize, Vec<usize>, usize)> {
    match entry_loc(model, id)? {
        Loc::Transition(ci, chain, ti) => Ok((ci, chain, ti)),
        _ => Err(Error::NotApplicable(id.clone())),
    }
}

fn rename(next: &mut Model, model: &Model, target: &ElementId, name: &str) -> Result<Affected> {
    check_name(name)?;
    let loc = entry_loc(model, target)?;
    let taken = match &loc {
        Loc::Model => false,
        Loc::Protocol(_) | Loc::Capsule(_) => top_level_taken(model, name),
        Loc::Message(pi, _) => model.protocols[*pi].messages.iter().any(|m| m.name == name),
        Loc::Port(ci, _) | Loc::Part(ci, _) => capsule_member_taken(&model.capsules[*ci], name),
        Loc::State(ci, path) => {
            let r = region(model, *ci, &path[..path.len() - 1]).expect("state loc");
            r.state(name).is_some()
        }
        _ => return Err(Error::NotApplicable(target.clone())),
    };
    if taken {
        return Err(duplicate(name, "sibling"));
    }

    let locs: HashMap<ElementId, Loc> = elements(model).into_iter().map(|e| (e.id, e.loc)).collect();
    for r in references(model) {
        if r.target.as_ref() == Some(target) {
            let from = &locs[&r.from];
            let ok = set_reference(next, from, r.slot, name);
            debug_assert!(ok, "reference slot exists on its element");
        }
    }
    match &loc {
        Loc::Model => next.name = name.into(),
        Loc::Protocol(i) => next.protocols[*i].name = name.into(),
        Loc::Message(p, i) => next.protocols[*p].messages[*i].name = name.into(),
        Loc::Capsule(i) => next.capsules[*i].name = name.into(),
        Loc::Port(c, i) => next.capsules[*c].ports[*i].name = name.into(),
        Loc::Part(c, i) => next.capsules[*c].parts[*i].name = name.into(),
        Loc::State(c, path) => {
            let (last, chain) = path.split_last().expect("non-empty");
            region_mut(next, *c, chain).expect("state loc").states[*last].name = name.into();
        }
        _ => unreachable!("filtered above"),
    }
    Ok(Affected::At(loc))
}

fn delete(next: &mut Model, model: &Model, target: &ElementId) -> Result<Affected> {
    let entries = elements(model);
    let entry = entries.iter().find(|e| &e.id == target).ok_or_else(|| Error::TargetMissing(target.clone()))?;
    let parent = entry.parent.clone().ok_or_else(|| Error::NotApplicable(target.clone()))?;

    let mut doomed: HashSet<&ElementId> = HashSet::from([target]);
    for e in &entries {
        if e.parent.as_ref().is_some_and(|p| doomed.contains(p)) {
            doomed.insert(&e.id);
        }
    }
    if let Some(r) = references(model)
        .into_iter()
        .find(|r| !doomed.contains(&r.from) && r.target.as_ref().is_some_and(|t| doomed.contains(t)))
    {
        return Err(Error::rejected(
            Code::E107,
            format!("{} is still referenced by {}", r.target.expect("checked"), r.from),
        ));
    }

    match &entry.loc {
        Loc::Model => unreachable!("root has no parent"),
        Loc::Protocol(i) => {
            next.protocols.remove(*i);
        }
        Loc::Message(p, i) => {
            next.protocols[*p].messages.remove(*i);
        }
        Loc::Capsule(i) => {
            next.capsules.remove(*i);
        }
        Loc::Port(c, i) => {
            next.capsules[*c].ports.remove(*i);
        }
        Loc::Part(c, i) => {
            next.capsules[*c].parts.remove(*i);
        }
        Loc::Connector(c, i) => {
            next.capsules[*c].connectors.remove(*i);
        }
        Loc::Machine(c) => next.capsules[*c].machine = None,
        Loc::State(c, path) => {
            let (last, chain) = path.split_last().expect("non-empty");
            region_mut(next, *c, chain).expect("state loc").states.remove(*last);
        }
        Loc::Initial(c, chain, i) => {
            region_mut(next, *c, chain).expect("initial loc").initials.remove(*i);
        }
        Loc::Transition(c, chain, i) => {
            region_mut(next, *c, chain).expect("transition loc").transitions.remove(*i);
        }
    }
    Ok(Affected::Id(parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::lookup;
    use crate::syntax::parse;

    fn id(s: &str) -> ElementId {
        s.parse().unwrap()
    }

    fn model(text: &str) -> Model {
        parse(text).model.expect("parses")
    }

    const BASE: &str = "model M { protocol P { in msg start; out msg done; }
        capsule W { port q : P; }
        capsule C { port p : ~P; part w : W; connect p to w.q;
          statemachine { initial -> Idle; state Idle; state Busy; Idle -> Busy on p.start; } } }";

    #[test]
    fn add_state_appends() {
        let m = model("model M { capsule C { statemachine { } } }");
        let a = apply_mutation(&m, &Mutation::AddState { container: id("sm:M.C.sm"), name: "Idle".into() }).unwrap();
        assert_eq!(a.affected, id("state:M.C.sm.Idle"));
        assert_eq!(a.model.capsules[0].machine.as_ref().unwrap().region.states, [StateNode::simple("Idle")]);
    }

    #[test]
    fn transition_ordinals() {
        let m = model(BASE);
        let add = Mutation::AddTransition {
            container: id("sm:M.C.sm"),
            source: id("state:M.C.sm.Idle"),
            target: id("state:M.C.sm.Busy"),
        };
        let once = apply_mutation(&m, &add).unwrap();
        assert_eq!(once.affected, id("trans:M.C.sm.Idle.Busy#1"));
        let twice = apply_mutation(&once.model, &add).unwrap();
        assert_eq!(twice.affected, id("trans:M.C.sm.Idle.Busy#2"));
    }

    #[test]
    fn delete_referenced_state_is_rejected() {
        let m = model(BASE);
        let err = apply_mutation(&m, &Mutation::Delete { target: id("state:M.C.sm.Busy") }).unwrap_err();
        assert!(matches!(err, Error::Rejected { code: Code::E107, .. }));
        let err = apply_mutation(&m, &Mutation::Delete { target: id("protocol:M.P") }).unwrap_err();
        assert!(matches!(err, Error::Rejected { code: Code::E107, .. }));
    }

    #[test]
    fn delete_removes_subtree() {
        let m = model(BASE);
        let a = apply_mutation(&m, &Mutation::Delete { target: id("sm:M.C.sm") }).unwrap();
        assert_eq!(a.affected, id("capsule:M.C"));
        for gone in ["sm:M.C.sm", "state:M.C.sm.Idle", "trans:M.C.sm.Idle.Busy#0", "initial:M.C.sm"] {
            assert!(lookup(&a.model, &id(gone)).is_none(), "{gone}");
        }
        assert!(a.diagnostics.is_empty());
    }

    #[test]
    fn rename_rewrites_references() {
        let m = model(BASE);
        let a = apply_mutation(&m, &Mutation::Rename { target: id("state:M.C.sm.Idle"), name: "Ready".into() }).unwrap();
        assert_eq!(a.affected, id("state:M.C.sm.Ready"));
        assert!(a.diagnostics.is_empty());
        let r = &a.model.capsules[1].machine.as_ref().unwrap().region;
        assert_eq!(r.initial_target(), Some("Ready"));
        assert_eq!(r.transitions[0].source, "Ready");

        let a = apply_mutation(&m, &Mutation::Rename { target: id("port:M.W.q"), name: "r".into() }).unwrap();
        assert_eq!(a.model.capsules[1].connectors[0].end_b, PortRef::on_part("w", "r"));
        let a = apply_mutation(&m, &Mutation::Rename { target: id("msg:M.P.start"), name: "go".into() }).unwrap();
        assert!(a.diagnostics.is_empty());
        let a = apply_mutation(&m, &Mutation::Rename { target: id("capsule:M.W"), name: "Worker".into() }).unwrap();
        assert_eq!(a.model.capsules[1].parts[0].capsule, "Worker");
        assert!(a.diagnostics.is_empty());
    }

    #[test]
    fn rename_collision_is_rejected() {
        let m = model(BASE);
        let err = apply_mutation(&m, &Mutation::Rename { target: id("state:M.C.sm.Idle"), name: "Busy".into() }).unwrap_err();
        assert!(matches!(err, Error::Rejected { code: Code::E101, .. }));
        let err = apply_mutation(&m, &Mutation::Rename { target: id("part:M.C.w"), name: "p".into() }).unwrap_err();
        assert!(matches!(err, Error::Rejected { code: Code::E101, .. }));
    }

    #[test]
    fn rejects_errors_before_they_exist() {
        let m = model(BASE);
        let part = Mutation::AddPart { container: id("capsule:M.W"), name: "c".into(), capsule: id("capsule:M.C") };
        assert!(matches!(apply_mutation(&m, &part), Err(Error::Rejected { code: Code::E106, .. })));
        let conn = Mutation::AddConnector { container: id("capsule:M.C"), end_a: "p".into(), end_b: "p".into() };
        assert!(matches!(apply_mutation(&m, &conn), Err(Error::Rejected { code: Code::E103, .. })));
        let conn = Mutation::AddConnector { container: id("capsule:M.C"), end_a: "p".into(), end_b: "w.zz".into() };
        assert!(matches!(apply_mutation(&m, &conn), Err(Error::Rejected { code: Code::E102, .. })));
        let trig = Mutation::SetTransitionTrigger { target: id("trans:M.C.sm.Idle.Busy#0"), trigger: Some("p.nope".into()) };
        assert!(matches!(apply_mutation(&m, &trig), Err(Error::Rejected { code: Code::E102, .. })));
        let missing = Mutation::AddState { container: id("sm:M.X.sm"), name: "A".into() };
        assert!(matches!(apply_mutation(&m, &missing), Err(Error::TargetMissing(_))));
        let bad_name = Mutation::AddState { container: id("sm:M.C.sm"), name: "state".into() };
        assert!(matches!(apply_mutation(&m, &bad_name), Err(Error::Malformed(_))));
        let simple = Mutation::AddState { container: id("state:M.C.sm.Idle"), name: "X".into() };
        assert!(matches!(apply_mutation(&m, &simple), Err(Error::InvalidContainer { .. })));
        let cross = Mutation::AddTransition {
            container: id("sm:M.C.sm"),
            source: id("state:M.C.sm.Idle"),
            target: id("state:M.C.sm.Nope"),
        };
        assert!(matches!(apply_mutation(&m, &cross), Err(Error::TargetMissing(_))));
    }

    #[test]
    fn set_transition_fields() {
        let m = model(BASE);
        let t = id("trans:M.C.sm.Idle.Busy#0");
        let a = apply_mutation(&m, &Mutation::SetTransitionGuard { target: t.clone(), guard: Some("x>0".into()) }).unwrap();
        let a = apply_mutation(&a.model, &Mutation::SetTransitionAction { target: t.clone(), action: Some("send()".into()) }).unwrap();
        assert_eq!(a.affected, t);
        let tr = &a.model.capsules[1].machine.as_ref().unwrap().region.transitions[0];
        assert_eq!(tr.label(), "p.start [x>0] / send()");
        let cleared = apply_mutation(&a.model, &Mutation::SetTransitionTrigger { target: t.clone(), trigger: None }).unwrap();
        assert_eq!(cleared.model.capsules[1].machine.as_ref().unwrap().region.transitions[0].trigger, None);
        let bad = Mutation::SetTransitionAction { target: t, action: Some("a; b".into()) };
        assert!(matches!(apply_mutation(&m, &bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn wire_shape() {
        let json = r#"{"kind":"AddConnector","container":"capsule:M.C","endA":"p","endB":"w.q"}"#;
        let m: Mutation = serde_json::from_str(json).unwrap();
        assert_eq!(m.kind(), MutationKind::AddConnector);
        assert_eq!(serde_json::to_string(&m).unwrap(), json);
        assert!(serde_json::from_str::<Mutation>(r#"{"kind":"AddState","container":"nope"}"#).is_err());
    }
}
