//! Name resolution: every by-name reference in a model and what it points at.

use std::collections::HashMap;

use crate::id::{ElementId, ElementKind};
use crate::model::*;
use crate::query::{elements, machine_path, Loc};

/// Which field of the referring element holds the name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefSlot {
    PortProtocol,
    PartCapsule,
    ConnectorPartA,
    ConnectorPortA,
    ConnectorPartB,
    ConnectorPortB,
    InitialTarget,
    TransitionSource,
    TransitionTarget,
    TriggerPort,
    TriggerMessage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub from: ElementId,
    pub slot: RefSlot,
    pub name: String,
    /// `None` when the name does not resolve.
    pub target: Option<ElementId>,
}

/// All references in canonical element order.
///
/// Names resolve to the first declaration with that name. A reference whose
/// qualifier failed to resolve (the port of an unknown part, the message of
/// an unknown port) is omitted; the qualifier itself is reported.
pub fn references(model: &Model) -> Vec<Reference> {
    let entries = elements(model);
    let first: HashMap<(ElementKind, &str), &ElementId> = entries
        .iter()
        .rev()
        .map(|e| ((e.id.kind(), e.id.path()), &e.id))
        .collect();
    let lookup = |kind: ElementKind, path: String| first.get(&(kind, path.as_str())).map(|id| (*id).clone());

    let mut out = Vec::new();
    let mut push = |from: &ElementId, slot: RefSlot, name: &str, target: Option<ElementId>| {
        out.push(Reference { from: from.clone(), slot, name: name.to_owned(), target });
    };
    let m = &model.name;

    for e in &entries {
        match &e.loc {
            Loc::Port(ci, pi) => {
                let port = &model.capsules[*ci].ports[*pi];
                let t = lookup(ElementKind::Protocol, format!("{m}.{}", port.protocol));
                push(&e.id, RefSlot::PortProtocol, &port.protocol, t);
            }
            Loc::Part(ci, pi) => {
                let part = &model.capsules[*ci].parts[*pi];
                let t = lookup(ElementKind::Capsule, format!("{m}.{}", part.capsule));
                push(&e.id, RefSlot::PartCapsule, &part.capsule, t);
            }
            Loc::Connector(ci, ki) => {
                let capsule = &model.capsules[*ci];
                let conn = &capsule.connectors[*ki];
                for (end, part_slot, port_slot) in [
                    (&conn.end_a, RefSlot::ConnectorPartA, RefSlot::ConnectorPortA),
                    (&conn.end_b, RefSlot::ConnectorPartB, RefSlot::ConnectorPortB),
                ] {
                    match &end.part {
                        None => {
                            let t = lookup(ElementKind::Port, format!("{m}.{}.{}", capsule.name, end.port));
                            push(&e.id, port_slot, &end.port, t);
                        }
                        Some(part_name) => {
                            let part_id = lookup(ElementKind::Part, format!("{m}.{}.{part_name}", capsule.name));
                            push(&e.id, part_slot, part_name, part_id.clone());
                            let part = part_id.and_then(|_| capsule.part(part_name));
                            if let Some(part) = part {
                                if model.capsule(&part.capsule).is_some() {
                                    let t = lookup(ElementKind::Port, format!("{m}.{}.{}", part.capsule, end.port));
                                    push(&e.id, port_slot, &end.port, t);
                                }
                            }
                        }
                    }
                }
            }
            Loc::Initial(ci, chain, ii) => {
                let region = crate::query::region(model, *ci, chain).expect("entry loc is valid");
                let target = &region.initials[*ii].target;
                let rpath = region_path(model, *ci, chain);
                let t = lookup(ElementKind::State, format!("{rpath}.{target}"));
                push(&e.id, RefSlot::InitialTarget, target, t);
            }
            Loc::Transition(ci, chain, ti) => {
                let capsule = &model.capsules[*ci];
                let region = crate::query::region(model, *ci, chain).expect("entry loc is valid");
                let tr = &region.transitions[*ti];
                let rpath = region_path(model, *ci, chain);
                let s = lookup(ElementKind::State, format!("{rpath}.{}", tr.source));
                push(&e.id, RefSlot::TransitionSource, &tr.source, s);
                let t = lookup(ElementKind::State, format!("{rpath}.{}", tr.target));
                push(&e.id, RefSlot::TransitionTarget, &tr.target, t);
                if let Some(trig) = &tr.trigger {
                    let port_id = lookup(ElementKind::Port, format!("{m}.{}.{}", capsule.name, trig.port));
                    push(&e.id, RefSlot::TriggerPort, &trig.port, port_id.clone());
                    let protocol = port_id
                        .and_then(|_| capsule.port(&trig.port))
                        .and_then(|p| model.protocol(&p.protocol));
                    if let Some(protocol) = protocol {
                        let t = lookup(ElementKind::Msg, format!("{m}.{}.{}", protocol.name, trig.message));
                        push(&e.id, RefSlot::TriggerMessage, &trig.message, t);
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Dotted path of the region at `chain` inside capsule `ci`.
pub(crate) fn region_path(model: &Model, ci: usize, chain: &[usize]) -> String {
    let capsule = &model.capsules[ci];
    let mut path = machine_path(model, capsule);
    let mut region = capsule.machine.as_ref().map(|sm| &sm.region);
    for &i in chain {
        let state = region.and_then(|r| r.states.get(i));
        if let Some(state) = state {
            path.push('.');
            path.push_str(&state.name);
        }
        region = state.and_then(|s| s.region.as_ref());
    }
    path
}

/// Writes `name` into the slot of the element at `loc`. Returns false when
/// the slot does not exist on that element.
pub(crate) fn set_reference(model: &mut Model, loc: &Loc, slot: RefSlot, name: &str) -> bool {
    match (loc, slot) {
        (Loc::Port(c, i), RefSlot::PortProtocol) => model.capsules[*c].ports[*i].protocol = name.into(),
        (Loc::Part(c, i), RefSlot::PartCapsule) => model.capsules[*c].parts[*i].capsule = name.into(),
        (Loc::Connector(c, i), _) => {
            let conn = &mut model.capsules[*c].connectors[*i];
            match slot {
                RefSlot::ConnectorPartA => conn.end_a.part = Some(name.into()),
                RefSlot::ConnectorPortA => conn.end_a.port = name.into(),
                RefSlot::ConnectorPartB => conn.end_b.part = Some(name.into()),
                RefSlot::ConnectorPortB => conn.end_b.port = name.into(),
                _ => return false,
            }
        }
        (Loc::Initial(c, chain, i), RefSlot::InitialTarget) => {
            let Some(region) = crate::query::region_mut(model, *c, chain) else { return false };
            region.initials[*i].target = name.into();
        }
        (Loc::Transition(c, chain, i), _) => {
            let Some(region) = crate::query::region_mut(model, *c, chain) else { return false };
            let tr = &mut region.transitions[*i];
            match slot {
                RefSlot::TransitionSource => tr.source = name.into(),
                RefSlot::TransitionTarget => tr.target = name.into(),
                RefSlot::TriggerPort => {
                    let Some(t) = tr.trigger.as_mut() else { return false };
                    t.port = name.into();
                }
                RefSlot::TriggerMessage => {
                    let Some(t) = tr.trigger.as_mut() else { return false };
                    t.message = name.into();
                }
                _ => return false,
            }
        }
        _ => return false,
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn resolves_all_slots() {
        let m = parse(
            "model M { protocol P { in msg go; } capsule W { port q : P; }
             capsule C { port p : ~P; part w : W; connect p to w.q;
               statemachine { initial -> A; state A; A -> A on p.go; } } }",
        )
        .model
        .unwrap();
        let refs = references(&m);
        assert!(refs.iter().all(|r| r.target.is_some()), "{refs:#?}");
        let slots: Vec<RefSlot> = refs.iter().map(|r| r.slot).collect();
        for s in [
            RefSlot::PortProtocol,
            RefSlot::PartCapsule,
            RefSlot::ConnectorPortA,
            RefSlot::ConnectorPartB,
            RefSlot::ConnectorPortB,
            RefSlot::InitialTarget,
            RefSlot::TransitionSource,
            RefSlot::TriggerPort,
            RefSlot::TriggerMessage,
        ] {
            assert!(slots.contains(&s), "missing {s:?}");
        }
        let msg = refs.iter().find(|r| r.slot == RefSlot::TriggerMessage).unwrap();
        assert_eq!(msg.target.as_ref().unwrap().as_str(), "msg:M.P.go");
        let q = refs.iter().find(|r| r.slot == RefSlot::ConnectorPortB).unwrap();
        assert_eq!(q.target.as_ref().unwrap().as_str(), "port:M.W.q");
    }

    #[test]
    fn unresolved_qualifier_hides_member() {
        let m = parse("model M { capsule C { connect x.y to z; } }").model.unwrap();
        let refs = references(&m);
        assert_eq!(refs.len(), 2);
        assert!(refs.iter().all(|r| r.target.is_none()));
    }
}
