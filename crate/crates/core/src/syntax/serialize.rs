//! Canonical text form.
//!
//! Two spaces per nesting level, counted from the top-level declarations
//! (which sit in column 0 inside the `model` block), one declaration per
//! line, a blank line between top-level declarations, a trailing newline.
//! Inside a capsule: ports, parts, connectors, state machine. Inside a
//! region: initial, states, transitions.

use std::fmt::Write;

use super::parser::parse;
use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::id::ElementId;
use crate::model::*;
use crate::query::{find, ElementRef, Loc};

pub fn serialize(model: &Model) -> String {
    let mut out = String::new();
    write_model(&mut out, model);
    out
}

/// Canonical text of one declaration, indented for its depth.
pub fn serialize_subtree(model: &Model, id: &ElementId) -> Result<String> {
    let entry = find(model, id).ok_or_else(|| Error::TargetMissing(id.clone()))?;
    let mut out = String::new();
    match (entry.element, &entry.loc) {
        (ElementRef::Model(m), _) => write_model(&mut out, m),
        (ElementRef::Protocol(p), _) => write_protocol(&mut out, p),
        (ElementRef::Capsule(c), _) => write_capsule(&mut out, c),
        (ElementRef::Message(m), _) => line(&mut out, 1, &message(m)),
        (ElementRef::Port(p), _) => line(&mut out, 1, &port(p)),
        (ElementRef::Part(p), _) => line(&mut out, 1, &part(p)),
        (ElementRef::Connector(k), _) => line(&mut out, 1, &connector(k)),
        (ElementRef::Machine(sm), _) => write_machine(&mut out, sm),
        (ElementRef::State(s), Loc::State(_, chain)) => write_state(&mut out, s, 1 + chain.len()),
        (ElementRef::Initial(i), Loc::Initial(_, chain, _)) => line(&mut out, 2 + chain.len(), &initial(i)),
        (ElementRef::Transition(t), Loc::Transition(_, chain, _)) => line(&mut out, 2 + chain.len(), &transition(t)),
        _ => unreachable!("element kinds and locs agree"),
    }
    Ok(out)
}

/// Reparse and print canonically; syntax diagnostics on failure.
pub fn format(text: &str) -> std::result::Result<String, Vec<Diagnostic>> {
    let parsed = parse(text);
    match parsed.model {
        Some(model) => Ok(serialize(&model)),
        None => Err(parsed.diagnostics),
    }
}

fn line(out: &mut String, depth: usize, text: &str) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(text);
    out.push('\n');
}

fn write_model(out: &mut String, m: &Model) {
    line(out, 0, &format!("model {} {{", m.name));
    let mut first = true;
    let mut gap = |out: &mut String| {
        if !std::mem::take(&mut first) {
            out.push('\n');
        }
    };
    for p in &m.protocols {
        gap(out);
        write_protocol(out, p);
    }
    for c in &m.capsules {
        gap(out);
        write_capsule(out, c);
    }
    line(out, 0, "}");
}

fn write_protocol(out: &mut String, p: &ProtocolDecl) {
    line(out, 0, &format!("protocol {} {{", p.name));
    for m in &p.messages {
        line(out, 1, &message(m));
    }
    line(out, 0, "}");
}

fn write_capsule(out: &mut String, c: &CapsuleDecl) {
    line(out, 0, &format!("capsule {} {{", c.name));
    for p in &c.ports {
        line(out, 1, &port(p));
    }
    for p in &c.parts {
        line(out, 1, &part(p));
    }
    for k in &c.connectors {
        line(out, 1, &connector(k));
    }
    if let Some(sm) = &c.machine {
        write_machine(out, sm);
    }
    line(out, 0, "}");
}

fn write_machine(out: &mut String, sm: &StateMachine) {
    line(out, 1, "statemachine {");
    write_region(out, &sm.region, 2);
    line(out, 1, "}");
}

fn write_region(out: &mut String, r: &Region, depth: usize) {
    for i in &r.initials {
        line(out, depth, &initial(i));
    }
    for s in &r.states {
        write_state(out, s, depth);
    }
    for t in &r.transitions {
        line(out, depth, &transition(t));
    }
}

fn write_state(out: &mut String, s: &StateNode, depth: usize) {
    match &s.region {
        None => line(out, depth, &format!("state {};", s.name)),
        Some(r) => {
            line(out, depth, &format!("state {} {{", s.name));
            write_region(out, r, depth + 1);
            line(out, depth, "}");
        }
    }
}

fn message(m: &MessageDecl) -> String {
    format!("{} msg {};", m.direction.keyword(), m.name)
}

fn port(p: &PortDecl) -> String {
    format!("port {} : {}{};", p.name, if p.conjugated { "~" } else { "" }, p.protocol)
}

fn part(p: &PartDecl) -> String {
    format!("part {} : {};", p.name, p.capsule)
}

fn connector(k: &ConnectorDecl) -> String {
    format!("connect {} to {};", k.end_a, k.end_b)
}

fn initial(i: &InitialDecl) -> String {
    format!("initial -> {};", i.target)
}

fn transition(t: &TransitionDecl) -> String {
    let mut s = format!("{} -> {}", t.source, t.target);
    if let Some(trig) = &t.trigger {
        let _ = write!(s, " on {trig}");
    }
    if let Some(g) = &t.guard {
        let _ = write!(s, " [{}]", g.as_str());
    }
    if let Some(a) = &t.action {
        let _ = write!(s, " / {}", a.as_str());
    }
    s.push(';');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> ElementId {
        s.parse().unwrap()
    }

    #[test]
    fn empty_model() {
        assert_eq!(serialize(&Model::new("M")), "model M {\n}\n");
    }

    #[test]
    fn capsule_with_initial_and_state() {
        let m = parse("model M { capsule C { statemachine { state Idle; initial -> Idle; } } }").model.unwrap();
        let text = serialize(&m);
        assert_eq!(
            text,
            "model M {\ncapsule C {\n  statemachine {\n    initial -> Idle;\n    state Idle;\n  }\n}\n}\n"
        );
    }

    #[test]
    fn transition_line() {
        let m = parse("model M { capsule C { statemachine { state Idle; state Busy; Idle->Busy on p.start[x>0]/send(); } } }")
            .model
            .unwrap();
        assert!(serialize(&m).contains("\n    Idle -> Busy on p.start [x>0] / send();\n"));
    }

    #[test]
    fn subtrees() {
        let m = parse("model M { protocol P {} capsule C { port p : ~P; statemachine { state Idle; state B { state X; } } } }")
            .model
            .unwrap();
        assert_eq!(serialize_subtree(&m, &id("state:M.C.sm.Idle")).unwrap(), "    state Idle;\n");
        assert_eq!(serialize_subtree(&m, &id("port:M.C.p")).unwrap(), "  port p : ~P;\n");
        assert_eq!(serialize_subtree(&m, &id("state:M.C.sm.B.X")).unwrap(), "      state X;\n");
        assert_eq!(serialize_subtree(&m, &id("model:M")).unwrap(), serialize(&m));
        assert!(matches!(serialize_subtree(&m, &id("state:M.C.sm.Nope")), Err(Error::TargetMissing(_))));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format("model   M{   }").unwrap(), "model M {\n}\n");
        assert!(format("model M {").is_err());
        let messy = "model M{protocol P{in msg a;}capsule C{port p:P;}}";
        let once = format(messy).unwrap();
        assert_eq!(format(&once).unwrap(), once);
        assert_eq!(once, "model M {\nprotocol P {\n  in msg a;\n}\n\ncapsule C {\n  port p : P;\n}\n}\n");
    }
}
