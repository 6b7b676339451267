//! Per-document state shared by the textual and graphical endpoints.
//!
//! The hub is a plain single-threaded structure; callers serialize access
//! (the server keeps it behind one lock), which gives every document a total
//! order of changes. Operations return the notifications the change causes
//! and leave delivering them to the caller.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagnostic::{Code, Diagnostic};
use crate::error::Error;
use crate::layout::{layout, LayoutConfig};
use crate::model::Model;
use crate::mutation::{apply_mutation, Mutation};
use crate::syntax::{edit_for_mutation, parse, LineIndex, SpanTable, TextEdit};
use crate::validate::validate;
use crate::view::{self, list_views, palette_for, GGraph, PaletteItem, ViewDescriptor, ViewId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointKind {
    Textual,
    Graphical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SessionId {
    seq: u64,
    kind: EndpointKind,
}

impl SessionId {
    pub fn kind(&self) -> EndpointKind {
        self.kind
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            EndpointKind::Textual => "text",
            EndpointKind::Graphical => "graph",
        };
        write!(f, "{prefix}-{}", self.seq)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HubError {
    #[error("document {0} is already open")]
    AlreadyOpen(String),
    #[error("unknown document {0}")]
    UnknownDocument(String),
    #[error("unknown session {0}")]
    UnknownSession(SessionId),
    #[error("unknown view {0}")]
    UnknownView(String),
    #[error("version {got} is not newer than {last}")]
    StaleVersion { got: i64, last: i64 },
    #[error("expected revision {expected} but document is at {current}")]
    StaleRevision { expected: u64, current: u64 },
    #[error("document {0} has errors; graphical views are frozen at the last good model")]
    DocumentStale(String),
    #[error("{operation} is not offered in view {view}")]
    PaletteViolation { operation: String, view: String },
    #[error("{0} has no drill-down view")]
    NotDrillable(String),
    #[error("no element {0}")]
    TargetMissing(String),
    #[error("{message}")]
    MutationRejected { code: Option<Code>, message: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Notification {
    ModelUpdated { session: SessionId, uri: String, view: ViewId, revision: u64, graph: GGraph },
    ViewStale { session: SessionId, uri: String, view: ViewId },
    /// `start`/`end` are (line, UTF-16 character) in the text before the edit.
    ApplyEdit { session: SessionId, uri: String, revision: u64, edit: TextEdit, start: (u32, u32), end: (u32, u32) },
}

impl Notification {
    pub fn session(&self) -> SessionId {
        match self {
            Notification::ModelUpdated { session, .. }
            | Notification::ViewStale { session, .. }
            | Notification::ApplyEdit { session, .. } => *session,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SyncOutcome {
    pub accepted: bool,
    pub revision: u64,
    pub diagnostics: Vec<Diagnostic>,
    pub text_edits: Vec<TextEdit>,
    pub refreshed_views: Vec<(ViewId, GGraph)>,
    pub stale_views: Vec<ViewId>,
    pub notifications: Vec<Notification>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub text: String,
    pub revision: u64,
    pub stale: bool,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug)]
struct Document {
    text: String,
    model: Option<Model>,
    spans: Option<SpanTable>,
    revision: u64,
    diagnostics: Vec<Diagnostic>,
    stale: bool,
    text_version: Option<i64>,
}

impl Document {
    fn new(text: String, version: Option<i64>) -> Self {
        let mut doc = Document {
            text: String::new(),
            model: None,
            spans: None,
            revision: 1,
            diagnostics: Vec::new(),
            stale: true,
            text_version: version,
        };
        doc.reparse(text);
        doc
    }

    /// Replaces the text; keeps the last good model when the new text does
    /// not parse.
    fn reparse(&mut self, text: String) {
        let parsed = parse(&text);
        match parsed.model {
            Some(model) => {
                let spans = parsed.spans.expect("spans accompany a model");
                self.diagnostics = parsed.diagnostics;
                self.diagnostics.extend(validate(&model, Some(&spans)));
                self.model = Some(model);
                self.spans = Some(spans);
                self.stale = false;
            }
            None => {
                self.diagnostics = parsed.diagnostics;
                self.stale = true;
            }
        }
        self.text = text;
    }

    fn good_model(&self, uri: &str) -> Result<&Model, HubError> {
        match (&self.model, self.stale) {
            (Some(m), false) => Ok(m),
            _ => Err(HubError::DocumentStale(uri.to_owned())),
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Session {
    /// Graphical sessions watch one view per document.
    views: BTreeMap<String, ViewId>,
    /// Documents a textual session has open.
    texts: BTreeSet<String>,
}

#[derive(Debug)]
pub struct Hub {
    docs: BTreeMap<String, Document>,
    sessions: BTreeMap<SessionId, Session>,
    next_seq: u64,
    layout: LayoutConfig,
    reach_depth: usize,
}

impl Default for Hub {
    fn default() -> Self {
        Hub::new(LayoutConfig::default())
    }
}

impl Hub {
    pub fn new(layout: LayoutConfig) -> Self {
        Hub { docs: BTreeMap::new(), sessions: BTreeMap::new(), next_seq: 1, layout, reach_depth: view::DEFAULT_REACH_DEPTH }
    }

    pub fn with_reach_depth(mut self, depth: usize) -> Self {
        self.reach_depth = depth;
        self
    }

    pub fn connect(&mut self, kind: EndpointKind) -> SessionId {
        let id = SessionId { seq: self.next_seq, kind };
        self.next_seq += 1;
        self.sessions.insert(id, Session::default());
        id
    }

    /// Drops the session and its subscriptions. Documents stay open.
    pub fn disconnect(&mut self, session: SessionId) {
        self.sessions.remove(&session);
    }

    fn session_mut(&mut self, id: SessionId) -> Result<&mut Session, HubError> {
        self.sessions.get_mut(&id).ok_or(HubError::UnknownSession(id))
    }

    fn doc(&self, uri: &str) -> Result<&Document, HubError> {
        self.docs.get(uri).ok_or_else(|| HubError::UnknownDocument(uri.to_owned()))
    }

    pub fn open(&mut self, session: SessionId, uri: &str, text: &str, version: Option<i64>) -> Result<SyncOutcome, HubError> {
        if self.docs.contains_key(uri) {
            return Err(HubError::AlreadyOpen(uri.to_owned()));
        }
        let textual = session.kind == EndpointKind::Textual;
        let s = self.session_mut(session)?;
        if textual {
            s.texts.insert(uri.to_owned());
        }
        let doc = Document::new(text.to_owned(), version);
        let outcome = SyncOutcome { accepted: true, revision: doc.revision, diagnostics: doc.diagnostics.clone(), ..Default::default() };
        self.docs.insert(uri.to_owned(), doc);
        Ok(outcome)
    }

    /// Lets a further textual session follow an already open document.
    pub fn attach_text(&mut self, session: SessionId, uri: &str) -> Result<(), HubError> {
        self.doc(uri)?;
        if session.kind == EndpointKind::Textual {
            self.session_mut(session)?.texts.insert(uri.to_owned());
        }
        Ok(())
    }

    pub fn close(&mut self, uri: &str) -> Result<(), HubError> {
        self.docs.remove(uri).ok_or_else(|| HubError::UnknownDocument(uri.to_owned()))?;
        for s in self.sessions.values_mut() {
            s.views.remove(uri);
            s.texts.remove(uri);
        }
        Ok(())
    }

    pub fn snapshot(&self, uri: &str) -> Result<Snapshot, HubError> {
        let d = self.doc(uri)?;
        Ok(Snapshot { text: d.text.clone(), revision: d.revision, stale: d.stale, diagnostics: d.diagnostics.clone() })
    }

    /// Model and spans of the current text, when it parses.
    pub fn parsed(&self, uri: &str) -> Result<Option<(&Model, &SpanTable)>, HubError> {
        let d = self.doc(uri)?;
        Ok(match (&d.model, &d.spans, d.stale) {
            (Some(m), Some(s), false) => Some((m, s)),
            _ => None,
        })
    }

    /// Full-text replacement from a textual client. Text identical to the
    /// current document is acknowledged without a new revision.
    pub fn change_text(&mut self, session: SessionId, uri: &str, text: &str, version: i64) -> Result<SyncOutcome, HubError> {
        self.session_mut(session)?;
        let doc = self.docs.get_mut(uri).ok_or_else(|| HubError::UnknownDocument(uri.to_owned()))?;
        if let Some(last) = doc.text_version {
            if version <= last {
                return Err(HubError::StaleVersion { got: version, last });
            }
        }
        doc.text_version = Some(version);
        if doc.text == text {
            return Ok(SyncOutcome { accepted: true, revision: doc.revision, diagnostics: doc.diagnostics.clone(), ..Default::default() });
        }
        let old_text = std::mem::take(&mut doc.text);
        doc.revision += 1;
        doc.reparse(text.to_owned());
        let (revision, diagnostics, stale) = (doc.revision, doc.diagnostics.clone(), doc.stale);
        let mut outcome = SyncOutcome { accepted: true, revision, diagnostics, ..Default::default() };

        // Other textual clients of the document get the whole new text.
        let whole = TextEdit { span: crate::SourceSpan::new(0, old_text.len()), new_text: text.to_owned() };
        let index = LineIndex::new(&old_text);
        let (start, end) = ((0, 0), index.end_position());
        for (&sid, s) in &self.sessions {
            if sid != session && s.texts.contains(uri) {
                outcome.notifications.push(Notification::ApplyEdit { session: sid, uri: uri.to_owned(), revision, edit: whole.clone(), start, end });
            }
        }
        if !stale {
            self.fan_out(uri, &mut outcome);
        }
        Ok(outcome)
    }

    pub fn graph_operation(
        &mut self,
        session: SessionId,
        uri: &str,
        view: &ViewId,
        mutation: &Mutation,
        expected_revision: u64,
    ) -> Result<SyncOutcome, HubError> {
        self.session_mut(session)?;
        let doc = self.doc(uri)?;
        if expected_revision != doc.revision {
            return Err(HubError::StaleRevision { expected: expected_revision, current: doc.revision });
        }
        let model = doc.good_model(uri)?;
        if !view::view_exists(model, view) {
            return Err(HubError::UnknownView(view.to_string()));
        }
        if !palette_for(view.category()).iter().any(|p| p.operation_kind == mutation.kind()) {
            return Err(HubError::PaletteViolation { operation: mutation.kind().to_string(), view: view.to_string() });
        }
        let applied = apply_mutation(model, mutation).map_err(mutation_error)?;
        let spans = doc.spans.as_ref().expect("fresh document has spans");
        let (new_text, edit) =
            edit_for_mutation(&doc.text, spans, model, &applied.model, mutation, &applied.affected).map_err(mutation_error)?;
        let reparsed = parse(&new_text);
        if reparsed.model.as_ref() != Some(&applied.model) {
            return Err(HubError::Internal(format!("text after {} does not reparse to the mutated model", mutation.kind())));
        }
        let index = LineIndex::new(&doc.text);
        let (start, end) = (index.utf16_position(edit.span.start), index.utf16_position(edit.span.end));

        let doc = self.docs.get_mut(uri).expect("checked above");
        doc.revision += 1;
        doc.reparse(new_text);
        let revision = doc.revision;
        let mut outcome = SyncOutcome {
            accepted: true,
            revision,
            diagnostics: doc.diagnostics.clone(),
            text_edits: vec![edit.clone()],
            ..Default::default()
        };
        for (&sid, s) in &self.sessions {
            if s.texts.contains(uri) {
                outcome.notifications.push(Notification::ApplyEdit { session: sid, uri: uri.to_owned(), revision, edit: edit.clone(), start, end });
            }
        }
        self.fan_out(uri, &mut outcome);
        Ok(outcome)
    }

    /// Re-renders every subscribed view of `uri`; subscriptions whose view
    /// vanished get one staleness notice and are dropped.
    fn fan_out(&mut self, uri: &str, outcome: &mut SyncOutcome) {
        let doc = &self.docs[uri];
        let model = doc.model.as_ref().expect("fan-out follows a good parse");
        let mut rendered: BTreeMap<ViewId, Option<GGraph>> = BTreeMap::new();
        let mut dropped = Vec::new();
        for (&sid, s) in &self.sessions {
            let Some(view) = s.views.get(uri) else { continue };
            let graph = rendered
                .entry(view.clone())
                .or_insert_with(|| positioned(model, view, doc.revision, &self.layout, self.reach_depth).ok())
                .clone();
            match graph {
                Some(graph) => {
                    if !outcome.refreshed_views.iter().any(|(v, _)| v == view) {
                        outcome.refreshed_views.push((view.clone(), graph.clone()));
                    }
                    outcome.notifications.push(Notification::ModelUpdated {
                        session: sid,
                        uri: uri.to_owned(),
                        view: view.clone(),
                        revision: doc.revision,
                        graph,
                    });
                }
                None => {
                    if !outcome.stale_views.contains(view) {
                        outcome.stale_views.push(view.clone());
                    }
                    outcome.notifications.push(Notification::ViewStale { session: sid, uri: uri.to_owned(), view: view.clone() });
                    dropped.push(sid);
                }
            }
        }
        for sid in dropped {
            if let Some(s) = self.sessions.get_mut(&sid) {
                s.views.remove(uri);
            }
        }
    }

    pub fn list_views(&self, uri: &str) -> Result<Vec<ViewDescriptor>, HubError> {
        let doc = self.doc(uri)?;
        let model = doc.model.as_ref().ok_or_else(|| HubError::DocumentStale(uri.to_owned()))?;
        Ok(list_views(model))
    }

    pub fn palette(&self, uri: &str, view: &ViewId) -> Result<Vec<PaletteItem>, HubError> {
        let doc = self.doc(uri)?;
        let model = doc.model.as_ref().ok_or_else(|| HubError::DocumentStale(uri.to_owned()))?;
        if !view::view_exists(model, view) {
            return Err(HubError::UnknownView(view.to_string()));
        }
        Ok(palette_for(view.category()))
    }

    /// Positioned graph of `view` at the current revision, without
    /// subscribing.
    pub fn render(&self, uri: &str, view: &ViewId) -> Result<GGraph, HubError> {
        let doc = self.doc(uri)?;
        let model = doc.good_model(uri)?;
        positioned(model, view, doc.revision, &self.layout, self.reach_depth).map_err(|_| HubError::UnknownView(view.to_string()))
    }

    /// Watches `view` of `uri`, replacing any earlier view of that document.
    pub fn subscribe(&mut self, session: SessionId, uri: &str, view: &ViewId) -> Result<GGraph, HubError> {
        let graph = self.render(uri, view)?;
        self.session_mut(session)?.views.insert(uri.to_owned(), view.clone());
        Ok(graph)
    }

    pub fn switch_view(&mut self, session: SessionId, uri: &str, view: &ViewId) -> Result<GGraph, HubError> {
        self.subscribe(session, uri, view)
    }

    /// The view a click on `element` in `from` drills into.
    pub fn drill_target(&self, uri: &str, from: &ViewId, element: &str) -> Result<ViewId, HubError> {
        let graph = self.render(uri, from)?;
        let node = graph.node(element).ok_or_else(|| HubError::TargetMissing(element.to_owned()))?;
        node.drill_target.clone().ok_or_else(|| HubError::NotDrillable(element.to_owned()))
    }

    pub fn unsubscribe(&mut self, session: SessionId, uri: &str) -> Result<(), HubError> {
        self.session_mut(session)?.views.remove(uri);
        Ok(())
    }

    pub fn subscription(&self, session: SessionId, uri: &str) -> Option<&ViewId> {
        self.sessions.get(&session)?.views.get(uri)
    }
}

fn positioned(model: &Model, view: &ViewId, revision: u64, config: &LayoutConfig, depth: usize) -> Result<GGraph, Error> {
    let raw = match view {
        ViewId::ReachTree(q) if view::view_exists(model, view) => view::reach_tree(model, q, depth)?,
        _ => view::render(model, view)?,
    };
    let mut graph = layout(&raw, config);
    graph.revision = revision;
    Ok(graph)
}

fn mutation_error(e: Error) -> HubError {
    match e {
        Error::TargetMissing(id) => HubError::TargetMissing(id.to_string()),
        Error::Rejected { code, message } => HubError::MutationRejected { code: Some(code), message },
        other => HubError::MutationRejected { code: None, message: other.to_string() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::view::{GElement, NodeKind};

    const DOC: &str = "model M {
protocol P {
  in msg start;
}

capsule C {
  port p : P;
  statemachine {
    initial -> Idle;
    state Idle;
    Idle -> Idle on p.start;
  }
}
}
";

    fn view(s: &str) -> ViewId {
        s.parse().unwrap()
    }

    fn setup() -> (Hub, SessionId, SessionId) {
        let mut hub = Hub::default();
        let t = hub.connect(EndpointKind::Textual);
        let g = hub.connect(EndpointKind::Graphical);
        hub.open(t, "mem:a", DOC, Some(1)).unwrap();
        (hub, t, g)
    }

    #[test]
    fn open_and_snapshot() {
        let mut hub = Hub::default();
        let t = hub.connect(EndpointKind::Textual);
        let out = hub.open(t, "mem:a", "model M {}", Some(0)).unwrap();
        assert!(out.accepted && out.diagnostics.is_empty());
        assert_eq!(out.revision, 1);
        let snap = hub.snapshot("mem:a").unwrap();
        assert_eq!(snap, Snapshot { text: "model M {}".into(), revision: 1, stale: false, diagnostics: vec![] });
        assert_eq!(hub.open(t, "mem:a", "", None).unwrap_err(), HubError::AlreadyOpen("mem:a".into()));
        let out = hub.open(t, "mem:b", "model M {", None).unwrap();
        assert_eq!(out.diagnostics[0].code, Code::E010);
        assert!(hub.snapshot("mem:b").unwrap().stale);
        assert!(matches!(hub.list_views("mem:b"), Err(HubError::DocumentStale(_))));
    }

    #[test]
    fn text_change_refreshes_subscribers() {
        let (mut hub, t, g) = setup();
        hub.subscribe(g, "mem:a", &view("behavior:M.C")).unwrap();
        let out = hub.change_text(t, "mem:a", &DOC.replace("    state Idle;\n", "    state Idle;\n    state Busy;\n"), 2).unwrap();
        assert_eq!(out.revision, 2);
        assert_eq!(out.refreshed_views.len(), 1);
        let (_, graph) = &out.refreshed_views[0];
        assert_eq!(graph.revision, 2);
        assert!(graph.node("state:M.C.sm.Busy").is_some());
        assert!(matches!(&out.notifications[..], [Notification::ModelUpdated { session, .. }] if *session == g));
        assert!(out.text_edits.is_empty());

        assert!(matches!(hub.change_text(t, "mem:a", "model M {}", 2), Err(HubError::StaleVersion { .. })));
        let same = hub.change_text(t, "mem:a", &hub.snapshot("mem:a").unwrap().text, 3).unwrap();
        assert_eq!(same.revision, 2);
        assert!(same.notifications.is_empty());
    }

    #[test]
    fn syntax_errors_freeze_views() {
        let (mut hub, t, g) = setup();
        hub.subscribe(g, "mem:a", &view("behavior:M.C")).unwrap();
        let out = hub.change_text(t, "mem:a", "model M {", 2).unwrap();
        assert_eq!(out.revision, 2);
        assert!(out.refreshed_views.is_empty() && out.notifications.is_empty());
        assert_eq!(out.diagnostics[0].code, Code::E010);
        let op = Mutation::AddState { container: "sm:M.C.sm".parse().unwrap(), name: "B".into() };
        assert!(matches!(hub.graph_operation(g, "mem:a", &view("behavior:M.C"), &op, 2), Err(HubError::DocumentStale(_))));
        assert!(matches!(hub.switch_view(g, "mem:a", &ViewId::Root), Err(HubError::DocumentStale(_))));
        assert_eq!(hub.list_views("mem:a").unwrap().len(), 4);
    }

    #[test]
    fn renamed_capsule_makes_view_stale() {
        let (mut hub, t, g) = setup();
        hub.subscribe(g, "mem:a", &view("behavior:M.C")).unwrap();
        let out = hub.change_text(t, "mem:a", &DOC.replace("capsule C", "capsule D"), 2).unwrap();
        assert_eq!(out.stale_views, [view("behavior:M.C")]);
        assert!(matches!(&out.notifications[..], [Notification::ViewStale { .. }]));
        assert_eq!(hub.subscription(g, "mem:a"), None);
        let out = hub.change_text(t, "mem:a", DOC, 3).unwrap();
        assert!(out.notifications.is_empty());
    }

    #[test]
    fn graph_operation_round_trip() {
        let (mut hub, t, g) = setup();
        let v = view("behavior:M.C");
        hub.subscribe(g, "mem:a", &v).unwrap();
        let op = Mutation::AddState { container: "sm:M.C.sm".parse().unwrap(), name: "Busy".into() };
        let out = hub.graph_operation(g, "mem:a", &v, &op, 1).unwrap();
        assert_eq!(out.revision, 2);
        assert_eq!(out.text_edits.len(), 1);
        assert_eq!(out.text_edits[0].new_text, "    state Busy;\n");
        let kinds: Vec<(SessionId, &str)> = out
            .notifications
            .iter()
            .map(|n| match n {
                Notification::ApplyEdit { session, .. } => (*session, "edit"),
                Notification::ModelUpdated { session, .. } => (*session, "model"),
                Notification::ViewStale { session, .. } => (*session, "stale"),
            })
            .collect();
        assert_eq!(kinds, [(t, "edit"), (g, "model")]);
        let Notification::ApplyEdit { start, end, .. } = &out.notifications[0] else { unreachable!() };
        assert_eq!((*start, *end), ((11, 0), (11, 0)));
        let graph = &out.refreshed_views[0].1;
        assert!(graph.nodes().any(|n| n.label == "Busy" && n.kind == NodeKind::StateNode));
        assert!(hub.snapshot("mem:a").unwrap().text.contains("    state Busy;\n"));

        assert_eq!(
            hub.graph_operation(g, "mem:a", &v, &op, 1).unwrap_err(),
            HubError::StaleRevision { expected: 1, current: 2 }
        );
        let port = Mutation::AddPort {
            container: "capsule:M.C".parse().unwrap(),
            name: "q".into(),
            protocol: "protocol:M.P".parse().unwrap(),
            conjugated: false,
        };
        assert!(matches!(hub.graph_operation(g, "mem:a", &v, &port, 2), Err(HubError::PaletteViolation { .. })));
        let dup = hub.graph_operation(g, "mem:a", &v, &op, 2).unwrap_err();
        assert!(matches!(dup, HubError::MutationRejected { code: Some(Code::E101), .. }));
        assert_eq!(hub.snapshot("mem:a").unwrap().revision, 2);
    }

    #[test]
    fn drill_down() {
        let (mut hub, t, g) = setup();
        hub.change_text(t, "mem:a", &DOC.replace("    state Idle;\n", "    state Idle;\n    state Busy { state Inner; }\n"), 2).unwrap();
        let from = view("behavior:M.C");
        let target = hub.drill_target("mem:a", &from, "state:M.C.sm.Busy").unwrap();
        assert_eq!(target, view("behavior:M.C/Busy"));
        let graph = hub.switch_view(g, "mem:a", &target).unwrap();
        assert!(matches!(&graph.elements[..], [GElement::Node(n)] if n.label == "Inner"));
        assert!(matches!(hub.drill_target("mem:a", &from, "state:M.C.sm.Idle"), Err(HubError::NotDrillable(_))));
        assert!(matches!(hub.switch_view(g, "mem:a", &view("behavior:M.X")), Err(HubError::UnknownView(_))));
        let tree = hub.switch_view(g, "mem:a", &view("analysis:reachtree:M.C")).unwrap();
        assert_eq!(tree.nodes().count(), 1 + view::DEFAULT_REACH_DEPTH);
    }

    #[test]
    fn unsubscribed_sessions_hear_nothing() {
        let (mut hub, t, g) = setup();
        hub.subscribe(g, "mem:a", &ViewId::Root).unwrap();
        hub.unsubscribe(g, "mem:a").unwrap();
        let out = hub.change_text(t, "mem:a", "model M {}", 2).unwrap();
        assert!(out.notifications.is_empty());
        hub.close("mem:a").unwrap();
        assert!(matches!(hub.snapshot("mem:a"), Err(HubError::UnknownDocument(_))));
    }
}
