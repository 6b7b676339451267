//! Textual endpoint: a small Language Server Protocol subset.

use std::sync::Arc;

use hybridls_core::hub::EndpointKind;
use hybridls_core::query::{elements, ElementRef};
use hybridls_core::resolve::references;
use hybridls_core::syntax::LineIndex;
use hybridls_core::{format, ElementId, ElementKind, HubError, Model, SessionId, SpanTable};
use log::{info, warn};
use serde_json::{json, Value};

use crate::jsonrpc::{self, Incoming, RpcError};
use crate::shared::{Shared, State};
use crate::wire;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Exit,
}

pub struct LspEndpoint {
    shared: Arc<Shared>,
    session: SessionId,
    initialized: bool,
    shutdown: bool,
}

impl LspEndpoint {
    /// Registers a textual session; the receiver yields everything the
    /// server sends on it.
    pub fn connect(shared: Arc<Shared>) -> (Self, std::sync::mpsc::Receiver<Value>) {
        let (session, rx) = shared.connect(EndpointKind::Textual);
        info!("textual client {session} connected");
        (LspEndpoint { shared, session, initialized: false, shutdown: false }, rx)
    }

    pub fn session(&self) -> SessionId {
        self.session
    }

    /// Answers a body that was not valid JSON.
    pub fn reject_body(&self, err: &serde_json::Error) {
        let msg = jsonrpc::error_response(Value::Null, &RpcError::new(jsonrpc::PARSE_ERROR, err.to_string()));
        self.shared.lock().send(self.session, msg);
    }

    pub fn handle(&mut self, message: Value) -> Control {
        let incoming = match jsonrpc::classify(message) {
            Ok(m) => m,
            Err(e) => {
                self.shared.lock().send(self.session, jsonrpc::error_response(Value::Null, &e));
                return Control::Continue;
            }
        };
        let shared = self.shared.clone();
        let mut state = shared.lock();
        match incoming {
            Incoming::Request { id, method, params } => {
                let result = self.request(&mut state, &method, params);
                let msg = match result {
                    Ok(v) => jsonrpc::response(id, v),
                    Err(e) => jsonrpc::error_response(id, &e),
                };
                state.send(self.session, msg);
            }
            Incoming::Notification { method, params } => {
                if method == "exit" {
                    return Control::Exit;
                }
                if let Err(e) = self.notification(&mut state, &method, params) {
                    warn!("{method}: {}", e.message);
                }
            }
            // Replies to our workspace/applyEdit requests need no action.
            Incoming::Response { .. } => {}
        }
        Control::Continue
    }

    pub fn disconnect(&self) {
        self.shared.disconnect(self.session);
        info!("textual client {} disconnected", self.session);
    }

    fn request(&mut self, state: &mut State, method: &str, params: Value) -> Result<Value, RpcError> {
        if method == "initialize" {
            self.initialized = true;
            return Ok(json!({
                "capabilities": {
                    "textDocumentSync": 1,
                    "documentSymbolProvider": true,
                    "definitionProvider": true,
                    "documentFormattingProvider": true,
                },
                "serverInfo": {"name": "hybridls", "version": env!("CARGO_PKG_VERSION")},
            }));
        }
        if !self.initialized {
            return Err(RpcError::new(jsonrpc::SERVER_NOT_INITIALIZED, "initialize first"));
        }
        if self.shutdown {
            return Err(RpcError::new(jsonrpc::INVALID_REQUEST, "server is shutting down"));
        }
        match method {
            "shutdown" => {
                self.shutdown = true;
                Ok(Value::Null)
            }
            "textDocument/documentSymbol" => {
                let uri = text_document_uri(&params)?;
                let Some((model, spans)) = parsed(state, &uri)? else { return Ok(json!([])) };
                let text = state.hub.snapshot(&uri).map_err(hub_error)?.text;
                Ok(document_symbols(model, spans, &LineIndex::new(&text)))
            }
            "textDocument/definition" => {
                let uri = text_document_uri(&params)?;
                let (line, character) = position_param(&params)?;
                let text = state.hub.snapshot(&uri).map_err(hub_error)?.text;
                let Some((model, spans)) = parsed(state, &uri)? else { return Ok(Value::Null) };
                let index = LineIndex::new(&text);
                let offset = index.utf16_offset(line, character);
                Ok(match definition(model, spans, offset) {
                    Some(span) => json!({"uri": uri, "range": wire::range(&index, span)}),
                    None => Value::Null,
                })
            }
            "textDocument/formatting" => {
                let uri = text_document_uri(&params)?;
                let text = state.hub.snapshot(&uri).map_err(hub_error)?.text;
                Ok(match format(&text) {
                    Ok(new_text) => {
                        let index = LineIndex::new(&text);
                        let (line, character) = index.end_position();
                        json!([{
                            "range": {"start": {"line": 0, "character": 0}, "end": {"line": line, "character": character}},
                            "newText": new_text,
                        }])
                    }
                    Err(_) => json!([]),
                })
            }
            _ => Err(RpcError::new(jsonrpc::METHOD_NOT_FOUND, format!("unknown method {method}"))),
        }
    }

    fn notification(&mut self, state: &mut State, method: &str, params: Value) -> Result<(), RpcError> {
        if !self.initialized && method != "initialized" {
            return Err(RpcError::new(jsonrpc::SERVER_NOT_INITIALIZED, "initialize first"));
        }
        match method {
            "textDocument/didOpen" => {
                let doc = params.get("textDocument").ok_or_else(|| RpcError::invalid_params("textDocument missing"))?;
                let uri = str_field(doc, "uri")?;
                let text = str_field(doc, "text")?;
                let version = doc.get("version").and_then(Value::as_i64);
                let outcome = match state.hub.open(self.session, &uri, &text, version) {
                    Err(HubError::AlreadyOpen(_)) => {
                        state.hub.attach_text(self.session, &uri).map_err(hub_error)?;
                        state.hub.change_text(self.session, &uri, &text, version.unwrap_or(i64::MAX))
                    }
                    other => other,
                };
                match outcome {
                    Ok(outcome) => {
                        info!("{uri} opened at revision {}", outcome.revision);
                        self.publish(state, &uri);
                        state.deliver(outcome.notifications);
                    }
                    Err(e) => {
                        warn!("didOpen {uri}: {e}");
                        self.publish(state, &uri);
                    }
                }
                Ok(())
            }
            "textDocument/didChange" => {
                let uri = text_document_uri(&params)?;
                let version = params["textDocument"].get("version").and_then(Value::as_i64).unwrap_or(i64::MAX);
                let text = params
                    .get("contentChanges")
                    .and_then(Value::as_array)
                    .and_then(|c| c.last())
                    .and_then(|c| c.get("text"))
                    .and_then(Value::as_str)
                    .ok_or_else(|| RpcError::invalid_params("contentChanges must carry full text"))?;
                match state.hub.change_text(self.session, &uri, text, version) {
                    Ok(outcome) => {
                        info!("{uri} at revision {} after text change from {}", outcome.revision, self.session);
                        self.publish(state, &uri);
                        state.deliver(outcome.notifications);
                    }
                    Err(e @ HubError::UnknownDocument(_)) => return Err(hub_error(e)),
                    Err(e) => {
                        warn!("didChange {uri}: {e}");
                        self.publish(state, &uri);
                    }
                }
                Ok(())
            }
            "textDocument/didClose" => {
                let uri = text_document_uri(&params)?;
                state.hub.close(&uri).map_err(hub_error)?;
                state.send(self.session, publish_message(&uri, json!([])));
                Ok(())
            }
            "initialized" | "$/cancelRequest" | "$/setTrace" | "workspace/didChangeConfiguration" => Ok(()),
            _ => Ok(()),
        }
    }

    fn publish(&self, state: &mut State, uri: &str) {
        let Ok(snapshot) = state.hub.snapshot(uri) else { return };
        let diags = wire::diagnostics(&snapshot.text, &snapshot.diagnostics);
        state.send(self.session, publish_message(uri, diags));
    }
}

fn publish_message(uri: &str, diagnostics: Value) -> Value {
    jsonrpc::notification("textDocument/publishDiagnostics", json!({"uri": uri, "diagnostics": diagnostics}))
}

fn hub_error(e: HubError) -> RpcError {
    RpcError::new(jsonrpc::INVALID_PARAMS, e.to_string())
}

fn str_field(v: &Value, key: &str) -> Result<String, RpcError> {
    v.get(key).and_then(Value::as_str).map(str::to_owned).ok_or_else(|| RpcError::invalid_params(format!("{key} missing")))
}

fn text_document_uri(params: &Value) -> Result<String, RpcError> {
    let doc = params.get("textDocument").ok_or_else(|| RpcError::invalid_params("textDocument missing"))?;
    str_field(doc, "uri")
}

fn position_param(params: &Value) -> Result<(u32, u32), RpcError> {
    let pos = params.get("position").ok_or_else(|| RpcError::invalid_params("position missing"))?;
    let num = |k: &str| pos.get(k).and_then(Value::as_u64).map(|n| n as u32).ok_or_else(|| RpcError::invalid_params(format!("position.{k} missing")));
    Ok((num("line")?, num("character")?))
}

fn parsed<'a>(state: &'a State, uri: &str) -> Result<Option<(&'a Model, &'a SpanTable)>, RpcError> {
    state.hub.parsed(uri).map_err(hub_error)
}

/// Full span of the declaration the reference at `offset` names.
pub fn definition(model: &Model, spans: &SpanTable, offset: usize) -> Option<hybridls_core::SourceSpan> {
    let (from, slot, _) = spans.reference_at(offset)?;
    let target = references(model).into_iter().find(|r| &r.from == from && r.slot == slot)?.target?;
    spans.get(&target)
}

fn symbol_kind(kind: ElementKind) -> u32 {
    match kind {
        ElementKind::Model => 2,
        ElementKind::Protocol => 11,
        ElementKind::Msg => 24,
        ElementKind::Capsule => 5,
        ElementKind::Port => 8,
        ElementKind::Part => 7,
        ElementKind::Connector => 25,
        ElementKind::Sm => 23,
        ElementKind::State => 22,
        ElementKind::Initial => 20,
        ElementKind::Trans => 12,
    }
}

fn symbol_name(element: &ElementRef<'_>) -> String {
    match element {
        ElementRef::Model(m) => m.name.clone(),
        ElementRef::Protocol(p) => p.name.clone(),
        ElementRef::Message(m) => m.name.clone(),
        ElementRef::Capsule(c) => c.name.clone(),
        ElementRef::Port(p) => p.name.clone(),
        ElementRef::Part(p) => p.name.clone(),
        ElementRef::Connector(k) => format!("{} to {}", k.end_a, k.end_b),
        ElementRef::Machine(_) => "statemachine".to_owned(),
        ElementRef::State(s) => s.name.clone(),
        ElementRef::Initial(i) => format!("initial -> {}", i.target),
        ElementRef::Transition(t) => format!("{} -> {}", t.source, t.target),
    }
}

/// Symbols below the model, nested as in the model.
pub fn document_symbols(model: &Model, spans: &SpanTable, index: &LineIndex) -> Value {
    let entries = elements(model);
    fn build(entries: &[hybridls_core::query::Entry<'_>], parent: &ElementId, spans: &SpanTable, index: &LineIndex) -> Vec<Value> {
        entries
            .iter()
            .filter(|e| e.parent.as_ref() == Some(parent))
            .filter_map(|e| {
                let decl = spans.decl(&e.id)?;
                Some(json!({
                    "name": symbol_name(&e.element),
                    "detail": e.id.as_str(),
                    "kind": symbol_kind(e.id.kind()),
                    "range": wire::range(index, decl.full),
                    "selectionRange": wire::range(index, decl.name.unwrap_or(decl.full)),
                    "children": build(entries, &e.id, spans, index),
                }))
            })
            .collect()
    }
    Value::Array(build(&entries, &entries[0].id, spans, index))
}
