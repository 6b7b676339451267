//! Graphical endpoint: views, palettes and operations over JSON-RPC.

use std::sync::Arc;

use hybridls_core::hub::EndpointKind;
use hybridls_core::{HubError, Mutation, SessionId, ViewId};
use log::{info, warn};
use serde_json::{json, Value};

use crate::jsonrpc::{self, Incoming, RpcError};
use crate::shared::{Shared, State};
use crate::wire;

pub const UNKNOWN_DOCUMENT: i64 = 1001;
pub const UNKNOWN_VIEW: i64 = 1002;
pub const STALE_REVISION: i64 = 1003;
pub const DOCUMENT_STALE: i64 = 1004;
pub const PALETTE_VIOLATION: i64 = 1005;
pub const NOT_DRILLABLE: i64 = 1006;
pub const MUTATION_REJECTED: i64 = 1007;

pub struct GraphEndpoint {
    shared: Arc<Shared>,
    session: SessionId,
}

impl GraphEndpoint {
    pub fn connect(shared: Arc<Shared>) -> (Self, std::sync::mpsc::Receiver<Value>) {
        let (session, rx) = shared.connect(EndpointKind::Graphical);
        info!("graphical client {session} connected");
        (GraphEndpoint { shared, session }, rx)
    }

    pub fn session(&self) -> SessionId {
        self.session
    }

    pub fn reject_body(&self, err: &serde_json::Error) {
        let msg = jsonrpc::error_response(Value::Null, &RpcError::new(jsonrpc::PARSE_ERROR, err.to_string()));
        self.shared.lock().send(self.session, msg);
    }

    pub fn handle(&mut self, message: Value) {
        let shared = self.shared.clone();
        let mut state = shared.lock();
        match jsonrpc::classify(message) {
            Ok(Incoming::Request { id, method, params }) => {
                let (reply, notifications) = match self.request(&mut state, &method, &params) {
                    Ok((v, n)) => (jsonrpc::response(id, v), n),
                    Err(e) => (jsonrpc::error_response(id, &e), Vec::new()),
                };
                state.send(self.session, reply);
                state.deliver(notifications);
            }
            Ok(_) => {}
            Err(e) => state.send(self.session, jsonrpc::error_response(Value::Null, &e)),
        }
    }

    pub fn disconnect(&self) {
        self.shared.disconnect(self.session);
        info!("graphical client {} disconnected", self.session);
    }

    fn request(
        &mut self,
        state: &mut State,
        method: &str,
        params: &Value,
    ) -> Result<(Value, Vec<hybridls_core::Notification>), RpcError> {
        let uri = || {
            params.get("uri").and_then(Value::as_str).map(str::to_owned).ok_or_else(|| RpcError::invalid_params("uri missing"))
        };
        let view = || -> Result<ViewId, RpcError> {
            let text = params.get("viewId").and_then(Value::as_str).ok_or_else(|| RpcError::invalid_params("viewId missing"))?;
            text.parse().map_err(|_| RpcError::new(UNKNOWN_VIEW, format!("unknown view {text}")))
        };
        let done = |v: Value| Ok((v, Vec::new()));
        match method {
            "graph/listViews" => {
                let views = state.hub.list_views(&uri()?).map_err(hub_error)?;
                done(serde_json::to_value(views).expect("descriptors serialize"))
            }
            "graph/requestModel" => {
                let graph = state.hub.subscribe(self.session, &uri()?, &view()?).map_err(hub_error)?;
                done(graph.to_json())
            }
            "graph/requestPalette" => {
                let items = state.hub.palette(&uri()?, &view()?).map_err(hub_error)?;
                done(serde_json::to_value(items).expect("palette serializes"))
            }
            "graph/switchView" => {
                let uri = uri()?;
                let target = match params.get("clickedElementId").and_then(Value::as_str) {
                    Some(clicked) => {
                        let from = match state.hub.subscription(self.session, &uri) {
                            Some(v) => v.clone(),
                            None => view()?,
                        };
                        state.hub.drill_target(&uri, &from, clicked).map_err(hub_error)?
                    }
                    None => view()?,
                };
                let graph = state.hub.switch_view(self.session, &uri, &target).map_err(hub_error)?;
                done(graph.to_json())
            }
            "graph/operation" => {
                let uri = uri()?;
                let view = view()?;
                let op = params.get("operation").ok_or_else(|| RpcError::invalid_params("operation missing"))?;
                let mutation: Mutation =
                    serde_json::from_value(op.clone()).map_err(|e| RpcError::invalid_params(format!("operation: {e}")))?;
                let expected = params
                    .get("expectedRevision")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| RpcError::invalid_params("expectedRevision missing"))?;
                let outcome = state.hub.graph_operation(self.session, &uri, &view, &mutation, expected).map_err(hub_error)?;
                info!("{uri} at revision {} after {} from {}", outcome.revision, mutation.kind(), self.session);
                let text = state.hub.snapshot(&uri).map(|s| s.text).unwrap_or_default();
                let reply = json!({
                    "accepted": outcome.accepted,
                    "revision": outcome.revision,
                    "diagnostics": wire::diagnostics(&text, &outcome.diagnostics),
                });
                Ok((reply, outcome.notifications))
            }
            _ => Err(RpcError::new(jsonrpc::METHOD_NOT_FOUND, format!("unknown method {method}"))),
        }
    }
}

pub fn hub_error(e: HubError) -> RpcError {
    let message = e.to_string();
    match e {
        HubError::UnknownDocument(_) => RpcError::new(UNKNOWN_DOCUMENT, message),
        HubError::UnknownView(_) => RpcError::new(UNKNOWN_VIEW, message),
        HubError::StaleRevision { current, .. } => {
            RpcError::new(STALE_REVISION, message).with_data(json!({"accepted": false, "revision": current}))
        }
        HubError::DocumentStale(_) => RpcError::new(DOCUMENT_STALE, message).with_data(json!({"accepted": false})),
        HubError::PaletteViolation { .. } => RpcError::new(PALETTE_VIOLATION, message),
        HubError::NotDrillable(_) => RpcError::new(NOT_DRILLABLE, message),
        HubError::MutationRejected { code, .. } => {
            RpcError::new(MUTATION_REJECTED, message).with_data(json!({"accepted": false, "code": code.map(|c| c.as_str())}))
        }
        HubError::TargetMissing(_) => RpcError::new(MUTATION_REJECTED, message).with_data(json!({"accepted": false, "code": null})),
        HubError::AlreadyOpen(_) | HubError::StaleVersion { .. } => RpcError::new(jsonrpc::INVALID_PARAMS, message),
        HubError::UnknownSession(_) | HubError::Internal(_) => {
            warn!("{message}");
            RpcError::new(jsonrpc::INTERNAL_ERROR, message)
        }
    }
}
