//! The hub shared by every connection, plus per-session outboxes.
//!
//! All hub access goes through one lock. An endpoint queues its reply and
//! the notifications its change caused while still holding the lock, so
//! every session sees messages in the order changes were committed and a
//! reply always precedes the notifications it caused.

use std::collections::HashMap;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex, MutexGuard};

use hybridls_core::hub::EndpointKind;
use hybridls_core::{Hub, Notification, SessionId};
use serde_json::{json, Value};

use crate::jsonrpc;

pub struct Shared {
    state: Mutex<State>,
}

pub struct State {
    pub hub: Hub,
    outboxes: HashMap<SessionId, Sender<Value>>,
    next_request: HashMap<SessionId, i64>,
}

impl Shared {
    pub fn new(hub: Hub) -> Arc<Shared> {
        Arc::new(Shared { state: Mutex::new(State { hub, outboxes: HashMap::new(), next_request: HashMap::new() }) })
    }

    pub fn connect(&self, kind: EndpointKind) -> (SessionId, Receiver<Value>) {
        let (tx, rx) = channel();
        let mut state = self.lock();
        let id = state.hub.connect(kind);
        state.outboxes.insert(id, tx);
        (id, rx)
    }

    pub fn disconnect(&self, id: SessionId) {
        let mut state = self.lock();
        state.hub.disconnect(id);
        state.outboxes.remove(&id);
        state.next_request.remove(&id);
    }

    pub fn lock(&self) -> MutexGuard<'_, State> {
        // A panicking handler must not take the whole server down with it.
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }
}

impl State {
    /// Queues `msg` for `to`; a session that went away is ignored.
    pub fn send(&mut self, to: SessionId, msg: Value) {
        if let Some(tx) = self.outboxes.get(&to) {
            let _ = tx.send(msg);
        }
    }

    pub fn deliver(&mut self, notifications: Vec<Notification>) {
        for n in notifications {
            let to = n.session();
            let msg = match n {
                Notification::ModelUpdated { uri, view, revision, graph, .. } => jsonrpc::notification(
                    "graph/modelUpdated",
                    json!({"uri": uri, "viewId": view.to_string(), "revision": revision, "graph": graph}),
                ),
                Notification::ViewStale { uri, view, .. } => {
                    jsonrpc::notification("graph/viewStale", json!({"uri": uri, "viewId": view.to_string()}))
                }
                Notification::ApplyEdit { uri, revision, edit, start, end, .. } => {
                    let counter = self.next_request.entry(to).or_insert(0);
                    *counter += 1;
                    let id = format!("hybridls-{counter}");
                    let change = json!({
                        "range": {
                            "start": {"line": start.0, "character": start.1},
                            "end": {"line": end.0, "character": end.1},
                        },
                        "newText": edit.new_text,
                    });
                    jsonrpc::request(
                        json!(id),
                        "workspace/applyEdit",
                        json!({"label": format!("revision {revision}"), "edit": {"changes": {uri: [change]}}}),
                    )
                }
            };
            self.send(to, msg);
        }
    }
}
