//! Headless scripted clients driving the endpoints in-process, with a
//! shared message log.

#![allow(dead_code)]

use std::cell::RefCell;
use std::path::{Path, PathBuf};
use std::rc::Rc;
use std::sync::mpsc::Receiver;
use std::sync::Arc;

use hybridls::glsp::GraphEndpoint;
use hybridls::lsp::LspEndpoint;
use hybridls::shared::Shared;
use hybridls_core::syntax::LineIndex;
use hybridls_core::{Hub, LayoutConfig};
use serde_json::{json, Value};

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).unwrap()
}

pub fn corpus_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub type Log = Rc<RefCell<Vec<String>>>;

fn record(log: &Log, arrow: &str, who: &str, msg: &Value) {
    log.borrow_mut().push(format!("{who} {arrow} {}", serde_json::to_string(msg).unwrap()));
}

pub fn server() -> Arc<Shared> {
    Shared::new(Hub::new(LayoutConfig::default()))
}

pub struct TextClient {
    pub endpoint: LspEndpoint,
    rx: Receiver<Value>,
    log: Log,
    name: String,
    next_id: i64,
    /// The client's own copy of each open document.
    pub docs: std::collections::BTreeMap<String, (String, i64)>,
}

impl TextClient {
    pub fn new(shared: Arc<Shared>, log: Log) -> Self {
        let (endpoint, rx) = LspEndpoint::connect(shared);
        let name = endpoint.session().to_string();
        TextClient { endpoint, rx, log, name, next_id: 0, docs: Default::default() }
    }

    pub fn send(&mut self, msg: Value) {
        record(&self.log, ">>", &self.name, &msg);
        self.endpoint.handle(msg);
    }

    pub fn request(&mut self, method: &str, params: Value) -> Value {
        self.next_id += 1;
        self.send(json!({"jsonrpc": "2.0", "id": self.next_id, "method": method, "params": params}));
        let id = self.next_id;
        self.drain().into_iter().find(|m| m["id"] == json!(id)).expect("reply")
    }

    pub fn notify(&mut self, method: &str, params: Value) {
        self.send(json!({"jsonrpc": "2.0", "method": method, "params": params}));
    }

    /// Everything queued for this client, logged in arrival order. Server
    /// edit requests are applied to the local copy and acknowledged.
    pub fn drain(&mut self) -> Vec<Value> {
        let mut got = Vec::new();
        while let Ok(msg) = self.rx.try_recv() {
            record(&self.log, "<<", &self.name, &msg);
            got.push(msg);
        }
        for msg in &got {
            if msg["method"] == "workspace/applyEdit" {
                self.apply_workspace_edit(&msg["params"]["edit"]);
                let ack = json!({"jsonrpc": "2.0", "id": msg["id"].clone(), "result": {"applied": true}});
                self.send(ack);
            }
        }
        got
    }

    fn apply_workspace_edit(&mut self, edit: &Value) {
        for (uri, changes) in edit["changes"].as_object().unwrap() {
            let (text, version) = self.docs.get_mut(uri).expect("edit for an open document");
            // Apply back to front so earlier ranges stay valid.
            let mut changes: Vec<&Value> = changes.as_array().unwrap().iter().collect();
            changes.sort_by_key(|c| std::cmp::Reverse((c["range"]["start"]["line"].as_u64(), c["range"]["start"]["character"].as_u64())));
            for c in changes {
                let index = LineIndex::new(text);
                let pos = |p: &Value| index.utf16_offset(p["line"].as_u64().unwrap() as u32, p["character"].as_u64().unwrap() as u32);
                let (start, end) = (pos(&c["range"]["start"]), pos(&c["range"]["end"]));
                text.replace_range(start..end, c["newText"].as_str().unwrap());
            }
            *version += 1;
        }
    }

    pub fn initialize(&mut self) -> Value {
        let reply = self.request("initialize", json!({"processId": null, "rootUri": null, "capabilities": {}}));
        self.notify("initialized", json!({}));
        reply
    }

    pub fn open(&mut self, uri: &str, text: &str) {
        self.docs.insert(uri.to_owned(), (text.to_owned(), 1));
        self.notify("textDocument/didOpen", json!({"textDocument": {"uri": uri, "languageId": "rtlite", "version": 1, "text": text}}));
    }

    pub fn change(&mut self, uri: &str, text: &str) {
        let doc = self.docs.get_mut(uri).expect("open document");
        doc.0 = text.to_owned();
        doc.1 += 1;
        let version = doc.1;
        self.notify(
            "textDocument/didChange",
            json!({"textDocument": {"uri": uri, "version": version}, "contentChanges": [{"text": text}]}),
        );
    }

    pub fn text(&self, uri: &str) -> &str {
        &self.docs[uri].0
    }
}

pub struct GraphClient {
    pub endpoint: GraphEndpoint,
    rx: Receiver<Value>,
    log: Log,
    name: String,
    next_id: i64,
}

impl GraphClient {
    pub fn new(shared: Arc<Shared>, log: Log) -> Self {
        let (endpoint, rx) = GraphEndpoint::connect(shared);
        let name = endpoint.session().to_string();
        GraphClient { endpoint, rx, log, name, next_id: 0 }
    }

    pub fn request(&mut self, method: &str, params: Value) -> Value {
        self.next_id += 1;
        let msg = json!({"jsonrpc": "2.0", "id": self.next_id, "method": method, "params": params});
        record(&self.log, ">>", &self.name, &msg);
        self.endpoint.handle(msg);
        let id = self.next_id;
        self.drain().into_iter().find(|m| m["id"] == json!(id)).expect("reply")
    }

    pub fn drain(&mut self) -> Vec<Value> {
        let mut got = Vec::new();
        while let Ok(msg) = self.rx.try_recv() {
            record(&self.log, "<<", &self.name, &msg);
            got.push(msg);
        }
        got
    }
}

/// Canonical text of ping_pong with a composite `Paused` state added to the
/// controller's machine.
pub fn ping_pong_with_paused() -> String {
    corpus("ping_pong.rt").replace(
        "    state Waiting;\n",
        "    state Waiting;\n    state Paused {\n      initial -> Held;\n      state Held;\n    }\n",
    )
}

pub const PING_PONG_URI: &str = "file:///corpus/ping_pong.rt";

/// The scripted dual-client session. Returns the message log and the
/// client-observed milestones.
pub fn golden_session() -> (Vec<String>, Milestones) {
    let shared = server();
    let log: Log = Rc::new(RefCell::new(Vec::new()));
    let mut text = TextClient::new(shared.clone(), log.clone());
    let mut graph = GraphClient::new(shared, log.clone());
    let uri = PING_PONG_URI;
    let mut m = Milestones::default();

    text.initialize();
    text.open(uri, &corpus("ping_pong.rt"));
    text.drain();
    let model = graph.request("graph/requestModel", json!({"uri": uri, "viewId": "behavior:PingPong.Controller"}));
    m.initial_nodes = model["result"]["elements"].as_array().map_or(0, Vec::len);

    text.change(uri, &ping_pong_with_paused());
    text.drain();
    let updates = graph.drain();
    m.model_updated = updates.iter().any(|u| {
        u["method"] == "graph/modelUpdated"
            && u["params"]["graph"]["elements"].as_array().unwrap().iter().any(|e| e["id"] == "state:PingPong.Controller.sm.Paused")
    });

    let reply = graph.request(
        "graph/operation",
        json!({
            "uri": uri,
            "viewId": "behavior:PingPong.Controller",
            "expectedRevision": 2,
            "operation": {
                "kind": "AddTransition",
                "container": "sm:PingPong.Controller.sm",
                "source": "state:PingPong.Controller.sm.Idle",
                "target": "state:PingPong.Controller.sm.Paused"
            }
        }),
    );
    m.operation_accepted = reply["result"]["accepted"] == json!(true);
    let pushed = text.drain();
    m.apply_edit = pushed.iter().any(|p| p["method"] == "workspace/applyEdit");
    m.text_after_edit = text.text(uri).to_owned();
    graph.drain();

    let drilled = graph.request("graph/switchView", json!({"uri": uri, "clickedElementId": "state:PingPong.Controller.sm.Paused"}));
    m.drilled_view = drilled["result"]["viewId"].as_str().unwrap_or_default().to_owned();

    let without = text.text(uri).replace("    state Paused {\n      initial -> Held;\n      state Held;\n    }\n", "").replace("    Idle -> Paused;\n", "");
    text.change(uri, &without);
    text.drain();
    let stale = graph.drain();
    m.view_stale = stale.iter().any(|s| s["method"] == "graph/viewStale" && s["params"]["viewId"] == "behavior:PingPong.Controller/Paused");

    graph.endpoint.disconnect();
    text.endpoint.disconnect();
    let lines = log.borrow().clone();
    (lines, m)
}

#[derive(Debug, Default)]
pub struct Milestones {
    pub initial_nodes: usize,
    pub model_updated: bool,
    pub operation_accepted: bool,
    pub apply_edit: bool,
    pub text_after_edit: String,
    pub drilled_view: String,
    pub view_stale: bool,
}

pub fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ping_pong_session.jsonl")
}

/// Compares against the checked-in log, rewriting it when UPDATE_GOLDEN is
/// set. Returns the first differing line on mismatch.
pub fn check_golden(lines: &[String]) -> Result<(), String> {
    let actual = lines.join("\n") + "\n";
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let diff = expected.lines().zip(actual.lines()).position(|(a, b)| a != b).unwrap_or(expected.lines().count().min(actual.lines().count()));
    Err(format!("transcript differs from {} at line {}", path.display(), diff + 1))
}
