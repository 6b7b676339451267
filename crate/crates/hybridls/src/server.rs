//! Transports: framed LSP over stdio or TCP, and one HTTP port carrying
//! WebSocket channels for both protocols plus optional static files.
//!
//! WebSocket routes: `/lsp` speaks the textual protocol (one JSON-RPC body
//! per text frame), anything else the graphical one. Plain GET requests are
//! answered from the client directory when one is configured.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Component, Path, PathBuf};
use std::sync::mpsc::Receiver;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use log::{debug, info, warn};
use serde_json::Value;
use tungstenite::handshake::derive_accept_key;
use tungstenite::protocol::Role;
use tungstenite::{Message, WebSocket};

use crate::glsp::GraphEndpoint;
use crate::jsonrpc::{read_frame, write_message};
use crate::lsp::{Control, LspEndpoint};
use crate::shared::Shared;

const POLL: Duration = Duration::from_millis(15);

/// Serves one framed LSP connection until `exit` or end of input.
pub fn serve_lsp_stream<R, W>(shared: Arc<Shared>, input: R, output: W)
where
    R: Read,
    W: Write + Send + 'static,
{
    let (mut endpoint, rx) = LspEndpoint::connect(shared);
    let writer = thread::spawn(move || pump_framed(rx, output));
    let mut input = BufReader::new(input);
    loop {
        match read_frame(&mut input) {
            Ok(Some(body)) => match serde_json::from_slice::<Value>(&body) {
                Ok(msg) => {
                    if endpoint.handle(msg) == Control::Exit {
                        break;
                    }
                }
                Err(e) => endpoint.reject_body(&e),
            },
            Ok(None) => break,
            Err(e) => {
                warn!("dropping textual connection: {e}");
                break;
            }
        }
    }
    // Closing the session drops the outbox sender, which ends the writer.
    endpoint.disconnect();
    drop(endpoint);
    let _ = writer.join();
}

fn pump_framed<W: Write>(rx: Receiver<Value>, mut out: W) {
    for msg in rx {
        if let Err(e) = write_message(&mut out, &msg) {
            debug!("textual client went away: {e}");
            break;
        }
    }
}

pub fn serve_lsp_tcp(shared: Arc<Shared>, listener: TcpListener) {
    for stream in listener.incoming() {
        match stream {
            Ok(stream) => {
                let shared = shared.clone();
                thread::spawn(move || {
                    let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
                    info!("textual connection from {peer}");
                    match stream.try_clone() {
                        Ok(out) => serve_lsp_stream(shared, stream, out),
                        Err(e) => warn!("{peer}: {e}"),
                    }
                });
            }
            Err(e) => warn!("accept failed: {e}"),
        }
    }
}

pub fn serve_http(shared: Arc<Shared>, listener: TcpListener, client_dir: Option<PathBuf>) {
    let client_dir = client_dir.map(Arc::new);
    for stream in listener.incoming() {
        match stream {
            Ok(stream) => {
                let shared = shared.clone();
                let dir = client_dir.clone();
                thread::spawn(move || {
                    if let Err(e) = handle_http(shared, stream, dir.as_deref().map(PathBuf::as_path)) {
                        debug!("http connection ended: {e}");
                    }
                });
            }
            Err(e) => warn!("accept failed: {e}"),
        }
    }
}

struct RequestHead {
    method: String,
    path: String,
    headers: Vec<(String, String)>,
}

impl RequestHead {
    fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }
}

fn read_head(reader: &mut BufReader<TcpStream>) -> io::Result<RequestHead> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_owned());
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let mut parts = line.split_whitespace();
    let (method, path) = match (parts.next(), parts.next()) {
        (Some(m), Some(p)) => (m.to_owned(), p.to_owned()),
        _ => return Err(bad("malformed request line")),
    };
    let mut headers = Vec::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(bad("truncated request head"));
        }
        let l = line.trim_end();
        if l.is_empty() {
            break;
        }
        if let Some((k, v)) = l.split_once(':') {
            headers.push((k.trim().to_owned(), v.trim().to_owned()));
        }
    }
    Ok(RequestHead { method, path, headers })
}

fn handle_http(shared: Arc<Shared>, stream: TcpStream, client_dir: Option<&Path>) -> io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let head = read_head(&mut reader)?;
    let mut stream = stream;
    let upgrade = head.header("upgrade").is_some_and(|v| v.eq_ignore_ascii_case("websocket"));
    if !upgrade {
        return serve_static(&mut stream, &head, client_dir);
    }
    let key = head.header("sec-websocket-key").ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "no websocket key"))?;
    write!(
        stream,
        "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Accept: {}\r\n\r\n",
        derive_accept_key(key.as_bytes())
    )?;
    stream.flush()?;
    let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
    info!("websocket {} from {peer}", head.path);
    stream.set_read_timeout(Some(POLL))?;
    let ws = WebSocket::from_raw_socket(stream, Role::Server, None);
    if head.path == "/lsp" {
        let (mut endpoint, rx) = LspEndpoint::connect(shared);
        ws_loop(ws, rx, |msg| match msg {
            Ok(msg) => endpoint.handle(msg) == Control::Continue,
            Err(e) => {
                endpoint.reject_body(&e);
                true
            }
        });
        endpoint.disconnect();
    } else {
        let (mut endpoint, rx) = GraphEndpoint::connect(shared);
        ws_loop(ws, rx, |msg| {
            match msg {
                Ok(msg) => endpoint.handle(msg),
                Err(e) => endpoint.reject_body(&e),
            }
            true
        });
        endpoint.disconnect();
    }
    Ok(())
}

/// Alternates between draining the outbox and polling the socket; the
/// socket has a short read timeout so neither side starves. `handle`
/// returns false to end the connection.
fn ws_loop(mut ws: WebSocket<TcpStream>, rx: Receiver<Value>, mut handle: impl FnMut(serde_json::Result<Value>) -> bool) {
    loop {
        while let Ok(msg) = rx.try_recv() {
            let text = serde_json::to_string(&msg).expect("json values serialize");
            if ws.send(Message::text(text)).is_err() {
                return;
            }
        }
        match ws.read() {
            Ok(Message::Text(text)) => {
                if !handle(serde_json::from_str::<Value>(&text)) {
                    let _ = ws.close(None);
                    return;
                }
            }
            Ok(Message::Close(_)) => return,
            Ok(_) => {}
            Err(tungstenite::Error::Io(e)) if matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut) => {}
            Err(_) => return,
        }
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

fn respond(stream: &mut TcpStream, status: &str, kind: &str, body: &[u8]) -> io::Result<()> {
    write!(stream, "HTTP/1.1 {status}\r\nContent-Type: {kind}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n", body.len())?;
    stream.write_all(body)?;
    stream.flush()
}

/// Resolves a request path inside `root`, refusing anything that climbs out.
fn static_path(root: &Path, request: &str) -> Option<PathBuf> {
    let path = request.split(['?', '#']).next().unwrap_or("/");
    let rel = Path::new(path.trim_start_matches('/'));
    if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
        return None;
    }
    let full = root.join(rel);
    Some(if full.is_dir() { full.join("index.html") } else { full })
}

fn serve_static(stream: &mut TcpStream, head: &RequestHead, client_dir: Option<&Path>) -> io::Result<()> {
    if head.method != "GET" {
        return respond(stream, "405 Method Not Allowed", "text/plain", b"method not allowed\n");
    }
    let found = client_dir.and_then(|root| static_path(root, &head.path)).and_then(|p| std::fs::read(&p).ok().map(|b| (p, b)));
    match found {
        Some((path, body)) => respond(stream, "200 OK", content_type(&path), &body),
        None => respond(stream, "404 Not Found", "text/plain", b"not found\n"),
    }
}
