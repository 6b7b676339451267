//! JSON-RPC 2.0 messages and `Content-Length` framing.

use std::io::{self, BufRead, Write};

use serde_json::{json, Value};

pub const PARSE_ERROR: i64 = -32700;
pub const INVALID_REQUEST: i64 = -32600;
pub const METHOD_NOT_FOUND: i64 = -32601;
pub const INVALID_PARAMS: i64 = -32602;
pub const INTERNAL_ERROR: i64 = -32603;
pub const SERVER_NOT_INITIALIZED: i64 = -32002;

#[derive(Debug, thiserror::Error)]
pub enum FramingError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("malformed header line {0:?}")]
    BadHeader(String),
    #[error("header block without Content-Length")]
    MissingLength,
    #[error("stream ended inside a header block")]
    Truncated,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Incoming {
    Request { id: Value, method: String, params: Value },
    Notification { method: String, params: Value },
    Response { id: Value, result: Option<Value>, error: Option<Value> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RpcError {
    pub code: i64,
    pub message: String,
    pub data: Option<Value>,
}

impl RpcError {
    pub fn new(code: i64, message: impl Into<String>) -> Self {
        RpcError { code, message: message.into(), data: None }
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn invalid_params(message: impl Into<String>) -> Self {
        RpcError::new(INVALID_PARAMS, message)
    }
}

/// Sorts a decoded body into request, notification or response.
pub fn classify(v: Value) -> Result<Incoming, RpcError> {
    let Value::Object(mut obj) = v else {
        return Err(RpcError::new(INVALID_REQUEST, "message is not an object"));
    };
    let id = obj.remove("id");
    let params = obj.remove("params").unwrap_or(Value::Null);
    match (obj.remove("method"), id) {
        (Some(Value::String(method)), Some(id)) => Ok(Incoming::Request { id, method, params }),
        (Some(Value::String(method)), None) => Ok(Incoming::Notification { method, params }),
        (None, Some(id)) => Ok(Incoming::Response { id, result: obj.remove("result"), error: obj.remove("error") }),
        _ => Err(RpcError::new(INVALID_REQUEST, "neither a request nor a response")),
    }
}

pub fn request(id: Value, method: &str, params: Value) -> Value {
    json!({"jsonrpc": "2.0", "id": id, "method": method, "params": params})
}

pub fn notification(method: &str, params: Value) -> Value {
    json!({"jsonrpc": "2.0", "method": method, "params": params})
}

pub fn response(id: Value, result: Value) -> Value {
    json!({"jsonrpc": "2.0", "id": id, "result": result})
}

pub fn error_response(id: Value, err: &RpcError) -> Value {
    let mut error = json!({"code": err.code, "message": err.message});
    if let Some(data) = &err.data {
        error["data"] = data.clone();
    }
    json!({"jsonrpc": "2.0", "id": id, "error": error})
}

/// Reads one framed body. `Ok(None)` on a clean end of stream between
/// messages.
pub fn read_frame<R: BufRead>(r: &mut R) -> Result<Option<Vec<u8>>, FramingError> {
    let mut length = None;
    let mut line = String::new();
    let mut first = true;
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            return if first { Ok(None) } else { Err(FramingError::Truncated) };
        }
        first = false;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() {
            break;
        }
        let (name, value) = trimmed.split_once(':').ok_or_else(|| FramingError::BadHeader(trimmed.to_owned()))?;
        if name.trim().eq_ignore_ascii_case("content-length") {
            let n = value.trim().parse::<usize>().map_err(|_| FramingError::BadHeader(trimmed.to_owned()))?;
            length = Some(n);
        }
    }
    let n = length.ok_or(FramingError::MissingLength)?;
    let mut body = vec![0; n];
    r.read_exact(&mut body)?;
    Ok(Some(body))
}

pub fn write_message<W: Write>(w: &mut W, message: &Value) -> io::Result<()> {
    let body = serde_json::to_string(message).expect("json values serialize");
    write!(w, "Content-Length: {}\r\n\r\n{}", body.len(), body)?;
    w.flush()
}
