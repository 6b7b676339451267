//! JSON shapes shared by both endpoints.

use hybridls_core::syntax::LineIndex;
use hybridls_core::{Diagnostic, Severity, SourceSpan};
use serde_json::{json, Value};

pub fn position(index: &LineIndex, offset: usize) -> Value {
    let (line, character) = index.utf16_position(offset);
    json!({"line": line, "character": character})
}

pub fn range(index: &LineIndex, span: SourceSpan) -> Value {
    json!({"start": position(index, span.start), "end": position(index, span.end)})
}

pub fn diagnostic(index: &LineIndex, d: &Diagnostic) -> Value {
    json!({
        "range": range(index, d.span),
        "severity": match d.severity {
            Severity::Error => 1,
            Severity::Warning => 2,
        },
        "code": d.code.as_str(),
        "source": "hybridls",
        "message": d.message,
    })
}

pub fn diagnostics(text: &str, diags: &[Diagnostic]) -> Value {
    let index = LineIndex::new(text);
    Value::Array(diags.iter().map(|d| diagnostic(&index, d)).collect())
}
