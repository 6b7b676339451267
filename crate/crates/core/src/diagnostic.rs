use std::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;
use crate::span::SourceSpan;

/// Published diagnostic codes. `E0xx` are syntax errors, `E1xx` semantic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Code {
    E001,
    E010,
    E101,
    E102,
    E103,
    E104,
    E105,
    E106,
    E107,
}

impl Code {
    pub const ALL: [Code; 9] = [
        Code::E001,
        Code::E010,
        Code::E101,
        Code::E102,
        Code::E103,
        Code::E104,
        Code::E105,
        Code::E106,
        Code::E107,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::E001 => "E001",
            Code::E010 => "E010",
            Code::E101 => "E101",
            Code::E102 => "E102",
            Code::E103 => "E103",
            Code::E104 => "E104",
            Code::E105 => "E105",
            Code::E106 => "E106",
            Code::E107 => "E107",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Code::E001 => "illegal character",
            Code::E010 => "syntax error",
            Code::E101 => "duplicate name",
            Code::E102 => "unresolved reference",
            Code::E103 => "connector protocol/conjugation mismatch",
            Code::E104 => "multiple initial",
            Code::E105 => "transition endpoints not sibling states",
            Code::E106 => "recursive part instantiation",
            Code::E107 => "delete of referenced element",
        }
    }

    pub fn is_syntax(self) -> bool {
        matches!(self, Code::E001 | Code::E010)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    /// Element the diagnostic is attached to, when it came from validation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub element: Option<ElementId>,
}

impl Diagnostic {
    pub fn error(code: Code, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic { code, severity: Severity::Error, span, message: message.into(), element: None }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.code, self.message)
    }
}
