use crate::diagnostic::Code;
use crate::id::{ElementId, ElementKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no element with id {0}")]
    TargetMissing(ElementId),
    #[error("{container} cannot contain a {child:?}")]
    InvalidContainer { container: ElementId, child: ElementKind },
    #[error("operation not applicable to {0}")]
    NotApplicable(ElementId),
    #[error("{code}: {message}")]
    Rejected { code: Code, message: String },
    #[error("span table is out of date for this document")]
    StaleSpan,
    #[error("unknown view {0}")]
    UnknownView(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn rejected(code: Code, message: impl Into<String>) -> Self {
        Error::Rejected { code, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
