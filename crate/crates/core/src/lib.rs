//! Core of the RT-lite hybrid language server.
//!
//! One shared [`model::Model`] sits behind two concrete syntaxes: the text
//! grammar in [`syntax`] and the graph projections in [`view`]. Graphical
//! edits are [`mutation::Mutation`]s applied to the model and spliced back
//! into the text through the span table; textual edits are reparsed and
//! re-rendered. [`hub::Hub`] owns per-document state and orders both kinds
//! of change.

pub mod diagnostic;
pub mod error;
pub mod hub;
pub mod id;
pub mod layout;
pub mod model;
pub mod mutation;
pub mod query;
pub mod resolve;
pub mod span;
pub mod syntax;
pub mod validate;
pub mod view;

pub use diagnostic::{Code, Diagnostic, Severity};
pub use error::Error;
pub use hub::{EndpointKind, Hub, HubError, Notification, SessionId, Snapshot, SyncOutcome};
pub use id::{ElementId, ElementKind};
pub use layout::{layout, LayoutConfig};
pub use model::Model;
pub use mutation::{apply_mutation, Mutation, MutationKind};
pub use span::SourceSpan;
pub use syntax::{format, parse, serialize, serialize_subtree, ParseResult, SpanTable, TextEdit};
pub use validate::validate;
pub use view::{list_views, reach_tree, render, GGraph, ViewCategory, ViewId};
