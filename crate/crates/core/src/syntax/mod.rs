//! Text ⇄ model: tokenizer, recovering parser, canonical serializer and
//! span-based splicing of graphically originated edits.

mod lexer;
mod lines;
mod parser;
mod serialize;
mod splice;
mod spans;

pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use lines::LineIndex;
pub use parser::{parse, ParseResult};
pub use serialize::{format, serialize, serialize_subtree};
pub use splice::{edit_for_mutation, insertion_point, splice, EditTarget, TextEdit};
pub use spans::{DeclSpans, SpanTable};
