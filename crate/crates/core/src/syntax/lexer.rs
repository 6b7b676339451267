use crate::diagnostic::{Code, Diagnostic};
use crate::span::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Model,
    Protocol,
    Capsule,
    Port,
    Part,
    Connect,
    To,
    Statemachine,
    State,
    Initial,
    In,
    Out,
    Msg,
    On,
}

impl Keyword {
    fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "model" => Keyword::Model,
            "protocol" => Keyword::Protocol,
            "capsule" => Keyword::Capsule,
            "port" => Keyword::Port,
            "part" => Keyword::Part,
            "connect" => Keyword::Connect,
            "to" => Keyword::To,
            "statemachine" => Keyword::Statemachine,
            "state" => Keyword::State,
            "initial" => Keyword::Initial,
            "in" => Keyword::In,
            "out" => Keyword::Out,
            "msg" => Keyword::Msg,
            "on" => Keyword::On,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Dot,
    Arrow,
    Tilde,
    LBracket,
    RBracket,
    Slash,
    /// Uninterpreted text after `[` or `/`.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

impl Token {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.span.start..self.span.end]
    }
}

/// Splits `text` into tokens, dropping whitespace and `//` comments.
///
/// `[` switches to raw capture up to `]` or end of line, `/` (not followed
/// by another `/`) up to `;` or end of line. Illegal characters are reported
/// as `E001` and skipped.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut i = 0;
    let push = |tokens: &mut Vec<Token>, kind, start, end| tokens.push(Token { kind, span: SourceSpan::new(start, end) });

    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' => {
                push(&mut tokens, TokenKind::Slash, i, i + 1);
                i += 1;
                let end = raw_end(bytes, i, b';');
                push(&mut tokens, TokenKind::Raw, i, end);
                i = end;
            }
            b'[' => {
                push(&mut tokens, TokenKind::LBracket, i, i + 1);
                i += 1;
                let end = raw_end(bytes, i, b']');
                push(&mut tokens, TokenKind::Raw, i, end);
                i = end;
                if bytes.get(i) == Some(&b']') {
                    push(&mut tokens, TokenKind::RBracket, i, i + 1);
                    i += 1;
                }
            }
            b'{' | b'}' | b';' | b':' | b'.' | b'~' | b']' => {
                let kind = match b {
                    b'{' => TokenKind::LBrace,
                    b'}' => TokenKind::RBrace,
                    b';' => TokenKind::Semi,
                    b':' => TokenKind::Colon,
                    b'.' => TokenKind::Dot,
                    b'~' => TokenKind::Tilde,
                    _ => TokenKind::RBracket,
                };
                push(&mut tokens, kind, i, i + 1);
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                push(&mut tokens, TokenKind::Arrow, i, i + 2);
                i += 2;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let kind = match Keyword::from_str(&text[start..i]) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident,
                };
                push(&mut tokens, kind, start, i);
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                let end = i + ch.len_utf8();
                diags.push(Diagnostic::error(Code::E001, SourceSpan::new(i, end), format!("illegal character {ch:?}")));
                i = end;
            }
        }
    }
    (tokens, diags)
}

fn raw_end(bytes: &[u8], from: usize, stop: u8) -> usize {
    let mut i = from;
    while i < bytes.len() && bytes[i] != stop && bytes[i] != b'\n' && bytes[i] != b'\r' {
        i += 1;
    }
    i
}
