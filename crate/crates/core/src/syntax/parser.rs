//! Recursive-descent parser for the RT-lite grammar.
//!
//! Errors are reported as `E010` and the parser skips to the next `;`
//! (consumed) or `}` (left for the enclosing block), so one bad line does
//! not hide diagnostics further down. Any syntax diagnostic means no model.

use std::collections::{BTreeMap, HashMap};

use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::spans::{DeclSpans, SpanTable};
use crate::diagnostic::{Code, Diagnostic};
use crate::model::*;
use crate::query::{elements, Loc};
use crate::resolve::RefSlot;
use crate::span::SourceSpan;

#[derive(Clone, Debug)]
pub struct ParseResult {
    pub model: Option<Model>,
    pub spans: Option<SpanTable>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn is_ok(&self) -> bool {
        self.model.is_some()
    }
}

pub fn parse(text: &str) -> ParseResult {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut p = Parser { src: text, tokens, pos: 0, diags: Vec::new(), spans: Vec::new(), eof_reported: false };
    let model = p.model();
    diagnostics.append(&mut p.diags);
    diagnostics.sort_by_key(|d| d.span.start);

    match model {
        Some(model) if diagnostics.is_empty() => {
            let ids: HashMap<Loc, _> = elements(&model).into_iter().map(|e| (e.loc, e.id)).collect();
            let entries: BTreeMap<_, _> = p
                .spans
                .into_iter()
                .map(|(loc, decl)| (ids.get(&loc).expect("every parsed element has an id").clone(), decl))
                .collect();
            ParseResult { spans: Some(SpanTable::new(entries, text)), model: Some(model), diagnostics }
        }
        _ => ParseResult { model: None, spans: None, diagnostics },
    }
}

/// Marker for an error that has already been reported.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    spans: Vec<(Loc, DeclSpans)>,
    eof_reported: bool,
}

fn describe(kind: TokenKind) -> &'static str {
    match kind {
        TokenKind::Keyword(_) => "keyword",
        TokenKind::Ident => "identifier",
        TokenKind::LBrace => "'{'",
        TokenKind::RBrace => "'}'",
        TokenKind::Semi => "';'",
        TokenKind::Colon => "':'",
        TokenKind::Dot => "'.'",
        TokenKind::Arrow => "'->'",
        TokenKind::Tilde => "'~'",
        TokenKind::LBracket => "'['",
        TokenKind::RBracket => "']'",
        TokenKind::Slash => "'/'",
        TokenKind::Raw => "text",
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<TokenKind> {
        self.tokens.get(self.pos).map(|t| t.kind)
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: TokenKind) -> Option<Token> {
        self.at(kind).then(|| self.bump())
    }

    fn text(&self, t: Token) -> String {
        t.text(self.src).to_owned()
    }

    fn error(&mut self, expected: &str) -> Reported {
        match self.tokens.get(self.pos) {
            Some(t) => {
                let found = match t.kind {
                    TokenKind::Keyword(_) | TokenKind::Ident => format!("'{}'", t.text(self.src)),
                    k => describe(k).to_owned(),
                };
                self.diags.push(Diagnostic::error(Code::E010, t.span, format!("expected {expected}, found {found}")));
            }
            None if !self.eof_reported => {
                self.eof_reported = true;
                let end = self.src.len();
                self.diags.push(Diagnostic::error(
                    Code::E010,
                    SourceSpan::new(end, end),
                    format!("unexpected end of input, expected {expected}"),
                ));
            }
            None => {}
        }
        Reported
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        self.eat(kind).ok_or_else(|| self.error(expected))
    }

    fn ident(&mut self) -> PResult<Token> {
        self.expect(TokenKind::Ident, "identifier")
    }

    /// Skip to just past the next `;` or to the next `}`.
    fn recover(&mut self) {
        while let Some(kind) = self.peek() {
            match kind {
                TokenKind::Semi => {
                    self.bump();
                    return;
                }
                TokenKind::RBrace => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn record(&mut self, loc: Loc, start: Token, end: Token, name: Option<Token>, refs: Vec<(RefSlot, SourceSpan)>) {
        let full = SourceSpan::new(start.span.start, end.span.end);
        self.spans.push((loc, DeclSpans { full, name: name.map(|t| t.span), refs }));
    }

    fn model(&mut self) -> Option<Model> {
        let start = self.expect(TokenKind::Keyword(Keyword::Model), "'model'").ok()?;
        let name = self.ident().ok()?;
        self.expect(TokenKind::LBrace, "'{'").ok()?;
        let mut model = Model::new(self.text(name));
        let end = loop {
            match self.peek() {
                None => {
                    self.error("'}'");
                    return None;
                }
                Some(TokenKind::RBrace) => break self.bump(),
                Some(TokenKind::Keyword(Keyword::Protocol)) => {
                    if self.protocol(&mut model).is_err() {
                        self.recover();
                    }
                }
                Some(TokenKind::Keyword(Keyword::Capsule)) => {
                    if self.capsule(&mut model).is_err() {
                        self.recover();
                    }
                }
                Some(_) => {
                    self.error("'protocol', 'capsule' or '}'");
                    self.recover();
                }
            }
        };
        if self.peek().is_some() {
            self.error("end of input");
        }
        self.record(Loc::Model, start, end, Some(name), Vec::new());
        Some(model)
    }

    fn protocol(&mut self, model: &mut Model) -> PResult<()> {
        let pi = model.protocols.len();
        let start = self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::LBrace, "'{'")?;
        let mut protocol = ProtocolDecl { name: self.text(name), messages: Vec::new() };
        let end = loop {
            match self.peek() {
                None => return Err(self.error("'}'")),
                Some(TokenKind::RBrace) => break self.bump(),
                Some(TokenKind::Keyword(Keyword::In | Keyword::Out)) => {
                    if self.message(&mut protocol, pi).is_err() {
                        self.recover();
                    }
                }
                Some(_) => {
                    self.error("'in', 'out' or '}'");
                    self.recover();
                }
            }
        };
        self.record(Loc::Protocol(pi), start, end, Some(name), Vec::new());
        model.protocols.push(protocol);
        Ok(())
    }

    fn message(&mut self, protocol: &mut ProtocolDecl, pi: usize) -> PResult<()> {
        let start = self.bump();
        let direction = if start.kind == TokenKind::Keyword(Keyword::In) { Direction::In } else { Direction::Out };
        self.expect(TokenKind::Keyword(Keyword::Msg), "'msg'")?;
        let name = self.ident()?;
        let end = self.expect(TokenKind::Semi, "';'")?;
        self.record(Loc::Message(pi, protocol.messages.len()), start, end, Some(name), Vec::new());
        protocol.messages.push(MessageDecl { name: self.text(name), direction });
        Ok(())
    }

    fn capsule(&mut self, model: &mut Model) -> PResult<()> {
        let ci = model.capsules.len();
        let start = self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::LBrace, "'{'")?;
        let mut capsule = CapsuleDecl::new(self.text(name));
        let end = loop {
            let item = match self.peek() {
                None => return Err(self.error("'}'")),
                Some(TokenKind::RBrace) => break self.bump(),
                Some(TokenKind::Keyword(Keyword::Port)) => self.port(&mut capsule, ci),
                Some(TokenKind::Keyword(Keyword::Part)) => self.part(&mut capsule, ci),
                Some(TokenKind::Keyword(Keyword::Connect)) => self.connector(&mut capsule, ci),
                Some(TokenKind::Keyword(Keyword::Statemachine)) => self.state_machine(&mut capsule, ci),
                Some(_) => {
                    Err(self.error("'port', 'part', 'connect', 'statemachine' or '}'"))
                }
            };
            if item.is_err() {
                self.recover();
            }
        };
        self.record(Loc::Capsule(ci), start, end, Some(name), Vec::new());
        model.capsules.push(capsule);
        Ok(())
    }

    fn port(&mut self, capsule: &mut CapsuleDecl, ci: usize) -> PResult<()> {
        let start = self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon, "':'")?;
        let conjugated = self.eat(TokenKind::Tilde).is_some();
        let protocol = self.ident()?;
        let end = self.expect(TokenKind::Semi, "';'")?;
        let refs = vec![(RefSlot::PortProtocol, protocol.span)];
        self.record(Loc::Port(ci, capsule.ports.len()), start, end, Some(name), refs);
        capsule.ports.push(PortDecl { name: self.text(name), protocol: self.text(protocol), conjugated });
        Ok(())
    }

    fn part(&mut self, capsule: &mut CapsuleDecl, ci: usize) -> PResult<()> {
        let start = self.bump();
        let name = self.ident()?;
        self.expect(TokenKind::Colon, "':'")?;
        let ty = self.ident()?;
        let end = self.expect(TokenKind::Semi, "';'")?;
        self.record(Loc::Part(ci, capsule.parts.len()), start, end, Some(name), vec![(RefSlot::PartCapsule, ty.span)]);
        capsule.parts.push(PartDecl { name: self.text(name), capsule: self.text(ty) });
        Ok(())
    }

    fn port_ref(&mut self, part_slot: RefSlot, port_slot: RefSlot, refs: &mut Vec<(RefSlot, SourceSpan)>) -> PResult<PortRef> {
        let first = self.ident()?;
        if self.eat(TokenKind::Dot).is_some() {
            let port = self.ident()?;
            refs.push((part_slot, first.span));
            refs.push((port_slot, port.span));
            Ok(PortRef::on_part(self.text(first), self.text(port)))
        } else {
            refs.push((port_slot, first.span));
            Ok(PortRef::own(self.text(first)))
        }
    }

    fn connector(&mut self, capsule: &mut CapsuleDecl, ci: usize) -> PResult<()> {
        let start = self.bump();
        let mut refs = Vec::new();
        let end_a = self.port_ref(RefSlot::ConnectorPartA, RefSlot::ConnectorPortA, &mut refs)?;
        self.expect(TokenKind::Keyword(Keyword::To), "'to'")?;
        let end_b = self.port_ref(RefSlot::ConnectorPartB, RefSlot::ConnectorPortB, &mut refs)?;
        let end = self.expect(TokenKind::Semi, "';'")?;
        self.record(Loc::Connector(ci, capsule.connectors.len()), start, end, None, refs);
        capsule.connectors.push(ConnectorDecl { end_a, end_b });
        Ok(())
    }

    fn state_machine(&mut self, capsule: &mut CapsuleDecl, ci: usize) -> PResult<()> {
        let duplicate = capsule.machine.is_some();
        if duplicate {
            let span = self.tokens[self.pos].span;
            self.diags.push(Diagnostic::error(Code::E010, span, "capsule already declares a state machine"));
        }
        let mark = self.spans.len();
        let start = self.bump();
        self.expect(TokenKind::LBrace, "'{'")?;
        let (region, end) = self.region(ci, &mut Vec::new())?;
        if duplicate {
            self.spans.truncate(mark);
        } else {
            self.record(Loc::Machine(ci), start, end, None, Vec::new());
            capsule.machine = Some(StateMachine { region });
        }
        Ok(())
    }

    /// Items up to and including the closing `}` of a region.
    fn region(&mut self, ci: usize, chain: &mut Vec<usize>) -> PResult<(Region, Token)> {
        let mut region = Region::default();
        let end = loop {
            let item = match self.peek() {
                None => return Err(self.error("'}'")),
                Some(TokenKind::RBrace) => break self.bump(),
                Some(TokenKind::Keyword(Keyword::State)) => self.state(&mut region, ci, chain),
                Some(TokenKind::Keyword(Keyword::Initial)) => self.initial(&mut region, ci, chain),
                Some(TokenKind::Ident) => self.transition(&mut region, ci, chain),
                Some(_) => {
                    Err(self.error("'state', 'initial', a transition or '}'"))
                }
            };
            if item.is_err() {
                self.recover();
            }
        };
        Ok((region, end))
    }

    fn state(&mut self, region: &mut Region, ci: usize, chain: &mut Vec<usize>) -> PResult<()> {
        let start = self.bump();
        let name = self.ident()?;
        chain.push(region.states.len());
        let result = if let Some(end) = self.eat(TokenKind::Semi) {
            Ok((None, end))
        } else if self.eat(TokenKind::LBrace).is_some() {
            self.region(ci, chain).map(|(inner, end)| (Some(inner), end))
        } else {
            Err(self.error("';' or '{'"))
        };
        let loc = Loc::State(ci, chain.clone());
        chain.pop();
        let (inner, end) = result?;
        self.record(loc, start, end, Some(name), Vec::new());
        region.states.push(StateNode { name: self.text(name), region: inner });
        Ok(())
    }

    fn initial(&mut self, region: &mut Region, ci: usize, chain: &[usize]) -> PResult<()> {
        let start = self.bump();
        self.expect(TokenKind::Arrow, "'->'")?;
        let target = self.ident()?;
        let end = self.expect(TokenKind::Semi, "';'")?;
        let loc = Loc::Initial(ci, chain.to_vec(), region.initials.len());
        self.record(loc, start, end, None, vec![(RefSlot::InitialTarget, target.span)]);
        region.initials.push(InitialDecl { target: self.text(target) });
        Ok(())
    }

    fn transition(&mut self, region: &mut Region, ci: usize, chain: &[usize]) -> PResult<()> {
        let source = self.bump();
        self.expect(TokenKind::Arrow, "'->'")?;
        let target = self.ident()?;
        let mut refs = vec![(RefSlot::TransitionSource, source.span), (RefSlot::TransitionTarget, target.span)];
        let mut tr = TransitionDecl::new(self.text(source), self.text(target));
        if self.eat(TokenKind::Keyword(Keyword::On)).is_some() {
            let port = self.ident()?;
            self.expect(TokenKind::Dot, "'.'")?;
            let message = self.ident()?;
            refs.push((RefSlot::TriggerPort, port.span));
            refs.push((RefSlot::TriggerMessage, message.span));
            tr.trigger = Some(Trigger { port: self.text(port), message: self.text(message) });
        }
        if self.eat(TokenKind::LBracket).is_some() {
            let raw = self.expect(TokenKind::Raw, "guard text")?;
            self.expect(TokenKind::RBracket, "']'")?;
            tr.guard = Some(GuardText::new(raw.text(self.src)).expect("lexer stops guards at ']' and newlines"));
        }
        if self.eat(TokenKind::Slash).is_some() {
            let raw = self.expect(TokenKind::Raw, "action text")?;
            tr.action = Some(ActionText::new(raw.text(self.src)).expect("lexer stops actions at ';' and newlines"));
        }
        let end = self.expect(TokenKind::Semi, "';'")?;
        let loc = Loc::Transition(ci, chain.to_vec(), region.transitions.len());
        self.record(loc, source, end, None, refs);
        region.transitions.push(tr);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::ElementId;

    fn id(s: &str) -> ElementId {
        s.parse().unwrap()
    }

    #[test]
    fn empty_model() {
        let r = parse("model M {}");
        assert!(r.diagnostics.is_empty());
        let m = r.model.unwrap();
        assert_eq!(m, Model::new("M"));
        let spans = r.spans.unwrap();
        assert_eq!(spans.len(), 1);
        assert_eq!(spans.get(&id("model:M")), Some(SourceSpan::new(0, 10)));
    }

    #[test]
    fn unclosed_model() {
        let r = parse("model M {");
        assert!(r.model.is_none() && r.spans.is_none());
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(r.diagnostics[0].code, Code::E010);
        assert!(r.diagnostics[0].message.contains("end of input"));
    }

    #[test]
    fn recovers_and_keeps_reporting() {
        let r = parse("model M { capsule C { port p : ; part : X; port q : P; } capsule D { bogus; } }");
        assert!(r.model.is_none());
        let codes: Vec<Code> = r.diagnostics.iter().map(|d| d.code).collect();
        assert_eq!(codes, [Code::E010, Code::E010, Code::E010]);
    }

    #[test]
    fn illegal_char_drops_model() {
        let r = parse("model M { capsule C { statemachine { state A@; } } }");
        assert!(r.model.is_none());
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(r.diagnostics[0].code, Code::E001);
    }

    #[test]
    fn spans_cover_declarations() {
        let text = "model M {\n  capsule C {\n    statemachine {\n      state A { state B; }\n      A -> A on p.go [x] / y();\n    }\n  }\n}\n";
        let r = parse(text);
        let spans = r.spans.unwrap();
        let at = |s: &str| {
            let sp = spans.get(&id(s)).unwrap();
            &text[sp.start..sp.end]
        };
        assert_eq!(at("state:M.C.sm.A"), "state A { state B; }");
        assert_eq!(at("state:M.C.sm.A.B"), "state B;");
        assert_eq!(at("trans:M.C.sm.A.A#0"), "A -> A on p.go [x] / y();");
        assert!(at("capsule:M.C").starts_with("capsule C {") && at("capsule:M.C").ends_with('}'));
        let model = r.model.unwrap();
        let tr = &model.capsules[0].machine.as_ref().unwrap().region.transitions[0];
        assert_eq!(tr.guard.as_ref().unwrap().as_str(), "x");
        assert_eq!(tr.action.as_ref().unwrap().as_str(), "y()");
    }

    #[test]
    fn second_state_machine_is_a_syntax_error() {
        let r = parse("model M { capsule C { statemachine { } statemachine { } } }");
        assert!(r.model.is_none());
        assert_eq!(r.diagnostics.len(), 1);
    }
}
