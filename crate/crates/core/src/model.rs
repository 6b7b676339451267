//! Abstract syntax shared by the textual and graphical views.
//!
//! Every list keeps declaration order; that order is what the serializer
//! emits and what ids and views are derived from. Equality is structural and
//! order-sensitive. Source positions live in [`crate::syntax::SpanTable`],
//! never in the model.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub protocols: Vec<ProtocolDecl>,
    pub capsules: Vec<CapsuleDecl>,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model { name: name.into(), protocols: Vec::new(), capsules: Vec::new() }
    }

    pub fn protocol(&self, name: &str) -> Option<&ProtocolDecl> {
        self.protocols.iter().find(|p| p.name == name)
    }

    pub fn capsule(&self, name: &str) -> Option<&CapsuleDecl> {
        self.capsules.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolDecl {
    pub name: String,
    pub messages: Vec<MessageDecl>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageDecl {
    pub name: String,
    pub direction: Direction,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CapsuleDecl {
    pub name: String,
    pub ports: Vec<PortDecl>,
    pub parts: Vec<PartDecl>,
    pub connectors: Vec<ConnectorDecl>,
    pub machine: Option<StateMachine>,
}

impl CapsuleDecl {
    pub fn new(name: impl Into<String>) -> Self {
        CapsuleDecl { name: name.into(), ..Default::default() }
    }

    pub fn port(&self, name: &str) -> Option<&PortDecl> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn part(&self, name: &str) -> Option<&PartDecl> {
        self.parts.iter().find(|p| p.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortDecl {
    pub name: String,
    pub protocol: String,
    pub conjugated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartDecl {
    pub name: String,
    pub capsule: String,
}

/// A connector end: an own port (`p`) or a port on a part (`w.q`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PortRef {
    pub part: Option<String>,
    pub port: String,
}

impl PortRef {
    pub fn own(port: impl Into<String>) -> Self {
        PortRef { part: None, port: port.into() }
    }

    pub fn on_part(part: impl Into<String>, port: impl Into<String>) -> Self {
        PortRef { part: Some(part.into()), port: port.into() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("{text:?} is not a port reference"));
        let (part, port) = match text.split_once('.') {
            Some((a, b)) => (Some(a), b),
            None => (None, text),
        };
        if !crate::id::is_name(port) || part.is_some_and(|p| !crate::id::is_name(p)) {
            return Err(bad());
        }
        Ok(PortRef { part: part.map(str::to_owned), port: port.to_owned() })
    }

    pub(crate) fn segments(&self) -> Vec<&str> {
        match &self.part {
            Some(part) => vec![part.as_str(), self.port.as_str()],
            None => vec![self.port.as_str()],
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.part {
            Some(part) => write!(f, "{part}.{}", self.port),
            None => f.write_str(&self.port),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectorDecl {
    pub end_a: PortRef,
    pub end_b: PortRef,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateMachine {
    pub region: Region,
}

/// States and transitions at one nesting level.
///
/// `initials` is a list only so that a duplicated `initial` declaration
/// survives parsing and can be reported; a valid region has at most one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub initials: Vec<InitialDecl>,
    pub states: Vec<StateNode>,
    pub transitions: Vec<TransitionDecl>,
}

impl Region {
    pub fn initial_target(&self) -> Option<&str> {
        self.initials.first().map(|i| i.target.as_str())
    }

    pub fn state(&self, name: &str) -> Option<&StateNode> {
        self.states.iter().find(|s| s.name == name)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialDecl {
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateNode {
    pub name: String,
    /// Present exactly for composite states.
    pub region: Option<Region>,
}

impl StateNode {
    pub fn simple(name: impl Into<String>) -> Self {
        StateNode { name: name.into(), region: None }
    }

    pub fn composite(name: impl Into<String>, region: Region) -> Self {
        StateNode { name: name.into(), region: Some(region) }
    }

    pub fn is_composite(&self) -> bool {
        self.region.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trigger {
    pub port: String,
    pub message: String,
}

impl Trigger {
    pub fn parse(text: &str) -> Result<Self> {
        match PortRef::parse(text)? {
            PortRef { part: Some(port), port: message } => Ok(Trigger { port, message }),
            _ => Err(Error::Malformed(format!("{text:?} is not a port.message trigger"))),
        }
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.port, self.message)
    }
}

/// Guard text: opaque, never contains `]` or a line break.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GuardText(String);

impl GuardText {
    pub fn new(text: &str) -> Result<Self> {
        if text.contains([']', '\n', '\r']) {
            return Err(Error::Malformed(format!("guard {text:?} may not contain ']' or a line break")));
        }
        Ok(GuardText(text.trim().to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Action text: opaque, never contains `;` or a line break.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionText(String);

impl ActionText {
    pub fn new(text: &str) -> Result<Self> {
        if text.contains([';', '\n', '\r']) {
            return Err(Error::Malformed(format!("action {text:?} may not contain ';' or a line break")));
        }
        Ok(ActionText(text.trim().to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDecl {
    pub source: String,
    pub target: String,
    pub trigger: Option<Trigger>,
    pub guard: Option<GuardText>,
    pub action: Option<ActionText>,
}

impl TransitionDecl {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        TransitionDecl { source: source.into(), target: target.into(), trigger: None, guard: None, action: None }
    }

    /// `trigger [guard] / action`, absent pieces omitted.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(t) = &self.trigger {
            parts.push(t.to_string());
        }
        if let Some(g) = &self.guard {
            parts.push(format!("[{}]", g.as_str()));
        }
        if let Some(a) = &self.action {
            parts.push(format!("/ {}", a.as_str()));
        }
        parts.join(" ")
    }
}
