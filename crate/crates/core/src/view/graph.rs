//! Graph structures exchanged with graphical clients.

use serde::{Deserialize, Serialize};

use super::ViewId;
use crate::id::ElementId;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn center(&self) -> Point {
        Point { x: self.x + self.w / 2.0, y: self.y + self.h / 2.0 }
    }

    /// Interiors intersect; touching edges do not count.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x < other.right() && other.x < self.right() && self.y < other.bottom() && other.y < self.bottom()
    }

    pub fn inset(&self, d: f64) -> Rect {
        Rect { x: self.x + d, y: self.y + d, w: self.w - 2.0 * d, h: self.h - 2.0 * d }
    }

    pub fn contains_rect(&self, inner: &Rect) -> bool {
        inner.x >= self.x && inner.y >= self.y && inner.right() <= self.right() && inner.bottom() <= self.bottom()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum NodeKind {
    CapsuleNode,
    PartNode,
    PortNode,
    ProtocolNode,
    StateNode,
    CompositeStateNode,
    InitialNode,
}

impl NodeKind {
    pub fn is_container(self) -> bool {
        matches!(self, NodeKind::CapsuleNode | NodeKind::PartNode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeKind {
    TransitionEdge,
    ConnectorEdge,
    InitialEdge,
    UnfoldEdge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GNode {
    pub id: String,
    pub source_id: ElementId,
    #[serde(rename = "type")]
    pub kind: NodeKind,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Rect>,
    #[serde(default)]
    pub children: Vec<GNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drill_target: Option<ViewId>,
}

impl GNode {
    pub fn new(id: impl Into<String>, source_id: ElementId, kind: NodeKind, label: impl Into<String>) -> Self {
        GNode { id: id.into(), source_id, kind, label: label.into(), bounds: None, children: Vec::new(), drill_target: None }
    }

    pub fn of(source_id: &ElementId, kind: NodeKind, label: impl Into<String>) -> Self {
        GNode::new(source_id.as_str(), source_id.clone(), kind, label)
    }

    /// This node and all descendants, pre-order.
    pub fn walk(&self) -> Vec<&GNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GEdge {
    pub id: String,
    pub source_id: ElementId,
    #[serde(rename = "type")]
    pub kind: EdgeKind,
    pub source_node_id: String,
    pub target_node_id: String,
    pub label: String,
    #[serde(default)]
    pub routing_points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GElement {
    Edge(GEdge),
    Node(GNode),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GGraph {
    pub view_id: ViewId,
    pub revision: u64,
    pub elements: Vec<GElement>,
}

impl GGraph {
    pub fn new(view_id: ViewId) -> Self {
        GGraph { view_id, revision: 0, elements: Vec::new() }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &GNode> {
        self.elements.iter().filter_map(|e| match e {
            GElement::Node(n) => Some(n),
            GElement::Edge(_) => None,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = &GEdge> {
        self.elements.iter().filter_map(|e| match e {
            GElement::Edge(x) => Some(x),
            GElement::Node(_) => None,
        })
    }

    /// Every node at any depth, pre-order.
    pub fn all_nodes(&self) -> Vec<&GNode> {
        self.nodes().flat_map(GNode::walk).collect()
    }

    pub fn node(&self, id: &str) -> Option<&GNode> {
        self.all_nodes().into_iter().find(|n| n.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&GEdge> {
        self.edges().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}
