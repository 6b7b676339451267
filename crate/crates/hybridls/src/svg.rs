//! Static vector rendering of a laid-out view graph.
//!
//! Output depends only on the graph, so identical inputs give identical
//! bytes. Nodes become rectangles (rounded for states), edges become paths
//! through their routing points with an arrowhead marker.

use std::fmt::Write;

use hybridls_core::view::{GGraph, GNode, NodeKind, Rect};

const PAD: f64 = 20.0;
const FONT: f64 = 12.0;

/// Formats a coordinate with at most two decimals and no trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_owned() } else { s.to_owned() }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn extent(graph: &GGraph) -> (f64, f64) {
    let mut w: f64 = 0.0;
    let mut h: f64 = 0.0;
    for n in graph.all_nodes() {
        if let Some(b) = n.bounds {
            w = w.max(b.right());
            h = h.max(b.bottom());
        }
    }
    for e in graph.edges() {
        for p in &e.routing_points {
            w = w.max(p.x);
            h = h.max(p.y);
        }
    }
    (w + PAD, h + PAD)
}

fn node(out: &mut String, n: &GNode) {
    let Some(b) = n.bounds else { return };
    let rounded = matches!(n.kind, NodeKind::StateNode | NodeKind::CompositeStateNode | NodeKind::InitialNode);
    let rx = match n.kind {
        NodeKind::InitialNode => b.w.min(b.h) / 2.0,
        _ if rounded => 8.0,
        _ => 0.0,
    };
    let class = serde_json::to_value(n.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    let _ = write!(
        out,
        "  <rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"",
        num(b.x),
        num(b.y),
        num(b.w),
        num(b.h)
    );
    if rx > 0.0 {
        let _ = write!(out, " rx=\"{}\"", num(rx));
    }
    let fill = if n.kind == NodeKind::InitialNode { "#000" } else { "none" };
    let _ = writeln!(out, " fill=\"{fill}\" stroke=\"#000\"/>");
    if !n.label.is_empty() {
        label(out, n, &b);
    }
    for c in &n.children {
        node(out, c);
    }
}

fn label(out: &mut String, n: &GNode, b: &Rect) {
    // Containers carry children, so their title goes in the band at the top.
    let y = if n.kind.is_container() || n.kind == NodeKind::CompositeStateNode || !n.children.is_empty() {
        b.y + FONT + 4.0
    } else if n.kind == NodeKind::PortNode {
        b.y - 4.0
    } else {
        b.center().y + FONT / 3.0
    };
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"{}\">{}</text>",
        num(b.center().x),
        num(y),
        num(FONT),
        escape(&n.label)
    );
}

pub fn render_svg(graph: &GGraph) -> String {
    let (w, h) = extent(graph);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">",
        num(w),
        num(h)
    );
    out.push_str("  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><polygon points=\"0,0 10,5 0,10\"/></marker></defs>\n");
    for n in graph.nodes() {
        node(&mut out, n);
    }
    for e in graph.edges() {
        if e.routing_points.len() < 2 {
            continue;
        }
        let d: Vec<String> = e
            .routing_points
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{}{} {}", if i == 0 { 'M' } else { 'L' }, num(p.x), num(p.y)))
            .collect();
        let _ = writeln!(out, "  <path d=\"{}\" fill=\"none\" stroke=\"#000\" marker-end=\"url(#arrow)\"/>", d.join(" "));
        if !e.label.is_empty() {
            // Above the midpoint of the middle segment.
            let k = (e.routing_points.len() - 1) / 2;
            let (a, b) = (e.routing_points[k], e.routing_points[k + 1]);
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"{}\">{}</text>",
                num((a.x + b.x) / 2.0),
                num((a.y + b.y) / 2.0 - 4.0),
                num(FONT - 2.0),
                escape(&e.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
