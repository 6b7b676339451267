//! Deterministic layered layout for view graphs.
//!
//! Nodes are layered by breadth-first depth from the roots (the initial
//! marker when present, otherwise every node without incoming edges) and
//! flow downwards; within a layer they keep discovery order. Containers are
//! laid out recursively and then sized around their children. Ports sit on
//! their owner's top edge.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::view::{GEdge, GElement, GGraph, GNode, NodeKind, Point, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct LayoutConfig {
    pub node_w: f64,
    pub node_h: f64,
    pub initial_size: f64,
    pub gap_x: f64,
    pub gap_y: f64,
    pub margin: f64,
    pub child_pad: f64,
    pub title_band: f64,
    pub port_size: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            node_w: 120.0,
            node_h: 60.0,
            initial_size: 16.0,
            gap_x: 60.0,
            gap_y: 40.0,
            margin: 20.0,
            child_pad: 10.0,
            title_band: 24.0,
            port_size: 16.0,
        }
    }
}

/// Spacing between two parallel edges, and the step of stacked self-loops.
const PARALLEL_OFFSET: f64 = 8.0;
/// Half the height of a self-loop.
const LOOP_HALF: f64 = 10.0;

/// Positions every node and routes every edge of `graph`.
pub fn layout(graph: &GGraph, config: &LayoutConfig) -> GGraph {
    let mut out = graph.clone();
    let edges: Vec<(String, String)> = graph.edges().map(|e| (e.source_node_id.clone(), e.target_node_id.clone())).collect();
    let mut nodes: Vec<&mut GNode> = out
        .elements
        .iter_mut()
        .filter_map(|e| match e {
            GElement::Node(n) => Some(n),
            GElement::Edge(_) => None,
        })
        .collect();
    arrange(&mut nodes, &edges, config, config.margin);
    for n in nodes {
        absolutize(n);
    }

    let bounds: HashMap<String, Rect> = out
        .all_nodes()
        .into_iter()
        .map(|n| (n.id.clone(), n.bounds.expect("every node placed")))
        .collect();
    let mut pair_seen: HashMap<(String, String), usize> = HashMap::new();
    let pair_total = edge_pairs(graph);
    for el in &mut out.elements {
        if let GElement::Edge(e) = el {
            let key = pair_key(e);
            let k = pair_seen.entry(key.clone()).or_insert(0);
            e.routing_points = route(e, &bounds, *k, pair_total[&key], config);
            *k += 1;
        }
    }
    out
}

/// Layer index of each top-level node.
pub fn assign_layers(graph: &GGraph) -> BTreeMap<String, usize> {
    let nodes: Vec<&GNode> = graph.nodes().collect();
    let edges = sibling_edges(&nodes, &graph.edges().map(|e| (e.source_node_id.clone(), e.target_node_id.clone())).collect::<Vec<_>>());
    let (layers, _) = layering(&nodes, &edges);
    nodes.iter().zip(layers).map(|(n, l)| (n.id.clone(), l)).collect()
}

/// Top-level node ids per layer, in placement order.
pub fn order_within_layers(graph: &GGraph) -> Vec<Vec<String>> {
    let nodes: Vec<&GNode> = graph.nodes().collect();
    let edges = sibling_edges(&nodes, &graph.edges().map(|e| (e.source_node_id.clone(), e.target_node_id.clone())).collect::<Vec<_>>());
    let (layers, order) = layering(&nodes, &edges);
    rows(&layers, &order).into_iter().map(|row| row.into_iter().map(|i| nodes[i].id.clone()).collect()).collect()
}

/// Edges between distinct non-port siblings, as sibling indices. An edge
/// endpoint anywhere inside a sibling's subtree counts as that sibling.
fn sibling_edges(nodes: &[&GNode], edges: &[(String, String)]) -> Vec<(usize, usize)> {
    let mut owner: HashMap<&str, usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if n.kind == NodeKind::PortNode {
            continue;
        }
        for d in n.walk() {
            owner.insert(d.id.as_str(), i);
        }
    }
    edges
        .iter()
        .filter_map(|(s, t)| Some((*owner.get(s.as_str())?, *owner.get(t.as_str())?)))
        .filter(|(s, t)| s != t)
        .collect()
}

/// Breadth-first layers and the discovery order. Ports are skipped and
/// left out of both.
fn layering(nodes: &[&GNode], edges: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let n = nodes.len();
    let placed = |i: usize| nodes[i].kind != NodeKind::PortNode;
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut has_incoming = vec![false; n];
    for &(s, t) in edges {
        succ[s].push(t);
        has_incoming[t] = true;
    }
    for list in &mut succ {
        list.sort_by(|a, b| (&nodes[*a].label, &nodes[*a].id).cmp(&(&nodes[*b].label, &nodes[*b].id)));
        list.dedup();
    }

    let mut layer = vec![usize::MAX; n];
    let mut order = Vec::new();
    let initials: Vec<usize> = (0..n).filter(|&i| nodes[i].kind == NodeKind::InitialNode).collect();
    let mut roots: Vec<usize> =
        if initials.is_empty() { (0..n).filter(|&i| placed(i) && !has_incoming[i]).collect() } else { initials };
    let mut base = 0;
    loop {
        let mut queue = VecDeque::new();
        for &r in &roots {
            layer[r] = base;
            order.push(r);
            queue.push_back(r);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &succ[u] {
                if layer[v] == usize::MAX {
                    layer[v] = layer[u] + 1;
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        match (0..n).find(|&i| placed(i) && layer[i] == usize::MAX) {
            Some(next) => {
                base = order.iter().map(|&i| layer[i]).max().map_or(0, |m| m + 1);
                roots = vec![next];
            }
            None => break,
        }
    }
    (layer, order)
}

fn rows(layers: &[usize], order: &[usize]) -> Vec<Vec<usize>> {
    let depth = order.iter().map(|&i| layers[i] + 1).max().unwrap_or(0);
    let mut rows = vec![Vec::new(); depth];
    for &i in order {
        rows[layers[i]].push(i);
    }
    rows
}

/// Places `nodes` (siblings) in rows starting at `(margin, margin)` of the
/// parent's coordinates. Returns the far corner of what was placed.
fn arrange(nodes: &mut [&mut GNode], edges: &[(String, String)], cfg: &LayoutConfig, margin: f64) -> (f64, f64) {
    for n in nodes.iter_mut() {
        size_node(n, edges, cfg);
    }
    let view: Vec<&GNode> = nodes.iter().map(|n| &**n).collect();
    let sib = sibling_edges(&view, edges);
    let (layers, order) = layering(&view, &sib);
    let rows = rows(&layers, &order);

    let mut y = margin;
    let (mut max_x, mut max_y) = (0.0_f64, 0.0_f64);
    for row in &rows {
        let row_h = row.iter().map(|&i| size_of(nodes[i]).1).fold(cfg.node_h, f64::max);
        let mut x = margin;
        for &i in row {
            let (w, h) = size_of(nodes[i]);
            let slot = w.max(cfg.node_w);
            let (nx, ny) = if nodes[i].kind == NodeKind::InitialNode {
                (x + (slot - w) / 2.0, y + (row_h - h) / 2.0)
            } else {
                (x, y)
            };
            nodes[i].bounds = Some(Rect::new(nx, ny, w, h));
            max_x = max_x.max(nx + w);
            max_y = max_y.max(ny + h);
            x += slot + cfg.gap_x;
        }
        y += row_h + cfg.gap_y;
    }
    (max_x, max_y)
}

fn size_of(n: &GNode) -> (f64, f64) {
    let b = n.bounds.expect("sized");
    (b.w, b.h)
}

/// Gives `n` its size. Children end up positioned relative to `n`.
fn size_node(n: &mut GNode, edges: &[(String, String)], cfg: &LayoutConfig) {
    let (w, h) = match n.kind {
        NodeKind::InitialNode => (cfg.initial_size, cfg.initial_size),
        NodeKind::PortNode => (cfg.port_size, cfg.port_size),
        _ if n.children.is_empty() => (cfg.node_w, cfg.node_h),
        _ => {
            let (mut ports, mut inner): (Vec<&mut GNode>, Vec<&mut GNode>) =
                n.children.iter_mut().partition(|c| c.kind == NodeKind::PortNode);
            let (iw, ih) = if inner.is_empty() { (0.0, 0.0) } else { arrange(&mut inner, edges, cfg, 0.0) };
            for c in inner.iter_mut() {
                translate(c, cfg.child_pad, cfg.title_band);
            }
            let min_w = (ports.len() + 1) as f64 * 2.0 * cfg.port_size;
            let w = (iw + 2.0 * cfg.child_pad).max(cfg.node_w).max(min_w);
            let h = (ih + cfg.title_band + cfg.child_pad).max(cfg.node_h);
            let count = ports.len() as f64;
            for (i, p) in ports.iter_mut().enumerate() {
                let cx = w * (i as f64 + 1.0) / (count + 1.0);
                p.bounds = Some(Rect::new(cx - cfg.port_size / 2.0, -cfg.port_size / 2.0, cfg.port_size, cfg.port_size));
            }
            (w, h)
        }
    };
    // Position is filled in by the caller; children stay relative for now.
    n.bounds = Some(Rect::new(0.0, 0.0, w, h));
}

fn translate(n: &mut GNode, dx: f64, dy: f64) {
    let b = n.bounds.as_mut().expect("sized");
    b.x += dx;
    b.y += dy;
}

/// Children are stored relative to their parent during sizing; this makes
/// every rectangle absolute.
fn absolutize(n: &mut GNode) {
    let b = n.bounds.expect("placed");
    for c in &mut n.children {
        translate(c, b.x, b.y);
        absolutize(c);
    }
}

fn round2(v: f64) -> f64 {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn pair_key(e: &GEdge) -> (String, String) {
    let (a, b) = (e.source_node_id.clone(), e.target_node_id.clone());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn edge_pairs(graph: &GGraph) -> HashMap<(String, String), usize> {
    let mut counts = HashMap::new();
    for e in graph.edges() {
        *counts.entry(pair_key(e)).or_insert(0) += 1;
    }
    counts
}

/// `0, +8, -8, +16, ...` for the k-th of several parallel edges; 0 when alone.
fn parallel_offset(k: usize, total: usize) -> f64 {
    if total < 2 {
        return 0.0;
    }
    let step = (k / 2 + 1) as f64 * PARALLEL_OFFSET;
    if k.is_multiple_of(2) {
        step
    } else {
        -step
    }
}

/// Where the ray from `p` along `d` leaves `r`.
fn exit_point(r: &Rect, p: Point, d: Point) -> Point {
    let along = |lo: f64, hi: f64, from: f64, dir: f64| {
        if dir > 0.0 {
            (hi - from) / dir
        } else if dir < 0.0 {
            (lo - from) / dir
        } else {
            f64::INFINITY
        }
    };
    let t = along(r.x, r.right(), p.x, d.x).min(along(r.y, r.bottom(), p.y, d.y)).max(0.0);
    Point { x: p.x + t * d.x, y: p.y + t * d.y }
}

fn route(e: &GEdge, bounds: &HashMap<String, Rect>, k: usize, total: usize, cfg: &LayoutConfig) -> Vec<Point> {
    let (Some(a), Some(b)) = (bounds.get(&e.source_node_id), bounds.get(&e.target_node_id)) else {
        return Vec::new();
    };
    let pts = if e.source_node_id == e.target_node_id {
        let c = a.center();
        let out = a.right() + cfg.gap_x / 2.0 + k as f64 * PARALLEL_OFFSET;
        vec![
            Point { x: a.right(), y: c.y - LOOP_HALF },
            Point { x: out, y: c.y - LOOP_HALF },
            Point { x: out, y: c.y + LOOP_HALF },
            Point { x: a.right(), y: c.y + LOOP_HALF },
        ]
    } else {
        let (ca, cb) = (a.center(), b.center());
        let d = Point { x: cb.x - ca.x, y: cb.y - ca.y };
        let len = (d.x * d.x + d.y * d.y).sqrt();
        if len == 0.0 {
            vec![ca, cb]
        } else {
            // Perpendicular taken from the canonical direction of the pair
            // so that A->B and B->A separate rather than coincide.
            let flip = if e.source_node_id <= e.target_node_id { 1.0 } else { -1.0 };
            let off = parallel_offset(k, total) * flip;
            let (nx, ny) = (-d.y / len * off, d.x / len * off);
            let pa = Point { x: ca.x + nx, y: ca.y + ny };
            let pb = Point { x: cb.x + nx, y: cb.y + ny };
            vec![exit_point(a, pa, d), exit_point(b, pb, Point { x: -d.x, y: -d.y })]
        }
    };
    pts.into_iter().map(|p| Point { x: round2(p.x), y: round2(p.y) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::ElementId;
    use crate::view::{EdgeKind, ViewId};

    fn node(id: &str, kind: NodeKind) -> GNode {
        let sid: ElementId = format!("state:M.C.sm.{}", id.trim_start_matches("state:M.C.sm.")).parse().unwrap();
        GNode::new(id, sid, kind, id)
    }

    fn edge(s: &str, t: &str) -> GEdge {
        GEdge {
            id: format!("{s}->{t}"),
            source_id: "trans:M.C.sm.A.B#0".parse().unwrap(),
            kind: EdgeKind::TransitionEdge,
            source_node_id: s.into(),
            target_node_id: t.into(),
            label: String::new(),
            routing_points: Vec::new(),
        }
    }

    fn graph(nodes: Vec<GNode>, edges: Vec<GEdge>) -> GGraph {
        let mut g = GGraph::new(ViewId::behavior("M.C"));
        g.elements.extend(nodes.into_iter().map(GElement::Node));
        g.elements.extend(edges.into_iter().map(GElement::Edge));
        g
    }

    fn bounds(g: &GGraph, id: &str) -> Rect {
        g.node(id).unwrap().bounds.unwrap()
    }

    #[test]
    fn single_state() {
        let g = layout(&graph(vec![node("A", NodeKind::StateNode)], vec![]), &LayoutConfig::default());
        assert_eq!(bounds(&g, "A"), Rect::new(20.0, 20.0, 120.0, 60.0));
    }

    #[test]
    fn chain_layers() {
        let g = graph(
            vec![node("I", NodeKind::InitialNode), node("A", NodeKind::StateNode), node("B", NodeKind::StateNode)],
            vec![edge("I", "A"), edge("A", "B"), edge("B", "A")],
        );
        let layers = assign_layers(&g);
        assert_eq!((layers["I"], layers["A"], layers["B"]), (0, 1, 2));
        let g = layout(&g, &LayoutConfig::default());
        assert_eq!(bounds(&g, "A").y, 120.0);
        assert_eq!(bounds(&g, "I"), Rect::new(72.0, 42.0, 16.0, 16.0));
    }

    #[test]
    fn unconnected_nodes_share_the_first_layer() {
        let g = graph(vec![node("Z", NodeKind::StateNode), node("A", NodeKind::StateNode)], vec![]);
        assert_eq!(order_within_layers(&g), [vec!["Z".to_owned(), "A".to_owned()]]);
    }

    #[test]
    fn unreachable_nodes_follow() {
        let g = graph(
            vec![node("I", NodeKind::InitialNode), node("A", NodeKind::StateNode), node("X", NodeKind::StateNode), node("Y", NodeKind::StateNode)],
            vec![edge("I", "A"), edge("X", "Y"), edge("Y", "X")],
        );
        let layers = assign_layers(&g);
        assert_eq!((layers["X"], layers["Y"]), (2, 3));
    }

    #[test]
    fn siblings_sorted_by_label() {
        let g = graph(
            vec![node("I", NodeKind::InitialNode), node("B", NodeKind::StateNode), node("A", NodeKind::StateNode)],
            vec![edge("I", "B"), edge("I", "A")],
        );
        assert_eq!(order_within_layers(&g)[1], ["A", "B"]);
    }

    #[test]
    fn vertical_edge_points() {
        let g = graph(vec![node("A", NodeKind::StateNode), node("B", NodeKind::StateNode)], vec![edge("A", "B")]);
        let g = layout(&g, &LayoutConfig::default());
        let e = g.edges().next().unwrap();
        assert_eq!(e.routing_points, [Point { x: 80.0, y: 80.0 }, Point { x: 80.0, y: 120.0 }]);
    }

    #[test]
    fn parallel_and_self_loops() {
        let g = graph(
            vec![node("A", NodeKind::StateNode), node("B", NodeKind::StateNode)],
            vec![edge("A", "B"), edge("A", "B"), edge("A", "A")],
        );
        let g = layout(&g, &LayoutConfig::default());
        let e: Vec<&GEdge> = g.edges().collect();
        // Downward edge: the perpendicular (-dy, dx) points to -x.
        assert_eq!(e[0].routing_points[0], Point { x: 72.0, y: 80.0 });
        assert_eq!(e[1].routing_points[0], Point { x: 88.0, y: 80.0 });
        assert_eq!(
            e[2].routing_points,
            [Point { x: 140.0, y: 40.0 }, Point { x: 170.0, y: 40.0 }, Point { x: 170.0, y: 60.0 }, Point { x: 140.0, y: 60.0 }]
        );
    }

    #[test]
    fn ports_straddle_the_top_edge() {
        let mut part = GNode::new("part", "part:M.C.w".parse().unwrap(), NodeKind::PartNode, "w : W");
        for p in ["q", "r"] {
            part.children.push(GNode::new(p, format!("port:M.W.{p}").parse().unwrap(), NodeKind::PortNode, p));
        }
        let g = layout(&graph(vec![part], vec![]), &LayoutConfig::default());
        let b = bounds(&g, "part");
        assert_eq!(b, Rect::new(20.0, 20.0, 120.0, 60.0));
        assert_eq!(bounds(&g, "q").center(), Point { x: 20.0 + 40.0, y: 20.0 });
        assert_eq!(bounds(&g, "r").center(), Point { x: 20.0 + 80.0, y: 20.0 });
    }
}
