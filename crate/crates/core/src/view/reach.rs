//! Reachability unfolding of a capsule's top-level state machine.

use std::collections::VecDeque;

use super::{capsule_by_qname, EdgeKind, GEdge, GElement, GGraph, GNode, NodeKind, ViewId};
use crate::error::{Error, Result};
use crate::id::ElementId;
use crate::model::{Model, Region};
use crate::query::{elements, Loc};

pub const DEFAULT_REACH_DEPTH: usize = 8;

/// Unfolding stops growing past this many nodes. Dense machines otherwise
/// grow exponentially with depth.
pub const REACH_NODE_LIMIT: usize = 5000;

/// Index of the state the region's first initial marker points at.
pub(crate) fn initial_state(region: &Region) -> Option<usize> {
    region.initial_target().and_then(|t| region.state_index(t))
}

/// Breadth-first unfolding of the top region from its initial state.
///
/// Every visit of a state is its own node `<state id>@<k>`, with `k` counted
/// in BFS order, so states reachable along several paths repeat. Composite
/// states are not entered.
pub fn reach_tree(model: &Model, capsule: &str, max_depth: usize) -> Result<GGraph> {
    let (ci, c) = capsule_by_qname(model, capsule).ok_or_else(|| Error::UnknownView(ViewId::ReachTree(capsule.into()).to_string()))?;
    let region = c
        .machine
        .as_ref()
        .map(|sm| &sm.region)
        .ok_or_else(|| Error::Precondition(format!("capsule {capsule} has no state machine")))?;
    let start = initial_state(region).ok_or_else(|| Error::Precondition(format!("state machine of {capsule} has no initial state")))?;

    let entries = elements(model);
    let state_ids: Vec<ElementId> = (0..region.states.len())
        .map(|i| entries.iter().find(|e| e.loc == Loc::State(ci, vec![i])).expect("top state").id.clone())
        .collect();
    let trans_ids: Vec<ElementId> = (0..region.transitions.len())
        .map(|i| entries.iter().find(|e| e.loc == Loc::Transition(ci, Vec::new(), i)).expect("top transition").id.clone())
        .collect();
    let moves: Vec<Vec<(usize, usize)>> = (0..region.states.len())
        .map(|s| {
            region
                .transitions
                .iter()
                .enumerate()
                .filter(|(_, t)| region.state_index(&t.source) == Some(s))
                .filter_map(|(ti, t)| region.state_index(&t.target).map(|target| (ti, target)))
                .collect()
        })
        .collect();

    let mut graph = GGraph::new(ViewId::ReachTree(capsule.into()));
    let mut edges = Vec::new();
    let node = |state: usize, k: usize| -> GNode {
        let id = &state_ids[state];
        GNode::new(format!("{id}@{k}"), id.clone(), NodeKind::StateNode, &region.states[state].name)
    };
    graph.elements.push(GElement::Node(node(start, 0)));
    let mut count = 1;
    let mut queue = VecDeque::from([(start, 0usize, 0usize)]);
    'bfs: while let Some((state, k, depth)) = queue.pop_front() {
        if depth == max_depth {
            continue;
        }
        for &(ti, target) in &moves[state] {
            if count == REACH_NODE_LIMIT {
                break 'bfs;
            }
            let child = count;
            count += 1;
            graph.elements.push(GElement::Node(node(target, child)));
            edges.push(GEdge {
                id: format!("{}@{child}", trans_ids[ti]),
                source_id: trans_ids[ti].clone(),
                kind: EdgeKind::UnfoldEdge,
                source_node_id: format!("{}@{k}", state_ids[state]),
                target_node_id: format!("{}@{child}", state_ids[target]),
                label: region.transitions[ti].label(),
                routing_points: Vec::new(),
            });
            queue.push_back((target, child, depth + 1));
        }
    }
    graph.elements.extend(edges.into_iter().map(GElement::Edge));
    Ok(graph)
}
