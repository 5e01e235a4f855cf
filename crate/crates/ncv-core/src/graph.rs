//! Structural validation and deterministic ordering of node graphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{NodeGraph, StructureKind, VerificationCase};

/// One violated graph invariant. `Display` gives the diagnostic wording.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub enum GraphViolation {
    #[error("graph has no nodes")]
    NoNodes,
    #[error("duplicate node id {0}")]
    DuplicateNodeId(String),
    #[error("node {0} has an empty assertion")]
    EmptyAssertion(String),
    #[error("node {node_id} references step {step_index} outside 1..={step_count}")]
    StepOutOfRange { node_id: String, step_index: u32, step_count: u32 },
    #[error("edge ({from}, {to}) references unknown node {missing}")]
    UnknownEdgeEndpoint { from: String, to: String, missing: String },
    #[error("cycle detected")]
    CycleDetected,
    #[error("source not unique ({count} nodes have no incoming edge)")]
    SourceNotUnique { count: usize },
    #[error("sink not unique ({count} nodes have no outgoing edge)")]
    SinkNotUnique { count: usize },
    #[error("edges do not form a path over all nodes: {detail}")]
    NotALinearChain { detail: String },
    #[error("edge ({from}, {to}) goes from step {from_step} back to step {to_step}")]
    EdgeFromLaterStep { from: String, to: String, from_step: u32, to_step: u32 },
}

/// Report-style result of [`validate_graph`]: empty means the graph is sound.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<GraphViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The graph contains a cycle, so no topological order exists.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cycle detected: no topological order exists")]
pub struct CycleError;

fn index_by_id(graph: &NodeGraph) -> BTreeMap<&str, usize> {
    graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.node_id.as_str(), i))
        .collect()
}

/// Adjacency over node indices, silently dropping edges with unknown
/// endpoints (those are reported separately by [`validate_graph`]).
fn adjacency(graph: &NodeGraph, ids: &BTreeMap<&str, usize>) -> Vec<Vec<usize>> {
    let mut adj = alloc::vec![Vec::new(); graph.nodes.len()];
    for (from, to) in &graph.edges {
        if let (Some(&f), Some(&t)) = (ids.get(from.as_str()), ids.get(to.as_str())) {
            adj[f].push(t);
        }
    }
    adj
}

fn has_cycle(adj: &[Vec<usize>]) -> bool {
    // Kahn: a cycle exists iff some node is never freed.
    let n = adj.len();
    let mut indegree = alloc::vec![0usize; n];
    for targets in adj {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &t in &adj[i] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    seen < n
}

/// Check every structural invariant of `graph` against `case` and return the
/// full list of violations (empty when the graph is usable).
pub fn validate_graph(graph: &NodeGraph, case: &VerificationCase) -> ValidationReport {
    let mut violations = Vec::new();

    if graph.nodes.is_empty() {
        violations.push(GraphViolation::NoNodes);
        return ValidationReport { violations };
    }

    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for node in &graph.nodes {
        if !seen.insert(node.node_id.as_str()) {
            violations.push(GraphViolation::DuplicateNodeId(node.node_id.clone()));
        }
        if node.assertion.trim().is_empty() {
            violations.push(GraphViolation::EmptyAssertion(node.node_id.clone()));
        }
        let step_count = case.step_count();
        if node.step_index == 0 || node.step_index > step_count {
            violations.push(GraphViolation::StepOutOfRange {
                node_id: node.node_id.clone(),
                step_index: node.step_index,
                step_count,
            });
        }
    }

    let ids = index_by_id(graph);
    for (from, to) in &graph.edges {
        for endpoint in [from, to] {
            if !ids.contains_key(endpoint.as_str()) {
                violations.push(GraphViolation::UnknownEdgeEndpoint {
                    from: from.clone(),
                    to: to.clone(),
                    missing: endpoint.clone(),
                });
            }
        }
        if let (Some(f), Some(t)) = (graph.node(from), graph.node(to)) {
            if f.step_index > t.step_index {
                violations.push(GraphViolation::EdgeFromLaterStep {
                    from: from.clone(),
                    to: to.clone(),
                    from_step: f.step_index,
                    to_step: t.step_index,
                });
            }
        }
    }

    let adj = adjacency(graph, &ids);
    if has_cycle(&adj) {
        violations.push(GraphViolation::CycleDetected);
        // Degree-based shape checks below assume acyclicity; stop here.
        return ValidationReport { violations };
    }

    let n = graph.nodes.len();
    let mut indegree = alloc::vec![0usize; n];
    let mut outdegree = alloc::vec![0usize; n];
    for (i, targets) in adj.iter().enumerate() {
        outdegree[i] = targets.len();
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let sources = indegree.iter().filter(|&&d| d == 0).count();
    let sinks = outdegree.iter().filter(|&&d| d == 0).count();

    match graph.structure_kind {
        StructureKind::Dag => {
            if sources != 1 {
                violations.push(GraphViolation::SourceNotUnique { count: sources });
            }
            if sinks != 1 {
                violations.push(GraphViolation::SinkNotUnique { count: sinks });
            }
        }
        StructureKind::LinearChain => {
            // An acyclic graph is a path over all nodes iff it has n-1 edges
            // and no node has in- or out-degree above one.
            let fan = indegree.iter().any(|&d| d > 1) || outdegree.iter().any(|&d| d > 1);
            let edge_count: usize = adj.iter().map(Vec::len).sum();
            if fan || edge_count != n - 1 {
                violations.push(GraphViolation::NotALinearChain {
                    detail: alloc::format!("{} nodes, {} usable edges", n, edge_count),
                });
            }
        }
    }

    ValidationReport { violations }
}

/// Deterministic topological order of all node ids.
///
/// Nodes with no path between them come out in ascending
/// `(step_index, ordinal_in_step)` order; position in the node list is the
/// final tie-break so the order is total for any input.
pub fn structural_sort(graph: &NodeGraph) -> Result<Vec<String>, CycleError> {
    let ids = index_by_id(graph);
    let adj = adjacency(graph, &ids);
    let n = graph.nodes.len();

    let mut indegree = alloc::vec![0usize; n];
    for targets in &adj {
        for &t in targets {
            indegree[t] += 1;
        }
    }

    let key = |i: usize| {
        let node = &graph.nodes[i];
        (node.step_index, node.ordinal_in_step, i)
    };

    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        // Graphs here are small; a linear scan beats maintaining a heap.
        let (pos, _) = ready
            .iter()
            .enumerate()
            .min_by_key(|(_, &i)| key(i))
            .expect("ready is non-empty");
        let next = ready.swap_remove(pos);
        order.push(graph.nodes[next].node_id.clone());
        for &t in &adj[next] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }

    if order.len() < n {
        return Err(CycleError);
    }
    Ok(order)
}
