//! `structural_sort` against a brute-force oracle that enumerates every
//! topological order and picks the one with the smallest key sequence.

use itertools::Itertools;
use proptest::prelude::*;

use ncv_core::{structural_sort, Node, NodeGraph, StructureKind};

fn node(id: &str, step: u32, ordinal: u32) -> Node {
    Node {
        node_id: id.to_string(),
        assertion: format!("assertion {id}"),
        step_index: step,
        ordinal_in_step: ordinal,
    }
}

/// Every topological order of `graph`, minimized lexicographically over the
/// per-node key `(step_index, ordinal_in_step, list position)`. O(n!).
fn oracle_sort(graph: &NodeGraph) -> Option<Vec<String>> {
    let n = graph.nodes.len();
    let index_of = |id: &str| graph.nodes.iter().position(|node| node.node_id == id).unwrap();
    let edges: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .map(|(from, to)| (index_of(from), index_of(to)))
        .collect();

    let key = |i: usize| {
        let node = &graph.nodes[i];
        (node.step_index, node.ordinal_in_step, i)
    };

    (0..n)
        .permutations(n)
        .filter(|perm| {
            let position_of = |i: usize| perm.iter().position(|&p| p == i).unwrap();
            edges.iter().all(|&(from, to)| position_of(from) < position_of(to))
        })
        .min_by_key(|perm| perm.iter().map(|&i| key(i)).collect::<Vec<_>>())
        .map(|perm| perm.into_iter().map(|i| graph.nodes[i].node_id.clone()).collect())
}

#[test]
fn diamond_resolves_branch_by_ordinal() {
    // n1 fans out to n2 and n3 within the same step, both feeding n4; the
    // ordinal decides that n2 is verified before n3.
    let graph = NodeGraph {
        nodes: vec![node("n1", 1, 1), node("n2", 2, 1), node("n3", 2, 2), node("n4", 3, 1)],
        edges: vec![
            ("n1".into(), "n2".into()),
            ("n1".into(), "n3".into()),
            ("n2".into(), "n4".into()),
            ("n3".into(), "n4".into()),
        ],
        structure_kind: StructureKind::Dag,
    };
    let expected = vec!["n1", "n2", "n3", "n4"];
    assert_eq!(oracle_sort(&graph).unwrap(), expected);
    assert_eq!(structural_sort(&graph).unwrap(), expected);
}

#[test]
fn incomparable_nodes_order_by_step_before_ordinal() {
    // No edges at all: the order is driven purely by (step, ordinal).
    let graph = NodeGraph {
        nodes: vec![node("late", 3, 1), node("mid", 2, 5), node("early", 1, 9)],
        edges: vec![],
        structure_kind: StructureKind::Dag,
    };
    let expected = vec!["early", "mid", "late"];
    assert_eq!(oracle_sort(&graph).unwrap(), expected);
    assert_eq!(structural_sort(&graph).unwrap(), expected);
}

#[test]
fn edge_overrides_step_preference() {
    // "b" has the smaller step but depends on "a", so "a" must come first.
    let graph = NodeGraph {
        nodes: vec![node("a", 2, 1), node("b", 2, 2)],
        edges: vec![("a".into(), "b".into())],
        structure_kind: StructureKind::LinearChain,
    };
    let expected = vec!["a", "b"];
    assert_eq!(oracle_sort(&graph).unwrap(), expected);
    assert_eq!(structural_sort(&graph).unwrap(), expected);
}

#[test]
fn list_position_is_the_final_tie_break() {
    // Identical (step, ordinal) keys: earlier list position wins.
    let graph = NodeGraph {
        nodes: vec![node("second", 1, 1), node("first", 1, 1)],
        edges: vec![],
        structure_kind: StructureKind::Dag,
    };
    assert_eq!(structural_sort(&graph).unwrap(), vec!["second", "first"]);
    assert_eq!(oracle_sort(&graph).unwrap(), vec!["second", "first"]);
}

/// Random DAG: `n` nodes with arbitrary keys plus forward-only edges over a
/// hidden permutation, which guarantees acyclicity without constraining shape.
fn arb_dag() -> impl Strategy<Value = NodeGraph> {
    (2usize..=7)
        .prop_flat_map(|n| {
            let keys = proptest::collection::vec((1u32..=4, 1u32..=3), n);
            let hidden = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let edge_bits = proptest::collection::vec(any::<bool>(), n * (n - 1) / 2);
            (Just(n), keys, hidden, edge_bits)
        })
        .prop_map(|(n, keys, hidden, edge_bits)| {
            let nodes = keys
                .iter()
                .enumerate()
                .map(|(i, &(step, ordinal))| node(&format!("n{i}"), step, ordinal))
                .collect();
            let mut edges = Vec::new();
            let mut bit = edge_bits.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    if bit.next().unwrap() {
                        edges.push((format!("n{}", hidden[i]), format!("n{}", hidden[j])));
                    }
                }
            }
            NodeGraph { nodes, edges, structure_kind: StructureKind::Dag }
        })
}

proptest! {
    #[test]
    fn sort_matches_oracle_on_random_dags(graph in arb_dag()) {
        let got = structural_sort(&graph).unwrap();
        prop_assert_eq!(&got, &oracle_sort(&graph).unwrap());
    }

    #[test]
    fn sort_is_a_topological_permutation(graph in arb_dag()) {
        let got = structural_sort(&graph).unwrap();
        prop_assert_eq!(got.len(), graph.nodes.len());

        let mut sorted_ids: Vec<_> = got.clone();
        sorted_ids.sort();
        let mut all_ids: Vec<_> = graph.nodes.iter().map(|n| n.node_id.clone()).collect();
        all_ids.sort();
        prop_assert_eq!(sorted_ids, all_ids);

        let position_of = |id: &str| got.iter().position(|g| g == id).unwrap();
        for (from, to) in &graph.edges {
            prop_assert!(position_of(from) < position_of(to), "edge ({from}, {to}) violated");
        }
    }
}
