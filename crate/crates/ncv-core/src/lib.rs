//! Core engine for node-wise consistency verification (NCV) of step-by-step
//! solutions.
//!
//! A solution is decomposed into a graph of atomic assertion nodes; each node
//! is judged with cheap binary verdicts that are aggregated under a
//! consistency strategy, and the walk stops at the first node judged
//! incorrect. This crate holds everything that is pure computation: the
//! domain model, graph validation and deterministic ordering, vote
//! aggregation, prompt assembly, verdict/index parsing, and the evaluation
//! metrics. Backends, file formats, and the CLI live in `ncv-evalkit`.
//!
//! The crate is `no_std` (it only needs `alloc`), so the algorithms can be
//! reused anywhere the driver runs.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod consistency;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod parse;
pub mod prompt;

pub use consistency::{
    aggregate, all_vote_vectors, majority_vote, one_vote_veto, ConsistencyConfig, TieRule,
    VoteError,
};
pub use graph::{structural_sort, validate_graph, CycleError, GraphViolation, ValidationReport};
pub use metrics::{cost_report, f1_score, score_cases, CostReport, MethodCost, MetricsReport, ScoredCase, SubsetMetrics};
pub use model::{
    ConsistencyStrategy, Node, NodeGraph, NodeVerdict, StructureKind, TokenUsage,
    VerificationCase, VerificationResult, Verdict,
};
pub use parse::{extract_index, parse_binary_output, parse_last_line_verdict, ExtractedIndex, UnparseableVerdict};
pub use prompt::{
    build_prior_steps, fill_placeholders, render_node_prompt, render_numbered, PriorStepsContext,
    PromptError, PH_ASSERTION, PH_PRIOR_STEPS, PH_PROBLEM, PH_STEP, PH_STEPS,
};
