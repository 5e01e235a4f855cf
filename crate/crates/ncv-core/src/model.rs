//! Domain types shared across the verification engine.
//!
//! Conventions used throughout:
//! - steps are 1-indexed (`step_index` in `[1, n]`);
//! - a predicted or labelled value of `0` means "solution fully correct",
//!   any other value is the 1-based index of the first erroneous step.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// A problem, its ordered solution steps, and the ground-truth first-error label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub case_id: String,
    pub problem: String,
    /// Solution steps, 1-indexed when referenced by `step_index` or `label`.
    pub steps: Vec<String>,
    /// 0 = fully correct, otherwise the 1-based index of the first wrong step.
    pub label: u32,
    /// Free-form provenance (source dataset, subset tag, generator model).
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

/// Violation of a [`VerificationCase`] invariant.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("case has no steps")]
    NoSteps,
    #[error("step {0} is empty")]
    EmptyStep(usize),
    #[error("label {label} out of range for {steps} steps")]
    LabelOutOfRange { label: u32, steps: usize },
}

impl VerificationCase {
    /// Check the structural invariants: non-empty steps and `0 <= label <= n`.
    pub fn validate(&self) -> Result<(), CaseError> {
        if self.steps.is_empty() {
            return Err(CaseError::NoSteps);
        }
        if let Some(i) = self.steps.iter().position(|s| s.trim().is_empty()) {
            return Err(CaseError::EmptyStep(i + 1));
        }
        if self.label as usize > self.steps.len() {
            return Err(CaseError::LabelOutOfRange {
                label: self.label,
                steps: self.steps.len(),
            });
        }
        Ok(())
    }

    pub fn step_count(&self) -> u32 {
        self.steps.len() as u32
    }

    /// Subset tag when the case carries one (e.g. a benchmark split name).
    pub fn subset(&self) -> Option<&str> {
        self.metadata.get("subset").map(String::as_str)
    }
}

/// One atomic, independently checkable claim extracted from a solution step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub node_id: String,
    /// The claim text judged by the verifier.
    pub assertion: String,
    /// 1-based index of the owning solution step.
    pub step_index: u32,
    /// 1-based position of this assertion within its step.
    pub ordinal_in_step: u32,
}

/// Shape of the dependency structure over nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    /// Edges form a single path visiting every node once.
    LinearChain,
    /// Single-source, single-sink directed acyclic graph.
    Dag,
}

/// Atomic assertion nodes plus dependency edges for one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeGraph {
    pub nodes: Vec<Node>,
    /// `(from, to)` pairs: `to` may only be verified after `from`.
    pub edges: Vec<(String, String)>,
    pub structure_kind: StructureKind,
}

impl NodeGraph {
    pub fn node(&self, node_id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.node_id == node_id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// A single binary judgment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect,
}

/// Rule used to collapse `k` votes into one verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyStrategy {
    MajorityVote,
    OneVoteVeto,
}

/// A node's aggregated outcome together with the raw votes behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeVerdict {
    pub node_id: String,
    /// Raw judgments ordered by sample index (not completion time).
    pub votes: Vec<Verdict>,
    pub aggregated: Verdict,
    pub strategy: ConsistencyStrategy,
    /// Full rationales, present only in reasoning mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationales: Option<Vec<String>>,
}

/// Token accounting across the completion calls of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub call_count: u64,
    /// Largest single-completion length seen, in tokens.
    pub max_completion_len: u64,
}

impl TokenUsage {
    /// Fold one completion's usage into the ledger.
    pub fn record(&mut self, prompt_tokens: u64, completion_tokens: u64) {
        self.prompt_tokens += prompt_tokens;
        self.completion_tokens += completion_tokens;
        self.call_count += 1;
        self.max_completion_len = self.max_completion_len.max(completion_tokens);
    }

    /// Fold another ledger into this one.
    pub fn merge(&mut self, other: &TokenUsage) {
        self.prompt_tokens += other.prompt_tokens;
        self.completion_tokens += other.completion_tokens;
        self.call_count += other.call_count;
        self.max_completion_len = self.max_completion_len.max(other.max_completion_len);
    }
}

/// Outcome of verifying one case: the first-error step (0 = all correct),
/// the per-node trace in verification order, and the token bill.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub case_id: String,
    /// 0 when every node verified correct, else the flagged step index.
    pub predicted: u32,
    /// Node verdicts for the nodes actually visited, in verification order.
    pub trace: Vec<NodeVerdict>,
    pub usage: TokenUsage,
    /// e.g. `ncv@3-binary-vote`, `e2e-greedy`.
    pub method_tag: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn case(steps: &[&str], label: u32) -> VerificationCase {
        VerificationCase {
            case_id: "c1".to_string(),
            problem: "p".to_string(),
            steps: steps.iter().map(|s| s.to_string()).collect(),
            label,
            metadata: BTreeMap::new(),
        }
    }

    #[test]
    fn case_validation() {
        assert!(case(&["a", "b"], 0).validate().is_ok());
        assert!(case(&["a", "b"], 2).validate().is_ok());
        assert_eq!(case(&[], 0).validate(), Err(CaseError::NoSteps));
        assert_eq!(case(&["a", "  "], 0).validate(), Err(CaseError::EmptyStep(2)));
        assert_eq!(
            case(&["a", "b"], 3).validate(),
            Err(CaseError::LabelOutOfRange { label: 3, steps: 2 })
        );
    }

    #[test]
    fn usage_record_single_update() {
        let mut ledger = TokenUsage::default();
        ledger.record(10, 1);
        assert_eq!(
            ledger,
            TokenUsage { prompt_tokens: 10, completion_tokens: 1, call_count: 1, max_completion_len: 1 }
        );
    }

    #[test]
    fn usage_tracks_max_completion_len() {
        let mut ledger = TokenUsage::default();
        ledger.record(5, 1);
        ledger.record(5, 3);
        assert_eq!(ledger.max_completion_len, 3);
        assert_eq!(ledger.completion_tokens, 4);
    }

    #[test]
    fn usage_sums_across_calls() {
        let mut ledger = TokenUsage::default();
        for _ in 0..3 {
            ledger.record(7, 4);
        }
        assert_eq!(ledger.completion_tokens, 12);
        assert_eq!(ledger.call_count, 3);
        assert_eq!(ledger.max_completion_len, 4);
    }

    #[test]
    fn usage_merge_matches_sequential_record() {
        let mut a = TokenUsage::default();
        a.record(3, 2);
        let mut b = TokenUsage::default();
        b.record(4, 7);
        b.record(1, 1);
        let mut merged = a;
        merged.merge(&b);
        let mut expect = TokenUsage::default();
        expect.record(3, 2);
        expect.record(4, 7);
        expect.record(1, 1);
        assert_eq!(merged, expect);
    }

    #[test]
    fn verdict_serde_names() {
        assert_eq!(serde_json::to_string(&Verdict::Correct).unwrap(), "\"correct\"");
        assert_eq!(
            serde_json::to_string(&ConsistencyStrategy::OneVoteVeto).unwrap(),
            "\"one_vote_veto\""
        );
        assert_eq!(
            serde_json::to_string(&StructureKind::LinearChain).unwrap(),
            "\"linear_chain\""
        );
    }

    #[test]
    fn subset_comes_from_metadata() {
        let mut c = case(&["a"], 0);
        assert_eq!(c.subset(), None);
        c.metadata.insert("subset".to_string(), "gsm8k".to_string());
        assert_eq!(c.subset(), Some("gsm8k"));
    }
}
