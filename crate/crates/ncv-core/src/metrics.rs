//! Evaluation metrics: correct accuracy, error-locating accuracy, F1, and
//! per-method token-cost summaries.
//!
//! All percentages are on a 0..=100 scale. F1 is the harmonic mean of the two
//! accuracies, the convention used by first-error-localization benchmarks.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::TokenUsage;

/// One case's outcome reduced to what scoring needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredCase {
    /// Ground truth: 0 = fully correct, else 1-based first-error step.
    pub label: u32,
    /// Predicted index; `None` when the method produced nothing scoreable
    /// (unparseable output or a backend failure). Always counted as wrong.
    pub predicted: Option<u32>,
    /// True when the case errored out before producing a prediction.
    pub unscored: bool,
    pub subset: Option<String>,
}

/// Accuracy triple over one set of cases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBlock {
    /// % of fully-correct cases predicted 0.
    pub correct_accuracy: f64,
    /// % of erroneous cases where the predicted index equals the label.
    pub error_accuracy: f64,
    /// Harmonic mean of the two accuracies.
    pub f1: f64,
    pub n_correct_cases: usize,
    pub n_error_cases: usize,
    pub n_unscored: usize,
}

/// Per-subset accuracy row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetMetrics {
    pub subset: String,
    #[serde(flatten)]
    pub block: AccuracyBlock,
}

/// Full metrics report over a result set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(flatten)]
    pub overall: AccuracyBlock,
    /// One row per subset tag, sorted by subset name; empty when untagged.
    pub per_subset: Vec<SubsetMetrics>,
    /// Arithmetic mean of the subset F1s; `None` without subset tags.
    pub avg_f1_across_subsets: Option<f64>,
}

/// Harmonic mean of two percentages; 0 when both are 0.
pub fn f1_score(correct_accuracy: f64, error_accuracy: f64) -> f64 {
    let sum = correct_accuracy + error_accuracy;
    if sum == 0.0 {
        0.0
    } else {
        2.0 * correct_accuracy * error_accuracy / sum
    }
}

fn accuracy_block<'a, I>(cases: I) -> AccuracyBlock
where
    I: Iterator<Item = &'a ScoredCase>,
{
    let mut n_correct = 0usize;
    let mut n_error = 0usize;
    let mut n_unscored = 0usize;
    let mut correct_hits = 0usize;
    let mut error_hits = 0usize;

    for case in cases {
        if case.unscored {
            n_unscored += 1;
        }
        if case.label == 0 {
            n_correct += 1;
            if case.predicted == Some(0) {
                correct_hits += 1;
            }
        } else {
            n_error += 1;
            if case.predicted == Some(case.label) {
                error_hits += 1;
            }
        }
    }

    let pct = |hits: usize, total: usize| {
        if total == 0 {
            0.0
        } else {
            100.0 * hits as f64 / total as f64
        }
    };
    let correct_accuracy = pct(correct_hits, n_correct);
    let error_accuracy = pct(error_hits, n_error);
    AccuracyBlock {
        correct_accuracy,
        error_accuracy,
        f1: f1_score(correct_accuracy, error_accuracy),
        n_correct_cases: n_correct,
        n_error_cases: n_error,
        n_unscored,
    }
}

/// Score a result set: overall accuracies plus a per-subset breakdown when
/// the cases carry subset tags. Order of the input does not matter.
pub fn score_cases(cases: &[ScoredCase]) -> MetricsReport {
    let overall = accuracy_block(cases.iter());

    let mut by_subset: BTreeMap<&str, Vec<&ScoredCase>> = BTreeMap::new();
    for case in cases {
        if let Some(subset) = &case.subset {
            by_subset.entry(subset.as_str()).or_default().push(case);
        }
    }

    let per_subset: Vec<SubsetMetrics> = by_subset
        .into_iter()
        .map(|(subset, group)| SubsetMetrics {
            subset: subset.to_string(),
            block: accuracy_block(group.into_iter()),
        })
        .collect();

    let avg_f1_across_subsets = if per_subset.is_empty() {
        None
    } else {
        Some(per_subset.iter().map(|s| s.block.f1).sum::<f64>() / per_subset.len() as f64)
    };

    MetricsReport { overall, per_subset, avg_f1_across_subsets }
}

/// Token-cost summary for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodCost {
    pub method_tag: String,
    pub n_cases: usize,
    /// Mean completion tokens per case.
    pub avg_tokens_per_case: f64,
    /// Mean completion calls per case.
    pub avg_calls_per_case: f64,
    /// Longest single completion seen across all cases, in tokens.
    pub max_completion_len: u64,
}

/// Cost comparison across methods, one row per method.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub rows: Vec<MethodCost>,
}

/// Summarize per-case usage grouped by method tag.
pub fn cost_report(per_method: &[(String, Vec<TokenUsage>)]) -> CostReport {
    let rows = per_method
        .iter()
        .map(|(method_tag, usages)| {
            let n = usages.len();
            let total_completion: u64 = usages.iter().map(|u| u.completion_tokens).sum();
            let total_calls: u64 = usages.iter().map(|u| u.call_count).sum();
            let max_len = usages.iter().map(|u| u.max_completion_len).max().unwrap_or(0);
            let avg = |total: u64| if n == 0 { 0.0 } else { total as f64 / n as f64 };
            MethodCost {
                method_tag: method_tag.clone(),
                n_cases: n,
                avg_tokens_per_case: avg(total_completion),
                avg_calls_per_case: avg(total_calls),
                max_completion_len: max_len,
            }
        })
        .collect();
    CostReport { rows }
}
