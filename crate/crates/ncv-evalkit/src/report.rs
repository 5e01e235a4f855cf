//! Scoring of persisted result records and plain-text/CSV rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ncv_core::{
    cost_report, score_cases, CostReport, MetricsReport, ScoredCase, TokenUsage,
    VerificationCase,
};

use crate::dataset::{CaseRecord, RecordStatus};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("record {case_id} carries no label and none was supplied")]
    MissingLabel { case_id: String },
    #[error("record {case_id} does not match any dataset case")]
    UnknownCase { case_id: String },
}

/// Reduce records to scoreable cases. Labels and subsets come from the
/// record itself, falling back to `dataset` when provided.
pub fn scored_cases_from_records(
    records: &[CaseRecord],
    dataset: Option<&BTreeMap<String, &VerificationCase>>,
) -> Result<Vec<ScoredCase>, ScoreError> {
    records
        .iter()
        .map(|record| {
            let joined = match dataset {
                Some(map) => Some(map.get(record.case_id.as_str()).copied().ok_or_else(|| {
                    ScoreError::UnknownCase { case_id: record.case_id.clone() }
                })?),
                None => None,
            };
            let label = record
                .label
                .or_else(|| joined.map(|c| c.label))
                .ok_or_else(|| ScoreError::MissingLabel { case_id: record.case_id.clone() })?;
            let subset = record
                .subset
                .clone()
                .or_else(|| joined.and_then(|c| c.subset().map(str::to_string)));
            Ok(ScoredCase {
                label,
                predicted: record.predicted,
                unscored: record.status == RecordStatus::Error,
                subset,
            })
        })
        .collect()
}

pub fn metrics_from_records(
    records: &[CaseRecord],
    dataset: Option<&BTreeMap<String, &VerificationCase>>,
) -> Result<MetricsReport, ScoreError> {
    Ok(score_cases(&scored_cases_from_records(records, dataset)?))
}

/// Group usage by method tag (first-seen order) and summarize.
pub fn cost_from_records(records: &[CaseRecord]) -> CostReport {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<TokenUsage>> = BTreeMap::new();
    for record in records {
        if !groups.contains_key(&record.method_tag) {
            order.push(record.method_tag.clone());
        }
        groups.entry(record.method_tag.clone()).or_default().push(record.usage);
    }
    let grouped: Vec<(String, Vec<TokenUsage>)> = order
        .into_iter()
        .map(|tag| {
            let usages = groups.remove(&tag).expect("tag collected above");
            (tag, usages)
        })
        .collect();
    cost_report(&grouped)
}

fn metric_row(out: &mut String, name: &str, block: &ncv_core::metrics::AccuracyBlock) {
    let _ = writeln!(
        out,
        "{name:<16} {:>8.2} {:>8.2} {:>8.2} {:>6} {:>6} {:>9}",
        block.correct_accuracy,
        block.error_accuracy,
        block.f1,
        block.n_correct_cases,
        block.n_error_cases,
        block.n_unscored,
    );
}

/// Fixed-width table over subsets plus the overall row.
pub fn render_metrics_text(report: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>8} {:>8} {:>8} {:>6} {:>6} {:>9}",
        "subset", "correct", "error", "f1", "n_ok", "n_err", "unscored"
    );
    for subset in &report.per_subset {
        metric_row(&mut out, &subset.subset, &subset.block);
    }
    metric_row(&mut out, "(overall)", &report.overall);
    if let Some(avg) = report.avg_f1_across_subsets {
        let _ = writeln!(out, "avg f1 across subsets: {avg:.2}");
    }
    out
}

pub fn render_cost_text(report: &CostReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>7} {:>16} {:>15} {:>8}",
        "method", "cases", "avg_compl_tokens", "avg_calls/case", "max_len"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:<20} {:>7} {:>16.2} {:>15.2} {:>8}",
            row.method_tag, row.n_cases, row.avg_tokens_per_case, row.avg_calls_per_case,
            row.max_completion_len,
        );
    }
    out
}

pub fn render_cost_csv(report: &CostReport) -> String {
    let mut out = String::from("method,n_cases,avg_tokens_per_case,avg_calls_per_case,max_completion_len\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.method_tag, row.n_cases, row.avg_tokens_per_case, row.avg_calls_per_case,
            row.max_completion_len,
        );
    }
    out
}
