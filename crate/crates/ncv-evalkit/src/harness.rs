//! Dataset-scale orchestration: run a method over every case with bounded
//! concurrency, collect records, and write the result artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use futures::StreamExt;
use ncv_core::{
    validate_graph, CostReport, ExtractedIndex, MetricsReport, NodeGraph, TokenUsage,
    VerificationCase,
};

use crate::backend::CompletionBackend;
use crate::baselines::{run_e2e, BaselineConfig};
use crate::dataset::{records_to_jsonl, CaseRecord, RecordStatus, METADATA_SUBSET};
use crate::decomposer::{decompose_identity, decompose_llm, DecompositionConfig, DecompositionStrategy};
use crate::report::{cost_from_records, metrics_from_records};
use crate::verifier::{method_tag, run_ncv, RunSettings, VerifierConfig};

fn error_record(case: &VerificationCase, method_tag: &str, message: String) -> CaseRecord {
    CaseRecord {
        case_id: case.case_id.clone(),
        method_tag: method_tag.to_string(),
        status: RecordStatus::Error,
        predicted: None,
        label: Some(case.label),
        subset: case.metadata.get(METADATA_SUBSET).cloned(),
        usage: TokenUsage::default(),
        trace: vec![],
        chains: vec![],
        error: Some(message),
    }
}

async fn ncv_case_record(
    case: &VerificationCase,
    supplied: Option<&NodeGraph>,
    backend: &dyn CompletionBackend,
    config: &VerifierConfig,
    decomposition: &DecompositionConfig,
    settings: &RunSettings,
) -> CaseRecord {
    let tag = method_tag(config);

    let graph = match supplied {
        Some(graph) => graph.clone(),
        None => match decomposition.strategy {
            DecompositionStrategy::Identity => decompose_identity(case),
            DecompositionStrategy::LlmSplit => {
                match decompose_llm(case, backend, decomposition, &settings.model).await {
                    Ok((graph, _usage)) => graph,
                    Err(e) => return error_record(case, &tag, format!("decomposition failed: {e}")),
                }
            }
        },
    };

    let validation = validate_graph(&graph, case);
    if !validation.is_ok() {
        let detail: Vec<String> = validation.violations.iter().map(|v| v.to_string()).collect();
        return error_record(case, &tag, format!("invalid graph: {}", detail.join("; ")));
    }

    match run_ncv(case, &graph, backend, config, settings).await {
        Ok(result) => CaseRecord {
            case_id: result.case_id,
            method_tag: result.method_tag,
            status: RecordStatus::Ok,
            predicted: Some(result.predicted),
            label: Some(case.label),
            subset: case.metadata.get(METADATA_SUBSET).cloned(),
            usage: result.usage,
            trace: result.trace,
            chains: vec![],
            error: None,
        },
        Err(e) => error_record(case, &tag, e.to_string()),
    }
}

/// Verify every case node-wise. Record order always matches case order;
/// `concurrency` bounds how many cases are in flight at once.
pub async fn run_ncv_eval(
    cases: &[VerificationCase],
    graphs: Option<&BTreeMap<String, NodeGraph>>,
    backend: &dyn CompletionBackend,
    config: &VerifierConfig,
    decomposition: &DecompositionConfig,
    settings: &RunSettings,
    concurrency: usize,
) -> Vec<CaseRecord> {
    futures::stream::iter(cases.iter().map(|case| {
        let supplied = graphs.and_then(|map| map.get(case.case_id.as_str()));
        ncv_case_record(case, supplied, backend, config, decomposition, settings)
    }))
    .buffered(concurrency.max(1))
    .collect()
    .await
}

/// Run the E2E baseline over every case, preserving case order.
pub async fn run_e2e_eval(
    cases: &[VerificationCase],
    backend: &dyn CompletionBackend,
    config: &BaselineConfig,
    settings: &RunSettings,
    concurrency: usize,
) -> Vec<CaseRecord> {
    futures::stream::iter(cases.iter().map(|case| async move {
        match run_e2e(case, backend, config, settings).await {
            Ok(outcome) => {
                let (status, predicted) = match outcome.extracted {
                    ExtractedIndex::Index(value) => (RecordStatus::Ok, Some(value)),
                    ExtractedIndex::Unparsed => (RecordStatus::Unparsed, None),
                };
                CaseRecord {
                    case_id: outcome.case_id,
                    method_tag: outcome.method_tag,
                    status,
                    predicted,
                    label: Some(case.label),
                    subset: case.metadata.get(METADATA_SUBSET).cloned(),
                    usage: outcome.usage,
                    trace: vec![],
                    chains: outcome.chains,
                    error: None,
                }
            }
            Err(e) => error_record(case, &config.method_tag(), e.to_string()),
        }
    }))
    .buffered(concurrency.max(1))
    .collect()
    .await
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalArtifacts {
    pub results: PathBuf,
    pub metrics: PathBuf,
    pub cost_json: PathBuf,
    pub cost_csv: PathBuf,
}

/// Write the standard artifact set. All serialization is canonical (fixed
/// field order, no timestamps), so identical runs produce identical bytes.
pub fn write_artifacts(
    out_dir: &Path,
    records: &[CaseRecord],
    metrics: &MetricsReport,
    cost: &CostReport,
) -> std::io::Result<EvalArtifacts> {
    std::fs::create_dir_all(out_dir)?;
    let artifacts = EvalArtifacts {
        results: out_dir.join("results.jsonl"),
        metrics: out_dir.join("metrics.json"),
        cost_json: out_dir.join("cost.json"),
        cost_csv: out_dir.join("cost.csv"),
    };
    std::fs::write(&artifacts.results, records_to_jsonl(records))?;
    let mut metrics_json = serde_json::to_string_pretty(metrics).expect("metrics serialize");
    metrics_json.push('\n');
    std::fs::write(&artifacts.metrics, metrics_json)?;
    let mut cost_json = serde_json::to_string_pretty(cost).expect("cost serializes");
    cost_json.push('\n');
    std::fs::write(&artifacts.cost_json, cost_json)?;
    std::fs::write(&artifacts.cost_csv, crate::report::render_cost_csv(cost))?;
    Ok(artifacts)
}

/// Convenience: records -> (metrics, cost) with labels taken from records.
pub fn summarize(records: &[CaseRecord]) -> (MetricsReport, CostReport) {
    let metrics = metrics_from_records(records, None)
        .expect("eval records always carry labels");
    (metrics, cost_from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{ScriptedBackend, ScriptedBackendSpec, ScriptedRule};

    fn cases(n: usize) -> Vec<VerificationCase> {
        (0..n)
            .map(|i| VerificationCase {
                case_id: format!("case-{i}"),
                problem: format!("problem {i}"),
                steps: vec![format!("step {i}.1"), format!("step {i}.2")],
                label: 0,
                metadata: BTreeMap::new(),
            })
            .collect()
    }

    fn all_correct_backend() -> ScriptedBackend {
        ScriptedBackend::new(ScriptedBackendSpec {
            rules: vec![],
            default_response: "Correct".into(),
            tokens_per_char: 0.25,
        })
        .unwrap()
    }

    #[tokio::test]
    async fn record_order_matches_case_order_at_any_concurrency() {
        let cases = cases(7);
        let backend = all_correct_backend();
        for concurrency in [1, 3, 16] {
            let records = run_ncv_eval(
                &cases,
                None,
                &backend,
                &VerifierConfig::default(),
                &DecompositionConfig::default(),
                &RunSettings::default(),
                concurrency,
            )
            .await;
            let ids: Vec<&str> = records.iter().map(|r| r.case_id.as_str()).collect();
            let expected: Vec<String> = (0..7).map(|i| format!("case-{i}")).collect();
            assert_eq!(ids, expected, "concurrency {concurrency}");
            assert!(records.iter().all(|r| r.status == RecordStatus::Ok));
        }
    }

    #[tokio::test]
    async fn supplied_graph_overrides_decomposition() {
        let cases = cases(1);
        let mut graph = crate::decomposer::decompose_identity(&cases[0]);
        graph.nodes[0].assertion = "custom assertion".into();
        let graphs: BTreeMap<String, NodeGraph> =
            [("case-0".to_string(), graph)].into_iter().collect();

        let backend = ScriptedBackend::new(ScriptedBackendSpec {
            rules: vec![ScriptedRule {
                match_substring: "custom assertion".into(),
                responses: vec!["Incorrect".into()],
            }],
            default_response: "Correct".into(),
            tokens_per_char: 0.25,
        })
        .unwrap();

        let records = run_ncv_eval(
            &cases,
            Some(&graphs),
            &backend,
            &VerifierConfig::default(),
            &DecompositionConfig::default(),
            &RunSettings::default(),
            1,
        )
        .await;
        assert_eq!(records[0].predicted, Some(1));
    }

    #[tokio::test]
    async fn invalid_supplied_graph_yields_error_record() {
        let cases = cases(1);
        let mut graph = crate::decomposer::decompose_identity(&cases[0]);
        graph.edges.push(("n2".into(), "n1".into()));
        let graphs: BTreeMap<String, NodeGraph> =
            [("case-0".to_string(), graph)].into_iter().collect();
        let backend = all_correct_backend();
        let records = run_ncv_eval(
            &cases,
            Some(&graphs),
            &backend,
            &VerifierConfig::default(),
            &DecompositionConfig::default(),
            &RunSettings::default(),
            1,
        )
        .await;
        assert_eq!(records[0].status, RecordStatus::Error);
        assert!(records[0].error.as_ref().unwrap().contains("invalid graph"));
    }

    #[tokio::test]
    async fn e2e_eval_marks_unparsed_cases() {
        let cases = cases(2);
        let backend = ScriptedBackend::new(ScriptedBackendSpec {
            rules: vec![ScriptedRule {
                match_substring: "problem 0".into(),
                responses: vec!["\\boxed{0}".into()],
            }],
            default_response: "no verdict here".into(),
            tokens_per_char: 0.25,
        })
        .unwrap();
        let records = run_e2e_eval(
            &cases,
            &backend,
            &BaselineConfig::greedy(),
            &RunSettings::default(),
            2,
        )
        .await;
        assert_eq!(records[0].status, RecordStatus::Ok);
        assert_eq!(records[0].predicted, Some(0));
        assert_eq!(records[1].status, RecordStatus::Unparsed);
        assert_eq!(records[1].predicted, None);
    }

    #[tokio::test]
    async fn artifacts_are_written_and_reload() {
        let cases = cases(2);
        let backend = all_correct_backend();
        let records = run_ncv_eval(
            &cases,
            None,
            &backend,
            &VerifierConfig::default(),
            &DecompositionConfig::default(),
            &RunSettings::default(),
            1,
        )
        .await;
        let (metrics, cost) = summarize(&records);
        let dir = tempfile::tempdir().unwrap();
        let artifacts = write_artifacts(dir.path(), &records, &metrics, &cost).unwrap();
        let reloaded = crate::dataset::load_records(&artifacts.results).unwrap();
        assert_eq!(reloaded, records);
        let metrics_text = std::fs::read_to_string(&artifacts.metrics).unwrap();
        assert!(metrics_text.contains("correct_accuracy"));
        let csv = std::fs::read_to_string(&artifacts.cost_csv).unwrap();
        assert!(csv.contains("ncv@3-binary-vote"));
    }
}
