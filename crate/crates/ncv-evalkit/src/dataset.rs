//! Line-delimited file formats: datasets, node-graph files, and per-case
//! result records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ncv_core::{NodeGraph, NodeVerdict, TokenUsage, VerificationCase};
use serde::{Deserialize, Serialize};

use crate::baselines::ChainOutcome;

pub const METADATA_SUBSET: &str = "subset";

/// External dataset record: `label` is −1 for fully-correct solutions,
/// otherwise the 0-based index of the first incorrect step.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExternalCase {
    id: IdValue,
    problem: String,
    steps: Vec<String>,
    label: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<String>,
}

/// Dataset ids appear both as strings and as bare integers in the wild.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum IdValue {
    Text(String),
    Number(i64),
}

impl IdValue {
    fn into_string(self) -> String {
        match self {
            IdValue::Text(s) => s,
            IdValue::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDiagnostic {
    pub line_no: usize,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct LoadReport {
    pub cases: Vec<VerificationCase>,
    /// Malformed lines, reported and skipped.
    pub skipped: Vec<LineDiagnostic>,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path} contains no usable records")]
    Empty { path: String },
    #[error("line {line_no}: {message}")]
    Record { line_no: usize, message: String },
}

fn io_err(path: &Path, source: std::io::Error) -> DatasetError {
    DatasetError::Io { path: path.display().to_string(), source }
}

fn external_to_case(record: ExternalCase) -> Result<VerificationCase, String> {
    let step_count = record.steps.len() as i64;
    let label = match record.label {
        -1 => 0u32,
        l if l >= 0 && l < step_count => (l + 1) as u32,
        l => return Err(format!("label {l} out of range for {step_count} steps")),
    };
    let mut metadata = BTreeMap::new();
    if let Some(subset) = record.subset {
        metadata.insert(METADATA_SUBSET.to_string(), subset);
    }
    let case = VerificationCase {
        case_id: record.id.into_string(),
        problem: record.problem,
        steps: record.steps,
        label,
        metadata,
    };
    case.validate().map_err(|e| e.to_string())?;
    Ok(case)
}

fn case_to_external(case: &VerificationCase) -> ExternalCase {
    ExternalCase {
        id: IdValue::Text(case.case_id.clone()),
        problem: case.problem.clone(),
        steps: case.steps.clone(),
        label: match case.label {
            0 => -1,
            l => i64::from(l) - 1,
        },
        subset: case.metadata.get(METADATA_SUBSET).cloned(),
    }
}

/// Load a dataset, translating the external label convention (−1 = correct,
/// else 0-based first error) to the internal one (0 = correct, else 1-based).
/// Malformed lines are skipped with a per-line diagnostic.
pub fn load_dataset(path: &Path) -> Result<LoadReport, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut report = LoadReport::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Result<ExternalCase, _> = serde_json::from_str(line);
        match parsed.map_err(|e| e.to_string()).and_then(external_to_case) {
            Ok(case) => report.cases.push(case),
            Err(message) => report.skipped.push(LineDiagnostic { line_no, message }),
        }
    }
    if report.cases.is_empty() {
        return Err(DatasetError::Empty { path: path.display().to_string() });
    }
    Ok(report)
}

/// Write cases back in the external convention. Inverse of [`load_dataset`]
/// for every case that loads cleanly.
pub fn save_dataset(path: &Path, cases: &[VerificationCase]) -> Result<(), DatasetError> {
    let mut out = String::new();
    for case in cases {
        let line = serde_json::to_string(&case_to_external(case))
            .expect("case serializes");
        writeln!(out, "{line}").expect("write to string");
    }
    std::fs::write(path, out)
        .map_err(|e| DatasetError::Write { path: path.display().to_string(), source: e })
}

/// Parse one ad-hoc case where `label` may be absent (interactive `verify`
/// input). Returns the case plus whether a label was present; label-free
/// input gets the placeholder label 0.
pub fn parse_single_case(json: &str) -> Result<(VerificationCase, bool), String> {
    #[derive(Deserialize)]
    struct LooseCase {
        #[serde(default)]
        id: Option<IdValue>,
        problem: String,
        steps: Vec<String>,
        #[serde(default)]
        label: Option<i64>,
        #[serde(default)]
        subset: Option<String>,
    }

    let loose: LooseCase = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let has_label = loose.label.is_some();
    let case = external_to_case(ExternalCase {
        id: loose.id.unwrap_or_else(|| IdValue::Text("adhoc".into())),
        problem: loose.problem,
        steps: loose.steps,
        label: loose.label.unwrap_or(-1),
        subset: loose.subset,
    })?;
    Ok((case, has_label))
}

/// One decomposition, keyed to its case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub case_id: String,
    #[serde(flatten)]
    pub graph: NodeGraph,
}

/// Load a node-graph file (one record per case).
pub fn load_graphs(path: &Path) -> Result<BTreeMap<String, NodeGraph>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut graphs = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: GraphRecord = serde_json::from_str(line)
            .map_err(|e| DatasetError::Record { line_no: i + 1, message: e.to_string() })?;
        graphs.insert(record.case_id, record.graph);
    }
    if graphs.is_empty() {
        return Err(DatasetError::Empty { path: path.display().to_string() });
    }
    Ok(graphs)
}

pub fn save_graphs(path: &Path, records: &[GraphRecord]) -> Result<(), DatasetError> {
    let mut out = String::new();
    for record in records {
        let line = serde_json::to_string(record).expect("graph serializes");
        writeln!(out, "{line}").expect("write to string");
    }
    std::fs::write(path, out)
        .map_err(|e| DatasetError::Write { path: path.display().to_string(), source: e })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    /// A prediction was produced.
    Ok,
    /// The method ran but no index could be extracted; scored as wrong.
    Unparsed,
    /// The backend failed; scored as wrong and counted separately.
    Error,
}

/// Persisted per-case outcome. Carries everything `score` needs so results
/// can be re-scored without touching any backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub method_tag: String,
    pub status: RecordStatus,
    /// Present iff status is `ok`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<u32>,
    /// Ground truth, when the input had one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<String>,
    pub usage: TokenUsage,
    /// Node-by-node verdicts (NCV runs).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<NodeVerdict>,
    /// Raw chains (baseline runs).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn load_records(path: &Path) -> Result<Vec<CaseRecord>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: CaseRecord = serde_json::from_str(line)
            .map_err(|e| DatasetError::Record { line_no: i + 1, message: e.to_string() })?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(DatasetError::Empty { path: path.display().to_string() });
    }
    Ok(records)
}

/// Serialize records as JSONL; field order is fixed by the struct, so equal
/// records always produce identical bytes.
pub fn records_to_jsonl(records: &[CaseRecord]) -> String {
    let mut out = String::new();
    for record in records {
        let line = serde_json::to_string(record).expect("record serializes");
        writeln!(out, "{line}").expect("write to string");
    }
    out
}

pub fn save_records(path: &Path, records: &[CaseRecord]) -> Result<(), DatasetError> {
    std::fs::write(path, records_to_jsonl(records))
        .map_err(|e| DatasetError::Write { path: path.display().to_string(), source: e })
}
