//! Evaluation toolkit around [`ncv_core`]: completion backends, the node-wise
//! verifier and end-to-end baselines, dataset IO, metrics reporting, and the
//! `ncv` command-line interface.

pub mod backend;
pub mod baselines;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod decomposer;
pub mod harness;
pub mod reference;
pub mod report;
pub mod verifier;

pub use backend::{
    BackendError, ChatMessage, CompletionBackend, CompletionRequest, CompletionResponse,
    FinishReason, HttpBackend, HttpBackendConfig, Role, ScriptedBackend, ScriptedBackendSpec,
    TokenCounts,
};
pub use baselines::{run_e2e, BaselineConfig, BaselineError, BaselineOutcome, ChainOutcome};
pub use config::{load_config, CliOverrides, ConfigError, FileConfig};
pub use dataset::{
    load_dataset, load_graphs, load_records, save_dataset, save_graphs, save_records, CaseRecord,
    DatasetError, GraphRecord, LoadReport, RecordStatus,
};
pub use decomposer::{
    decompose_identity, decompose_llm, DecompositionConfig, DecompositionStrategy,
};
pub use harness::{run_e2e_eval, run_ncv_eval, summarize, write_artifacts, EvalArtifacts};
pub use report::{cost_from_records, metrics_from_records, scored_cases_from_records, ScoreError};
pub use verifier::{
    run_ncv, verify_node, PromptTemplates, RunSettings, VerifierConfig, VerifyError, VerifyMode,
};
