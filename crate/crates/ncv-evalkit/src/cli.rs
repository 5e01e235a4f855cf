//! Command-line surface. Exit codes: 0 success, 2 usage (from the parser),
//! 3 configuration, 4 data files, 5 backend/verification failures, 1 other.

use std::collections::BTreeMap;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncv_core::{ConsistencyStrategy, NodeGraph, VerificationCase};

use crate::backend::{CompletionBackend, HttpBackend, ScriptedBackend};
use crate::config::{self, CliOverrides, ConfigError, FileConfig};
use crate::dataset::{
    self, load_dataset, load_graphs, load_records, save_graphs, DatasetError, GraphRecord,
};
use crate::decomposer::{decompose_identity, decompose_llm, DecompositionStrategy};
use crate::harness::{run_e2e_eval, run_ncv_eval, summarize, write_artifacts};
use crate::report::{self, cost_from_records, metrics_from_records, ScoreError};
use crate::verifier::{run_ncv, RunSettings, VerifyMode};

pub mod exit_codes {
    pub const CONFIG: i32 = 3;
    pub const DATA: i32 = 4;
    pub const BACKEND: i32 = 5;
    pub const OTHER: i32 = 1;
}

#[derive(Debug, Parser)]
#[command(
    name = "ncv",
    version,
    about = "Node-wise consistency verification of step-by-step solutions"
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Binary,
    Cot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Vote,
    Veto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ncv,
    E2eGreedy,
    E2eVote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeArg {
    Identity,
    Llm,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Chat-completions server root, e.g. http://localhost:8000
    #[arg(long, global = true, value_name = "URL")]
    pub backend_url: Option<String>,
    /// Scripted-backend spec file (offline runs; overrides --backend-url)
    #[arg(long, global = true, value_name = "FILE")]
    pub scripted: Option<PathBuf>,
    /// Model name sent with every request
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Node verification mode
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Samples per node (NCV) or chains (baselines)
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Vote aggregation strategy
    #[arg(long, global = true, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// TOML config file; flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory for result artifacts
    #[arg(long, global = true, value_name = "DIR", default_value = "ncv-out")]
    pub out: PathBuf,
    /// Cases verified in parallel
    #[arg(long, global = true)]
    pub concurrency: Option<usize>,
    /// Base seed forwarded (derived per sample) to the backend
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify one case (JSON on stdin or --input) and print the result
    Verify {
        /// File with a single case record; stdin when omitted
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Node-graph file overriding the built-in decomposition
        #[arg(long, value_name = "FILE")]
        graphs: Option<PathBuf>,
    },
    /// Run a method over a dataset and write metrics + cost artifacts
    Eval {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value = "ncv")]
        method: MethodArg,
        /// Node-graph file; cases without an entry use the decomposer
        #[arg(long, value_name = "FILE")]
        graphs: Option<PathBuf>,
    },
    /// Run the end-to-end baseline (k = 1 greedy, k > 1 voted)
    Baseline {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
    },
    /// Decompose every case and write a node-graph file
    Decompose {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        /// Decomposition strategy (the global --strategy picks vote/veto)
        #[arg(long, value_enum)]
        decomposer: Option<DecomposeArg>,
    },
    /// Re-score persisted results without touching any backend
    Score {
        #[arg(long, value_name = "FILE")]
        results: PathBuf,
        /// Dataset to join labels/subsets from, for records lacking them
        #[arg(long, value_name = "FILE")]
        dataset: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Data(#[from] DatasetError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Backend(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit_codes::CONFIG,
            CliError::Data(_) | CliError::Score(_) | CliError::Input(_) => exit_codes::DATA,
            CliError::Backend(_) => exit_codes::BACKEND,
            CliError::Output(_) => exit_codes::OTHER,
        }
    }
}

struct Resolved {
    file: FileConfig,
    backend: Arc<dyn CompletionBackend>,
    settings: RunSettings,
    concurrency: usize,
    out: PathBuf,
}

fn resolve(globals: &GlobalArgs) -> Result<Resolved, CliError> {
    let file = match &globals.config {
        Some(path) => config::load_config(path)?,
        None => FileConfig::default(),
    };

    let scripted_path = globals.scripted.clone().or_else(|| file.scripted_spec.clone());
    let backend: Arc<dyn CompletionBackend> = match scripted_path {
        Some(path) => Arc::new(
            ScriptedBackend::from_file(&path).map_err(|e| CliError::Input(e.to_string()))?,
        ),
        None => Arc::new(
            HttpBackend::new(file.http_config(globals.backend_url.as_deref()))
                .map_err(|e| CliError::Backend(e.to_string()))?,
        ),
    };

    let settings = RunSettings {
        model: globals
            .model
            .clone()
            .or_else(|| file.model.clone())
            .unwrap_or_else(|| "default".into()),
        base_seed: globals.seed.or(file.seed),
    };
    let concurrency = globals.concurrency.or(file.concurrency).unwrap_or(1);
    Ok(Resolved { backend, settings, concurrency, out: globals.out.clone(), file })
}

fn cli_overrides(globals: &GlobalArgs) -> CliOverrides {
    CliOverrides {
        mode: globals.mode.map(|m| match m {
            ModeArg::Binary => VerifyMode::Binary,
            ModeArg::Cot => VerifyMode::Reasoning,
        }),
        k: globals.k,
        strategy: globals.strategy.map(|s| match s {
            StrategyArg::Vote => ConsistencyStrategy::MajorityVote,
            StrategyArg::Veto => ConsistencyStrategy::OneVoteVeto,
        }),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Data(DatasetError::Io { path: path.display().to_string(), source: e })
        }),
        None => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            Ok(buffer)
        }
    }
}

async fn graph_for_case(
    case: &VerificationCase,
    graphs: Option<&BTreeMap<String, NodeGraph>>,
    resolved: &Resolved,
) -> Result<NodeGraph, CliError> {
    if let Some(graph) = graphs.and_then(|map| map.get(case.case_id.as_str())) {
        return Ok(graph.clone());
    }
    let decomposition = resolved.file.decomposition_config()?;
    match decomposition.strategy {
        DecompositionStrategy::Identity => Ok(decompose_identity(case)),
        DecompositionStrategy::LlmSplit => {
            let (graph, _usage) =
                decompose_llm(case, resolved.backend.as_ref(), &decomposition, &resolved.settings.model)
                    .await
                    .map_err(|e| CliError::Backend(e.to_string()))?;
            Ok(graph)
        }
    }
}

async fn cmd_verify(
    globals: &GlobalArgs,
    input: Option<&PathBuf>,
    graphs_path: Option<&PathBuf>,
) -> Result<(), CliError> {
    let resolved = resolve(globals)?;
    let text = read_input(input)?;
    let (case, has_label) =
        dataset::parse_single_case(text.trim()).map_err(CliError::Input)?;

    let graphs = match graphs_path {
        Some(path) => Some(load_graphs(path)?),
        None => None,
    };
    let graph = graph_for_case(&case, graphs.as_ref(), &resolved).await?;

    let config = resolved.file.verifier_config(&cli_overrides(globals))?;
    let result = run_ncv(&case, &graph, resolved.backend.as_ref(), &config, &resolved.settings)
        .await
        .map_err(|e| CliError::Backend(e.to_string()))?;

    if has_label {
        println!("{}", serde_json::to_string(&result).expect("result serializes"));
        eprintln!("predicted={} label={}", result.predicted, case.label);
    } else {
        println!("{}", result.predicted);
    }
    Ok(())
}

async fn cmd_eval(
    globals: &GlobalArgs,
    dataset_path: &Path,
    method: MethodArg,
    graphs_path: Option<&PathBuf>,
) -> Result<(), CliError> {
    let resolved = resolve(globals)?;
    let loaded = load_dataset(dataset_path)?;
    for diagnostic in &loaded.skipped {
        eprintln!("warning: {dataset_path:?} line {}: {}", diagnostic.line_no, diagnostic.message);
    }

    let records = match method {
        MethodArg::Ncv => {
            let graphs = match graphs_path {
                Some(path) => Some(load_graphs(path)?),
                None => None,
            };
            let config = resolved.file.verifier_config(&cli_overrides(globals))?;
            let decomposition = resolved.file.decomposition_config()?;
            run_ncv_eval(
                &loaded.cases,
                graphs.as_ref(),
                resolved.backend.as_ref(),
                &config,
                &decomposition,
                &resolved.settings,
                resolved.concurrency,
            )
            .await
        }
        MethodArg::E2eGreedy => {
            let config = resolved.file.baseline_config(Some(1))?;
            run_e2e_eval(
                &loaded.cases,
                resolved.backend.as_ref(),
                &config,
                &resolved.settings,
                resolved.concurrency,
            )
            .await
        }
        MethodArg::E2eVote => {
            let k = globals.k.or(resolved.file.baseline.k).unwrap_or(8).max(2);
            let config = resolved.file.baseline_config(Some(k))?;
            run_e2e_eval(
                &loaded.cases,
                resolved.backend.as_ref(),
                &config,
                &resolved.settings,
                resolved.concurrency,
            )
            .await
        }
    };

    let (metrics, cost) = summarize(&records);
    let artifacts = write_artifacts(&resolved.out, &records, &metrics, &cost)?;
    print!("{}", report::render_metrics_text(&metrics));
    print!("{}", report::render_cost_text(&cost));
    eprintln!("wrote {}", artifacts.results.display());
    Ok(())
}

async fn cmd_baseline(globals: &GlobalArgs, dataset_path: &Path) -> Result<(), CliError> {
    let resolved = resolve(globals)?;
    let loaded = load_dataset(dataset_path)?;
    let config = resolved.file.baseline_config(globals.k)?;
    let records = run_e2e_eval(
        &loaded.cases,
        resolved.backend.as_ref(),
        &config,
        &resolved.settings,
        resolved.concurrency,
    )
    .await;
    let (metrics, cost) = summarize(&records);
    let artifacts = write_artifacts(&resolved.out, &records, &metrics, &cost)?;
    print!("{}", report::render_metrics_text(&metrics));
    print!("{}", report::render_cost_text(&cost));
    eprintln!("wrote {}", artifacts.results.display());
    Ok(())
}

async fn cmd_decompose(
    globals: &GlobalArgs,
    dataset_path: &Path,
    decomposer: Option<DecomposeArg>,
) -> Result<(), CliError> {
    let resolved = resolve(globals)?;
    let loaded = load_dataset(dataset_path)?;
    let mut decomposition = resolved.file.decomposition_config()?;
    if let Some(strategy) = decomposer {
        decomposition.strategy = match strategy {
            DecomposeArg::Identity => DecompositionStrategy::Identity,
            DecomposeArg::Llm => DecompositionStrategy::LlmSplit,
        };
    }

    let mut records = Vec::new();
    for case in &loaded.cases {
        let graph = match decomposition.strategy {
            DecompositionStrategy::Identity => decompose_identity(case),
            DecompositionStrategy::LlmSplit => {
                decompose_llm(case, resolved.backend.as_ref(), &decomposition, &resolved.settings.model)
                    .await
                    .map_err(|e| CliError::Backend(e.to_string()))?
                    .0
            }
        };
        records.push(GraphRecord { case_id: case.case_id.clone(), graph });
    }

    std::fs::create_dir_all(&resolved.out)?;
    let path = resolved.out.join("graphs.jsonl");
    save_graphs(&path, &records)?;
    let nodes: usize = records.iter().map(|r| r.graph.node_count()).sum();
    println!("{} cases, {} nodes -> {}", records.len(), nodes, path.display());
    Ok(())
}

fn cmd_score(results_path: &Path, dataset_path: Option<&PathBuf>) -> Result<(), CliError> {
    let records = load_records(results_path)?;
    let loaded = match dataset_path {
        Some(path) => Some(load_dataset(path)?),
        None => None,
    };
    let by_id: Option<BTreeMap<String, &VerificationCase>> = loaded
        .as_ref()
        .map(|l| l.cases.iter().map(|c| (c.case_id.clone(), c)).collect());

    let metrics = metrics_from_records(&records, by_id.as_ref())?;
    let cost = cost_from_records(&records);
    print!("{}", report::render_metrics_text(&metrics));
    print!("{}", report::render_cost_text(&cost));
    Ok(())
}

/// Execute a parsed command line.
pub async fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Verify { input, graphs } => {
            cmd_verify(&cli.globals, input.as_ref(), graphs.as_ref()).await
        }
        Command::Eval { dataset, method, graphs } => {
            cmd_eval(&cli.globals, dataset, *method, graphs.as_ref()).await
        }
        Command::Baseline { dataset } => cmd_baseline(&cli.globals, dataset).await,
        Command::Decompose { dataset, decomposer } => {
            cmd_decompose(&cli.globals, dataset, *decomposer).await
        }
        Command::Score { results, dataset } => cmd_score(results, dataset.as_ref()),
    }
}
