//! Sequential node-wise verification: walk the graph in structural order,
//! sample k verdicts per node, aggregate, stop at the first incorrect node.

use futures::future::try_join_all;
use ncv_core::{
    aggregate, build_prior_steps, parse_binary_output, parse_last_line_verdict,
    render_node_prompt, structural_sort, ConsistencyConfig, ConsistencyStrategy, Node,
    NodeGraph, NodeVerdict, PriorStepsContext, PromptError, TokenUsage, VerificationCase,
    VerificationResult, Verdict,
};
use serde::{Deserialize, Serialize};

use crate::backend::{
    BackendError, ChatMessage, CompletionBackend, CompletionRequest, TokenCounts,
};

/// Default node-verification prompts shipped with the crate.
pub const BINARY_NODE_TEMPLATE: &str = include_str!("../prompts/binary_node_v1.txt");
pub const REASONING_NODE_TEMPLATE: &str = include_str!("../prompts/reasoning_node_v1.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Verdict-only judgments capped at a few completion tokens.
    Binary,
    /// Full rationale first, verdict on the last line.
    Reasoning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplates {
    pub binary_node: String,
    pub reasoning_node: String,
}

impl Default for PromptTemplates {
    fn default() -> Self {
        Self {
            binary_node: BINARY_NODE_TEMPLATE.to_string(),
            reasoning_node: REASONING_NODE_TEMPLATE.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub mode: VerifyMode,
    pub consistency: ConsistencyConfig,
    pub binary_max_completion_tokens: u32,
    pub reasoning_max_completion_tokens: u32,
    pub temperature_binary: f64,
    pub temperature_reasoning: f64,
    pub templates: PromptTemplates,
    /// Extra attempts per sample when the output parses to no verdict;
    /// afterwards the sample counts as Incorrect.
    pub retry_on_unparseable: u32,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            mode: VerifyMode::Binary,
            consistency: ConsistencyConfig::default(),
            binary_max_completion_tokens: 4,
            reasoning_max_completion_tokens: 1024,
            temperature_binary: 0.7,
            temperature_reasoning: 0.0,
            templates: PromptTemplates::default(),
            retry_on_unparseable: 0,
        }
    }
}

/// Per-run knobs that are not part of the verification semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub model: String,
    /// When set, every sample gets a seed derived from (base, node, sample,
    /// attempt), so repeated runs issue identical request streams.
    pub base_seed: Option<u64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { model: "default".into(), base_seed: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("graph unusable: {0}")]
    InvalidGraph(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

/// Stable tag identifying a verification configuration in result records,
/// e.g. `ncv@3-binary-vote`.
pub fn method_tag(config: &VerifierConfig) -> String {
    let mode = match config.mode {
        VerifyMode::Binary => "binary",
        VerifyMode::Reasoning => "cot",
    };
    let strategy = match config.consistency.strategy {
        ConsistencyStrategy::MajorityVote => "vote",
        ConsistencyStrategy::OneVoteVeto => "veto",
    };
    format!("ncv@{}-{}-{}", config.consistency.k, mode, strategy)
}

/// FNV-1a over the seed-relevant identifiers; order-sensitive, collision
/// quality is irrelevant (seeds only need to be distinct and reproducible).
fn derive_seed(base: u64, node_id: &str, sample: u32, attempt: u32) -> u64 {
    let mut hash = 0xcbf29ce484222325u64 ^ base;
    for byte in node_id
        .bytes()
        .chain(sample.to_le_bytes())
        .chain(attempt.to_le_bytes())
    {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

struct SampledVote {
    verdict: Verdict,
    rationale: String,
    calls: Vec<TokenCounts>,
}

async fn sample_one(
    backend: &dyn CompletionBackend,
    prompt: &str,
    node_id: &str,
    sample: u32,
    config: &VerifierConfig,
    settings: &RunSettings,
) -> Result<SampledVote, BackendError> {
    let (max_tokens, temperature) = match config.mode {
        VerifyMode::Binary => (config.binary_max_completion_tokens, config.temperature_binary),
        VerifyMode::Reasoning => {
            (config.reasoning_max_completion_tokens, config.temperature_reasoning)
        }
    };

    let mut calls = Vec::new();
    let mut last_text = String::new();
    for attempt in 0..=config.retry_on_unparseable {
        let request = CompletionRequest {
            model: settings.model.clone(),
            messages: vec![ChatMessage::user(prompt)],
            max_completion_tokens: max_tokens,
            temperature,
            sample_seed: settings.base_seed.map(|b| derive_seed(b, node_id, sample, attempt)),
        };
        let response = backend.complete(&request).await?;
        calls.push(response.usage);
        let parsed = match config.mode {
            VerifyMode::Binary => parse_binary_output(&response.text),
            VerifyMode::Reasoning => parse_last_line_verdict(&response.text),
        };
        match parsed {
            Ok(verdict) => return Ok(SampledVote { verdict, rationale: response.text, calls }),
            Err(_) => last_text = response.text,
        }
    }
    // All attempts unparseable: conservative Incorrect.
    Ok(SampledVote { verdict: Verdict::Incorrect, rationale: last_text, calls })
}

/// Obtain k verdicts for one node and aggregate them. Votes are ordered by
/// sample index regardless of completion order.
pub async fn verify_node(
    node: &Node,
    context: &PriorStepsContext,
    backend: &dyn CompletionBackend,
    config: &VerifierConfig,
    settings: &RunSettings,
) -> Result<(NodeVerdict, TokenUsage), VerifyError> {
    let template = match config.mode {
        VerifyMode::Binary => &config.templates.binary_node,
        VerifyMode::Reasoning => &config.templates.reasoning_node,
    };
    let prompt = render_node_prompt(template, context, node)?;

    let samples = try_join_all(
        (0..config.consistency.k)
            .map(|sample| sample_one(backend, &prompt, &node.node_id, sample, config, settings)),
    )
    .await?;

    let votes: Vec<Verdict> = samples.iter().map(|s| s.verdict).collect();
    let aggregated = aggregate(&votes, &config.consistency)
        .expect("vote count equals k by construction");

    let mut usage = TokenUsage::default();
    for sample in &samples {
        for call in &sample.calls {
            usage.record(call.prompt_tokens, call.completion_tokens);
        }
    }

    let rationales = match config.mode {
        VerifyMode::Binary => None,
        VerifyMode::Reasoning => Some(samples.into_iter().map(|s| s.rationale).collect()),
    };

    let verdict = NodeVerdict {
        node_id: node.node_id.clone(),
        votes,
        aggregated,
        strategy: config.consistency.strategy,
        rationales,
    };
    Ok((verdict, usage))
}

/// Walk the graph in structural order and return the first erroneous step
/// index (0 when every node verifies). The trace covers exactly the nodes
/// visited; nodes after the first incorrect one are never queried.
pub async fn run_ncv(
    case: &VerificationCase,
    graph: &NodeGraph,
    backend: &dyn CompletionBackend,
    config: &VerifierConfig,
    settings: &RunSettings,
) -> Result<VerificationResult, VerifyError> {
    let order = structural_sort(graph).map_err(|e| VerifyError::InvalidGraph(e.to_string()))?;

    let mut usage = TokenUsage::default();
    let mut trace = Vec::new();
    let mut predicted = 0u32;

    for position in 0..order.len() {
        let node = graph
            .node(&order[position])
            .ok_or_else(|| VerifyError::InvalidGraph(format!("unknown node {}", order[position])))?;
        let context = build_prior_steps(graph, &order, position, &case.problem);
        let (verdict, node_usage) = verify_node(node, &context, backend, config, settings).await?;
        usage.merge(&node_usage);
        let is_incorrect = verdict.aggregated == Verdict::Incorrect;
        trace.push(verdict);
        if is_incorrect {
            predicted = node.step_index;
            break;
        }
    }

    Ok(VerificationResult {
        case_id: case.case_id.clone(),
        predicted,
        trace,
        usage,
        method_tag: method_tag(config),
    })
}
