//! Case-to-graph decomposition: one node per step, or an LLM-assisted split
//! of each step into atomic assertions.

use futures::future::try_join_all;
use ncv_core::{
    fill_placeholders, Node, NodeGraph, StructureKind, TokenUsage, VerificationCase, PH_PROBLEM,
    PH_STEP,
};
use serde::{Deserialize, Serialize};

use crate::backend::{
    record_usage, BackendError, ChatMessage, CompletionBackend, CompletionRequest,
};

/// Default splitter prompt shipped with the crate.
pub const SPLIT_STEP_TEMPLATE: &str = include_str!("../prompts/split_step_v1.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionStrategy {
    /// One node per step, assertion = verbatim step text.
    Identity,
    /// Ask the backend to split each step into atomic assertions.
    LlmSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionConfig {
    pub strategy: DecompositionStrategy,
    /// Upper bound on assertions kept per step (>= 1).
    pub max_nodes_per_step: u32,
    pub splitter_prompt_template: String,
    pub splitter_max_completion_tokens: u32,
    pub splitter_temperature: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self {
            strategy: DecompositionStrategy::Identity,
            max_nodes_per_step: 4,
            splitter_prompt_template: SPLIT_STEP_TEMPLATE.to_string(),
            splitter_max_completion_tokens: 512,
            splitter_temperature: 0.0,
        }
    }
}

/// Chain every step into a single-assertion node.
pub fn decompose_identity(case: &VerificationCase) -> NodeGraph {
    let nodes: Vec<Node> = case
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| Node {
            node_id: format!("n{}", i + 1),
            assertion: step.clone(),
            step_index: (i + 1) as u32,
            ordinal_in_step: 1,
        })
        .collect();
    let edges = nodes
        .windows(2)
        .map(|pair| (pair[0].node_id.clone(), pair[1].node_id.clone()))
        .collect();
    NodeGraph { nodes, edges, structure_kind: StructureKind::LinearChain }
}

/// Parse a numbered list ("1. claim" / "2) claim") into its items, in order.
fn parse_numbered_list(text: &str) -> Vec<String> {
    let mut items = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        let Some(rest) = line
            .strip_prefix(|c: char| c.is_ascii_digit())
            .map(|r| r.trim_start_matches(|c: char| c.is_ascii_digit()))
        else {
            continue;
        };
        let Some(body) = rest.strip_prefix(['.', ')']) else {
            continue;
        };
        let body = body.trim();
        if !body.is_empty() {
            items.push(body.to_string());
        }
    }
    items
}

/// Split every step through the backend and chain the resulting assertions.
/// A step whose splitter output yields no parseable claims falls back to a
/// single identity node; transport failures abort the whole decomposition.
pub async fn decompose_llm(
    case: &VerificationCase,
    backend: &dyn CompletionBackend,
    config: &DecompositionConfig,
    model: &str,
) -> Result<(NodeGraph, TokenUsage), BackendError> {
    let calls = case.steps.iter().map(|step| async move {
        let prompt = fill_placeholders(
            &config.splitter_prompt_template,
            &[(PH_PROBLEM, case.problem.as_str()), (PH_STEP, step.as_str())],
        )
        .map_err(|e| BackendError::MalformedResponse(e.to_string()))?;
        let request = CompletionRequest {
            model: model.to_string(),
            messages: vec![ChatMessage::user(prompt)],
            max_completion_tokens: config.splitter_max_completion_tokens,
            temperature: config.splitter_temperature,
            sample_seed: None,
        };
        backend.complete(&request).await
    });
    let responses = try_join_all(calls).await?;

    let mut usage = TokenUsage::default();
    let mut nodes = Vec::new();
    for (i, (step, response)) in case.steps.iter().zip(&responses).enumerate() {
        record_usage(&mut usage, response);
        let mut assertions = parse_numbered_list(&response.text);
        assertions.truncate(config.max_nodes_per_step as usize);
        if assertions.is_empty() {
            assertions.push(step.clone());
        }
        for (j, assertion) in assertions.into_iter().enumerate() {
            nodes.push(Node {
                node_id: format!("n{}_{}", i + 1, j + 1),
                assertion,
                step_index: (i + 1) as u32,
                ordinal_in_step: (j + 1) as u32,
            });
        }
    }

    let edges = nodes
        .windows(2)
        .map(|pair| (pair[0].node_id.clone(), pair[1].node_id.clone()))
        .collect();
    Ok((NodeGraph { nodes, edges, structure_kind: StructureKind::LinearChain }, usage))
}
