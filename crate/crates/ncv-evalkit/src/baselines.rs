//! End-to-end chain-of-thought baselines: one greedy verification pass over
//! the whole solution, or k sampled chains with index-level majority voting.

use std::collections::BTreeMap;

use ncv_core::{
    extract_index, fill_placeholders, render_numbered, ExtractedIndex, PromptError, TokenUsage,
    VerificationCase, PH_PROBLEM, PH_STEPS,
};
use serde::{Deserialize, Serialize};

use crate::backend::{
    record_usage, BackendError, ChatMessage, CompletionBackend, CompletionRequest,
};
use crate::verifier::RunSettings;

/// Default whole-solution verification prompt shipped with the crate.
pub const E2E_VERIFY_TEMPLATE: &str = include_str!("../prompts/e2e_verify_v1.txt");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    /// Chains to sample; 1 = greedy.
    pub k: u32,
    pub max_completion_tokens: u32,
    pub temperature: f64,
    pub prompt_template: String,
    /// Break vote ties toward the smallest index (earliest disputed step).
    pub smallest_index_wins: bool,
}

impl BaselineConfig {
    /// Single deterministic chain.
    pub fn greedy() -> Self {
        Self {
            k: 1,
            max_completion_tokens: 1024,
            temperature: 0.0,
            prompt_template: E2E_VERIFY_TEMPLATE.to_string(),
            smallest_index_wins: true,
        }
    }

    /// k sampled chains with index-level majority voting.
    pub fn vote(k: u32) -> Self {
        Self { k, temperature: 0.7, ..Self::greedy() }
    }

    pub fn method_tag(&self) -> String {
        if self.k <= 1 {
            "e2e-greedy".to_string()
        } else {
            format!("e2e-vote@{}", self.k)
        }
    }
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self::greedy()
    }
}

/// One chain's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub extracted: ExtractedIndex,
    pub raw_text: String,
}

/// A full baseline run over one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineOutcome {
    pub case_id: String,
    pub method_tag: String,
    /// Voted index; `Unparsed` when no chain produced a usable index.
    pub extracted: ExtractedIndex,
    pub chains: Vec<ChainOutcome>,
    /// Chains lost to backend errors (tolerated while at least one survives).
    pub failed_chains: u32,
    pub usage: TokenUsage,
}

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("all {attempted} chains failed; first error: {first}")]
    AllChainsFailed { attempted: u32, first: BackendError },
}

fn render_e2e_prompt(case: &VerificationCase, template: &str) -> Result<String, PromptError> {
    let steps = render_numbered(&case.steps);
    fill_placeholders(
        template,
        &[(PH_PROBLEM, case.problem.as_str()), (PH_STEPS, steps.as_str())],
    )
}

/// Majority over parsed indices; `Unparsed` entries do not vote. Ties resolve
/// to the smallest index when configured, otherwise the largest.
pub fn vote_indices(indices: &[ExtractedIndex], smallest_index_wins: bool) -> ExtractedIndex {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for index in indices {
        if let ExtractedIndex::Index(value) = index {
            *counts.entry(*value).or_default() += 1;
        }
    }
    // Ascending key order makes `>` keep the smallest index among ties.
    let mut best: Option<(u32, usize)> = None;
    for (value, count) in counts {
        let better = match best {
            None => true,
            Some((_, best_count)) => {
                count > best_count || (!smallest_index_wins && count == best_count)
            }
        };
        if better {
            best = Some((value, count));
        }
    }
    match best {
        Some((value, _)) => ExtractedIndex::Index(value),
        None => ExtractedIndex::Unparsed,
    }
}

async fn run_chain(
    case: &VerificationCase,
    prompt: &str,
    chain: u32,
    backend: &dyn CompletionBackend,
    config: &BaselineConfig,
    settings: &RunSettings,
) -> Result<(ChainOutcome, TokenUsage), BackendError> {
    let request = CompletionRequest {
        model: settings.model.clone(),
        messages: vec![ChatMessage::user(prompt)],
        max_completion_tokens: config.max_completion_tokens,
        temperature: config.temperature,
        sample_seed: settings.base_seed.map(|b| b.wrapping_add(u64::from(chain))),
    };
    let response = backend.complete(&request).await?;
    let mut usage = TokenUsage::default();
    record_usage(&mut usage, &response);
    let extracted = extract_index(&response.text, case.step_count());
    Ok((ChainOutcome { extracted, raw_text: response.text }, usage))
}

/// Run k chains (k = 1 is the greedy baseline) and vote over the extracted
/// indices. Individual chain failures are tolerated while any chain
/// survives; the vote is over survivors only.
pub async fn run_e2e(
    case: &VerificationCase,
    backend: &dyn CompletionBackend,
    config: &BaselineConfig,
    settings: &RunSettings,
) -> Result<BaselineOutcome, BaselineError> {
    let prompt = render_e2e_prompt(case, &config.prompt_template)?;

    let attempts = futures::future::join_all(
        (0..config.k.max(1)).map(|chain| run_chain(case, &prompt, chain, backend, config, settings)),
    )
    .await;

    let mut chains = Vec::new();
    let mut usage = TokenUsage::default();
    let mut failed = 0u32;
    let mut first_error = None;
    for attempt in attempts {
        match attempt {
            Ok((chain, chain_usage)) => {
                usage.merge(&chain_usage);
                chains.push(chain);
            }
            Err(error) => {
                failed += 1;
                first_error.get_or_insert(error);
            }
        }
    }
    if chains.is_empty() {
        return Err(BaselineError::AllChainsFailed {
            attempted: config.k.max(1),
            first: first_error.expect("no chains implies at least one error"),
        });
    }

    let indices: Vec<ExtractedIndex> = chains.iter().map(|c| c.extracted).collect();
    let extracted = vote_indices(&indices, config.smallest_index_wins);

    Ok(BaselineOutcome {
        case_id: case.case_id.clone(),
        method_tag: config.method_tag(),
        extracted,
        chains,
        failed_chains: failed,
        usage,
    })
}
