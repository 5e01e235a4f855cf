//! Conditioning context and prompt assembly for node verification.
//!
//! Templates are plain text with `{placeholder}` markers; they are data, not
//! code, and ship as files in the driver crate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{Node, NodeGraph};

/// Placeholder names shared by the engine and its default templates.
pub const PH_PROBLEM: &str = "{problem}";
pub const PH_PRIOR_STEPS: &str = "{prior_steps}";
pub const PH_ASSERTION: &str = "{assertion}";
pub const PH_STEPS: &str = "{steps}";
pub const PH_STEP: &str = "{step}";

/// The problem plus the assertions already verified correct, in
/// verification order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorStepsContext {
    pub problem: String,
    pub verified_assertions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("template is missing required placeholder {0}")]
    MissingPlaceholder(String),
}

/// Context for the node at `order[position]`: the problem and the assertions
/// of every node before it in `order`. The caller guarantees those nodes were
/// verified correct (the sequential walk stops at the first incorrect node).
pub fn build_prior_steps(
    graph: &NodeGraph,
    order: &[String],
    position: usize,
    problem: &str,
) -> PriorStepsContext {
    let verified_assertions = order[..position.min(order.len())]
        .iter()
        .filter_map(|id| graph.node(id))
        .map(|n| n.assertion.clone())
        .collect();
    PriorStepsContext { problem: problem.to_string(), verified_assertions }
}

/// Render items as a numbered list, or `(none)` when empty.
pub fn render_numbered(items: &[String]) -> String {
    if items.is_empty() {
        return "(none)".to_string();
    }
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&alloc::format!("{}. {}", i + 1, item));
    }
    out
}

/// Substitute every `(placeholder, value)` pair into `template`.
/// Errors if any required placeholder is absent; substitution is exact text
/// replacement with no truncation.
pub fn fill_placeholders(
    template: &str,
    pairs: &[(&str, &str)],
) -> Result<String, PromptError> {
    for (name, _) in pairs {
        if !template.contains(name) {
            return Err(PromptError::MissingPlaceholder((*name).to_string()));
        }
    }
    let mut out = template.to_string();
    for (name, value) in pairs {
        out = out.replace(name, value);
    }
    Ok(out)
}

/// Render the per-node verification prompt from a template with
/// `{problem}`, `{prior_steps}`, and `{assertion}` placeholders.
pub fn render_node_prompt(
    template: &str,
    context: &PriorStepsContext,
    node: &Node,
) -> Result<String, PromptError> {
    let priors = render_numbered(&context.verified_assertions);
    fill_placeholders(
        template,
        &[
            (PH_PROBLEM, context.problem.as_str()),
            (PH_PRIOR_STEPS, priors.as_str()),
            (PH_ASSERTION, node.assertion.as_str()),
        ],
    )
}
