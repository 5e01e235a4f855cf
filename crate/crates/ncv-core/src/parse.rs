//! Parsing of model output: binary verdicts and first-error indices.

use serde::{Deserialize, Serialize};

use crate::model::Verdict;

/// No recognizable verdict keyword in the model output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no verdict keyword found in model output")]
pub struct UnparseableVerdict;

fn keyword_verdict(token: &str) -> Option<Verdict> {
    let word: alloc::string::String = token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .chars()
        .map(|c| c.to_ascii_lowercase())
        .collect();
    match word.as_str() {
        "correct" | "yes" | "true" => Some(Verdict::Correct),
        "incorrect" | "no" | "false" | "wrong" => Some(Verdict::Incorrect),
        _ => None,
    }
}

/// Verdict from a length-capped binary completion: case-insensitive scan of
/// the first four whitespace-delimited tokens, first keyword wins.
pub fn parse_binary_output(text: &str) -> Result<Verdict, UnparseableVerdict> {
    text.split_whitespace()
        .take(4)
        .find_map(keyword_verdict)
        .ok_or(UnparseableVerdict)
}

/// Verdict from a reasoning-mode rationale: scan the last non-empty line for
/// the same keywords, first match wins.
pub fn parse_last_line_verdict(text: &str) -> Result<Verdict, UnparseableVerdict> {
    let last_line = text
        .lines()
        .rev()
        .find(|line| !line.trim().is_empty())
        .ok_or(UnparseableVerdict)?;
    last_line
        .split_whitespace()
        .find_map(keyword_verdict)
        .ok_or(UnparseableVerdict)
}

/// A first-error index extracted from free-form verifier output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractedIndex {
    /// 0 = all correct, otherwise a 1-based step index.
    Index(u32),
    /// No in-range integer could be extracted; scored as wrong.
    Unparsed,
}

fn parse_int(token: &str) -> Option<i64> {
    token.trim_matches(|c: char| !c.is_ascii_digit() && c != '-').parse().ok()
}

/// Extract a predicted step index from end-to-end verifier output.
///
/// Takes the last `\boxed{...}` containing an integer; failing that, the last
/// integer-valued token on the last non-empty line. Values outside
/// `[0, step_count]` yield [`ExtractedIndex::Unparsed`].
pub fn extract_index(text: &str, step_count: u32) -> ExtractedIndex {
    let mut candidate: Option<i64> = None;

    for (start, _) in text.match_indices("\\boxed{") {
        let inner_start = start + "\\boxed{".len();
        if let Some(end) = text[inner_start..].find('}') {
            if let Ok(value) = text[inner_start..inner_start + end].trim().parse::<i64>() {
                candidate = Some(value);
            }
        }
    }

    if candidate.is_none() {
        if let Some(last_line) = text.lines().rev().find(|l| !l.trim().is_empty()) {
            candidate = last_line.split_whitespace().filter_map(parse_int).next_back();
        }
    }

    match candidate {
        Some(value) if value >= 0 && value <= step_count as i64 => {
            ExtractedIndex::Index(value as u32)
        }
        _ => ExtractedIndex::Unparsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_binary_outputs() {
        assert_eq!(parse_binary_output("Correct"), Ok(Verdict::Correct));
        assert_eq!(parse_binary_output("incorrect"), Ok(Verdict::Incorrect));
        assert_eq!(parse_binary_output("Yes."), Ok(Verdict::Correct));
        assert_eq!(parse_binary_output("No, wrong"), Ok(Verdict::Incorrect));
        assert_eq!(parse_binary_output("TRUE"), Ok(Verdict::Correct));
    }

    #[test]
    fn binary_scan_stops_after_four_tokens() {
        assert_eq!(parse_binary_output("The answer is"), Err(UnparseableVerdict));
        // Keyword in position five is out of the scan window.
        assert_eq!(
            parse_binary_output("the final answer here: correct"),
            Err(UnparseableVerdict)
        );
        assert_eq!(parse_binary_output("it is clearly correct"), Ok(Verdict::Correct));
    }

    #[test]
    fn binary_first_match_wins() {
        assert_eq!(parse_binary_output("incorrect because correct"), Ok(Verdict::Incorrect));
        assert_eq!(parse_binary_output(""), Err(UnparseableVerdict));
    }

    #[test]
    fn rationale_verdict_comes_from_last_line() {
        let text = "Let me check.\n3 + 4 = 7, but the step says 8.\nTherefore the step is Incorrect.";
        assert_eq!(parse_last_line_verdict(text), Ok(Verdict::Incorrect));
        assert_eq!(parse_last_line_verdict("reasoning...\nCorrect"), Ok(Verdict::Correct));
        assert_eq!(parse_last_line_verdict("thoughts\n\n  \n"), Err(UnparseableVerdict));
        // Earlier lines never decide the verdict.
        assert_eq!(
            parse_last_line_verdict("looks correct so far\nfinal check pending"),
            Err(UnparseableVerdict)
        );
    }

    #[test]
    fn boxed_extraction_last_wins() {
        assert_eq!(extract_index("\\boxed{2} then \\boxed{5}", 6), ExtractedIndex::Index(5));
        assert_eq!(extract_index("answer \\boxed{0}", 4), ExtractedIndex::Index(0));
        assert_eq!(extract_index("\\boxed{ 3 }", 4), ExtractedIndex::Index(3));
    }

    #[test]
    fn out_of_range_is_unparsed() {
        assert_eq!(extract_index("error at step 12", 5), ExtractedIndex::Unparsed);
        assert_eq!(extract_index("\\boxed{7}", 5), ExtractedIndex::Unparsed);
        assert_eq!(extract_index("\\boxed{-1}", 5), ExtractedIndex::Unparsed);
    }

    #[test]
    fn last_line_fallback() {
        assert_eq!(extract_index("All steps are fine.\n0", 4), ExtractedIndex::Index(0));
        assert_eq!(extract_index("The first error is step 3", 4), ExtractedIndex::Index(3));
        assert_eq!(extract_index("no numbers here", 4), ExtractedIndex::Unparsed);
    }

    #[test]
    fn boxed_without_integer_falls_back() {
        assert_eq!(extract_index("\\boxed{x+1}\nso the answer is 2", 4), ExtractedIndex::Index(2));
    }
}
