//! Aggregation of k independent binary verdicts into one node verdict.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{ConsistencyStrategy, Verdict};

/// How an exact tie resolves under majority voting (only reachable for even k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Conservative default: a split vote flags the node.
    TieIsIncorrect,
    TieIsCorrect,
}

/// Sampling and aggregation settings for one node verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyConfig {
    /// Independent judgments per node (k >= 1).
    pub k: u32,
    pub strategy: ConsistencyStrategy,
    pub tie_rule: TieRule,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        Self { k: 3, strategy: ConsistencyStrategy::MajorityVote, tie_rule: TieRule::TieIsIncorrect }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VoteError {
    #[error("cannot aggregate an empty vote list")]
    EmptyVotes,
    #[error("expected {expected} votes, got {got}")]
    VoteCountMismatch { expected: u32, got: usize },
}

/// Majority over the votes; an exact tie falls back to `tie_rule`.
pub fn majority_vote(votes: &[Verdict], tie_rule: TieRule) -> Result<Verdict, VoteError> {
    if votes.is_empty() {
        return Err(VoteError::EmptyVotes);
    }
    let correct = votes.iter().filter(|v| **v == Verdict::Correct).count();
    let incorrect = votes.len() - correct;
    Ok(if correct > incorrect {
        Verdict::Correct
    } else if incorrect > correct {
        Verdict::Incorrect
    } else {
        match tie_rule {
            TieRule::TieIsIncorrect => Verdict::Incorrect,
            TieRule::TieIsCorrect => Verdict::Correct,
        }
    })
}

/// Incorrect as soon as any single vote is Incorrect; Correct otherwise.
pub fn one_vote_veto(votes: &[Verdict]) -> Result<Verdict, VoteError> {
    if votes.is_empty() {
        return Err(VoteError::EmptyVotes);
    }
    Ok(if votes.contains(&Verdict::Incorrect) {
        Verdict::Incorrect
    } else {
        Verdict::Correct
    })
}

/// Dispatch to the configured strategy after checking `|votes| == k`.
pub fn aggregate(votes: &[Verdict], config: &ConsistencyConfig) -> Result<Verdict, VoteError> {
    if votes.len() != config.k as usize {
        return Err(VoteError::VoteCountMismatch { expected: config.k, got: votes.len() });
    }
    match config.strategy {
        ConsistencyStrategy::MajorityVote => majority_vote(votes, config.tie_rule),
        ConsistencyStrategy::OneVoteVeto => one_vote_veto(votes),
    }
}

/// All vote vectors of the given length, in lexicographic order. Test helper
/// shared with the exhaustive-equivalence suites.
pub fn all_vote_vectors(len: u32) -> Vec<Vec<Verdict>> {
    let mut out = Vec::with_capacity(1 << len);
    for bits in 0u32..(1 << len) {
        out.push(
            (0..len)
                .map(|i| if bits & (1 << i) != 0 { Verdict::Incorrect } else { Verdict::Correct })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use Verdict::{Correct as C, Incorrect as I};

    #[test]
    fn strict_majority_wins() {
        assert_eq!(majority_vote(&[C, C, I], TieRule::TieIsIncorrect), Ok(C));
        assert_eq!(majority_vote(&[C, I, I], TieRule::TieIsCorrect), Ok(I));
    }

    #[test]
    fn tie_resolves_by_rule() {
        assert_eq!(majority_vote(&[I, C], TieRule::TieIsIncorrect), Ok(I));
        assert_eq!(majority_vote(&[I, C], TieRule::TieIsCorrect), Ok(C));
    }

    #[test]
    fn veto_needs_only_one_incorrect() {
        assert_eq!(one_vote_veto(&[C, C, C]), Ok(C));
        assert_eq!(one_vote_veto(&[C, I, C]), Ok(I));
    }

    #[test]
    fn empty_votes_rejected() {
        assert_eq!(majority_vote(&[], TieRule::TieIsIncorrect), Err(VoteError::EmptyVotes));
        assert_eq!(one_vote_veto(&[]), Err(VoteError::EmptyVotes));
    }

    #[test]
    fn aggregate_dispatches_and_checks_k() {
        let vote3 = ConsistencyConfig { k: 3, ..Default::default() };
        assert_eq!(aggregate(&[C, I, I], &vote3), Ok(I));

        let veto3 = ConsistencyConfig {
            k: 3,
            strategy: ConsistencyStrategy::OneVoteVeto,
            tie_rule: TieRule::TieIsIncorrect,
        };
        assert_eq!(aggregate(&[C, C, I], &veto3), Ok(I));

        let single = ConsistencyConfig { k: 1, ..Default::default() };
        assert_eq!(aggregate(&[C], &single), Ok(C));

        assert_eq!(
            aggregate(&[C, C], &vote3),
            Err(VoteError::VoteCountMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn vote_vector_enumeration_is_complete() {
        let vectors = all_vote_vectors(5);
        assert_eq!(vectors.len(), 32);
        assert_eq!(vectors[0], vec![C; 5]);
        assert_eq!(vectors[31], vec![I; 5]);
    }
}
