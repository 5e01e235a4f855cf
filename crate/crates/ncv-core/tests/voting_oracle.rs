//! Exhaustive checks of the consistency strategies against brute-force
//! oracles over every vote vector up to length 7.

use proptest::prelude::*;

use ncv_core::{
    aggregate, all_vote_vectors, majority_vote, one_vote_veto, ConsistencyConfig,
    ConsistencyStrategy, TieRule, Verdict,
};

fn count_correct(votes: &[Verdict]) -> usize {
    votes.iter().filter(|v| **v == Verdict::Correct).count()
}

/// Oracle: strict majority of Correct wins; ties obey the rule.
fn oracle_majority(votes: &[Verdict], tie_rule: TieRule) -> Verdict {
    let correct = 2 * count_correct(votes);
    if correct > votes.len() {
        Verdict::Correct
    } else if correct < votes.len() {
        Verdict::Incorrect
    } else {
        match tie_rule {
            TieRule::TieIsIncorrect => Verdict::Incorrect,
            TieRule::TieIsCorrect => Verdict::Correct,
        }
    }
}

/// Oracle: Correct only when every vote is Correct.
fn oracle_veto(votes: &[Verdict]) -> Verdict {
    if count_correct(votes) == votes.len() {
        Verdict::Correct
    } else {
        Verdict::Incorrect
    }
}

#[test]
fn majority_matches_oracle_for_all_vectors_up_to_7() {
    for len in 1..=7u32 {
        for votes in all_vote_vectors(len) {
            for tie_rule in [TieRule::TieIsIncorrect, TieRule::TieIsCorrect] {
                assert_eq!(
                    majority_vote(&votes, tie_rule).unwrap(),
                    oracle_majority(&votes, tie_rule),
                    "votes = {votes:?}, tie_rule = {tie_rule:?}"
                );
            }
        }
    }
}

#[test]
fn veto_matches_oracle_for_all_vectors_up_to_7() {
    for len in 1..=7u32 {
        for votes in all_vote_vectors(len) {
            assert_eq!(one_vote_veto(&votes).unwrap(), oracle_veto(&votes), "votes = {votes:?}");
        }
    }
}

#[test]
fn veto_is_at_least_as_strict_as_majority() {
    for len in 1..=7u32 {
        for votes in all_vote_vectors(len) {
            for tie_rule in [TieRule::TieIsIncorrect, TieRule::TieIsCorrect] {
                if majority_vote(&votes, tie_rule).unwrap() == Verdict::Incorrect {
                    assert_eq!(one_vote_veto(&votes).unwrap(), Verdict::Incorrect);
                }
            }
        }
    }
}

#[test]
fn strategies_agree_on_unanimous_votes() {
    for len in 1..=7usize {
        for verdict in [Verdict::Correct, Verdict::Incorrect] {
            let votes = vec![verdict; len];
            for tie_rule in [TieRule::TieIsIncorrect, TieRule::TieIsCorrect] {
                assert_eq!(majority_vote(&votes, tie_rule).unwrap(), verdict);
            }
            assert_eq!(one_vote_veto(&votes).unwrap(), verdict);
        }
    }
}

#[test]
fn strategies_agree_for_single_vote() {
    for verdict in [Verdict::Correct, Verdict::Incorrect] {
        let votes = [verdict];
        assert_eq!(majority_vote(&votes, TieRule::TieIsIncorrect).unwrap(), verdict);
        assert_eq!(one_vote_veto(&votes).unwrap(), verdict);
    }
}

#[test]
fn odd_k_majority_never_consults_the_tie_rule() {
    for len in [1u32, 3, 5, 7] {
        for votes in all_vote_vectors(len) {
            assert_eq!(
                majority_vote(&votes, TieRule::TieIsIncorrect).unwrap(),
                majority_vote(&votes, TieRule::TieIsCorrect).unwrap(),
            );
        }
    }
}

#[test]
fn aggregate_dispatches_and_checks_vote_count() {
    let votes = [Verdict::Correct, Verdict::Incorrect, Verdict::Correct];
    let majority = ConsistencyConfig {
        k: 3,
        strategy: ConsistencyStrategy::MajorityVote,
        tie_rule: TieRule::TieIsIncorrect,
    };
    let veto = ConsistencyConfig { strategy: ConsistencyStrategy::OneVoteVeto, ..majority };
    assert_eq!(aggregate(&votes, &majority).unwrap(), Verdict::Correct);
    assert_eq!(aggregate(&votes, &veto).unwrap(), Verdict::Incorrect);
    assert!(aggregate(&votes[..2], &majority).is_err());
}

proptest! {
    #[test]
    fn both_strategies_are_permutation_invariant(
        votes in proptest::collection::vec(
            prop_oneof![Just(Verdict::Correct), Just(Verdict::Incorrect)],
            1..=9,
        ),
        shuffle in any::<u64>(),
    ) {
        // Fisher-Yates with a splitmix-style index stream.
        let mut shuffled = votes.clone();
        let mut state = shuffle;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        for tie_rule in [TieRule::TieIsIncorrect, TieRule::TieIsCorrect] {
            prop_assert_eq!(
                majority_vote(&votes, tie_rule).unwrap(),
                majority_vote(&shuffled, tie_rule).unwrap()
            );
        }
        prop_assert_eq!(one_vote_veto(&votes).unwrap(), one_vote_veto(&shuffled).unwrap());
    }
}
