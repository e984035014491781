use std::collections::HashMap;

use proptest::prelude::*;
use rpim_core::repair::{compress, count_pairs, CompressorConfig, Grammar, Pair, RepairState, Symbol};

/// Independent quadratic oracle: for each distinct pair, scan the whole
/// sequence left to right, skipping past each counted occurrence.
fn naive_counts(seq: &[Symbol]) -> HashMap<Pair, usize> {
    let mut out = HashMap::new();
    for i in 0..seq.len().saturating_sub(1) {
        let pair = (seq[i], seq[i + 1]);
        if out.contains_key(&pair) {
            continue;
        }
        let mut count = 0;
        let mut j = 0;
        while j + 1 < seq.len() {
            if (seq[j], seq[j + 1]) == pair {
                count += 1;
                j += 2;
            } else {
                j += 1;
            }
        }
        out.insert(pair, count);
    }
    out
}

fn syms(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().map(|b| Symbol::terminal(*b)).collect()
}

fn small_alphabet(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn count_pairs_matches_naive(bytes in prop::collection::vec(0u8..4, 0..200)) {
        let seq = syms(&bytes);
        prop_assert_eq!(count_pairs(&seq), naive_counts(&seq));
    }

    #[test]
    fn every_step_keeps_threads_consistent(bytes in small_alphabet(80)) {
        let seq = syms(&bytes);
        let mut state = RepairState::new(&seq, CompressorConfig::default());
        state.check_invariants().map_err(TestCaseError::fail)?;
        let mut grammar = Grammar::new();
        loop {
            // The table should agree with the oracle on the live sequence.
            let live = state.final_sequence();
            let oracle = naive_counts(&live);
            for (pair, count) in &oracle {
                prop_assert_eq!(state.table().count(pair), *count, "{:?}", pair);
            }
            let best = oracle.values().copied().max().unwrap_or(0);
            match state.step(&mut grammar) {
                Some(step) => {
                    prop_assert_eq!(step.count, best);
                    prop_assert_eq!(oracle[&step.pair], best);
                    let smallest = oracle.iter().filter(|(_, c)| **c == best).map(|(p, _)| *p).min().unwrap();
                    prop_assert_eq!(step.pair, smallest);
                }
                None => {
                    prop_assert!(best < 2);
                    break;
                }
            }
            state.check_invariants().map_err(TestCaseError::fail)?;
            prop_assert!(grammar.validate().is_ok());
            prop_assert_eq!(grammar.expand(&state.final_sequence()).unwrap(), seq.clone());
        }
    }

    #[test]
    fn round_trip_and_residue(bytes in prop::collection::vec(any::<u8>(), 0..4096)) {
        let seq = syms(&bytes);
        let (grammar, residue) = compress(&seq, CompressorConfig::default());
        prop_assert_eq!(grammar.expand_bytes(&residue).unwrap(), bytes);
        prop_assert!(naive_counts(&residue).values().all(|c| *c < 2));
    }

    #[test]
    fn round_trip_on_runs(runs in prop::collection::vec((0u8..3, 1usize..40), 0..30)) {
        let bytes: Vec<u8> = runs.iter().flat_map(|(b, n)| std::iter::repeat_n(*b, *n)).collect();
        let seq = syms(&bytes);
        let mut state = RepairState::new(&seq, CompressorConfig::default());
        let mut grammar = Grammar::new();
        while state.replace_step(&mut grammar) {
            state.check_invariants().map_err(TestCaseError::fail)?;
        }
        prop_assert_eq!(grammar.expand(&state.final_sequence()).unwrap(), seq);
    }

    #[test]
    fn higher_threshold_still_round_trips(bytes in small_alphabet(300), min in 2usize..6) {
        let seq = syms(&bytes);
        let cfg = CompressorConfig::new(min).unwrap();
        let (grammar, residue) = compress(&seq, cfg);
        prop_assert_eq!(grammar.expand(&residue).unwrap(), seq);
        prop_assert!(count_pairs(&residue).values().all(|c| *c < min));
    }
}
