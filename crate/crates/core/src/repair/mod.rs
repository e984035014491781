//! Re-Pair: repeatedly replace the most frequent adjacent pair with a fresh
//! nonterminal until no pair repeats.

mod grammar;
mod state;

use std::collections::HashMap;

use thiserror::Error;

pub use grammar::{Grammar, GrammarError, Pair, Rule, Symbol, FIRST_NONTERMINAL};
pub use state::{PairRecord, PairTable, RepairState, Replacement, SequenceArray};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("minimum pair frequency must be at least 2, got {0}")]
    MinFrequency(usize),
}

/// Stop conditions for the replacement loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressorConfig {
    min_frequency: usize,
    max_rules: Option<usize>,
}

impl CompressorConfig {
    pub fn new(min_frequency: usize) -> Result<Self, ConfigError> {
        if min_frequency < 2 {
            return Err(ConfigError::MinFrequency(min_frequency));
        }
        Ok(CompressorConfig {
            min_frequency,
            max_rules: None,
        })
    }

    pub fn with_max_rules(mut self, max_rules: usize) -> Self {
        self.max_rules = Some(max_rules);
        self
    }

    pub fn min_frequency(&self) -> usize {
        self.min_frequency
    }

    pub fn max_rules(&self) -> Option<usize> {
        self.max_rules
    }
}

impl Default for CompressorConfig {
    fn default() -> Self {
        CompressorConfig {
            min_frequency: 2,
            max_rules: None,
        }
    }
}

/// Greedy left-to-right non-overlapping count of every adjacent pair.
pub fn count_pairs(seq: &[Symbol]) -> HashMap<Pair, usize> {
    let mut counts = HashMap::new();
    let mut last_counted: Option<(Pair, usize)> = None;
    for (i, w) in seq.windows(2).enumerate() {
        let pair = (w[0], w[1]);
        // Only a same-symbol run can make consecutive occurrences overlap.
        if let Some((prev, at)) = last_counted {
            if prev == pair && at + 1 == i {
                last_counted = None;
                continue;
            }
        }
        *counts.entry(pair).or_insert(0) += 1;
        last_counted = Some((pair, i));
    }
    counts
}

/// Compresses a terminal sequence into a grammar and its residue.
///
/// Panics if `seq` contains a nonterminal.
pub fn compress(seq: &[Symbol], config: CompressorConfig) -> (Grammar, Vec<Symbol>) {
    assert!(
        seq.iter().all(|s| s.is_terminal()),
        "compress input must consist of terminals"
    );
    let mut grammar = Grammar::new();
    let mut state = RepairState::new(seq, config);
    state.run(&mut grammar);
    (grammar, state.final_sequence())
}

/// [`compress`] over raw bytes.
pub fn compress_bytes(bytes: &[u8], config: CompressorConfig) -> (Grammar, Vec<Symbol>) {
    let seq: Vec<Symbol> = bytes.iter().copied().map(Symbol::terminal).collect();
    compress(&seq, config)
}
