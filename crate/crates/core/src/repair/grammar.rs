use std::fmt;

use thiserror::Error;

/// Value of the first nonterminal. Terminals occupy `0..256`.
pub const FIRST_NONTERMINAL: u32 = 256;

/// An element of the compression alphabet.
///
/// Values below 256 are terminals (one input byte each). Value `256 + k`
/// names the `k`-th rule of a [`Grammar`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    #[inline]
    pub const fn terminal(byte: u8) -> Self {
        Symbol(byte as u32)
    }

    /// The nonterminal for rule `ordinal`. Panics if the value would not fit in 32 bits.
    #[inline]
    pub fn nonterminal(ordinal: u32) -> Self {
        Symbol(
            ordinal
                .checked_add(FIRST_NONTERMINAL)
                .expect("nonterminal ordinal overflows the symbol space"),
        )
    }

    #[inline]
    pub const fn from_value(value: u32) -> Self {
        Symbol(value)
    }

    #[inline]
    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_terminal(self) -> bool {
        self.0 < FIRST_NONTERMINAL
    }

    #[inline]
    pub fn as_byte(self) -> Option<u8> {
        u8::try_from(self.0).ok()
    }

    /// Rule index for a nonterminal, `None` for terminals.
    #[inline]
    pub const fn rule_ordinal(self) -> Option<u32> {
        if self.0 < FIRST_NONTERMINAL {
            None
        } else {
            Some(self.0 - FIRST_NONTERMINAL)
        }
    }
}

impl From<u8> for Symbol {
    fn from(byte: u8) -> Self {
        Symbol::terminal(byte)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule_ordinal() {
            None => write!(f, "T{}", self.0),
            Some(_) => write!(f, "R{}", self.0),
        }
    }
}

/// An adjacent pair of symbols.
pub type Pair = (Symbol, Symbol);

/// One production `N -> left right`. The left-hand side is implied by the
/// rule's position in the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub left: Symbol,
    pub right: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("malformed grammar: symbol {symbol} is not defined (grammar has {rules} rules)")]
    Undefined { symbol: u32, rules: usize },
    #[error("malformed grammar: rule {rule} references symbol {symbol}, which is not an earlier rule")]
    Cyclic { rule: usize, symbol: u32 },
}

/// A straight-line grammar: rule `k` may only reference terminals and rules
/// with ordinal below `k`, so every nonterminal derives exactly one string.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    rules: Vec<Rule>,
}

impl Grammar {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a grammar from raw rules, checking acyclicity.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Self, GrammarError> {
        let grammar = Grammar { rules };
        grammar.validate()?;
        Ok(grammar)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Appends `fresh -> left right` and returns `fresh`.
    pub fn push(&mut self, left: Symbol, right: Symbol) -> Symbol {
        let next = u32::try_from(self.rules.len()).expect("rule count exceeds u32");
        let fresh = Symbol::nonterminal(next);
        debug_assert!(left < fresh && right < fresh);
        self.rules.push(Rule { left, right });
        fresh
    }

    pub fn rule(&self, symbol: Symbol) -> Option<&Rule> {
        symbol
            .rule_ordinal()
            .and_then(|k| self.rules.get(k as usize))
    }

    /// True when `symbol` is a terminal or names an existing rule.
    pub fn defines(&self, symbol: Symbol) -> bool {
        match symbol.rule_ordinal() {
            None => true,
            Some(k) => (k as usize) < self.rules.len(),
        }
    }

    pub fn validate(&self) -> Result<(), GrammarError> {
        for (k, rule) in self.rules.iter().enumerate() {
            for sym in [rule.left, rule.right] {
                if let Some(ord) = sym.rule_ordinal() {
                    if ord as usize >= k {
                        return Err(GrammarError::Cyclic {
                            rule: k,
                            symbol: sym.value(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_sequence(&self, seq: &[Symbol]) -> Result<(), GrammarError> {
        match seq.iter().find(|s| !self.defines(**s)) {
            Some(bad) => Err(GrammarError::Undefined {
                symbol: bad.value(),
                rules: self.rules.len(),
            }),
            None => Ok(()),
        }
    }

    /// Terminal length derived by each rule, saturating at `u64::MAX`.
    pub fn rule_lengths(&self) -> Result<Vec<u64>, GrammarError> {
        self.validate()?;
        let mut lengths: Vec<u64> = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let len = symbol_len(&lengths, rule.left).saturating_add(symbol_len(&lengths, rule.right));
            lengths.push(len);
        }
        Ok(lengths)
    }

    /// Length of `expand(seq)` without materializing it.
    pub fn expanded_len(&self, seq: &[Symbol]) -> Result<u64, GrammarError> {
        self.check_sequence(seq)?;
        let lengths = self.rule_lengths()?;
        Ok(seq
            .iter()
            .fold(0u64, |acc, s| acc.saturating_add(symbol_len(&lengths, *s))))
    }

    pub fn expand(&self, seq: &[Symbol]) -> Result<Vec<Symbol>, GrammarError> {
        let mut out = Vec::new();
        self.walk_terminals(seq, |t| out.push(Symbol::terminal(t)))?;
        Ok(out)
    }

    /// Like [`Grammar::expand`] but yields raw bytes.
    pub fn expand_bytes(&self, seq: &[Symbol]) -> Result<Vec<u8>, GrammarError> {
        let mut out = Vec::new();
        self.walk_terminals(seq, |t| out.push(t))?;
        Ok(out)
    }

    fn walk_terminals(&self, seq: &[Symbol], mut emit: impl FnMut(u8)) -> Result<(), GrammarError> {
        self.validate()?;
        self.check_sequence(seq)?;
        let mut stack: Vec<Symbol> = Vec::new();
        for &top in seq {
            stack.push(top);
            while let Some(sym) = stack.pop() {
                match sym.rule_ordinal() {
                    None => emit(sym.value() as u8),
                    Some(k) => {
                        let rule = self.rules[k as usize];
                        stack.push(rule.right);
                        stack.push(rule.left);
                    }
                }
            }
        }
        Ok(())
    }
}

fn symbol_len(lengths: &[u64], sym: Symbol) -> u64 {
    match sym.rule_ordinal() {
        None => 1,
        Some(k) => lengths[k as usize],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(b: u8) -> Symbol {
        Symbol::terminal(b)
    }

    #[test]
    fn symbol_classes() {
        assert!(t(255).is_terminal());
        assert!(!Symbol::nonterminal(0).is_terminal());
        assert_eq!(Symbol::nonterminal(3).value(), 259);
        assert_eq!(Symbol::nonterminal(3).rule_ordinal(), Some(3));
        assert_eq!(t(7).as_byte(), Some(7));
        assert_eq!(Symbol::nonterminal(0).as_byte(), None);
    }

    #[test]
    fn expand_identity_on_terminals() {
        let g = Grammar::new();
        assert_eq!(g.expand(&[t(b'a'), t(b'b')]).unwrap(), vec![t(b'a'), t(b'b')]);
    }

    #[test]
    fn expand_one_and_two_levels() {
        let mut g = Grammar::new();
        let r256 = g.push(t(b'a'), t(b'b'));
        assert_eq!(g.expand_bytes(&[r256, r256]).unwrap(), b"abab");
        let r257 = g.push(r256, r256);
        assert_eq!(g.expand_bytes(&[r257]).unwrap(), b"abab");
        assert_eq!(g.expanded_len(&[r257, t(0)]).unwrap(), 5);
    }

    #[test]
    fn undefined_nonterminal_is_rejected() {
        let g = Grammar::new();
        let err = g.expand(&[Symbol::nonterminal(0)]).unwrap_err();
        assert_eq!(err, GrammarError::Undefined { symbol: 256, rules: 0 });
    }

    #[test]
    fn forward_and_self_references_are_cyclic() {
        let self_ref = vec![Rule {
            left: Symbol::nonterminal(0),
            right: t(1),
        }];
        assert!(matches!(
            Grammar::from_rules(self_ref),
            Err(GrammarError::Cyclic { rule: 0, symbol: 256 })
        ));
        let forward = vec![
            Rule { left: t(1), right: Symbol::nonterminal(1) },
            Rule { left: t(1), right: t(2) },
        ];
        assert!(matches!(Grammar::from_rules(forward), Err(GrammarError::Cyclic { rule: 0, .. })));
    }

    #[test]
    fn lengths_saturate_instead_of_overflowing() {
        let mut g = Grammar::new();
        let mut top = g.push(t(0), t(0));
        for _ in 0..70 {
            top = g.push(top, top);
        }
        assert_eq!(g.expanded_len(&[top]).unwrap(), u64::MAX);
    }
}
