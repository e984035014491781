//! The `.rpim` container.
//!
//! ```text
//! "RPIM"  version=0x01  kind (0x00 raw | 0x01 image)
//! raw:    original_length              varint
//! image:  width u32le  height u32le  channels u8  mode u8
//! rule_count varint, then rule_count x (left varint, right varint)
//! seq_len varint, then seq_len x symbol varint
//! ```
//!
//! Varints are unsigned LEB128. Decoding is strict: the shortest varint
//! encoding is required and trailing bytes are rejected, so every accepted
//! input re-serializes to itself.

pub mod varint;

use thiserror::Error;

use crate::image::{sample_count, LinearizationMode};
use crate::repair::{Grammar, GrammarError, Rule, Symbol, FIRST_NONTERMINAL};
use varint::VarintError;

pub const MAGIC: [u8; 4] = *b"RPIM";
pub const VERSION: u8 = 0x01;
const KIND_RAW: u8 = 0x00;
const KIND_IMAGE: u8 = 0x01;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContainerError {
    #[error("unrecognized container: {0}")]
    Unrecognized(String),
    #[error("corrupt container: {0}")]
    Corrupt(String),
    #[error(transparent)]
    MalformedGrammar(#[from] GrammarError),
}

fn corrupt(msg: impl Into<String>) -> ContainerError {
    ContainerError::Corrupt(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImageGeometry {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub mode: LinearizationMode,
}

impl ImageGeometry {
    pub fn sample_count(&self) -> Result<u64, ContainerError> {
        sample_count(self.width, self.height, self.channels)
            .map(|n| n as u64)
            .map_err(|e| corrupt(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayloadKind {
    Image(ImageGeometry),
    RawStream { original_length: u64 },
}

impl PayloadKind {
    /// Number of terminals the grammar must derive.
    pub fn expected_len(&self) -> Result<u64, ContainerError> {
        match self {
            PayloadKind::Image(geom) => geom.sample_count(),
            PayloadKind::RawStream { original_length } => Ok(*original_length),
        }
    }
}

/// Payload description, grammar and residue sequence. Construction checks
/// that the sequence expands to exactly the declared number of terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedArtifact {
    kind: PayloadKind,
    grammar: Grammar,
    sequence: Vec<Symbol>,
}

impl CompressedArtifact {
    pub fn new(kind: PayloadKind, grammar: Grammar, sequence: Vec<Symbol>) -> Result<Self, ContainerError> {
        if sequence.len() > u32::MAX as usize || grammar.len() > (u32::MAX - FIRST_NONTERMINAL) as usize {
            return Err(corrupt("artifact exceeds the 32-bit symbol space"));
        }
        let expected = kind.expected_len()?;
        let actual = grammar.expanded_len(&sequence)?;
        if actual != expected {
            return Err(corrupt(format!(
                "sequence expands to {actual} symbols, payload declares {expected}"
            )));
        }
        Ok(CompressedArtifact {
            kind,
            grammar,
            sequence,
        })
    }

    pub fn kind(&self) -> &PayloadKind {
        &self.kind
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn sequence(&self) -> &[Symbol] {
        &self.sequence
    }

    pub fn expanded_len(&self) -> u64 {
        self.kind
            .expected_len()
            .expect("validated at construction")
    }
}

pub fn serialize(artifact: &CompressedArtifact) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 3 * (artifact.grammar.len() * 2 + artifact.sequence.len()));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    match artifact.kind {
        PayloadKind::RawStream { original_length } => {
            out.push(KIND_RAW);
            varint::write_u64(&mut out, original_length);
        }
        PayloadKind::Image(g) => {
            out.push(KIND_IMAGE);
            out.extend_from_slice(&g.width.to_le_bytes());
            out.extend_from_slice(&g.height.to_le_bytes());
            out.push(g.channels);
            out.push(g.mode.code());
        }
    }
    varint::write_u64(&mut out, artifact.grammar.len() as u64);
    for rule in artifact.grammar.rules() {
        varint::write_u64(&mut out, rule.left.value().into());
        varint::write_u64(&mut out, rule.right.value().into());
    }
    varint::write_u64(&mut out, artifact.sequence.len() as u64);
    for sym in &artifact.sequence {
        varint::write_u64(&mut out, sym.value().into());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], ContainerError> {
        if self.remaining() < n {
            return Err(corrupt(format!("truncated {what}")));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self, what: &str) -> Result<u8, ContainerError> {
        Ok(self.take(1, what)?[0])
    }

    fn u32_le(&mut self, what: &str) -> Result<u32, ContainerError> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn varint(&mut self, what: &str) -> Result<u64, ContainerError> {
        match varint::read_u64(&self.bytes[self.pos..]) {
            Ok((v, used)) => {
                self.pos += used;
                Ok(v)
            }
            Err(VarintError::Truncated) => Err(corrupt(format!("truncated {what}"))),
            Err(e) => Err(corrupt(format!("malformed varint in {what}: {e:?}"))),
        }
    }

    fn symbol(&mut self, what: &str) -> Result<Symbol, ContainerError> {
        let v = self.varint(what)?;
        u32::try_from(v)
            .map(Symbol::from_value)
            .map_err(|_| corrupt(format!("{what} value {v} exceeds 32 bits")))
    }

    /// Reads a count whose items each occupy at least one byte.
    fn count(&mut self, what: &str, min_item_len: usize) -> Result<usize, ContainerError> {
        let n = self.varint(what)?;
        match usize::try_from(n) {
            Ok(n) if n.checked_mul(min_item_len).is_some_and(|len| len <= self.remaining()) => Ok(n),
            _ => Err(corrupt(format!("{what} {n} exceeds remaining {} bytes", self.remaining()))),
        }
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<CompressedArtifact, ContainerError> {
    if !bytes.starts_with(&MAGIC) {
        if bytes.len() < MAGIC.len() && MAGIC.starts_with(bytes) {
            return Err(corrupt("truncated magic"));
        }
        return Err(ContainerError::Unrecognized("missing RPIM magic".into()));
    }
    let mut r = Reader { bytes, pos: MAGIC.len() };
    let version = r.u8("version")?;
    if version != VERSION {
        return Err(ContainerError::Unrecognized(format!("version {version}")));
    }

    let kind = match r.u8("kind")? {
        KIND_RAW => PayloadKind::RawStream {
            original_length: r.varint("original length")?,
        },
        KIND_IMAGE => {
            let width = r.u32_le("width")?;
            let height = r.u32_le("height")?;
            let channels = r.u8("channels")?;
            let mode_code = r.u8("mode")?;
            let mode = LinearizationMode::from_code(mode_code)
                .ok_or_else(|| corrupt(format!("unknown linearization mode {mode_code}")))?;
            let geom = ImageGeometry {
                width,
                height,
                channels,
                mode,
            };
            geom.sample_count()?;
            PayloadKind::Image(geom)
        }
        other => return Err(corrupt(format!("unknown payload kind {other}"))),
    };

    let rule_count = r.count("rule count", 2)?;
    if rule_count > (u32::MAX - FIRST_NONTERMINAL) as usize {
        return Err(corrupt("rule count exceeds the symbol space"));
    }
    let mut rules = Vec::with_capacity(rule_count);
    for k in 0..rule_count {
        let left = r.symbol("rule symbol")?;
        let right = r.symbol("rule symbol")?;
        for sym in [left, right] {
            if sym.rule_ordinal().is_some_and(|ord| ord as usize >= k) {
                return Err(GrammarError::Cyclic {
                    rule: k,
                    symbol: sym.value(),
                }
                .into());
            }
        }
        rules.push(Rule { left, right });
    }
    let grammar = Grammar::from_rules(rules)?;

    let seq_len = r.count("sequence length", 1)?;
    let mut sequence = Vec::with_capacity(seq_len);
    for _ in 0..seq_len {
        let sym = r.symbol("sequence symbol")?;
        if !grammar.defines(sym) {
            return Err(GrammarError::Undefined {
                symbol: sym.value(),
                rules: grammar.len(),
            }
            .into());
        }
        sequence.push(sym);
    }
    if r.remaining() != 0 {
        return Err(corrupt(format!("{} trailing bytes", r.remaining())));
    }
    CompressedArtifact::new(kind, grammar, sequence)
}
