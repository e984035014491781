//! Working state of the pair-replacement loop.
//!
//! The sequence array keeps one slot per input symbol. Replacing a pair
//! rewrites its first slot with the new nonterminal and turns the second
//! slot into a tombstone; live slots stay chained through `prev_live` /
//! `next_live`, so neighbours are found without compaction.
//!
//! Every live slot whose pair is a counted occurrence under greedy
//! left-to-right non-overlapping counting is flagged `counted`. A slot `d`
//! is counted iff it has a live successor and it is not the second half of
//! a counted occurrence of the same pair, i.e. not
//! `sym(prev) == sym(d) == sym(next) && counted(prev)`. Counted slots of
//! pairs seen at least twice are threaded through `prev_occ` / `next_occ`.

use std::collections::{BTreeSet, HashMap};
use std::hash::{BuildHasherDefault, Hasher};

use super::grammar::{Grammar, Pair, Symbol};
use super::CompressorConfig;

const NONE: u32 = u32::MAX;
const TOMBSTONE: u32 = u32::MAX;

#[inline]
fn opt(index: u32) -> Option<usize> {
    (index != NONE).then_some(index as usize)
}

/// Symbol slots plus live-neighbour links and per-pair occurrence threads.
#[derive(Clone, Debug)]
pub struct SequenceArray {
    symbols: Vec<u32>,
    prev_live: Vec<u32>,
    next_live: Vec<u32>,
    prev_occ: Vec<u32>,
    next_occ: Vec<u32>,
    counted: Vec<bool>,
    first_live: u32,
}

impl SequenceArray {
    fn new(seq: &[Symbol]) -> Self {
        let n = seq.len();
        assert!(n < NONE as usize, "sequence too long for 32-bit slot indices");
        let n32 = n as u32;
        SequenceArray {
            symbols: seq.iter().map(|s| s.value()).collect(),
            prev_live: (0..n32).map(|i| if i == 0 { NONE } else { i - 1 }).collect(),
            next_live: (0..n32).map(|i| if i + 1 == n32 { NONE } else { i + 1 }).collect(),
            prev_occ: vec![NONE; n],
            next_occ: vec![NONE; n],
            counted: vec![false; n],
            first_live: if n == 0 { NONE } else { 0 },
        }
    }

    /// Number of slots, tombstones included.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol in slot `index`, `None` for a tombstone.
    pub fn symbol(&self, index: usize) -> Option<Symbol> {
        let v = self.symbols[index];
        (v != TOMBSTONE).then_some(Symbol::from_value(v))
    }

    pub fn is_tombstone(&self, index: usize) -> bool {
        self.symbols[index] == TOMBSTONE
    }

    pub fn next_live(&self, index: usize) -> Option<usize> {
        opt(self.next_live[index])
    }

    pub fn prev_live(&self, index: usize) -> Option<usize> {
        opt(self.prev_live[index])
    }

    pub fn next_occurrence(&self, index: usize) -> Option<usize> {
        opt(self.next_occ[index])
    }

    pub fn prev_occurrence(&self, index: usize) -> Option<usize> {
        opt(self.prev_occ[index])
    }

    /// Whether the pair starting at `index` is a counted occurrence.
    pub fn is_counted(&self, index: usize) -> bool {
        self.counted[index]
    }

    /// The pair starting at live slot `index`, if it has a live successor.
    pub fn pair_at(&self, index: usize) -> Option<Pair> {
        let next = opt(self.next_live[index])?;
        Some((
            Symbol::from_value(self.symbols[index]),
            Symbol::from_value(self.symbols[next]),
        ))
    }

    /// Live symbols in order.
    pub fn live_symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        let mut cursor = self.first_live;
        std::iter::from_fn(move || {
            let at = opt(cursor)?;
            cursor = self.next_live[at];
            Some(Symbol::from_value(self.symbols[at]))
        })
    }

    #[inline]
    fn pair_unchecked(&self, index: u32) -> Pair {
        let next = self.next_live[index as usize];
        (
            Symbol::from_value(self.symbols[index as usize]),
            Symbol::from_value(self.symbols[next as usize]),
        )
    }

    /// Greedy non-overlap rule for slot `d`, given its predecessor's flag.
    #[inline]
    fn should_count(&self, d: u32) -> bool {
        let next = self.next_live[d as usize];
        if next == NONE {
            return false;
        }
        let prev = self.prev_live[d as usize];
        let s = self.symbols[d as usize];
        !(prev != NONE
            && self.counted[prev as usize]
            && self.symbols[prev as usize] == s
            && self.symbols[next as usize] == s)
    }
}

/// Hashes a pair of 32-bit symbols with a splitmix64 finalizer.
#[derive(Default, Clone, Copy)]
struct PairHasher(u64);

impl Hasher for PairHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | u64::from(b);
        }
    }

    fn write_u32(&mut self, v: u32) {
        self.0 = (self.0 << 32) | u64::from(v);
    }

    fn finish(&self) -> u64 {
        let mut z = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

type PairMap<V> = HashMap<Pair, V, BuildHasherDefault<PairHasher>>;

/// Bookkeeping for a pair seen at least twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub pair: Pair,
    pub count: usize,
    pub thread_head: Option<usize>,
    pub thread_tail: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Thread {
    count: usize,
    head: u32,
    tail: u32,
}

/// Pairs indexed by count, `buckets[c]` holding every pair counted `c` times.
/// Each bucket is ordered so the lexicographically smallest pair wins ties.
#[derive(Clone, Debug, Default)]
struct FrequencyBuckets {
    buckets: Vec<BTreeSet<Pair>>,
    top: usize,
}

impl FrequencyBuckets {
    fn insert(&mut self, pair: Pair, count: usize) {
        if self.buckets.len() <= count {
            self.buckets.resize_with(count + 1, BTreeSet::new);
        }
        self.buckets[count].insert(pair);
        self.top = self.top.max(count);
    }

    fn remove(&mut self, pair: &Pair, count: usize) {
        let removed = self.buckets[count].remove(pair);
        debug_assert!(removed, "pair missing from its bucket");
    }

    fn contains(&self, pair: &Pair, count: usize) -> bool {
        self.buckets.get(count).is_some_and(|b| b.contains(pair))
    }

    fn max(&mut self) -> Option<(Pair, usize)> {
        while self.top >= 2 {
            if let Some(first) = self.buckets[self.top].first() {
                return Some((*first, self.top));
            }
            self.top -= 1;
        }
        None
    }
}

/// Active pairs: full records for pairs counted at least twice, and the
/// single occurrence of every pair counted exactly once.
#[derive(Clone, Debug, Default)]
pub struct PairTable {
    records: PairMap<Thread>,
    seen_once: PairMap<u32>,
    buckets: FrequencyBuckets,
    bucketed: bool,
}

impl PairTable {
    pub fn record(&self, pair: &Pair) -> Option<PairRecord> {
        self.records.get(pair).map(|t| PairRecord {
            pair: *pair,
            count: t.count,
            thread_head: opt(t.head),
            thread_tail: opt(t.tail),
        })
    }

    pub fn records(&self) -> impl Iterator<Item = PairRecord> + '_ {
        self.records.keys().filter_map(|p| self.record(p))
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn is_seen_once(&self, pair: &Pair) -> bool {
        self.seen_once.contains_key(pair)
    }

    pub fn seen_once(&self) -> impl Iterator<Item = Pair> + '_ {
        self.seen_once.keys().copied()
    }

    /// Non-overlapping count of `pair`, zero if absent.
    pub fn count(&self, pair: &Pair) -> usize {
        match self.records.get(pair) {
            Some(t) => t.count,
            None => usize::from(self.seen_once.contains_key(pair)),
        }
    }

    /// Largest count among records, ties broken by the smaller pair.
    pub fn most_frequent(&mut self) -> Option<(Pair, usize)> {
        self.buckets.max()
    }

    /// Highest count currently held by any record.
    pub fn max_count(&self) -> usize {
        self.records.values().map(|t| t.count).max().unwrap_or(0)
    }

    fn enable_buckets(&mut self) {
        for (pair, t) in &self.records {
            self.buckets.insert(*pair, t.count);
        }
        self.bucketed = true;
    }

    fn recount(&mut self, pair: Pair, from: usize, to: usize) {
        if !self.bucketed {
            return;
        }
        if from >= 2 {
            self.buckets.remove(&pair, from);
        }
        if to >= 2 {
            self.buckets.insert(pair, to);
        }
    }

    fn add(&mut self, seq: &mut SequenceArray, pair: Pair, pos: u32) {
        let p = pos as usize;
        seq.counted[p] = true;
        seq.prev_occ[p] = NONE;
        seq.next_occ[p] = NONE;
        if let Some(t) = self.records.get_mut(&pair) {
            seq.prev_occ[p] = t.tail;
            seq.next_occ[t.tail as usize] = pos;
            t.tail = pos;
            t.count += 1;
            let c = t.count;
            self.recount(pair, c - 1, c);
        } else if let Some(first) = self.seen_once.remove(&pair) {
            let (head, tail) = if first < pos { (first, pos) } else { (pos, first) };
            seq.next_occ[head as usize] = tail;
            seq.prev_occ[tail as usize] = head;
            seq.prev_occ[head as usize] = NONE;
            seq.next_occ[tail as usize] = NONE;
            self.records.insert(pair, Thread { count: 2, head, tail });
            self.recount(pair, 1, 2);
        } else {
            self.seen_once.insert(pair, pos);
        }
    }

    fn remove(&mut self, seq: &mut SequenceArray, pair: Pair, pos: u32) {
        let p = pos as usize;
        seq.counted[p] = false;
        if let Some(t) = self.records.get_mut(&pair) {
            let (prev, next) = (seq.prev_occ[p], seq.next_occ[p]);
            if prev == NONE {
                t.head = next;
            } else {
                seq.next_occ[prev as usize] = next;
            }
            if next == NONE {
                t.tail = prev;
            } else {
                seq.prev_occ[next as usize] = prev;
            }
            t.count -= 1;
            let c = t.count;
            if c == 1 {
                let last = t.head;
                self.records.remove(&pair);
                seq.prev_occ[last as usize] = NONE;
                seq.next_occ[last as usize] = NONE;
                self.seen_once.insert(pair, last);
            }
            self.recount(pair, c + 1, c);
        } else {
            let was = self.seen_once.remove(&pair);
            debug_assert_eq!(was, Some(pos));
        }
        seq.prev_occ[p] = NONE;
        seq.next_occ[p] = NONE;
    }

    /// Drops the record for `pair`, returning its threaded slots.
    fn take(&mut self, seq: &mut SequenceArray, pair: Pair) -> Vec<u32> {
        let Some(t) = self.records.remove(&pair) else {
            return Vec::new();
        };
        self.recount(pair, t.count, 0);
        let mut slots = Vec::with_capacity(t.count);
        let mut cursor = t.head;
        while cursor != NONE {
            let c = cursor as usize;
            slots.push(cursor);
            cursor = seq.next_occ[c];
            seq.prev_occ[c] = NONE;
            seq.next_occ[c] = NONE;
            seq.counted[c] = false;
        }
        slots
    }
}

/// One applied replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub pair: Pair,
    pub count: usize,
    pub symbol: Symbol,
}

/// Sequence array, pair table and stop configuration for one compression job.
#[derive(Clone, Debug)]
pub struct RepairState {
    seq: SequenceArray,
    table: PairTable,
    config: CompressorConfig,
    dirty: Vec<bool>,
}

impl RepairState {
    /// Threads every greedy non-overlapping occurrence of `seq` left to right.
    pub fn new(seq: &[Symbol], config: CompressorConfig) -> Self {
        let mut array = SequenceArray::new(seq);
        let mut table = PairTable::default();
        for d in 0..array.len() as u32 {
            if array.should_count(d) {
                let pair = array.pair_unchecked(d);
                table.add(&mut array, pair, d);
            }
        }
        table.enable_buckets();
        let dirty = vec![false; array.len()];
        RepairState {
            seq: array,
            table,
            config,
            dirty,
        }
    }

    pub fn sequence(&self) -> &SequenceArray {
        &self.seq
    }

    pub fn table(&self) -> &PairTable {
        &self.table
    }

    pub fn config(&self) -> &CompressorConfig {
        &self.config
    }

    /// Replaces the most frequent pair if it qualifies. Returns whether a rule was added.
    pub fn replace_step(&mut self, grammar: &mut Grammar) -> bool {
        self.step(grammar).is_some()
    }

    /// Same as [`RepairState::replace_step`], reporting what was replaced.
    pub fn step(&mut self, grammar: &mut Grammar) -> Option<Replacement> {
        if self.config.max_rules().is_some_and(|cap| grammar.len() >= cap) {
            return None;
        }
        let (pair, count) = self.table.most_frequent()?;
        if count < self.config.min_frequency() {
            return None;
        }
        let fresh = grammar.push(pair.0, pair.1);
        let fresh_value = fresh.value();
        let seq = &mut self.seq;
        let table = &mut self.table;

        let mut sites = table.take(seq, pair);
        debug_assert_eq!(sites.len(), count);
        sites.sort_unstable();

        // Neighbouring occurrences change identity; unthread them first.
        for &i in &sites {
            let prev = seq.prev_live[i as usize];
            if prev != NONE && seq.counted[prev as usize] {
                let p = seq.pair_unchecked(prev);
                table.remove(seq, p, prev);
            }
            let j = seq.next_live[i as usize];
            if seq.counted[j as usize] {
                let p = seq.pair_unchecked(j);
                table.remove(seq, p, j);
            }
        }

        for &i in &sites {
            let i = i as usize;
            let j = seq.next_live[i] as usize;
            let after = seq.next_live[j];
            seq.symbols[i] = fresh_value;
            seq.next_live[i] = after;
            if after != NONE {
                seq.prev_live[after as usize] = i as u32;
            }
            seq.symbols[j] = TOMBSTONE;
            seq.prev_live[j] = NONE;
            seq.next_live[j] = NONE;
        }

        let mut touched: Vec<u32> = Vec::with_capacity(sites.len() * 2);
        for &i in &sites {
            let prev = seq.prev_live[i as usize];
            if prev != NONE {
                touched.push(prev);
            }
            touched.push(i);
        }
        touched.sort_unstable();
        touched.dedup();
        for &d in &touched {
            self.dirty[d as usize] = true;
        }

        // Slots left of the cursor are settled; each touched slot is settled
        // from its predecessor, then the change ripples right until stable.
        for &d in &touched {
            if seq.should_count(d) {
                let p = seq.pair_unchecked(d);
                table.add(seq, p, d);
            }
            let mut e = seq.next_live[d as usize];
            while e != NONE && !self.dirty[e as usize] {
                let want = seq.should_count(e);
                if want == seq.counted[e as usize] {
                    break;
                }
                let p = seq.pair_unchecked(e);
                if want {
                    table.add(seq, p, e);
                } else {
                    table.remove(seq, p, e);
                }
                e = seq.next_live[e as usize];
            }
        }
        for &d in &touched {
            self.dirty[d as usize] = false;
        }

        Some(Replacement {
            pair,
            count,
            symbol: fresh,
        })
    }

    /// Runs steps until none qualifies.
    pub fn run(&mut self, grammar: &mut Grammar) {
        while self.replace_step(grammar) {}
    }

    /// Tombstone-free residue.
    pub fn final_sequence(&self) -> Vec<Symbol> {
        self.seq.live_symbols().collect()
    }

    /// Full consistency audit in O(n); meant for tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let seq = &self.seq;
        let n = seq.len();

        let mut live = 0usize;
        let mut cursor = seq.first_live;
        let mut prev = NONE;
        while cursor != NONE {
            let c = cursor as usize;
            if seq.symbols[c] == TOMBSTONE {
                return Err(format!("live chain reaches tombstone {c}"));
            }
            if seq.prev_live[c] != prev {
                return Err(format!("prev_live mismatch at {c}"));
            }
            if prev != NONE && prev >= cursor {
                return Err(format!("live chain not increasing at {c}"));
            }
            live += 1;
            prev = cursor;
            cursor = seq.next_live[c];
        }
        let tombstones = seq.symbols.iter().filter(|s| **s == TOMBSTONE).count();
        if live + tombstones != n {
            return Err(format!("{live} live + {tombstones} tombstones != {n} slots"));
        }

        for d in 0..n {
            if seq.symbols[d] == TOMBSTONE {
                if seq.counted[d] {
                    return Err(format!("tombstone {d} is counted"));
                }
                continue;
            }
            if seq.should_count(d as u32) != seq.counted[d] {
                return Err(format!("slot {d} violates greedy non-overlap"));
            }
        }

        let mut threaded = 0usize;
        for (pair, t) in &self.table.records {
            if self.table.seen_once.contains_key(pair) {
                return Err(format!("{pair:?} both recorded and seen once"));
            }
            if t.count < 2 {
                return Err(format!("{pair:?} recorded with count {}", t.count));
            }
            if !self.table.buckets.contains(pair, t.count) {
                return Err(format!("{pair:?} missing from bucket {}", t.count));
            }
            let mut len = 0usize;
            let mut cursor = t.head;
            let mut back = NONE;
            while cursor != NONE {
                let c = cursor as usize;
                if seq.symbols[c] == TOMBSTONE || !seq.counted[c] {
                    return Err(format!("{pair:?} thread holds dead slot {c}"));
                }
                if seq.pair_at(c) != Some(*pair) {
                    return Err(format!("{pair:?} thread holds foreign slot {c}"));
                }
                if seq.prev_occ[c] != back {
                    return Err(format!("{pair:?} thread back-link broken at {c}"));
                }
                len += 1;
                if len > n {
                    return Err(format!("{pair:?} thread loops"));
                }
                back = cursor;
                cursor = seq.next_occ[c];
            }
            if back != t.tail {
                return Err(format!("{pair:?} tail mismatch"));
            }
            if len != t.count {
                return Err(format!("{pair:?} count {} but thread length {len}", t.count));
            }
            threaded += len;
        }
        for (pair, &pos) in &self.table.seen_once {
            let p = pos as usize;
            if seq.symbols[p] == TOMBSTONE || !seq.counted[p] || seq.pair_at(p) != Some(*pair) {
                return Err(format!("{pair:?} seen-once slot {p} is stale"));
            }
        }
        let counted = seq.counted.iter().filter(|c| **c).count();
        if counted != threaded + self.table.seen_once.len() {
            return Err(format!(
                "{counted} counted slots but {threaded} threaded + {} seen once",
                self.table.seen_once.len()
            ));
        }
        Ok(())
    }
}
