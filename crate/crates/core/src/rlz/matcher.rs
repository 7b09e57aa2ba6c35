use super::{Symbols, TokenMap};
use crate::textindex::{Csa, FmConfig, FmIndex, SuffixStructures};

use std::ops::Range;

/// Tuning knobs for the parser.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RlzConfig {
    /// Maximum copy length of a phrase.
    pub max_len: usize,
    /// Number of start positions probed after a phrase whose greedy offset is
    /// far from the last explicit offset. Zero disables the lookahead.
    pub lookahead: usize,
    /// An offset is near the last explicit offset when the absolute
    /// difference is below this bound. At most `2^15`, so that differences
    /// fit in 16 bits.
    pub near: usize,
    /// Minimum copy length of a phrase found by the lookahead. The copy must
    /// also be at least as long as the number of skipped positions.
    pub min_lookahead_len: usize,
}

impl Default for RlzConfig {
    fn default() -> Self {
        RlzConfig { max_len: 1024, lookahead: 32, near: 1 << 15, min_lookahead_len: 4 }
    }
}

impl RlzConfig {
    pub fn with_max_len(max_len: usize) -> Self {
        RlzConfig { max_len, ..Self::default() }
    }

    fn validate(&self) {
        assert!(self.max_len >= 2, "max_len must be at least 2");
        assert!(self.near >= 1 && self.near <= 1 << 15, "near bound must be in 1..=2^15");
        assert!(self.min_lookahead_len >= 1, "min_lookahead_len must be positive");
    }

    /// Whether `offset` can be stored as a difference to `explicit`.
    pub fn is_near(&self, offset: i64, explicit: i64) -> bool {
        offset.abs_diff(explicit) < self.near as u64
    }
}

/// How a phrase was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhraseKind {
    /// Longest match at the phrase start (smallest source among ties).
    Greedy,
    /// A match near the last explicit offset found by the lookahead.
    Lookahead,
}

/// One phrase: `copy_len` tokens copied from `source`, then literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phrase {
    pub start: usize,
    /// Reference position of the copy; `None` when `copy_len == 0`.
    pub source: Option<usize>,
    pub copy_len: usize,
    /// Literal count, at least 1. The last literal of the final phrase may be
    /// the virtual terminator.
    pub literals: usize,
    pub kind: PhraseKind,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.copy_len + self.literals
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len()
    }

    /// Relative offset `source - start`, 0 for literal-only phrases.
    pub fn offset(&self) -> i64 {
        self.source.map_or(0, |s| s as i64 - self.start as i64)
    }
}

/// Tracks the last explicitly stored offset while phrases are emitted.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct OffsetTracker {
    explicit: Option<i64>,
}

impl OffsetTracker {
    /// Returns whether the phrase's offset is stored explicitly.
    pub(crate) fn push(&mut self, phrase: &Phrase, config: &RlzConfig) -> bool {
        let explicit = match self.explicit {
            None => true,
            Some(e) => phrase.copy_len > 0 && !config.is_near(phrase.offset(), e),
        };
        if explicit {
            self.explicit = Some(phrase.offset());
        }
        explicit
    }

    pub(crate) fn last(&self) -> Option<i64> {
        self.explicit
    }
}

// Maximum over an array with blocks of 64 and a sparse table over block maxima.
#[derive(Clone, Debug)]
struct RangeMax {
    values: Vec<u32>,
    table: Vec<Vec<u32>>,
}

const BLOCK: usize = 64;

impl RangeMax {
    fn new(values: Vec<u32>) -> Self {
        let blocks: Vec<u32> = values.chunks(BLOCK).map(|c| *c.iter().max().unwrap()).collect();
        let mut table = vec![blocks];
        let mut width = 1;
        while 2 * width <= table[0].len() {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width).map(|i| prev[i].max(prev[i + width])).collect();
            table.push(next);
            width *= 2;
        }
        RangeMax { values, table }
    }

    fn max(&self, range: Range<usize>) -> u32 {
        let (start, end) = (range.start, range.end);
        let (first_block, last_block) = (start.div_ceil(BLOCK), end / BLOCK);
        if first_block >= last_block {
            return *self.values[start..end].iter().max().unwrap();
        }
        let mut best = 0;
        for &v in &self.values[start..first_block * BLOCK] {
            best = best.max(v);
        }
        for &v in &self.values[last_block * BLOCK..end] {
            best = best.max(v);
        }
        let level = (last_block - first_block).ilog2() as usize;
        best.max(self.table[level][first_block]).max(self.table[level][last_block - (1 << level)])
    }
}

/// A reference prepared for RLZ parsing: its token map and an FM-index of
/// the reversed token sequence, with the full suffix array of the reversed
/// sequence for choosing the leftmost source.
#[derive(Clone, Debug)]
pub struct RlzReference {
    values: Vec<i64>,
    map: TokenMap,
    index: FmIndex,
    rev_sa: RangeMax,
}

impl RlzReference {
    pub fn new(values: &[i64]) -> Self {
        let map = TokenMap::new(values);
        let mut rev: Vec<u32> = values.iter().rev().map(|&v| map.token(v).unwrap()).collect();
        rev.push(0);
        let ss = SuffixStructures::new(&rev);
        let config = FmConfig { sa_interval: 1 << 20, isa_interval: 1 << 20, ..FmConfig::default() };
        let index = FmIndex::from_structures(&ss, map.sigma(), config);
        let rev_sa = RangeMax::new(ss.sa.iter().map(|&p| p as u32).collect());
        RlzReference { values: values.to_vec(), map, index, rev_sa }
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self::new(&bytes.iter().map(|&b| b as i64).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn token_map(&self) -> &TokenMap {
        &self.map
    }

    /// Longest prefix of `tokens[..limit]` occurring in the reference, with
    /// its leftmost source position.
    fn longest_match(&self, tokens: &[Option<u32>], limit: usize) -> (usize, Option<usize>) {
        let mut range = 0..self.index.len();
        let mut len = 0;
        while len < limit {
            let Some(c) = tokens[len] else { break };
            let next = self.index.backward_step(range.clone(), c);
            if next.is_empty() {
                break;
            }
            range = next;
            len += 1;
        }
        if len == 0 {
            return (0, None);
        }
        // Suffix q of the reversed reference holds the match ending at m - 1 - q.
        let q = self.rev_sa.max(range) as usize;
        (len, Some(self.values.len() - q - len))
    }

    /// Sources of `tokens` when it occurs at most `limit` times.
    fn few_occurrences(&self, tokens: &[Option<u32>], limit: usize) -> Vec<usize> {
        let mut range = 0..self.index.len();
        for &t in tokens {
            let Some(c) = t else { return Vec::new() };
            range = self.index.backward_step(range, c);
            if range.is_empty() {
                return Vec::new();
            }
        }
        if range.len() > limit {
            return Vec::new();
        }
        range.map(|r| self.values.len() - self.rev_sa.values[r] as usize - tokens.len()).collect()
    }

    fn match_len_at(&self, target: &[i64], start: usize, source: usize, limit: usize) -> usize {
        let limit = limit.min(target.len() - start).min(self.values.len() - source);
        (0..limit).take_while(|&t| target[start + t] == self.values[source + t]).count()
    }

    /// Greedy RLZ parse of `target`, with the lookahead for offsets near the
    /// last explicit offset.
    pub fn parse<S: Symbols + ?Sized>(&self, target: &S, config: &RlzConfig) -> Vec<Phrase> {
        config.validate();
        let n = target.symbol_count();
        let values: Vec<i64> = (0..n).map(|i| target.symbol(i)).collect();
        let tokens = self.map.encode(&values);
        let mut phrases: Vec<Phrase> = Vec::new();
        let mut tracker = OffsetTracker::default();
        let mut i = 0;
        while i < n {
            let (len, source) = self.longest_match(&tokens[i..], config.max_len.min(n - i));
            let mut phrase = Phrase { start: i, source, copy_len: len, literals: 1, kind: PhraseKind::Greedy };
            if let Some(explicit) = tracker.last() {
                let far = len == 0 || !config.is_near(phrase.offset(), explicit);
                if far && config.lookahead > 0 {
                    if let Some(found) = self.lookahead(&values, &tokens, i, i + len, explicit, config) {
                        phrases.last_mut().unwrap().literals += found.start - i;
                        phrase = found;
                    }
                }
            }
            // A copy that reaches the end is closed by the virtual terminator.
            tracker.push(&phrase, config);
            i = phrase.end().min(n);
            phrases.push(phrase);
        }
        phrases
    }

    fn lookahead(
        &self,
        values: &[i64],
        tokens: &[Option<u32>],
        start: usize,
        greedy_end: usize,
        explicit: i64,
        config: &RlzConfig,
    ) -> Option<Phrase> {
        let n = values.len();
        for delta in 1..=config.lookahead {
            let p = start + delta;
            if p >= n {
                break;
            }
            let mut candidates = Vec::new();
            let same = p as i64 + explicit;
            if same >= 0 && (same as usize) < self.values.len() {
                candidates.push(same as usize);
            }
            if p + config.min_lookahead_len <= n {
                for source in self.few_occurrences(&tokens[p..p + config.min_lookahead_len], 8) {
                    if config.is_near(source as i64 - p as i64, explicit) {
                        candidates.push(source);
                    }
                }
            }
            let mut best: Option<(usize, usize)> = None;
            for source in candidates {
                let len = self.match_len_at(values, p, source, config.max_len);
                // The skipped positions become literals, so the copy must be
                // at least as long as the skip.
                if len < config.min_lookahead_len.max(delta) || p + len < greedy_end {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bl, bs)) => len > bl || (len == bl && source < bs),
                };
                if better {
                    best = Some((len, source));
                }
            }
            if let Some((len, source)) = best {
                return Some(Phrase {
                    start: p,
                    source: Some(source),
                    copy_len: len,
                    literals: 1,
                    kind: PhraseKind::Lookahead,
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes(s: &[u8]) -> Vec<i64> {
        s.iter().map(|&b| b as i64).collect()
    }

    // Longest match of target[start..] in reference, and its smallest source.
    fn scan_longest(reference: &[i64], target: &[i64], start: usize, max_len: usize) -> (usize, Option<usize>) {
        let mut best = (0, None);
        for src in 0..reference.len() {
            let len = (0..max_len.min(target.len() - start).min(reference.len() - src))
                .take_while(|&t| target[start + t] == reference[src + t])
                .count();
            if len > best.0 {
                best = (len, Some(src));
            }
        }
        best
    }

    #[test]
    fn hand_parse() {
        let r = RlzReference::new(&bytes(b"ACGTACGT"));
        let phrases = r.parse(bytes(b"ACGTTCGT").as_slice(), &RlzConfig::default());
        // 1-based (src 1, len 4, lit T), (src 2, len 3, terminator).
        assert_eq!(phrases.len(), 2);
        assert_eq!((phrases[0].source, phrases[0].copy_len, phrases[0].literals), (Some(0), 4, 1));
        assert_eq!((phrases[1].source, phrases[1].copy_len, phrases[1].literals), (Some(1), 3, 1));
        assert_eq!(phrases[1].end(), 9);
    }

    #[test]
    fn no_matches_gives_literal_phrases() {
        let r = RlzReference::new(&bytes(b"AAAA"));
        let phrases = r.parse(bytes(b"CCCC").as_slice(), &RlzConfig::default());
        assert_eq!(phrases.len(), 4);
        assert!(phrases.iter().all(|p| p.copy_len == 0 && p.literals == 1));
    }

    #[test]
    fn identity_parse_has_zero_offsets() {
        let mut state = 12345u64;
        let reference: Vec<i64> = (0..5000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 62) as i64
            })
            .collect();
        let r = RlzReference::new(&reference);
        let config = RlzConfig::with_max_len(100);
        let phrases = r.parse(reference.as_slice(), &config);
        assert!(phrases.iter().all(|p| p.offset() == 0));
        assert!(phrases[..phrases.len() - 1].iter().all(|p| p.copy_len == 100));
        assert_eq!(phrases.last().unwrap().end(), reference.len() + 1);
    }

    #[test]
    fn greedy_phrases_are_longest_leftmost_matches() {
        let mut state = 99u64;
        let mut next = |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for round in 0..30 {
            let reference: Vec<i64> = (0..400).map(|_| next(4) as i64).collect();
            let mut target = reference.clone();
            for _ in 0..(round % 10) * 4 {
                let pos = next(target.len() as u64) as usize;
                target[pos] = next(5) as i64;
            }
            let r = RlzReference::new(&reference);
            let config = RlzConfig::with_max_len(64);
            let phrases = r.parse(target.as_slice(), &config);
            let mut pos = 0;
            for (k, p) in phrases.iter().enumerate() {
                assert_eq!(p.start, pos);
                assert!(p.literals >= 1 && p.copy_len <= 64);
                match p.kind {
                    PhraseKind::Greedy => {
                        assert_eq!((p.copy_len, p.source), scan_longest(&reference, &target, p.start, 64));
                    }
                    PhraseKind::Lookahead => {
                        assert!(p.copy_len >= config.min_lookahead_len);
                        // Skipped positions are literals of the previous phrase.
                        assert!(p.copy_len >= phrases[k - 1].literals - 1);
                    }
                }
                if let Some(src) = p.source {
                    assert_eq!(reference[src..src + p.copy_len], target[p.start..p.start + p.copy_len]);
                }
                pos = p.end();
            }
            assert!(pos == target.len() || pos == target.len() + 1);
        }
    }

    #[test]
    fn lookahead_resynchronises_after_a_spurious_match() {
        let mut state = 7u64;
        let mut reference: Vec<i64> = (0..100_000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 62) as i64
            })
            .collect();
        let mut target: Vec<i64> = reference[..200].to_vec();
        target[40] = 9;
        target[50] = 9;
        // A far copy of target[41..60] beats the 9-token match at offset 0.
        reference[90_000..90_019].copy_from_slice(&target[41..60]);
        reference[90_019] = 8;
        let r = RlzReference::new(&reference);
        let phrases = r.parse(target.as_slice(), &RlzConfig::default());
        assert!(phrases.iter().all(|p| p.offset() == 0 || p.copy_len == 0));
        assert!(phrases.iter().any(|p| p.kind == PhraseKind::Lookahead));

        let no_lookahead = RlzConfig { lookahead: 0, ..RlzConfig::default() };
        let greedy = r.parse(target.as_slice(), &no_lookahead);
        assert!(greedy.iter().any(|p| p.source == Some(90_000)));
    }
}
