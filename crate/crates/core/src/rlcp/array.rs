use std::io::{self, Read, Write};
use std::ops::Range;
use std::sync::Arc;

use super::minima::MinimaTree;
use super::query::{self, Blocked};
use super::Lcp;
use crate::rlz::{PhraseLayout, RlzConfig, RlzReference};
use crate::serialize::{self, tag, Serialize};
use crate::succinct::SLArray;
use crate::Result;

/// Differential LCP array: `DLCP[0] = LCP[0]`, `DLCP[i] = LCP[i] - LCP[i - 1]`.
pub fn differential<I: IntoIterator<Item = u64>>(lcp: I) -> Vec<i64> {
    let mut prev = 0i64;
    lcp.into_iter()
        .map(|v| {
            let d = v as i64 - prev;
            prev = v as i64;
            d
        })
        .collect()
}

/// The reference LCP array prepared for parsing targets against it.
#[derive(Clone, Debug)]
pub struct RlcpReference {
    lcp: Arc<SLArray>,
    rlz: RlzReference,
}

impl RlcpReference {
    pub fn new(lcp: Arc<SLArray>) -> Self {
        let rlz = RlzReference::new(&differential(lcp.iter()));
        RlcpReference { lcp, rlz }
    }

    pub fn lcp(&self) -> &Arc<SLArray> {
        &self.lcp
    }
}

/// LCP array of a target stored as an RLZ parse of its differential LCP
/// against the reference's, with absolute LCP values as literals and a
/// minima tree over the phrases.
#[derive(Clone, Debug)]
pub struct RlcpArray {
    reference: Arc<SLArray>,
    layout: PhraseLayout,
    literals: SLArray,
    minima: MinimaTree,
}

impl PartialEq for RlcpArray {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.literals == other.literals && self.minima == other.minima
    }
}

impl RlcpArray {
    pub fn build(reference: &RlcpReference, lcp_s: &SLArray) -> Self {
        Self::build_with(reference, lcp_s, &RlzConfig::default())
    }

    pub fn build_with(reference: &RlcpReference, lcp_s: &SLArray, config: &RlzConfig) -> Self {
        let values = lcp_s.to_vec();
        let n = values.len();
        let dlcp = differential(values.iter().copied());
        let phrases = reference.rlz.parse(dlcp.as_slice(), config);
        let layout = PhraseLayout::new(&phrases, n, config);
        let mut literals = Vec::with_capacity(layout.literal_count());
        let mut leaves = Vec::with_capacity(phrases.len());
        for p in &phrases {
            for j in p.start + p.copy_len..p.end() {
                // The virtual terminator is stored as 0.
                literals.push(if j < n { values[j] } else { 0 });
            }
            leaves.push(*values[p.start..p.end().min(n)].iter().min().expect("phrase covers a position"));
        }
        RlcpArray {
            reference: Arc::clone(&reference.lcp),
            layout,
            literals: SLArray::from_slice(&literals),
            minima: MinimaTree::new(&leaves),
        }
    }

    pub fn reference(&self) -> &Arc<SLArray> {
        &self.reference
    }

    pub fn layout(&self) -> &PhraseLayout {
        &self.layout
    }

    pub fn minima_tree(&self) -> &MinimaTree {
        &self.minima
    }

    pub fn phrase_count(&self) -> usize {
        self.layout.phrase_count()
    }

    pub fn mean_phrase_len(&self) -> f64 {
        self.layout.len() as f64 / self.phrase_count().max(1) as f64
    }

    /// `LCP_S[j]` and the phrase containing `j`.
    pub fn access(&self, j: usize) -> (u64, usize) {
        assert!(j < self.layout.len(), "position {j} beyond LCP array of length {}", self.layout.len());
        let b = self.layout.phrase_of(j);
        (self.decode(b, j..j + 1)[0], b)
    }

    /// Size in bytes, excluding the reference.
    pub fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES
            + 8
            + self.layout.size_in_bytes()
            + self.literals.size_in_bytes()
            + self.minima.size_in_bytes()
    }

    pub fn write_to<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RELATIVE_LCP, self.layout.len())?;
        serialize::write_u64(writer, self.reference.len() as u64)?;
        self.layout.serialize(writer)?;
        self.literals.serialize(writer)?;
        self.minima.serialize(writer)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_in_bytes());
        self.write_to(&mut out).expect("writing to memory");
        out
    }

    pub fn read_from<R: Read>(reader: &mut R, reference: Arc<SLArray>) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::RELATIVE_LCP)?;
        let reference_len = serialize::read_usize(reader)?;
        let layout = PhraseLayout::load(reader)?;
        let literals = SLArray::load(reader)?;
        let minima = MinimaTree::load(reader)?;
        if reference_len != reference.len() {
            return Err(serialize::invalid_data("relative LCP array built against another reference"));
        }
        if layout.len() != len || literals.len() != layout.literal_count() || minima.leaf_count() != layout.phrase_count() {
            return Err(serialize::invalid_data("inconsistent relative LCP array"));
        }
        for i in 0..layout.phrase_count() {
            let range = layout.phrase_range(i);
            let copy_len = range.len() - layout.literal_range(i).len();
            let source = range.start as i64 + layout.offset(i);
            if copy_len > 0 && (source < 0 || source as usize + copy_len > reference.len()) {
                return Err(serialize::invalid_data("relative LCP phrase outside the reference"));
            }
        }
        Ok(RlcpArray { reference, layout, literals, minima })
    }

    pub fn from_bytes(bytes: &[u8], reference: Arc<SLArray>) -> io::Result<Self> {
        let mut reader = bytes;
        let array = Self::read_from(&mut reader, reference)?;
        if !reader.is_empty() {
            return Err(serialize::invalid_data("trailing bytes after relative LCP array"));
        }
        Ok(array)
    }
}

impl Blocked for RlcpArray {
    fn len(&self) -> usize {
        self.layout.len()
    }

    #[inline]
    fn block_of(&self, j: usize) -> usize {
        self.layout.phrase_of(j)
    }

    fn block_range(&self, b: usize) -> Range<usize> {
        let range = self.layout.phrase_range(b);
        range.start..range.end.min(self.layout.len())
    }

    fn decode(&self, b: usize, range: Range<usize>) -> Vec<u64> {
        let phrase = self.layout.phrase_range(b);
        let lits = self.layout.literal_range(b);
        let copy_end = phrase.start + phrase.len() - lits.len();
        let mut out = Vec::with_capacity(range.len());
        if range.start < copy_end {
            // LCP_S[s - 1] + LCP_R[r + t] - LCP_R[r - 1].
            let base = if lits.start == 0 { 0 } else { self.literals.get(lits.start - 1) as i64 };
            let source = (phrase.start as i64 + self.layout.offset(b)) as usize;
            let before = if source == 0 { 0 } else { self.reference.get(source - 1) as i64 };
            let first = source + range.start - phrase.start;
            let count = copy_end.min(range.end) - range.start;
            out.extend(self.reference.iter_from(first).take(count).map(|v| (base + v as i64 - before) as u64));
        }
        let lit_from = range.start.max(copy_end);
        if lit_from < range.end {
            let first = lits.start + lit_from - copy_end;
            out.extend(self.literals.iter_from(first).take(range.end - lit_from));
        }
        out
    }

    fn minima(&self) -> &MinimaTree {
        &self.minima
    }
}

/// An LCP array stored directly, with a minima tree over fixed-size blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainLcp {
    values: Arc<SLArray>,
    minima: MinimaTree,
}

const PLAIN_BLOCK: usize = 64;

impl PlainLcp {
    pub fn new(values: Arc<SLArray>) -> Self {
        let all = values.to_vec();
        let leaves: Vec<u64> = all.chunks(PLAIN_BLOCK).map(|c| *c.iter().min().expect("non-empty block")).collect();
        PlainLcp { values, minima: MinimaTree::new(&leaves) }
    }

    pub fn values(&self) -> &Arc<SLArray> {
        &self.values
    }

    /// Size in bytes of the values and the minima tree.
    pub fn size_in_bytes(&self) -> usize {
        self.values.size_in_bytes() + self.minima.size_in_bytes()
    }
}

impl Blocked for PlainLcp {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn block_of(&self, j: usize) -> usize {
        j / PLAIN_BLOCK
    }

    fn block_range(&self, b: usize) -> Range<usize> {
        b * PLAIN_BLOCK..((b + 1) * PLAIN_BLOCK).min(self.values.len())
    }

    fn decode(&self, _b: usize, range: Range<usize>) -> Vec<u64> {
        self.values.iter_from(range.start).take(range.len()).collect()
    }

    fn minima(&self) -> &MinimaTree {
        &self.minima
    }
}

macro_rules! blocked_lcp {
    ($ty:ty) => {
        impl Lcp for $ty {
            fn len(&self) -> usize {
                Blocked::len(self)
            }

            fn get(&self, j: usize) -> u64 {
                assert!(j < Blocked::len(self), "position beyond LCP array");
                self.decode(self.block_of(j), j..j + 1)[0]
            }

            fn range(&self, range: Range<usize>) -> Vec<u64> {
                query::range(self, range)
            }

            fn rmq(&self, sp: usize, ep: usize) -> Result<(usize, u64)> {
                query::rmq(self, sp, ep)
            }

            fn nsv(&self, i: usize) -> Option<(usize, u64)> {
                query::next_by(self, i, |x, v| x < v)
            }

            fn psv(&self, i: usize) -> Option<(usize, u64)> {
                query::prev_by(self, i, |x, v| x < v)
            }

            fn nsev(&self, i: usize) -> Option<(usize, u64)> {
                query::next_by(self, i, |x, v| x <= v)
            }

            fn psev(&self, i: usize) -> Option<(usize, u64)> {
                query::prev_by(self, i, |x, v| x <= v)
            }
        }
    };
}

blocked_lcp!(RlcpArray);
blocked_lcp!(PlainLcp);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textindex::SuffixStructures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lcp_of(text: &[u8]) -> Vec<u64> {
        let symbols: Vec<u32> = text.iter().map(|&b| b as u32).collect();
        SuffixStructures::new(&symbols).lcp.iter().map(|&v| v as u64).collect()
    }

    fn build(r: &[u8], s: &[u8]) -> (RlcpArray, Vec<u64>) {
        let reference = RlcpReference::new(Arc::new(SLArray::from_slice(&lcp_of(r))));
        let lcp_s = lcp_of(s);
        (RlcpArray::build(&reference, &SLArray::from_slice(&lcp_s)), lcp_s)
    }

    fn random_genome(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
        (0..n).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
    }

    fn mutate(rng: &mut ChaCha8Rng, r: &[u8], rate: f64) -> Vec<u8> {
        let mut s = Vec::new();
        for &c in r {
            if rng.gen_bool(rate) {
                match rng.gen_range(0..3) {
                    0 => s.push(b"ACGT"[rng.gen_range(0..4)]),
                    1 => {
                        s.push(c);
                        s.push(b"ACGT"[rng.gen_range(0..4)]);
                    }
                    _ => {}
                }
            } else {
                s.push(c);
            }
        }
        s
    }

    fn terminated(mut t: Vec<u8>) -> Vec<u8> {
        t.push(0);
        t
    }

    fn rmq_oracle(v: &[u64], sp: usize, ep: usize) -> (usize, u64) {
        let mut best = (sp, v[sp]);
        for (j, &x) in v.iter().enumerate().take(ep + 1).skip(sp) {
            if x < best.1 {
                best = (j, x);
            }
        }
        best
    }

    fn check_queries(a: &impl Lcp, v: &[u64], rng: &mut ChaCha8Rng, queries: usize) {
        let n = v.len();
        for _ in 0..queries {
            let i = rng.gen_range(0..n);
            let next = |strict: bool| (i + 1..n).find(|&j| if strict { v[j] < v[i] } else { v[j] <= v[i] }).map(|j| (j, v[j]));
            let prev = |strict: bool| (0..i).rev().find(|&j| if strict { v[j] < v[i] } else { v[j] <= v[i] }).map(|j| (j, v[j]));
            assert_eq!(a.nsv(i), next(true), "nsv({i})");
            assert_eq!(a.nsev(i), next(false), "nsev({i})");
            assert_eq!(a.psv(i), prev(true), "psv({i})");
            assert_eq!(a.psev(i), prev(false), "psev({i})");
            // Range lengths 16^k with probability 0.5^k.
            let mut len = 1;
            while len < n && rng.gen_bool(0.5) {
                len *= 16;
            }
            let len = len.min(n);
            let sp = rng.gen_range(0..=n - len);
            let ep = sp + len - 1;
            assert_eq!(a.rmq(sp, ep).unwrap(), rmq_oracle(v, sp, ep), "rmq({sp}, {ep})");
        }
    }

    #[test]
    fn gattaca_pair_exhaustive() {
        let (a, lcp_s) = build(b"GATTACA\0", b"GATTAGA\0");
        for (j, &v) in lcp_s.iter().enumerate() {
            assert_eq!(a.access(j).0, v);
            assert_eq!(a.get(j), v);
        }
        assert_eq!(a.range(0..lcp_s.len()), lcp_s);
        assert!(a.range(3..3).is_empty());
        assert_eq!(a.access(0).0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        check_queries(&a, &lcp_s, &mut rng, 100_000);
    }

    #[test]
    fn gattaca_as_target() {
        // LCP = 0 0 1 1 0 0 0 1.
        let (a, lcp) = build(b"A\0", b"GATTACA\0");
        assert_eq!(lcp, [0, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(a.rmq(2, 7).unwrap(), (4, 0));
        assert_eq!(a.nsv(2), Some((4, 0)));
        assert_eq!(a.psv(2), Some((1, 0)));
        assert_eq!(a.nsv(4), None);
        assert_eq!(a.psv(0), None);
        assert_eq!(a.rmq(3, 3).unwrap(), (3, 1));
        assert!(a.rmq(3, 2).is_err());
        assert!(a.rmq(0, 8).is_err());
    }

    #[test]
    fn identical_arrays() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let t = terminated(random_genome(&mut rng, 5000));
        let (a, lcp) = build(&t, &t);
        for i in 0..a.phrase_count() {
            assert_eq!(a.layout().offset(i), 0);
        }
        // One absolute value per phrase.
        assert_eq!(a.literals.len(), a.phrase_count());
        assert_eq!(a.range(0..lcp.len()), lcp);
    }

    #[test]
    fn mutated_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for (round, rate) in [0.0001, 0.001, 0.01, 0.1].iter().enumerate() {
            let r = random_genome(&mut rng, 20_000 + round * 1000);
            let s = terminated(mutate(&mut rng, &r, *rate));
            let (a, lcp) = build(&terminated(r), &s);
            for (j, &v) in lcp.iter().enumerate() {
                assert_eq!(a.access(j).0, v);
            }
            assert_eq!(a.range(0..lcp.len()), lcp);
            check_queries(&a, &lcp, &mut rng, 20_000);
            // Minima tree leaves hold the phrase minima.
            for b in 0..a.phrase_count() {
                let range = a.block_range(b);
                assert_eq!(a.minima_tree().leaf(b), *lcp[range].iter().min().unwrap());
            }
            if *rate >= 0.1 {
                assert!(a.mean_phrase_len() < 50.0, "mean phrase length {}", a.mean_phrase_len());
            }
        }
    }

    #[test]
    fn long_runs_and_large_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let mut r = random_genome(&mut rng, 3000);
        r.splice(1000..1000, std::iter::repeat_n(b'N', 600));
        let mut s = r.clone();
        s.splice(1000..1000, std::iter::repeat_n(b'N', 300));
        let (a, lcp) = build(&terminated(r), &terminated(s));
        assert!(lcp.iter().any(|&v| v >= 255));
        assert_eq!(a.range(0..lcp.len()), lcp);
        check_queries(&a, &lcp, &mut rng, 10_000);
    }

    #[test]
    fn plain_lcp_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let lcp = lcp_of(&terminated(random_genome(&mut rng, 10_000)));
        let a = PlainLcp::new(Arc::new(SLArray::from_slice(&lcp)));
        assert_eq!(a.range(0..lcp.len()), lcp);
        check_queries(&a, &lcp, &mut rng, 20_000);
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let r = random_genome(&mut rng, 4000);
        let s = terminated(mutate(&mut rng, &r, 0.01));
        let reference = RlcpReference::new(Arc::new(SLArray::from_slice(&lcp_of(&terminated(r)))));
        let a = RlcpArray::build(&reference, &SLArray::from_slice(&lcp_of(&s)));
        let bytes = a.to_bytes();
        assert_eq!(bytes.len(), a.size_in_bytes());
        let loaded = RlcpArray::from_bytes(&bytes, Arc::clone(reference.lcp())).unwrap();
        assert_eq!(loaded, a);
        let other = Arc::new(SLArray::from_slice(&[0, 0, 1]));
        assert!(RlcpArray::from_bytes(&bytes, other).is_err());
    }
}
