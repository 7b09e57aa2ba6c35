use super::{Csa, SuffixStructures};
use crate::serialize::{self, tag, Serialize};
use crate::succinct::{BitVector, IntVector, RankSelect, WaveletTree};

use std::io::{self, Read, Write};

/// Which suffix array values are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleOrder {
    /// `SA[i]` for every rank `i` divisible by the interval.
    Suffix,
    /// `SA[i]` whenever `SA[i]` is divisible by the interval, with a bitvector
    /// marking the sampled ranks.
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FmConfig {
    pub sa_interval: usize,
    pub isa_interval: usize,
    pub sample_order: SampleOrder,
}

impl Default for FmConfig {
    fn default() -> Self {
        FmConfig { sa_interval: 17, isa_interval: 64, sample_order: SampleOrder::Suffix }
    }
}

/// A succinct FM-index: the BWT in a Huffman-shaped wavelet tree, the C
/// array, and sampled SA and ISA values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmIndex {
    len: usize,
    sigma: usize,
    config: FmConfig,
    counts: Vec<u64>,
    bwt: WaveletTree,
    sa_samples: IntVector,
    sampled: Option<BitVector>,
    isa_samples: IntVector,
}

impl FmIndex {
    /// Builds the index of `text`, whose last symbol must be a unique 0.
    pub fn new(text: &[u32], sigma: usize, config: FmConfig) -> Self {
        let ss = SuffixStructures::new(text);
        Self::from_structures(&ss, sigma, config)
    }

    pub fn from_bytes_text(text: &[u8], config: FmConfig) -> Self {
        let symbols: Vec<u32> = text.iter().map(|&b| b as u32).collect();
        Self::new(&symbols, 256, config)
    }

    pub fn from_structures(ss: &SuffixStructures, sigma: usize, config: FmConfig) -> Self {
        assert!(config.sa_interval >= 1 && config.isa_interval >= 1, "sample intervals must be positive");
        let n = ss.len();
        let mut counts = vec![0u64; sigma + 1];
        for &c in &ss.bwt {
            counts[c as usize + 1] += 1;
        }
        for c in 1..=sigma {
            counts[c] += counts[c - 1];
        }
        let bwt = WaveletTree::new(&ss.bwt, sigma);
        let d = config.sa_interval;
        let (sa_samples, sampled) = match config.sample_order {
            SampleOrder::Suffix => {
                let values: Vec<usize> = ss.sa.iter().step_by(d).copied().collect();
                (IntVector::from_usizes(&values), None)
            }
            SampleOrder::Text => {
                let ranks: Vec<usize> = (0..n).filter(|&i| ss.sa[i] % d == 0).collect();
                let values: Vec<usize> = ranks.iter().map(|&i| ss.sa[i] / d).collect();
                (IntVector::from_usizes(&values), Some(BitVector::from_ones(n, ranks)))
            }
        };
        let isa_values: Vec<usize> = ss.isa.iter().step_by(config.isa_interval).copied().collect();
        FmIndex {
            len: n,
            sigma,
            config,
            counts,
            bwt,
            sa_samples,
            sampled,
            isa_samples: IntVector::from_usizes(&isa_values),
        }
    }

    pub fn config(&self) -> FmConfig {
        self.config
    }

    pub fn wavelet_tree(&self) -> &WaveletTree {
        &self.bwt
    }

    /// The C array: `counts()[c]` symbols are smaller than `c`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Occurrences of `c` in the text.
    pub fn occurrences(&self, c: u32) -> usize {
        self.bwt.count(c)
    }

    fn sample_at(&self, i: usize) -> Option<usize> {
        match &self.sampled {
            None => (i % self.config.sa_interval == 0)
                .then(|| self.sa_samples.get(i / self.config.sa_interval) as usize),
            Some(marks) => marks
                .get(i)
                .then(|| self.sa_samples.get(marks.rank1(i)) as usize * self.config.sa_interval),
        }
    }

    /// The whole suffix array, recovered by one pass of LF from the endmarker.
    pub fn full_suffix_array(&self) -> Vec<usize> {
        let mut sa = vec![0usize; self.len];
        let mut rank = 0;
        for pos in (0..self.len).rev() {
            sa[rank] = pos;
            rank = self.lf(rank);
        }
        sa
    }

    /// The BWT as a plain vector.
    pub fn bwt_vec(&self) -> Vec<u32> {
        self.bwt.iter().collect()
    }

    /// The text, recovered by one pass of LF.
    pub fn text(&self) -> Vec<u32> {
        self.extract(0..self.len)
    }
}

impl Csa for FmIndex {
    fn len(&self) -> usize {
        self.len
    }

    fn sigma(&self) -> usize {
        self.sigma
    }

    #[inline]
    fn count_less(&self, c: u32) -> usize {
        self.counts[(c as usize).min(self.sigma)] as usize
    }

    #[inline]
    fn bwt(&self, i: usize) -> u32 {
        self.bwt.access(i)
    }

    #[inline]
    fn rank(&self, c: u32, i: usize) -> usize {
        self.bwt.rank(c, i)
    }

    fn select(&self, c: u32, k: usize) -> Option<usize> {
        self.bwt.select(c, k)
    }

    #[inline]
    fn lf(&self, i: usize) -> usize {
        let (rank, c) = self.bwt.inverse_select(i);
        self.counts[c as usize] as usize + rank
    }

    fn locate(&self, mut i: usize) -> usize {
        let mut steps = 0;
        loop {
            if let Some(pos) = self.sample_at(i) {
                return (pos + steps) % self.len;
            }
            i = self.lf(i);
            steps += 1;
        }
    }

    fn inverse(&self, pos: usize) -> usize {
        assert!(pos <= self.len, "text position {} beyond length {}", pos, self.len);
        let d = self.config.isa_interval;
        let sample = pos.div_ceil(d);
        let (mut rank, mut at) = if sample * d >= self.len {
            (self.isa_samples.get(0) as usize, self.len)
        } else {
            (self.isa_samples.get(sample) as usize, sample * d)
        };
        while at > pos {
            rank = self.lf(rank);
            at -= 1;
        }
        rank
    }

    fn extract(&self, range: std::ops::Range<usize>) -> Vec<u32> {
        assert!(range.end <= self.len, "extract range beyond text");
        let mut out = vec![0u32; range.len()];
        if range.is_empty() {
            return out;
        }
        let mut rank = self.inverse(range.end);
        for slot in out.iter_mut().rev() {
            let (r, c) = self.bwt.inverse_select(rank);
            *slot = c;
            rank = self.counts[c as usize] as usize + r;
        }
        out
    }
}

impl Serialize for FmIndex {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::FM_INDEX, self.len)?;
        serialize::write_u64(writer, self.sigma as u64)?;
        serialize::write_u64(writer, self.config.sa_interval as u64)?;
        serialize::write_u64(writer, self.config.isa_interval as u64)?;
        serialize::write_u64(writer, matches!(self.config.sample_order, SampleOrder::Text) as u64)?;
        serialize::write_u64_table(writer, &self.counts)?;
        self.bwt.serialize(writer)?;
        self.sa_samples.serialize(writer)?;
        if let Some(marks) = &self.sampled {
            marks.serialize(writer)?;
        }
        self.isa_samples.serialize(writer)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::FM_INDEX)?;
        let sigma = serialize::read_usize(reader)?;
        let sa_interval = serialize::read_usize(reader)?;
        let isa_interval = serialize::read_usize(reader)?;
        let sample_order = match serialize::read_u64(reader)? {
            0 => SampleOrder::Suffix,
            1 => SampleOrder::Text,
            _ => return Err(serialize::invalid_data("unknown sample order")),
        };
        if sa_interval == 0 || isa_interval == 0 {
            return Err(serialize::invalid_data("zero sample interval"));
        }
        let counts = serialize::read_u64_table(reader)?;
        let bwt = WaveletTree::load(reader)?;
        let sa_samples = IntVector::load(reader)?;
        let sampled = match sample_order {
            SampleOrder::Suffix => None,
            SampleOrder::Text => Some(BitVector::load(reader)?),
        };
        let isa_samples = IntVector::load(reader)?;
        if counts.len() != sigma + 1 || bwt.len() != len || bwt.sigma() != sigma || counts[sigma] != len as u64 {
            return Err(serialize::invalid_data("inconsistent FM-index header"));
        }
        let expected_sa = match &sampled {
            None => len.div_ceil(sa_interval),
            Some(marks) => {
                if marks.len() != len {
                    return Err(serialize::invalid_data("sample marks length mismatch"));
                }
                marks.count_ones()
            }
        };
        if sa_samples.len() != expected_sa || isa_samples.len() != len.div_ceil(isa_interval) {
            return Err(serialize::invalid_data("sample count mismatch"));
        }
        Ok(FmIndex {
            len,
            sigma,
            config: FmConfig { sa_interval, isa_interval, sample_order },
            counts,
            bwt,
            sa_samples,
            sampled,
            isa_samples,
        })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES
            + 32
            + serialize::words_size(self.counts.len())
            + self.bwt.size_in_bytes()
            + self.sa_samples.size_in_bytes()
            + self.sampled.as_ref().map_or(0, |m| m.size_in_bytes())
            + self.isa_samples.size_in_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ex1() -> FmIndex {
        FmIndex::from_bytes_text(b"GATTACA\0", FmConfig::default())
    }

    fn sym(c: u8) -> u32 {
        c as u32
    }

    #[test]
    fn lf_and_psi_on_gattaca() {
        let idx = ex1();
        // 1-based lf(6) = 1, lf(2) = 5, lf(1) = 2.
        assert_eq!(idx.lf(5), 0);
        assert_eq!(idx.lf(1), 4);
        assert_eq!(idx.lf(0), 1);
        assert_eq!(idx.psi(0), 5);
        assert_eq!(idx.psi(4), 1);
        for i in 0..8 {
            assert_eq!(idx.psi(idx.lf(i)), i);
            assert_eq!(idx.lf(idx.psi(i)), i);
        }
    }

    #[test]
    fn backward_search_on_gattaca() {
        let idx = ex1();
        assert_eq!(idx.backward_step(0..8, sym(b'A')), 1..4);
        assert_eq!(idx.backward_step(1..4, sym(b'T')), 6..7);
        assert_eq!(idx.backward_step(0..0, sym(b'T')), 0..0);
        assert_eq!(idx.find(&[sym(b'T'), sym(b'A')]), 6..7);
        assert_eq!(idx.find(&[]), 0..8);
        assert!(idx.find(&[sym(b'C'), sym(b'A'), sym(b'T')]).is_empty());
    }

    #[test]
    fn locate_and_extract_on_gattaca() {
        let idx = ex1();
        assert_eq!(idx.locate_range(6..7), [3]);
        let mut all = idx.locate_range(0..8);
        all.sort_unstable();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
        let mut a = idx.locate_range(1..4);
        a.sort_unstable();
        assert_eq!(a, [1, 4, 6]);
        let atta: Vec<u32> = b"ATTA".iter().map(|&b| b as u32).collect();
        assert_eq!(idx.extract(1..5), atta);
        assert_eq!(idx.extract(7..8), [0]);
        assert_eq!(idx.text(), b"GATTACA\0".iter().map(|&b| b as u32).collect::<Vec<_>>());
    }

    #[test]
    fn sampling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.gen_range(1..400);
            let mut text: Vec<u32> = (0..n).map(|_| rng.gen_range(1..4)).collect();
            text.push(0);
            let ss = SuffixStructures::new(&text);
            for d in [1, 3, 5, 17, 31] {
                for order in [SampleOrder::Suffix, SampleOrder::Text] {
                    let config = FmConfig { sa_interval: d, isa_interval: d + 2, sample_order: order };
                    let idx = FmIndex::from_structures(&ss, 4, config);
                    assert_eq!(idx.full_suffix_array(), ss.sa);
                    for i in 0..text.len() {
                        assert_eq!(idx.locate(i), ss.sa[i]);
                        assert_eq!(idx.inverse(i), ss.isa[i]);
                    }
                    assert_eq!(idx.inverse(text.len()), ss.isa[0]);
                    let a = rng.gen_range(0..text.len());
                    let b = rng.gen_range(a..=text.len());
                    assert_eq!(idx.extract(a..b), text[a..b]);
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        for order in [SampleOrder::Suffix, SampleOrder::Text] {
            let config = FmConfig { sample_order: order, ..FmConfig::default() };
            let idx = FmIndex::from_bytes_text(b"ACGTTGCAACGTAGGCTTAGC\0", config);
            let bytes = idx.to_bytes();
            assert_eq!(bytes.len(), idx.size_in_bytes());
            let loaded = FmIndex::from_bytes(&bytes).unwrap();
            assert_eq!(loaded, idx);
        }
    }
}
