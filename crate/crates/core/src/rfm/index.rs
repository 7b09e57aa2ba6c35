use std::io::{self, Read, Write};
use std::sync::Arc;

use super::invariant::bwt_invariant;
use super::lcs::{approx_lcs, LcsConfig};
use crate::serialize::{self, tag, Serialize};
use crate::succinct::{CompactBitVector, IntVector, RankSelect, WaveletTree};
use crate::textindex::{Csa, FmIndex, SuffixStructures};

/// Build parameters of a relative FM-index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RfmConfig {
    /// Full variant with `locate` and `inverse`; otherwise the basic variant.
    pub full: bool,
    /// Build the relative select structure.
    pub rselect: bool,
    pub lcs: LcsConfig,
    /// Sampling interval of `SA_S` in suffix order.
    pub sa_interval: usize,
    /// Sampling interval of `ISA_S` in text order.
    pub isa_interval: usize,
}

impl Default for RfmConfig {
    fn default() -> Self {
        RfmConfig { full: true, rselect: true, lcs: LcsConfig::default(), sa_interval: 257, isa_interval: 512 }
    }
}

impl RfmConfig {
    pub fn basic() -> Self {
        RfmConfig { full: false, ..Self::default() }
    }
}

/// A reference FM-index together with its construction-time structures,
/// shared by every target built against it.
#[derive(Clone, Debug)]
pub struct RfmReference {
    index: Arc<FmIndex>,
    text: Vec<u32>,
    structures: SuffixStructures,
}

impl RfmReference {
    pub fn new(index: Arc<FmIndex>) -> Self {
        let text = index.text();
        let structures = SuffixStructures::new(&text);
        RfmReference { index, text, structures }
    }

    pub fn index(&self) -> &Arc<FmIndex> {
        &self.index
    }

    pub fn text(&self) -> &[u32] {
        &self.text
    }
}

/// Relative select: F-column alignments of R and S and the cumulative counts
/// of aligned symbols, giving `select` on the target BWT without a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSelect {
    f_r: CompactBitVector,
    f_s: CompactBitVector,
    lcs_counts: Vec<u64>,
}

impl RSelect {
    fn new(reference: &SuffixStructures, target: &SuffixStructures, sigma: usize, align_r: &[bool], align_s: &[bool]) -> Self {
        let f_bits = |ss: &SuffixStructures, align: &[bool]| {
            // B_F[LF(i)] = B_BWT[i].
            let mut bits = vec![false; ss.len()];
            for (i, &b) in align.iter().enumerate() {
                if b {
                    bits[ss.isa[(ss.sa[i] + ss.len() - 1) % ss.len()]] = true;
                }
            }
            CompactBitVector::from_bits(bits)
        };
        let mut lcs_counts = vec![0u64; sigma + 1];
        for (i, &b) in align_s.iter().enumerate() {
            if b {
                lcs_counts[target.bwt[i] as usize + 1] += 1;
            }
        }
        for c in 1..=sigma {
            lcs_counts[c] += lcs_counts[c - 1];
        }
        RSelect { f_r: f_bits(reference, align_r), f_s: f_bits(target, align_s), lcs_counts }
    }
}

impl Serialize for RSelect {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RSELECT, self.f_s.len())?;
        self.f_r.serialize(writer)?;
        self.f_s.serialize(writer)?;
        serialize::write_u64_table(writer, &self.lcs_counts)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::RSELECT)?;
        let f_r = CompactBitVector::load(reader)?;
        let f_s = CompactBitVector::load(reader)?;
        let lcs_counts = serialize::read_u64_table(reader)?;
        if f_s.len() != len || f_r.count_ones() != f_s.count_ones() || lcs_counts.last() != Some(&(f_s.count_ones() as u64)) {
            return Err(serialize::invalid_data("inconsistent relative select"));
        }
        Ok(RSelect { f_r, f_s, lcs_counts })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + self.f_r.size_in_bytes() + self.f_s.size_in_bytes() + serialize::words_size(self.lcs_counts.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Samples {
    text_r: CompactBitVector,
    text_s: CompactBitVector,
    sa_interval: usize,
    isa_interval: usize,
    sa: IntVector,
    isa: IntVector,
}

/// CSA of a target text relative to a reference FM-index.
#[derive(Clone, Debug)]
pub struct RelativeFm {
    reference: Arc<FmIndex>,
    len: usize,
    sigma: usize,
    counts: Vec<u64>,
    clcs_r: WaveletTree,
    clcs_s: WaveletTree,
    align_r: CompactBitVector,
    align_s: CompactBitVector,
    samples: Option<Samples>,
    rselect: Option<RSelect>,
}

impl PartialEq for RelativeFm {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && self.sigma == other.sigma
            && self.counts == other.counts
            && self.clcs_r == other.clcs_r
            && self.clcs_s == other.clcs_s
            && self.align_r == other.align_r
            && self.align_s == other.align_s
            && self.samples == other.samples
            && self.rselect == other.rselect
    }
}

impl RelativeFm {
    /// Builds the index of `target`, whose last symbol must be a unique 0.
    pub fn build(reference: &RfmReference, target: &[u32], config: &RfmConfig) -> Self {
        assert!(config.sa_interval >= 1 && config.isa_interval >= 1, "sample intervals must be positive");
        let s = SuffixStructures::new(target);
        let r = &reference.structures;
        let sigma = reference.index.sigma().max(target.iter().max().map_or(1, |&c| c as usize + 1));
        let (text, bwt) = if config.full {
            let (text, bwt) = bwt_invariant(reference.index.as_ref(), &reference.text, r, target, &s);
            (Some(text), bwt)
        } else {
            (None, approx_lcs(&reference.text, r, target, &s, &config.lcs))
        };
        let mut mark_r = vec![false; r.len()];
        let mut mark_s = vec![false; s.len()];
        for (i, j) in bwt.pairs() {
            mark_r[i] = true;
            mark_s[j] = true;
        }
        let clcs = |bwt: &[u32], marks: &[bool]| {
            let rest: Vec<u32> = bwt.iter().zip(marks).filter(|(_, &m)| !m).map(|(&c, _)| c).collect();
            WaveletTree::new(&rest, sigma)
        };
        let mut counts = vec![0u64; sigma + 1];
        for &c in &s.bwt {
            counts[c as usize + 1] += 1;
        }
        for c in 1..=sigma {
            counts[c] += counts[c - 1];
        }
        let samples = text.map(|text| {
            let (text_r, text_s) = text.to_bits();
            let sa: Vec<usize> = s.sa.iter().step_by(config.sa_interval).copied().collect();
            let isa: Vec<usize> = s.isa.iter().step_by(config.isa_interval).copied().collect();
            Samples {
                text_r,
                text_s,
                sa_interval: config.sa_interval,
                isa_interval: config.isa_interval,
                sa: IntVector::from_usizes(&sa),
                isa: IntVector::from_usizes(&isa),
            }
        });
        let rselect = config.rselect.then(|| RSelect::new(r, &s, sigma, &mark_r, &mark_s));
        RelativeFm {
            reference: Arc::clone(&reference.index),
            len: s.len(),
            sigma,
            counts,
            clcs_r: clcs(&r.bwt, &mark_r),
            clcs_s: clcs(&s.bwt, &mark_s),
            align_r: CompactBitVector::from_bits(mark_r),
            align_s: CompactBitVector::from_bits(mark_s),
            samples,
            rselect,
        }
    }

    pub fn reference(&self) -> &Arc<FmIndex> {
        &self.reference
    }

    pub fn is_full(&self) -> bool {
        self.samples.is_some()
    }

    pub fn has_rselect(&self) -> bool {
        self.rselect.is_some()
    }

    /// Number of aligned BWT positions.
    pub fn lcs_len(&self) -> usize {
        self.align_s.count_ones()
    }

    /// Number of aligned text positions (full variant only).
    pub fn text_lcs_len(&self) -> Option<usize> {
        self.samples.as_ref().map(|s| s.text_s.count_ones())
    }

    pub fn rselect(&self) -> Option<&RSelect> {
        self.rselect.as_ref()
    }

    /// Drops the relative select structure; `select` falls back to a search.
    pub fn without_rselect(mut self) -> Self {
        self.rselect = None;
        self
    }

    /// Attaches a separately loaded relative select structure.
    pub fn with_rselect(mut self, rselect: RSelect) -> crate::Result<Self> {
        if rselect.f_s.len() != self.len || rselect.f_r.len() != self.reference.len() || rselect.lcs_counts.len() != self.sigma + 1 {
            return Err(crate::Error::Format("relative select does not match the index".into()));
        }
        self.rselect = Some(rselect);
        Ok(self)
    }

    fn occurrences(&self, c: u32) -> usize {
        if c as usize >= self.sigma {
            return 0;
        }
        (self.counts[c as usize + 1] - self.counts[c as usize]) as usize
    }

    // Position in BWT_R aligned with the aligned position i of BWT_S.
    #[inline]
    fn to_reference(&self, i: usize) -> usize {
        let t = self.align_s.rank1(i);
        self.align_r.select1(t).expect("aligned position")
    }

    fn select_search(&self, c: u32, k: usize) -> usize {
        // Smallest i with rank(c, i + 1) > k.
        let (mut lo, mut hi) = (0, self.len - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.rank(c, mid + 1) > k {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    fn select_relative(&self, rs: &RSelect, c: u32, k: usize) -> usize {
        let f = self.counts[c as usize] as usize + k;
        let lcs_before = rs.f_s.rank1(f) - rs.lcs_counts[c as usize] as usize;
        if rs.f_s.get(f) {
            let f_r = rs.f_r.select1(rs.lcs_counts[c as usize] as usize + lcs_before).expect("aligned occurrence");
            let j = self.reference.select(c, f_r - self.reference.count_less(c)).expect("reference occurrence");
            let t = self.align_r.rank1(j);
            self.align_s.select1(t).expect("aligned position")
        } else {
            let p = self.clcs_s.select(c, k - lcs_before).expect("unaligned occurrence");
            self.align_s.select0(p).expect("unaligned position")
        }
    }

    fn samples(&self) -> &Samples {
        self.samples.as_ref().expect("locate and inverse need the full relative index")
    }

    /// Size in bytes of the relative structures, excluding the reference.
    pub fn size_in_bytes(&self) -> usize {
        let mut size = serialize::HEADER_BYTES
            + 16
            + serialize::words_size(self.counts.len())
            + self.clcs_r.size_in_bytes()
            + self.clcs_s.size_in_bytes()
            + self.align_r.size_in_bytes()
            + self.align_s.size_in_bytes();
        if let Some(s) = &self.samples {
            size += s.text_r.size_in_bytes() + s.text_s.size_in_bytes() + 16 + s.sa.size_in_bytes() + s.isa.size_in_bytes();
        }
        size
    }

    /// Sizes in bytes of the individual structures.
    pub fn component_sizes(&self) -> Vec<(&'static str, usize)> {
        let mut out = vec![
            ("clcs_r", self.clcs_r.size_in_bytes()),
            ("clcs_s", self.clcs_s.size_in_bytes()),
            ("align_r", self.align_r.size_in_bytes()),
            ("align_s", self.align_s.size_in_bytes()),
        ];
        if let Some(s) = &self.samples {
            out.push(("text_r", s.text_r.size_in_bytes()));
            out.push(("text_s", s.text_s.size_in_bytes()));
            out.push(("samples", s.sa.size_in_bytes() + s.isa.size_in_bytes()));
        }
        out
    }

    /// Size including the relative select structure, if present.
    pub fn total_size_in_bytes(&self) -> usize {
        self.size_in_bytes() + self.rselect.as_ref().map_or(0, |r| r.size_in_bytes())
    }

    /// Writes the index without the reference and without relative select.
    pub fn write_to<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RELATIVE_FM, self.len)?;
        serialize::write_u64(writer, self.sigma as u64)?;
        serialize::write_u64(writer, self.samples.is_some() as u64)?;
        serialize::write_u64_table(writer, &self.counts)?;
        self.clcs_r.serialize(writer)?;
        self.clcs_s.serialize(writer)?;
        self.align_r.serialize(writer)?;
        self.align_s.serialize(writer)?;
        if let Some(s) = &self.samples {
            s.text_r.serialize(writer)?;
            s.text_s.serialize(writer)?;
            serialize::write_u64(writer, s.sa_interval as u64)?;
            serialize::write_u64(writer, s.isa_interval as u64)?;
            s.sa.serialize(writer)?;
            s.isa.serialize(writer)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_in_bytes());
        self.write_to(&mut out).expect("writing to memory");
        out
    }

    /// Reads an index written by [`RelativeFm::write_to`] on top of `reference`.
    pub fn read_from<R: Read>(reader: &mut R, reference: Arc<FmIndex>) -> io::Result<Self> {
        let bad = |what: &str| serialize::invalid_data(format!("inconsistent relative FM-index: {what}"));
        let len = serialize::read_header(reader, tag::RELATIVE_FM)?;
        let sigma = serialize::read_usize(reader)?;
        let full = match serialize::read_u64(reader)? {
            0 => false,
            1 => true,
            _ => return Err(bad("variant flag")),
        };
        let counts = serialize::read_u64_table(reader)?;
        let clcs_r = WaveletTree::load(reader)?;
        let clcs_s = WaveletTree::load(reader)?;
        let align_r = CompactBitVector::load(reader)?;
        let align_s = CompactBitVector::load(reader)?;
        if len == 0 || counts.len() != sigma + 1 || counts[sigma] != len as u64 {
            return Err(bad("counts"));
        }
        if align_r.len() != reference.len() || align_s.len() != len {
            return Err(bad("alignment lengths"));
        }
        if align_r.count_ones() != align_s.count_ones()
            || clcs_r.len() != align_r.count_zeros()
            || clcs_s.len() != align_s.count_zeros()
        {
            return Err(bad("alignment popcounts"));
        }
        let samples = if full {
            let text_r = CompactBitVector::load(reader)?;
            let text_s = CompactBitVector::load(reader)?;
            let sa_interval = serialize::read_usize(reader)?;
            let isa_interval = serialize::read_usize(reader)?;
            let sa = IntVector::load(reader)?;
            let isa = IntVector::load(reader)?;
            if sa_interval == 0 || isa_interval == 0 {
                return Err(bad("sample interval"));
            }
            if text_r.len() != reference.len() || text_s.len() != len || text_r.count_ones() != text_s.count_ones() {
                return Err(bad("text alignment"));
            }
            if sa.len() != len.div_ceil(sa_interval) || isa.len() != len.div_ceil(isa_interval) {
                return Err(bad("sample counts"));
            }
            Some(Samples { text_r, text_s, sa_interval, isa_interval, sa, isa })
        } else {
            None
        };
        Ok(RelativeFm { reference, len, sigma, counts, clcs_r, clcs_s, align_r, align_s, samples, rselect: None })
    }

    pub fn from_bytes(bytes: &[u8], reference: Arc<FmIndex>) -> io::Result<Self> {
        let mut reader = bytes;
        let index = Self::read_from(&mut reader, reference)?;
        if !reader.is_empty() {
            return Err(serialize::invalid_data("trailing bytes after relative FM-index"));
        }
        Ok(index)
    }
}

impl Csa for RelativeFm {
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

    fn bwt(&self, i: usize) -> u32 {
        if self.align_s.get(i) {
            self.reference.bwt(self.to_reference(i))
        } else {
            self.clcs_s.access(self.align_s.rank0(i))
        }
    }

    fn rank(&self, c: u32, i: usize) -> usize {
        if c as usize >= self.sigma {
            return 0;
        }
        let k = self.align_s.rank1(i);
        let j = if k == 0 { 0 } else { self.align_r.select1(k - 1).expect("aligned position") + 1 };
        self.reference.rank(c, j) - self.clcs_r.rank(c, j - k) + self.clcs_s.rank(c, i - k)
    }

    fn select(&self, c: u32, k: usize) -> Option<usize> {
        if k >= self.occurrences(c) {
            return None;
        }
        Some(match &self.rselect {
            Some(rs) => self.select_relative(rs, c, k),
            None => self.select_search(c, k),
        })
    }

    fn supports_locate(&self) -> bool {
        self.is_full()
    }

    fn locate(&self, mut i: usize) -> usize {
        let s = self.samples();
        let mut steps = 0;
        loop {
            if i % s.sa_interval == 0 {
                return (s.sa.get(i / s.sa_interval) as usize + steps) % self.len;
            }
            if self.align_s.get(i) {
                // SA_R[j] - 1 is an aligned reference position x.
                let x = self.reference.locate(self.to_reference(i)) - 1;
                let y = s.text_s.select1(s.text_r.rank1(x)).expect("aligned text position");
                return (y + 1 + steps) % self.len;
            }
            i = self.lf(i);
            steps += 1;
        }
    }

    fn inverse(&self, pos: usize) -> usize {
        let s = self.samples();
        let pos = if pos == self.len { 0 } else { pos };
        let next_sample = pos.div_ceil(s.isa_interval) * s.isa_interval;
        let (sample_rank, sample_pos) = if next_sample >= self.len {
            (s.isa.get(0) as usize, self.len)
        } else {
            (s.isa.get(next_sample / s.isa_interval) as usize, next_sample)
        };
        let u = s.text_s.rank1(pos);
        let (mut rank, from) = match s.text_s.select1(u) {
            Some(y) if y + 1 < sample_pos => {
                let x = s.text_r.select1(u).expect("aligned text position");
                let j = self.reference.inverse(x + 1);
                let t = self.align_r.rank1(j);
                (self.align_s.select1(t).expect("aligned position"), y + 1)
            }
            _ => (sample_rank, sample_pos),
        };
        for _ in pos..from {
            rank = self.lf(rank);
        }
        rank
    }
}
