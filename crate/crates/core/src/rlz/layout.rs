use super::matcher::{OffsetTracker, Phrase, RlzConfig};
use super::{unzigzag, zigzag};
use crate::serialize::{self, tag, Serialize};
use crate::succinct::{BitVector, IntVector, RankSelect, SparseBitVector};

use std::io::{self, Read, Write};
use std::ops::Range;

/// Phrase boundaries, relative offsets and literal prefix sums of a parse.
///
/// `W_l` marks phrase starts in the (possibly terminated) target. Relative
/// offsets `W_r[i] = source - start` are either stored explicitly or as a
/// 16-bit difference to the last explicit offset, chosen by `selector`.
/// `L` marks where each phrase's literals start among all literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhraseLayout {
    max_len: usize,
    len: usize,
    starts: SparseBitVector,
    selector: BitVector,
    explicit: IntVector,
    differential: IntVector,
    literal_starts: SparseBitVector,
}

impl PhraseLayout {
    /// `len` is the target length; the parse may cover one more position for
    /// the virtual terminator.
    pub fn new(phrases: &[Phrase], len: usize, config: &RlzConfig) -> Self {
        let total = phrases.last().map_or(0, |p| p.end());
        assert!(total == len || total == len + 1, "phrases do not cover the target");
        let starts: Vec<usize> = phrases.iter().map(|p| p.start).collect();
        let mut tracker = OffsetTracker::default();
        let mut selector = Vec::with_capacity(phrases.len());
        let mut explicit = Vec::new();
        let mut differential = Vec::new();
        let mut last_explicit = 0i64;
        let mut literal_starts = Vec::with_capacity(phrases.len());
        let mut literals = 0;
        for p in phrases {
            assert!(p.literals >= 1, "every phrase ends with a literal");
            assert!(p.copy_len <= config.max_len, "copy longer than max_len");
            if tracker.push(p, config) {
                selector.push(true);
                explicit.push(zigzag(p.offset()));
                last_explicit = p.offset();
            } else {
                selector.push(false);
                let delta = if p.copy_len == 0 { 0 } else { p.offset() - last_explicit };
                differential.push(zigzag(delta));
            }
            literal_starts.push(literals);
            literals += p.literals;
        }
        let mut diff_vector = IntVector::new(differential.len(), 16);
        for (k, &d) in differential.iter().enumerate() {
            diff_vector.set(k, d);
        }
        PhraseLayout {
            max_len: config.max_len,
            len,
            starts: SparseBitVector::from_ones(total, &starts),
            selector: BitVector::from_bits(selector),
            explicit: IntVector::from_slice(&explicit),
            differential: diff_vector,
            literal_starts: SparseBitVector::from_ones(literals, &literal_starts),
        }
    }

    /// Number of phrases.
    pub fn phrase_count(&self) -> usize {
        self.starts.count_ones()
    }

    /// Target length, not counting the virtual terminator.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Whether the last phrase ends with the virtual terminator.
    pub fn is_terminated(&self) -> bool {
        self.starts.len() > self.len
    }

    pub fn literal_count(&self) -> usize {
        self.literal_starts.len()
    }

    pub fn explicit_count(&self) -> usize {
        self.selector.count_ones()
    }

    /// Index of the phrase containing position `j`.
    #[inline]
    pub fn phrase_of(&self, j: usize) -> usize {
        self.starts.rank1(j + 1) - 1
    }

    #[inline]
    pub fn phrase_start(&self, i: usize) -> usize {
        self.starts.select1(i).expect("phrase index out of range")
    }

    /// Positions covered by phrase `i`, including the terminator position.
    pub fn phrase_range(&self, i: usize) -> Range<usize> {
        let end = self.starts.select1(i + 1).unwrap_or(self.starts.len());
        self.phrase_start(i)..end
    }

    /// Range of phrase `i`'s literals among all literals.
    pub fn literal_range(&self, i: usize) -> Range<usize> {
        let start = self.literal_starts.select1(i).expect("phrase index out of range");
        let end = self.literal_starts.select1(i + 1).unwrap_or(self.literal_starts.len());
        start..end
    }

    pub fn copy_len(&self, i: usize) -> usize {
        self.phrase_range(i).len() - self.literal_range(i).len()
    }

    /// Relative offset `W_r[i]`.
    pub fn offset(&self, i: usize) -> i64 {
        let explicit_before = self.selector.rank1(i);
        if self.selector.get(i) {
            unzigzag(self.explicit.get(explicit_before))
        } else {
            let base = unzigzag(self.explicit.get(explicit_before - 1));
            base + unzigzag(self.differential.get(i - explicit_before))
        }
    }

    /// Where position `j` of the target comes from.
    #[inline]
    pub fn resolve(&self, j: usize) -> Source {
        let i = self.phrase_of(j);
        let range = self.phrase_range(i);
        let literals = self.literal_range(i);
        let copy_len = range.len() - literals.len();
        let t = j - range.start;
        if t < copy_len {
            Source::Copy { phrase: i, reference: (j as i64 + self.offset(i)) as usize }
        } else {
            Source::Literal { phrase: i, index: literals.start + t - copy_len }
        }
    }
}

/// Origin of one target position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Copy { phrase: usize, reference: usize },
    /// Index into the literal array.
    Literal { phrase: usize, index: usize },
}

impl Serialize for PhraseLayout {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RLZ_LAYOUT, self.phrase_count())?;
        serialize::write_u64(writer, self.max_len as u64)?;
        serialize::write_u64(writer, self.len as u64)?;
        self.starts.serialize(writer)?;
        self.selector.serialize(writer)?;
        self.explicit.serialize(writer)?;
        self.differential.serialize(writer)?;
        self.literal_starts.serialize(writer)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let z = serialize::read_header(reader, tag::RLZ_LAYOUT)?;
        let max_len = serialize::read_usize(reader)?;
        let len = serialize::read_usize(reader)?;
        let starts = SparseBitVector::load(reader)?;
        let selector = BitVector::load(reader)?;
        let explicit = IntVector::load(reader)?;
        let differential = IntVector::load(reader)?;
        let literal_starts = SparseBitVector::load(reader)?;
        let consistent = starts.count_ones() == z
            && selector.len() == z
            && (z == 0 || selector.get(0))
            && explicit.len() == selector.count_ones()
            && differential.len() == selector.count_zeros()
            && differential.width() == 16
            && literal_starts.count_ones() == z
            && (starts.len() == len || starts.len() == len + 1)
            && (z == 0 || starts.get(0));
        if !consistent {
            return Err(serialize::invalid_data("inconsistent phrase layout"));
        }
        Ok(PhraseLayout { max_len, len, starts, selector, explicit, differential, literal_starts })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES
            + 16
            + self.starts.size_in_bytes()
            + self.selector.size_in_bytes()
            + self.explicit.size_in_bytes()
            + self.differential.size_in_bytes()
            + self.literal_starts.size_in_bytes()
    }
}
