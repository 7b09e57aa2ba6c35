//! Relative FM-index: a target text's CSA stored as the differences between
//! its BWT and the BWT of a reference.
//!
//! The basic variant aligns the two BWTs with an approximate LCS and keeps the
//! unaligned symbols in two small wavelet trees. The full variant aligns them
//! with a bwt-invariant subsequence derived from a text alignment, which adds
//! `locate` and `inverse` through the reference's samples.

mod index;
mod invariant;
mod lcs;

pub use index::{RelativeFm, RfmConfig, RfmReference, RSelect};
pub use invariant::{bwt_invariant, lis_pairs, match_arrays, merging_bitvector, text_to_bwt_alignment, MatchArray};
pub use lcs::{approx_lcs, windowed_lcs, LcsConfig};

use crate::succinct::CompactBitVector;

/// A common subsequence of two sequences as increasing position lists: the
/// `k`-th marked position of the first pairs with the `k`-th of the second.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    len_a: usize,
    len_b: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Alignment {
    /// `pairs` must be strictly increasing in both coordinates.
    pub fn from_pairs(len_a: usize, len_b: usize, pairs: &[(usize, usize)]) -> Self {
        for w in pairs.windows(2) {
            assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1, "alignment pairs must increase");
        }
        if let Some(&(x, y)) = pairs.last() {
            assert!(x < len_a && y < len_b, "alignment pair out of range");
        }
        Alignment {
            len_a,
            len_b,
            a: pairs.iter().map(|p| p.0).collect(),
            b: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Number of aligned pairs.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn len_a(&self) -> usize {
        self.len_a
    }

    pub fn len_b(&self) -> usize {
        self.len_b
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.a.iter().copied().zip(self.b.iter().copied())
    }

    /// Marked positions of the two sequences as bitvectors.
    pub fn to_bits(&self) -> (CompactBitVector, CompactBitVector) {
        (CompactBitVector::from_ones(self.len_a, &self.a), CompactBitVector::from_ones(self.len_b, &self.b))
    }
}
