//! Bit- and integer-level building blocks.
//!
//! Positions are 0-based. `rank1(i)` counts the set bits in `[0, i)` and
//! `select1(k)` returns the position of the set bit of rank `k`, so that
//! `rank1(select1(k)) == k`.

mod bit_vector;
mod compact;
mod int_vector;
mod run_vector;
mod slarray;
mod sparse_vector;
mod wavelet_tree;

pub use bit_vector::BitVector;
pub use compact::CompactBitVector;
pub use int_vector::IntVector;
pub use run_vector::RunBitVector;
pub use slarray::SLArray;
pub use sparse_vector::SparseBitVector;
pub use wavelet_tree::WaveletTree;

/// The rank/select interface shared by all bitvector representations.
pub trait RankSelect {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn count_ones(&self) -> usize;

    fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    fn get(&self, i: usize) -> bool;

    /// Number of set bits in `[0, i)`. Panics if `i > len`.
    fn rank1(&self, i: usize) -> usize;

    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    fn rank(&self, i: usize, bit: bool) -> usize {
        if bit {
            self.rank1(i)
        } else {
            self.rank0(i)
        }
    }

    /// Position of the set bit of rank `k`, or `None` if there is no such bit.
    fn select1(&self, k: usize) -> Option<usize>;

    fn select0(&self, k: usize) -> Option<usize>;

    fn select(&self, k: usize, bit: bool) -> Option<usize> {
        if bit {
            self.select1(k)
        } else {
            self.select0(k)
        }
    }
}

/// Number of bits needed to represent `value` (at least 1).
pub fn bit_width(value: u64) -> usize {
    (64 - value.leading_zeros() as usize).max(1)
}

/// Position of the set bit of rank `k` within `word`.
#[inline]
pub(crate) fn select_in_word(mut word: u64, k: usize) -> usize {
    debug_assert!(k < word.count_ones() as usize);
    // Skip whole bytes first, then clear the remaining lower set bits.
    let mut k = k as u32;
    let mut offset = 0;
    loop {
        let byte_ones = (word & 0xFF).count_ones();
        if byte_ones > k {
            break;
        }
        k -= byte_ones;
        word >>= 8;
        offset += 8;
    }
    for _ in 0..k {
        word &= word - 1;
    }
    offset + word.trailing_zeros() as usize
}
