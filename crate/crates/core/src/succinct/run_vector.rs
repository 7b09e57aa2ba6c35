use super::{RankSelect, SparseBitVector};
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

/// A run-length encoded bitvector for bits that come in long runs of ones.
///
/// `starts` marks the first position of every run of ones. `ends` has one
/// bit per set bit of the vector and marks the last set bit of every run, so
/// runs are located by rank in either coordinate system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunBitVector {
    starts: SparseBitVector,
    ends: SparseBitVector,
}

impl RunBitVector {
    /// Builds from strictly increasing positions, all smaller than `len`.
    pub fn from_ones(len: usize, positions: &[usize]) -> Self {
        let mut starts = Vec::new();
        let mut ends = Vec::new();
        for (k, &pos) in positions.iter().enumerate() {
            if k == 0 || positions[k - 1] + 1 != pos {
                starts.push(pos);
                if k > 0 {
                    ends.push(k - 1);
                }
            }
        }
        if !positions.is_empty() {
            ends.push(positions.len() - 1);
        }
        RunBitVector { starts: SparseBitVector::from_ones(len, &starts), ends: SparseBitVector::from_ones(positions.len(), &ends) }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut len = 0;
        let mut positions = Vec::new();
        for bit in bits {
            if bit {
                positions.push(len);
            }
            len += 1;
        }
        Self::from_ones(len, &positions)
    }

    pub fn run_count(&self) -> usize {
        self.starts.count_ones()
    }

    // Set bits before run `k`.
    #[inline]
    fn ones_before(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.ends.select1(k - 1).unwrap() + 1
        }
    }
}

impl RankSelect for RunBitVector {
    fn len(&self) -> usize {
        self.starts.len()
    }

    fn count_ones(&self) -> usize {
        self.ends.len()
    }

    fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "index {} out of bounds for length {}", i, self.len());
        self.rank1(i + 1) > self.rank1(i)
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len(), "rank position {} beyond length {}", i, self.len());
        let k = self.starts.rank1(i);
        if k == 0 {
            return 0;
        }
        let start = self.starts.select1(k - 1).unwrap();
        let before = self.ones_before(k - 1);
        let run = self.ones_before(k) - before;
        before + run.min(i - start)
    }

    fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.count_ones() {
            return None;
        }
        let run = self.ends.rank1(k);
        Some(self.starts.select1(run).unwrap() + k - self.ones_before(run))
    }

    fn select0(&self, k: usize) -> Option<usize> {
        if k >= self.len() - self.count_ones() {
            return None;
        }
        // Number of runs preceded by at most k zeros.
        let (mut lo, mut hi) = (0, self.run_count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.starts.select1(mid).unwrap() - self.ones_before(mid) <= k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Some(k + self.ones_before(lo))
    }
}

impl Serialize for RunBitVector {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RUN_VECTOR, self.len())?;
        self.starts.serialize(writer)?;
        self.ends.serialize(writer)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::RUN_VECTOR)?;
        let starts = SparseBitVector::load(reader)?;
        let ends = SparseBitVector::load(reader)?;
        if starts.len() != len || starts.count_ones() != ends.count_ones() || (ends.len() > 0 && !ends.get(ends.len() - 1)) {
            return Err(serialize::invalid_data("inconsistent run-length bitvector"));
        }
        Ok(RunBitVector { starts, ends })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + self.starts.size_in_bytes() + self.ends.size_in_bytes()
    }
}
