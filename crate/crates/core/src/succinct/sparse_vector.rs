use super::{BitVector, IntVector, RankSelect};
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

/// An Elias-Fano encoded bitvector for sparse sets of positions.
///
/// Each set position is split into `low_width` low bits, stored in an
/// [`IntVector`], and a high part, stored in unary in a [`BitVector`] where
/// the k-th set bit sits at `high(k) + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitVector {
    len: usize,
    ones: usize,
    low_width: usize,
    low: IntVector,
    high: BitVector,
}

impl SparseBitVector {
    /// Builds from strictly increasing positions, all smaller than `len`.
    pub fn from_ones(len: usize, positions: &[usize]) -> Self {
        let ones = positions.len();
        let low_width = if ones == 0 || len <= ones { 0 } else { (len / ones).ilog2() as usize };
        let mut low = IntVector::new(if low_width == 0 { 0 } else { ones }, low_width.max(1));
        let high_len = ones + (len >> low_width) + 1;
        let mut high_ones = Vec::with_capacity(ones);
        let mut previous = None;
        for (k, &pos) in positions.iter().enumerate() {
            assert!(pos < len, "position {} out of bounds for length {}", pos, len);
            assert!(previous.map_or(true, |p| p < pos), "positions must be strictly increasing");
            previous = Some(pos);
            if low_width > 0 {
                low.set(k, (pos & ((1usize << low_width) - 1)) as u64);
            }
            high_ones.push((pos >> low_width) + k);
        }
        let high = BitVector::from_ones(high_len, high_ones);
        SparseBitVector { len, ones, low_width, low, high }
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

    #[inline]
    fn low_bits(&self, k: usize) -> usize {
        if self.low_width == 0 {
            0
        } else {
            self.low.get(k) as usize
        }
    }

    /// Positions of the set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.high
            .ones()
            .enumerate()
            .map(move |(k, pos)| ((pos - k) << self.low_width) | self.low_bits(k))
    }

    /// Largest set position `<= i` together with its rank, if any.
    pub fn predecessor(&self, i: usize) -> Option<(usize, usize)> {
        if self.len == 0 {
            return None;
        }
        let rank = self.rank1(i.min(self.len - 1) + 1);
        if rank == 0 {
            None
        } else {
            Some((rank - 1, self.select1(rank - 1).unwrap()))
        }
    }
}

impl RankSelect for SparseBitVector {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        self.rank1(i + 1) > self.rank1(i)
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {} beyond length {}", i, self.len);
        if i == self.len {
            return self.ones;
        }
        let bucket = i >> self.low_width;
        let low_target = i & ((1usize << self.low_width) - 1);
        let mut pos = if bucket == 0 { 0 } else { self.high.select0(bucket - 1).unwrap() + 1 };
        let mut k = pos - bucket;
        while pos < self.high.len() && self.high.get(pos) && self.low_bits(k) < low_target {
            pos += 1;
            k += 1;
        }
        k
    }

    #[inline]
    fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.ones {
            return None;
        }
        let high = self.high.select1(k).unwrap() - k;
        Some((high << self.low_width) | self.low_bits(k))
    }

    fn select0(&self, k: usize) -> Option<usize> {
        if k >= self.len - self.ones {
            return None;
        }
        // The answer is k + (number of ones before it): find the smallest j
        // with select1(j) > k + j, i.e. the number of ones preceding the zero.
        let (mut lo, mut hi) = (0, self.ones);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.select1(mid).unwrap() <= k + mid {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Some(k + lo)
    }
}

impl Serialize for SparseBitVector {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::SPARSE_VECTOR, self.len)?;
        serialize::write_u64(writer, self.ones as u64)?;
        serialize::write_u64(writer, self.low_width as u64)?;
        self.low.serialize(writer)?;
        self.high.serialize(writer)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::SPARSE_VECTOR)?;
        let ones = serialize::read_usize(reader)?;
        let low_width = serialize::read_usize(reader)?;
        let low = IntVector::load(reader)?;
        let high = BitVector::load(reader)?;
        if low_width >= 64 || high.count_ones() != ones || high.len() != ones + (len >> low_width) + 1 {
            return Err(serialize::invalid_data("inconsistent sparse bitvector"));
        }
        if low_width > 0 && (low.len() != ones || low.width() != low_width) {
            return Err(serialize::invalid_data("inconsistent sparse bitvector low bits"));
        }
        Ok(SparseBitVector { len, ones, low_width, low, high })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + 16 + self.low.size_in_bytes() + self.high.size_in_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_plain_bitvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for len in [0usize, 1, 2, 64, 100, 1000, 5000] {
            for density in [0.0, 0.001, 0.05, 0.5, 1.0] {
                let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
                let plain = BitVector::from_bits(bits.iter().copied());
                let sparse = SparseBitVector::from_bits(bits.iter().copied());
                assert_eq!(sparse.count_ones(), plain.count_ones());
                for i in 0..=len {
                    assert_eq!(sparse.rank1(i), plain.rank1(i), "rank1({i})");
                }
                for i in 0..len {
                    assert_eq!(sparse.get(i), plain.get(i));
                }
                for k in 0..=len {
                    assert_eq!(sparse.select1(k), plain.select1(k));
                    assert_eq!(sparse.select0(k), plain.select0(k));
                }
                assert!(sparse.ones().eq(plain.ones()));
            }
        }
    }

    #[test]
    fn predecessor_queries() {
        let sv = SparseBitVector::from_ones(20, &[3, 7, 8, 19]);
        assert_eq!(sv.predecessor(2), None);
        assert_eq!(sv.predecessor(3), Some((0, 3)));
        assert_eq!(sv.predecessor(10), Some((2, 8)));
        assert_eq!(sv.predecessor(19), Some((3, 19)));
    }

    #[test]
    fn sparse_is_smaller_than_plain() {
        let positions: Vec<usize> = (0..100).map(|i| i * 10_000).collect();
        let sparse = SparseBitVector::from_ones(1_000_000, &positions);
        let plain = BitVector::from_ones(1_000_000, positions.iter().copied());
        assert!(sparse.size_in_bytes() * 20 < plain.size_in_bytes());
    }

    #[test]
    fn serialization_round_trip() {
        let sv = SparseBitVector::from_ones(1000, &[0, 10, 11, 500, 999]);
        let bytes = sv.to_bytes();
        assert_eq!(bytes.len(), sv.size_in_bytes());
        assert_eq!(SparseBitVector::from_bytes(&bytes).unwrap(), sv);
    }
}
