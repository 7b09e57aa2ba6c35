use super::{BitVector, RankSelect, RunBitVector, SparseBitVector};
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

/// A bitvector stored in whichever of four encodings is smallest.
///
/// Alignment bitvectors are dense, almost all ones, or made of long runs, so
/// besides the plain encoding this keeps Elias-Fano encodings of the set bits
/// and of the unset bits and a run-length encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompactBitVector {
    Plain(BitVector),
    SparseOnes(SparseBitVector),
    /// Stores the positions of the zeros.
    SparseZeros(SparseBitVector),
    Runs(RunBitVector),
}

impl CompactBitVector {
    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let plain = BitVector::from_ones(len, ones.iter().copied());
        let sparse_ones = SparseBitVector::from_ones(len, ones);
        let zeros: Vec<usize> = (0..len).filter(|&i| !plain.get(i)).collect();
        let sparse_zeros = SparseBitVector::from_ones(len, &zeros);
        let runs = RunBitVector::from_ones(len, ones);
        let sizes = [plain.size_in_bytes(), sparse_ones.size_in_bytes(), sparse_zeros.size_in_bytes(), runs.size_in_bytes()];
        let best = (0..4).min_by_key(|&k| sizes[k]).unwrap();
        match best {
            0 => CompactBitVector::Plain(plain),
            1 => CompactBitVector::SparseOnes(sparse_ones),
            2 => CompactBitVector::SparseZeros(sparse_zeros),
            _ => CompactBitVector::Runs(runs),
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut len = 0;
        let mut ones = Vec::new();
        for bit in bits {
            if bit {
                ones.push(len);
            }
            len += 1;
        }
        Self::from_ones(len, &ones)
    }

    pub fn encoding(&self) -> &'static str {
        match self {
            CompactBitVector::Plain(_) => "plain",
            CompactBitVector::SparseOnes(_) => "sparse-ones",
            CompactBitVector::SparseZeros(_) => "sparse-zeros",
            CompactBitVector::Runs(_) => "runs",
        }
    }
}

impl RankSelect for CompactBitVector {
    fn len(&self) -> usize {
        match self {
            CompactBitVector::Plain(b) => b.len(),
            CompactBitVector::SparseOnes(b) | CompactBitVector::SparseZeros(b) => b.len(),
            CompactBitVector::Runs(b) => b.len(),
        }
    }

    fn count_ones(&self) -> usize {
        match self {
            CompactBitVector::Plain(b) => b.count_ones(),
            CompactBitVector::SparseOnes(b) => b.count_ones(),
            CompactBitVector::SparseZeros(b) => b.count_zeros(),
            CompactBitVector::Runs(b) => b.count_ones(),
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        match self {
            CompactBitVector::Plain(b) => b.get(i),
            CompactBitVector::SparseOnes(b) => b.get(i),
            CompactBitVector::SparseZeros(b) => !b.get(i),
            CompactBitVector::Runs(b) => b.get(i),
        }
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        match self {
            CompactBitVector::Plain(b) => b.rank1(i),
            CompactBitVector::SparseOnes(b) => b.rank1(i),
            CompactBitVector::SparseZeros(b) => b.rank0(i),
            CompactBitVector::Runs(b) => b.rank1(i),
        }
    }

    fn select1(&self, k: usize) -> Option<usize> {
        match self {
            CompactBitVector::Plain(b) => b.select1(k),
            CompactBitVector::SparseOnes(b) => b.select1(k),
            CompactBitVector::SparseZeros(b) => b.select0(k),
            CompactBitVector::Runs(b) => b.select1(k),
        }
    }

    fn select0(&self, k: usize) -> Option<usize> {
        match self {
            CompactBitVector::Plain(b) => b.select0(k),
            CompactBitVector::SparseOnes(b) => b.select0(k),
            CompactBitVector::SparseZeros(b) => b.select1(k),
            CompactBitVector::Runs(b) => b.select0(k),
        }
    }
}

impl Serialize for CompactBitVector {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        let (kind, len) = match self {
            CompactBitVector::Plain(b) => (0, b.len()),
            CompactBitVector::SparseOnes(b) => (1, b.len()),
            CompactBitVector::SparseZeros(b) => (2, b.len()),
            CompactBitVector::Runs(b) => (3, b.len()),
        };
        serialize::write_header(writer, tag::COMPACT_BITS, len)?;
        serialize::write_u64(writer, kind)?;
        match self {
            CompactBitVector::Plain(b) => b.serialize(writer),
            CompactBitVector::SparseOnes(b) | CompactBitVector::SparseZeros(b) => b.serialize(writer),
            CompactBitVector::Runs(b) => b.serialize(writer),
        }
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::COMPACT_BITS)?;
        let bv = match serialize::read_u64(reader)? {
            0 => CompactBitVector::Plain(BitVector::load(reader)?),
            1 => CompactBitVector::SparseOnes(SparseBitVector::load(reader)?),
            2 => CompactBitVector::SparseZeros(SparseBitVector::load(reader)?),
            3 => CompactBitVector::Runs(RunBitVector::load(reader)?),
            other => return Err(serialize::invalid_data(format!("unknown bitvector encoding {}", other))),
        };
        if bv.len() != len {
            return Err(serialize::invalid_data("compact bitvector length mismatch"));
        }
        Ok(bv)
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES
            + 8
            + match self {
                CompactBitVector::Plain(b) => b.size_in_bytes(),
                CompactBitVector::SparseOnes(b) | CompactBitVector::SparseZeros(b) => b.size_in_bytes(),
                CompactBitVector::Runs(b) => b.size_in_bytes(),
            }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn picks_encoding_by_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let expectations = [(0.001, "sparse-ones"), (0.5, "plain"), (0.999, "sparse-zeros")];
        for (density, expected) in expectations {
            let bits: Vec<bool> = (0..20_000).map(|_| rng.gen_bool(density)).collect();
            let compact = CompactBitVector::from_bits(bits.iter().copied());
            assert_eq!(compact.encoding(), expected);
            let plain = BitVector::from_bits(bits.iter().copied());
            for i in (0..=bits.len()).step_by(7) {
                assert_eq!(compact.rank1(i), plain.rank1(i));
            }
            for k in 0..plain.count_ones() {
                assert_eq!(compact.select1(k), plain.select1(k));
            }
            for k in 0..plain.count_zeros() {
                assert_eq!(compact.select0(k), plain.select0(k));
            }
            let bytes = compact.to_bytes();
            assert_eq!(bytes.len(), compact.size_in_bytes());
            assert_eq!(CompactBitVector::from_bytes(&bytes).unwrap(), compact);
        }
    }

    #[test]
    fn picks_runs_for_clustered_bits() {
        let ones: Vec<usize> = (0..50_000).filter(|i| i % 1000 >= 30).collect();
        let compact = CompactBitVector::from_ones(50_000, &ones);
        assert_eq!(compact.encoding(), "runs");
        let plain = BitVector::from_ones(50_000, ones.iter().copied());
        for i in (0..=50_000).step_by(13) {
            assert_eq!(compact.rank1(i), plain.rank1(i));
        }
        for k in (0..plain.count_zeros()).step_by(7) {
            assert_eq!(compact.select0(k), plain.select0(k));
        }
        let bytes = compact.to_bytes();
        assert_eq!(CompactBitVector::from_bytes(&bytes).unwrap(), compact);
    }
}
