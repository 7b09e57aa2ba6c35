use super::{BitVector, RankSelect};
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

const ESCAPE: u8 = 255;

/// An integer array storing small values in one byte each.
///
/// Values below 255 live in the byte layer. Larger values are replaced by the
/// escape byte 255 and stored in a flat 64-bit array, indexed by the number of
/// escapes before the entry. The escape directory is derived from the bytes
/// and rebuilt on load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLArray {
    bytes: Vec<u8>,
    large: Vec<u64>,
    escapes: BitVector,
}

impl SLArray {
    pub fn from_slice(values: &[u64]) -> Self {
        Self::from_iter_values(values.iter().copied())
    }

    pub fn from_usizes(values: &[usize]) -> Self {
        Self::from_iter_values(values.iter().map(|&v| v as u64))
    }

    pub fn from_iter_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        let mut bytes = Vec::new();
        let mut large = Vec::new();
        for value in values {
            if value < ESCAPE as u64 {
                bytes.push(value as u8);
            } else {
                bytes.push(ESCAPE);
                large.push(value);
            }
        }
        Self::from_parts(bytes, large)
    }

    fn from_parts(bytes: Vec<u8>, large: Vec<u64>) -> Self {
        let escapes = BitVector::from_bits(bytes.iter().map(|&b| b == ESCAPE));
        SLArray { bytes, large, escapes }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        let byte = self.bytes[i];
        if byte < ESCAPE {
            byte as u64
        } else {
            self.large[self.escapes.rank1(i)]
        }
    }

    /// Number of values stored in the large layer.
    pub fn large_count(&self) -> usize {
        self.large.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.iter_from(0)
    }

    /// Sequential access starting at position `start`.
    pub fn iter_from(&self, start: usize) -> impl Iterator<Item = u64> + '_ {
        let mut next_large = if start == 0 { 0 } else { self.escapes.rank1(start.min(self.len())) };
        self.bytes[start.min(self.len())..].iter().map(move |&b| {
            if b < ESCAPE {
                b as u64
            } else {
                next_large += 1;
                self.large[next_large - 1]
            }
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl Serialize for SLArray {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::SLARRAY, self.bytes.len())?;
        serialize::write_words(writer, &serialize::pack_bytes(&self.bytes))?;
        serialize::write_words(writer, &self.large)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::SLARRAY)?;
        let bytes = serialize::unpack_bytes(&serialize::read_words(reader)?, len)?;
        let large = serialize::read_words(reader)?;
        let array = Self::from_parts(bytes, large);
        if array.escapes.count_ones() != array.large.len() {
            return Err(serialize::invalid_data("slarray escape count mismatch"));
        }
        if array.large.iter().any(|&v| v < ESCAPE as u64) {
            return Err(serialize::invalid_data("slarray large layer holds a small value"));
        }
        Ok(array)
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES
            + serialize::words_size(self.bytes.len().div_ceil(8))
            + serialize::words_size(self.large.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let a = SLArray::from_slice(&[0, 300, 7]);
        assert_eq!(a.get(1), 300);
        assert_eq!(a.get(0), 0);
        let b = SLArray::from_slice(&[254, 255, 256]);
        assert_eq!(b.get(1), 255);
        // 255 itself must go through the large layer.
        assert_eq!(b.large_count(), 2);
    }

    #[test]
    fn boundary_values_round_trip() {
        let values = [0u64, 254, 255, 256, 1 << 32, 3, 255, u64::MAX];
        let a = SLArray::from_slice(&values);
        assert_eq!(a.to_vec(), values);
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(a.get(i), v);
        }
        assert!(a.large.iter().all(|&v| v >= 255));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let values: Vec<u64> = (0..5000)
            .map(|_| if rng.gen_bool(0.1) { rng.gen_range(255..100_000) } else { rng.gen_range(0..255) })
            .collect();
        let a = SLArray::from_slice(&values);
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(a.get(i), v);
        }
        let bytes = a.to_bytes();
        assert_eq!(bytes.len(), a.size_in_bytes());
        assert_eq!(SLArray::from_bytes(&bytes).unwrap(), a);
    }
}
