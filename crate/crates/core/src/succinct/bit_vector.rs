use super::{select_in_word, RankSelect};
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = 64 * WORDS_PER_BLOCK;
// Every SELECT_SAMPLE-th set (or unset) bit records the block containing it.
const SELECT_SAMPLE: usize = 1024;

/// A plain bitvector with a block rank directory and sampled select.
///
/// Rank uses one cumulative counter per 512-bit block plus popcounts within
/// the block. Select finds the block with a binary search between sampled
/// blocks and then scans words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
    ones: usize,
    // Set bits before each block; one extra entry at the end.
    blocks: Vec<u64>,
    select1_blocks: Vec<u32>,
    select0_blocks: Vec<u32>,
}

impl BitVector {
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        assert!(words.len() >= len.div_ceil(64), "not enough words for {} bits", len);
        words.truncate(len.div_ceil(64));
        if len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let mut bv = BitVector { len, words, ones: 0, blocks: Vec::new(), select1_blocks: Vec::new(), select0_blocks: Vec::new() };
        bv.build_directories();
        bv
    }

    /// Builds a bitvector of length `len` with the given set positions.
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for pos in ones {
            assert!(pos < len, "position {} out of bounds for length {}", pos, len);
            words[pos / 64] |= 1u64 << (pos % 64);
        }
        Self::from_words(len, words)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1u64 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(len, words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Positions of the set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    fn build_directories(&mut self) {
        let block_count = self.words.len().div_ceil(WORDS_PER_BLOCK);
        self.blocks = Vec::with_capacity(block_count + 1);
        self.select1_blocks.clear();
        self.select0_blocks.clear();
        let mut ones = 0usize;
        for block in 0..block_count {
            self.blocks.push(ones as u64);
            let start = block * WORDS_PER_BLOCK;
            let end = (start + WORDS_PER_BLOCK).min(self.words.len());
            let block_ones: usize = self.words[start..end].iter().map(|w| w.count_ones() as usize).sum();
            let bits_before = block * BLOCK_BITS;
            let block_bits = (self.len - bits_before).min(BLOCK_BITS);
            let zeros_before = bits_before - ones;
            // Record this block for every sampled rank that falls inside it.
            while self.select1_blocks.len() * SELECT_SAMPLE < ones + block_ones {
                self.select1_blocks.push(block as u32);
            }
            while self.select0_blocks.len() * SELECT_SAMPLE < zeros_before + block_bits - block_ones {
                self.select0_blocks.push(block as u32);
            }
            ones += block_ones;
        }
        self.blocks.push(ones as u64);
        self.ones = ones;
    }

    #[inline]
    fn zeros_before_block(&self, block: usize) -> usize {
        block * BLOCK_BITS - self.blocks[block] as usize
    }

    // Largest block b in [lo, hi] with count(b) <= k, where count is nondecreasing.
    fn find_block<F: Fn(usize) -> usize>(lo: usize, hi: usize, k: usize, count: F) -> usize {
        let (mut lo, mut hi) = (lo, hi);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if count(mid) <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    fn block_count(&self) -> usize {
        self.blocks.len() - 1
    }
}

impl RankSelect for BitVector {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {} beyond length {}", i, self.len);
        if i == self.len {
            return self.ones;
        }
        let block = i / BLOCK_BITS;
        let mut result = self.blocks[block] as usize;
        let word = i / 64;
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            result += w.count_ones() as usize;
        }
        let offset = i % 64;
        if offset > 0 {
            result += (self.words[word] & ((1u64 << offset) - 1)).count_ones() as usize;
        }
        result
    }

    fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.ones {
            return None;
        }
        let sample = k / SELECT_SAMPLE;
        let lo = self.select1_blocks[sample] as usize;
        let hi = match self.select1_blocks.get(sample + 1) {
            Some(&b) => b as usize,
            None => self.block_count() - 1,
        };
        let block = Self::find_block(lo, hi, k, |b| self.blocks[b] as usize);
        let mut remaining = k - self.blocks[block] as usize;
        for w in block * WORDS_PER_BLOCK..self.words.len() {
            let count = self.words[w].count_ones() as usize;
            if remaining < count {
                return Some(w * 64 + select_in_word(self.words[w], remaining));
            }
            remaining -= count;
        }
        unreachable!("select1 directory is inconsistent")
    }

    fn select0(&self, k: usize) -> Option<usize> {
        if k >= self.len - self.ones {
            return None;
        }
        let sample = k / SELECT_SAMPLE;
        let lo = self.select0_blocks[sample] as usize;
        let hi = match self.select0_blocks.get(sample + 1) {
            Some(&b) => b as usize,
            None => self.block_count() - 1,
        };
        let block = Self::find_block(lo, hi, k, |b| self.zeros_before_block(b));
        let mut remaining = k - self.zeros_before_block(block);
        for w in block * WORDS_PER_BLOCK..self.words.len() {
            let mut inverted = !self.words[w];
            if w == self.words.len() - 1 && self.len % 64 != 0 {
                inverted &= (1u64 << (self.len % 64)) - 1;
            }
            let count = inverted.count_ones() as usize;
            if remaining < count {
                return Some(w * 64 + select_in_word(inverted, remaining));
            }
            remaining -= count;
        }
        unreachable!("select0 directory is inconsistent")
    }
}

impl Serialize for BitVector {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::BIT_VECTOR, self.len)?;
        serialize::write_words(writer, &self.words)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::BIT_VECTOR)?;
        let words = serialize::read_words(reader)?;
        if words.len() != len.div_ceil(64) {
            return Err(serialize::invalid_data("bitvector word count mismatch"));
        }
        if len % 64 != 0 && words[words.len() - 1] >> (len % 64) != 0 {
            return Err(serialize::invalid_data("bitvector has bits beyond its length"));
        }
        Ok(Self::from_words(len, words))
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + serialize::words_size(self.words.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scan_rank(bits: &[bool], i: usize, bit: bool) -> usize {
        bits[..i].iter().filter(|&&b| b == bit).count()
    }

    fn scan_select(bits: &[bool], k: usize, bit: bool) -> Option<usize> {
        bits.iter().enumerate().filter(|&(_, &b)| b == bit).nth(k).map(|(i, _)| i)
    }

    fn parse(s: &str) -> Vec<bool> {
        s.bytes().map(|b| b == b'1').collect()
    }

    #[test]
    fn small_examples() {
        let bv = BitVector::from_bits(parse("10110"));
        // Prefix counts over the first 3 and 5 bits.
        assert_eq!(bv.rank1(3), 2);
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.rank0(5), 2);
        // Second set bit and first unset bit.
        assert_eq!(bv.select1(1), Some(2));
        assert_eq!(bv.select0(0), Some(1));
        assert_eq!(bv.select1(3), None);
        let single = BitVector::from_bits(parse("1"));
        assert_eq!(single.select1(0), Some(0));
    }

    #[test]
    #[should_panic]
    fn rank_beyond_length_panics() {
        BitVector::from_bits(parse("10110")).rank1(6);
    }

    #[test]
    fn exhaustive_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in [0usize, 1, 63, 64, 65, 511, 512, 513, 2048] {
            for density in [0.0, 0.03, 0.5, 0.97, 1.0] {
                let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
                let bv = BitVector::from_bits(bits.iter().copied());
                assert_eq!(bv.len(), len);
                for i in 0..=len {
                    assert_eq!(bv.rank1(i), scan_rank(&bits, i, true));
                    assert_eq!(bv.rank1(i) + bv.rank0(i), i);
                }
                for k in 0..=len {
                    assert_eq!(bv.select1(k), scan_select(&bits, k, true), "select1({k})");
                    assert_eq!(bv.select0(k), scan_select(&bits, k, false), "select0({k})");
                }
            }
        }
    }

    #[test]
    fn sampled_large_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for density in [0.001, 0.3, 0.999] {
            let len = 100_000;
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let bv = BitVector::from_bits(bits.iter().copied());
            let ones: Vec<usize> = (0..len).filter(|&i| bits[i]).collect();
            let zeros: Vec<usize> = (0..len).filter(|&i| !bits[i]).collect();
            for (k, &pos) in ones.iter().enumerate() {
                assert_eq!(bv.select1(k), Some(pos));
            }
            for (k, &pos) in zeros.iter().enumerate() {
                assert_eq!(bv.select0(k), Some(pos));
            }
            let mut count = 0;
            for i in 0..=len {
                assert_eq!(bv.rank1(i), count);
                if i < len && bits[i] {
                    count += 1;
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let bv = BitVector::from_ones(1000, [0, 5, 999, 512, 64]);
        let bytes = bv.to_bytes();
        assert_eq!(bytes.len(), bv.size_in_bytes());
        let loaded = BitVector::from_bytes(&bytes).unwrap();
        assert_eq!(loaded, bv);
    }
}
