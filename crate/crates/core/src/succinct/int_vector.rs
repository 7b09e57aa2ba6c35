use super::bit_width;
use crate::serialize::{self, tag, Serialize};

use std::io::{self, Read, Write};

/// A fixed-width bit-packed integer array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVector {
    len: usize,
    width: usize,
    words: Vec<u64>,
}

impl IntVector {
    pub fn new(len: usize, width: usize) -> Self {
        assert!((1..=64).contains(&width), "width must be in 1..=64");
        IntVector { len, width, words: vec![0; (len * width).div_ceil(64)] }
    }

    /// Packs `values` using the smallest width that fits the maximum.
    pub fn from_slice(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut iv = Self::new(values.len(), bit_width(max));
        for (i, &v) in values.iter().enumerate() {
            iv.set(i, v);
        }
        iv
    }

    pub fn from_usizes(values: &[usize]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut iv = Self::new(values.len(), bit_width(max as u64));
        for (i, &v) in values.iter().enumerate() {
            iv.set(i, v as u64);
        }
        iv
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        let bit = i * self.width;
        let (word, offset) = (bit / 64, bit % 64);
        let mut value = self.words[word] >> offset;
        if offset + self.width > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & self.mask()
    }

    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        let mask = self.mask();
        assert!(value <= mask, "value {} does not fit in {} bits", value, self.width);
        let bit = i * self.width;
        let (word, offset) = (bit / 64, bit % 64);
        self.words[word] = (self.words[word] & !(mask << offset)) | (value << offset);
        if offset + self.width > 64 {
            let high = self.width - (64 - offset);
            let high_mask = (1u64 << high) - 1;
            self.words[word + 1] = (self.words[word + 1] & !high_mask) | (value >> (64 - offset));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl Serialize for IntVector {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::INT_VECTOR, self.len)?;
        serialize::write_u64(writer, self.width as u64)?;
        serialize::write_words(writer, &self.words)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::INT_VECTOR)?;
        let width = serialize::read_usize(reader)?;
        if !(1..=64).contains(&width) {
            return Err(serialize::invalid_data("int vector width out of range"));
        }
        let words = serialize::read_words(reader)?;
        let bits = len.checked_mul(width).ok_or_else(|| serialize::invalid_data("int vector too long"))?;
        if words.len() != bits.div_ceil(64) {
            return Err(serialize::invalid_data("int vector word count mismatch"));
        }
        Ok(IntVector { len, width, words })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + 8 + serialize::words_size(self.words.len())
    }
}
