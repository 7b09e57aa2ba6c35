//! Little-endian binary serialization shared by all structures.
//!
//! Every primitive structure is written as a tag byte, a 64-bit little-endian
//! length, and a payload of 64-bit little-endian words. Composite structures
//! are the concatenation of their parts in a fixed order. Rank and select
//! directories are not stored; they are rebuilt when a structure is loaded.

use std::io::{self, Read, Write};

/// Tag bytes identifying serialized structures.
pub mod tag {
    pub const BIT_VECTOR: u8 = 0x01;
    pub const INT_VECTOR: u8 = 0x02;
    pub const SPARSE_VECTOR: u8 = 0x03;
    pub const SLARRAY: u8 = 0x04;
    pub const WAVELET_TREE: u8 = 0x05;
    pub const COMPACT_BITS: u8 = 0x06;
    pub const WORDS: u8 = 0x07;
    pub const RUN_VECTOR: u8 = 0x08;
    pub const FM_INDEX: u8 = 0x10;
    pub const RLZ_LAYOUT: u8 = 0x20;
    pub const RLZ_PARSE: u8 = 0x21;
    pub const RELATIVE_FM: u8 = 0x30;
    pub const RSELECT: u8 = 0x31;
    pub const MINIMA_TREE: u8 = 0x40;
    pub const RELATIVE_LCP: u8 = 0x41;
}

/// Binary serialization in the crate's container format.
pub trait Serialize: Sized {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()>;

    fn load<R: Read>(reader: &mut R) -> io::Result<Self>;

    /// Size of the serialized structure in bytes.
    fn size_in_bytes(&self) -> usize;

    fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.size_in_bytes());
        self.serialize(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    fn from_bytes(mut bytes: &[u8]) -> io::Result<Self> {
        let value = Self::load(&mut bytes)?;
        if !bytes.is_empty() {
            return Err(invalid_data(format!("{} trailing bytes", bytes.len())));
        }
        Ok(value)
    }
}

pub(crate) fn invalid_data(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

pub(crate) const HEADER_BYTES: usize = 9;

pub(crate) fn write_u64<W: Write>(writer: &mut W, value: u64) -> io::Result<()> {
    writer.write_all(&value.to_le_bytes())
}

pub(crate) fn read_u64<R: Read>(reader: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    reader.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

pub(crate) fn read_usize<R: Read>(reader: &mut R) -> io::Result<usize> {
    let value = read_u64(reader)?;
    usize::try_from(value).map_err(|_| invalid_data("length does not fit in usize"))
}

pub(crate) fn write_header<W: Write>(writer: &mut W, tag: u8, len: usize) -> io::Result<()> {
    writer.write_all(&[tag])?;
    write_u64(writer, len as u64)
}

pub(crate) fn read_header<R: Read>(reader: &mut R, expected: u8) -> io::Result<usize> {
    let mut tag = [0u8; 1];
    reader.read_exact(&mut tag)?;
    if tag[0] != expected {
        return Err(invalid_data(format!(
            "expected tag {:#04x}, found {:#04x}",
            expected, tag[0]
        )));
    }
    read_usize(reader)
}

/// Writes a word array as tag, word count, words.
pub(crate) fn write_words<W: Write>(writer: &mut W, words: &[u64]) -> io::Result<()> {
    write_header(writer, tag::WORDS, words.len())?;
    for &word in words {
        write_u64(writer, word)?;
    }
    Ok(())
}

pub(crate) fn read_words<R: Read>(reader: &mut R) -> io::Result<Vec<u64>> {
    let len = read_header(reader, tag::WORDS)?;
    // Guard against absurd lengths from corrupted input before allocating.
    if len > (1usize << 40) {
        return Err(invalid_data("word array too long"));
    }
    let mut words = Vec::with_capacity(len.min(1 << 20));
    for _ in 0..len {
        words.push(read_u64(reader)?);
    }
    Ok(words)
}

pub(crate) fn words_size(count: usize) -> usize {
    HEADER_BYTES + 8 * count
}

/// Packs bytes into little-endian words.
pub(crate) fn pack_bytes(bytes: &[u8]) -> Vec<u64> {
    bytes
        .chunks(8)
        .map(|chunk| {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            u64::from_le_bytes(buf)
        })
        .collect()
}

pub(crate) fn unpack_bytes(words: &[u64], len: usize) -> io::Result<Vec<u8>> {
    if words.len() != len.div_ceil(8) {
        return Err(invalid_data("byte payload length mismatch"));
    }
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for word in words {
        bytes.extend_from_slice(&word.to_le_bytes());
    }
    bytes.truncate(len);
    Ok(bytes)
}

/// Serializes a plain `u64` array (used for small tables such as C arrays).
pub(crate) fn write_u64_table<W: Write>(writer: &mut W, values: &[u64]) -> io::Result<()> {
    write_words(writer, values)
}

pub(crate) fn read_u64_table<R: Read>(reader: &mut R) -> io::Result<Vec<u64>> {
    read_words(reader)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_packing_round_trip() {
        for len in [0, 1, 7, 8, 9, 31] {
            let bytes: Vec<u8> = (0..len as u8).map(|b| b.wrapping_mul(37)).collect();
            let words = pack_bytes(&bytes);
            assert_eq!(unpack_bytes(&words, len).unwrap(), bytes);
        }
    }

    #[test]
    fn header_tag_mismatch_is_rejected() {
        let mut buf = Vec::new();
        write_header(&mut buf, tag::BIT_VECTOR, 5).unwrap();
        assert!(read_header(&mut buf.as_slice(), tag::INT_VECTOR).is_err());
        assert_eq!(read_header(&mut buf.as_slice(), tag::BIT_VECTOR).unwrap(), 5);
    }
}
