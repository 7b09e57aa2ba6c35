//! Sectioned container file.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! magic "RST1" | version u16 | section count u16
//! section table: count x (tag u8, offset u64, length u64)
//! payloads: each followed by the CRC32 of its bytes (u32)
//! ```
//!
//! Offsets are absolute; lengths exclude the checksum.

use std::io::Write;

use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RST1";
pub const VERSION: u16 = 1;

const HEADER_LEN: usize = 8;
const ENTRY_LEN: usize = 17;
const CRC_LEN: usize = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Container {
    sections: Vec<(u8, Vec<u8>)>,
}

impl Container {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a section. Tags must be unique.
    pub fn push(&mut self, tag: u8, payload: Vec<u8>) {
        assert!(self.get(tag).is_none(), "duplicate section {tag:#04x}");
        self.sections.push((tag, payload));
    }

    pub fn get(&self, tag: u8) -> Option<&[u8]> {
        self.sections.iter().find(|s| s.0 == tag).map(|s| s.1.as_slice())
    }

    pub fn require(&self, tag: u8) -> Result<&[u8]> {
        self.get(tag).ok_or_else(|| Error::Format(format!("missing section {tag:#04x}")))
    }

    pub fn sections(&self) -> impl Iterator<Item = (u8, &[u8])> {
        self.sections.iter().map(|s| (s.0, s.1.as_slice()))
    }

    /// Serialized size in bytes.
    pub fn size_in_bytes(&self) -> usize {
        HEADER_LEN + self.sections.iter().map(|s| ENTRY_LEN + s.1.len() + CRC_LEN).sum::<usize>()
    }

    pub fn write_to<W: Write>(&self, writer: &mut W) -> Result<()> {
        let count = u16::try_from(self.sections.len()).map_err(|_| Error::Format("too many sections".into()))?;
        writer.write_all(MAGIC)?;
        writer.write_all(&VERSION.to_le_bytes())?;
        writer.write_all(&count.to_le_bytes())?;
        let mut offset = (HEADER_LEN + ENTRY_LEN * self.sections.len()) as u64;
        for (tag, payload) in &self.sections {
            writer.write_all(&[*tag])?;
            writer.write_all(&offset.to_le_bytes())?;
            writer.write_all(&(payload.len() as u64).to_le_bytes())?;
            offset += (payload.len() + CRC_LEN) as u64;
        }
        for (_, payload) in &self.sections {
            writer.write_all(payload)?;
            writer.write_all(&crc32fast::hash(payload).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_in_bytes());
        self.write_to(&mut out).expect("writing to memory");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::Format(msg.to_string());
        if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
            return Err(bad("not an RST1 container"));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported format version {version}")));
        }
        let count = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
        let table_end = HEADER_LEN + ENTRY_LEN * count;
        if bytes.len() < table_end {
            return Err(bad("truncated section table"));
        }
        let u64_at = |p: usize| u64::from_le_bytes(bytes[p..p + 8].try_into().expect("8 bytes"));
        let mut container = Container::new();
        for k in 0..count {
            let entry = HEADER_LEN + ENTRY_LEN * k;
            let tag = bytes[entry];
            let offset = usize::try_from(u64_at(entry + 1)).map_err(|_| bad("section offset"))?;
            let len = usize::try_from(u64_at(entry + 9)).map_err(|_| bad("section length"))?;
            let end = offset.checked_add(len).and_then(|e| e.checked_add(CRC_LEN));
            let Some(end) = end.filter(|&e| offset >= table_end && e <= bytes.len()) else {
                return Err(Error::Format(format!("section {tag:#04x} outside the file")));
            };
            let payload = &bytes[offset..offset + len];
            let stored = u32::from_le_bytes(bytes[end - CRC_LEN..end].try_into().expect("4 bytes"));
            if crc32fast::hash(payload) != stored {
                return Err(Error::Checksum(tag));
            }
            if container.get(tag).is_some() {
                return Err(Error::Format(format!("duplicate section {tag:#04x}")));
            }
            container.sections.push((tag, payload.to_vec()));
        }
        Ok(container)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Container {
        let mut c = Container::new();
        c.push(1, b"hello".to_vec());
        c.push(7, Vec::new());
        c.push(3, (0..=255).collect());
        c
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let bytes = c.to_bytes();
        assert_eq!(bytes.len(), c.size_in_bytes());
        assert_eq!(&bytes[..4], b"RST1");
        let loaded = Container::from_bytes(&bytes).unwrap();
        assert_eq!(loaded, c);
        assert_eq!(loaded.to_bytes(), bytes);
        assert_eq!(loaded.get(1), Some(&b"hello"[..]));
        assert!(loaded.require(9).is_err());
    }

    #[test]
    fn every_payload_bit_flip_is_detected() {
        let bytes = sample().to_bytes();
        let payload_start = HEADER_LEN + 3 * ENTRY_LEN;
        for p in payload_start..bytes.len() {
            let mut corrupt = bytes.clone();
            corrupt[p] ^= 0x10;
            assert!(Container::from_bytes(&corrupt).is_err(), "flip at {p}");
        }
    }

    #[test]
    fn malformed_headers() {
        let bytes = sample().to_bytes();
        assert!(Container::from_bytes(&bytes[..6]).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(Container::from_bytes(&wrong).is_err());
        let mut version = bytes.clone();
        version[4] = 9;
        assert!(Container::from_bytes(&version).is_err());
        assert!(matches!(Container::from_bytes(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
    }
}
