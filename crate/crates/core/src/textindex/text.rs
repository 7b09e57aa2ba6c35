use crate::error::{Error, Result};

/// The endmarker symbol, smaller than every other symbol.
pub const ENDMARKER: u8 = 0;

/// A byte sequence terminated by a unique endmarker `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    /// Validates a sequence that already ends with the endmarker.
    pub fn new(bytes: Vec<u8>) -> Result<Self> {
        match bytes.iter().position(|&b| b == ENDMARKER) {
            None => Err(Error::InvalidText("missing endmarker".into())),
            Some(p) if p + 1 != bytes.len() => {
                Err(Error::InvalidText(format!("endmarker at position {} before the end", p)))
            }
            Some(_) => Ok(Text { bytes }),
        }
    }

    /// Appends the endmarker to `body`, which must not contain it.
    pub fn from_body(body: &[u8]) -> Result<Self> {
        let mut bytes = Vec::with_capacity(body.len() + 1);
        bytes.extend_from_slice(body);
        bytes.push(ENDMARKER);
        Self::new(bytes)
    }

    /// Length including the endmarker.
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The text without its endmarker.
    pub fn body(&self) -> &[u8] {
        &self.bytes[..self.bytes.len() - 1]
    }

    pub fn symbols(&self) -> Vec<u32> {
        self.bytes.iter().map(|&b| b as u32).collect()
    }

    /// The reversed body followed by the endmarker.
    pub fn reversed(&self) -> Text {
        let mut bytes: Vec<u8> = self.body().iter().rev().copied().collect();
        bytes.push(ENDMARKER);
        Text { bytes }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}
