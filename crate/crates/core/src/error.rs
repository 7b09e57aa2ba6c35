use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid text: {0}")]
    InvalidText(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed container: {0}")]
    Format(String),
    #[error("checksum mismatch in section {0:#04x}")]
    Checksum(u8),
    #[error("target bundle was built against a different reference")]
    ReferenceMismatch,
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
