//! Relative Lempel-Ziv parsing over integer token sequences.
//!
//! The target is parsed greedily against a reference by backward search on
//! an FM-index of the reversed reference. Each phrase is a copy of at most
//! `max_len` tokens followed by one or more mismatch literals; a copy that
//! reaches the end of the target is closed by a virtual terminator literal.

mod layout;
mod matcher;
mod parse;
mod token;

pub use layout::{PhraseLayout, Source};
pub use matcher::{Phrase, PhraseKind, RlzConfig, RlzReference};
pub use parse::{RlzParse, TERMINATOR};
pub use token::{Symbols, TokenMap};

#[inline]
pub(crate) fn zigzag(value: i64) -> u64 {
    ((value << 1) ^ (value >> 63)) as u64
}

#[inline]
pub(crate) fn unzigzag(value: u64) -> i64 {
    ((value >> 1) as i64) ^ -((value & 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_round_trip() {
        for v in [0i64, 1, -1, 2, -2, 32767, -32768, i64::MAX, i64::MIN + 1] {
            assert_eq!(unzigzag(zigzag(v)), v);
        }
        assert_eq!(zigzag(-1), 1);
        assert_eq!(zigzag(1), 2);
        assert!(zigzag(-32768) < 1 << 16 && zigzag(32767) < 1 << 16);
    }
}
