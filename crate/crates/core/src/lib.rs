//! Relative suffix trees: compressed suffix trees of a target sequence
//! represented relative to the index of a similar reference sequence.

pub mod error;
pub mod io;
pub mod rfm;
pub mod rlcp;
pub mod rlz;
pub mod rst;
pub mod serialize;
pub mod succinct;
pub mod synth;
pub mod textindex;

pub use error::{Error, Result};
pub use io::{ReferenceBundle, TargetBundle};
pub use rfm::RelativeFm;
pub use rlcp::{Lcp, RlcpArray};
pub use rst::{Node, SuffixTree};
pub use textindex::{Csa, FmIndex, Text};
