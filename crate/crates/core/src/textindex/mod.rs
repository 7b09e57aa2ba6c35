//! Suffix arrays, LCP arrays, the BWT and the FM-index.

mod csa;
mod fm_index;
mod suffix;
mod text;

pub use csa::Csa;
pub use fm_index::{FmConfig, FmIndex, SampleOrder};
pub use suffix::{inverse_permutation, lcp_array, suffix_array, SuffixStructures};
pub use text::{Text, ENDMARKER};
