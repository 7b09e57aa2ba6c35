//! Compressed suffix tree over a CSA and an LCP array, and the traversal and
//! matching algorithms built on it.

mod algorithms;
mod tree;

pub use algorithms::{MaximalMatch, Preorder};
pub use tree::{Node, SuffixTree};
