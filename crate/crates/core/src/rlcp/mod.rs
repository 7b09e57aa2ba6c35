//! Relative LCP array with range minimum and nearest smaller value queries.

mod array;
mod minima;
mod query;

use std::ops::Range;

pub use array::{differential, PlainLcp, RlcpArray, RlcpReference};
pub use minima::{MinimaTree, BRANCHING};

use crate::Result;

/// Read access and navigation queries over an LCP array. Positions are
/// 0-based; `None` from the nearest-value queries stands for "no such
/// position" at either end of the array.
pub trait Lcp {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, j: usize) -> u64;

    /// Values at the positions in `range`.
    fn range(&self, range: Range<usize>) -> Vec<u64>;

    /// Leftmost minimum of `LCP[sp..=ep]` and its value.
    fn rmq(&self, sp: usize, ep: usize) -> Result<(usize, u64)>;

    /// Next position with a value smaller than `LCP[i]`.
    fn nsv(&self, i: usize) -> Option<(usize, u64)>;

    /// Previous position with a value smaller than `LCP[i]`.
    fn psv(&self, i: usize) -> Option<(usize, u64)>;

    /// Next position with a value smaller than or equal to `LCP[i]`.
    fn nsev(&self, i: usize) -> Option<(usize, u64)>;

    /// Previous position with a value smaller than or equal to `LCP[i]`.
    fn psev(&self, i: usize) -> Option<(usize, u64)>;
}

macro_rules! forward_lcp {
    ($($ptr:tt)*) => {
        impl<T: Lcp + ?Sized> Lcp for $($ptr)* {
            fn len(&self) -> usize {
                (**self).len()
            }

            fn get(&self, j: usize) -> u64 {
                (**self).get(j)
            }

            fn range(&self, range: Range<usize>) -> Vec<u64> {
                (**self).range(range)
            }

            fn rmq(&self, sp: usize, ep: usize) -> Result<(usize, u64)> {
                (**self).rmq(sp, ep)
            }

            fn nsv(&self, i: usize) -> Option<(usize, u64)> {
                (**self).nsv(i)
            }

            fn psv(&self, i: usize) -> Option<(usize, u64)> {
                (**self).psv(i)
            }

            fn nsev(&self, i: usize) -> Option<(usize, u64)> {
                (**self).nsev(i)
            }

            fn psev(&self, i: usize) -> Option<(usize, u64)> {
                (**self).psev(i)
            }
        }
    };
}

forward_lcp!(&T);
forward_lcp!(std::sync::Arc<T>);
