use std::ops::Range;

/// Operations of a compressed suffix array over an endmarker-terminated text.
///
/// Ranks and text positions are 0-based. `rank(c, i)` counts occurrences of
/// `c` in `BWT[0, i)`, and `select(c, k)` returns the position of the
/// occurrence with rank `k`.
pub trait Csa {
    /// Text length including the endmarker.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Alphabet size; symbols are `0..sigma`.
    fn sigma(&self) -> usize;

    /// Number of symbols in the text smaller than `c`.
    fn count_less(&self, c: u32) -> usize;

    fn bwt(&self, i: usize) -> u32;

    fn rank(&self, c: u32, i: usize) -> usize;

    fn select(&self, c: u32, k: usize) -> Option<usize>;

    /// First symbol of the suffix of rank `i`.
    fn first_symbol(&self, i: usize) -> u32 {
        // Largest c with C[c] <= i.
        let (mut lo, mut hi) = (0u32, self.sigma() as u32 - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.count_less(mid) <= i {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// `SA[lf(i)] = SA[i] - 1`, wrapping to the endmarker suffix.
    fn lf(&self, i: usize) -> usize {
        let c = self.bwt(i);
        self.count_less(c) + self.rank(c, i)
    }

    /// Inverse of `lf`.
    fn psi(&self, i: usize) -> usize {
        let c = self.first_symbol(i);
        self.select(c, i - self.count_less(c)).expect("psi of a valid rank")
    }

    /// Range of suffixes starting with `c` followed by a suffix in `range`.
    fn backward_step(&self, range: Range<usize>, c: u32) -> Range<usize> {
        if (c as usize) >= self.sigma() || range.is_empty() {
            return 0..0;
        }
        let base = self.count_less(c);
        let start = base + self.rank(c, range.start);
        let end = base + self.rank(c, range.end);
        if start >= end {
            0..0
        } else {
            start..end
        }
    }

    /// Lexicographic range of the suffixes prefixed by `pattern`, or `0..0`
    /// when there are none.
    fn find(&self, pattern: &[u32]) -> Range<usize> {
        let mut range = 0..self.len();
        for &c in pattern.iter().rev() {
            range = self.backward_step(range, c);
            if range.is_empty() {
                return 0..0;
            }
        }
        range
    }

    /// Whether `locate` and `inverse` are available.
    fn supports_locate(&self) -> bool {
        true
    }

    /// `SA[i]`.
    fn locate(&self, i: usize) -> usize;

    /// `ISA[pos]`, with `ISA[len] = ISA[0]` by cyclic rotation.
    fn inverse(&self, pos: usize) -> usize;

    fn locate_range(&self, range: Range<usize>) -> Vec<usize> {
        range.map(|i| self.locate(i)).collect()
    }

    /// Text symbols in `range` (which may end at `len`).
    fn extract(&self, range: Range<usize>) -> Vec<u32> {
        assert!(range.end <= self.len(), "extract range beyond text");
        if range.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; range.len()];
        let mut rank = self.inverse(range.end);
        for slot in out.iter_mut().rev() {
            let c = self.bwt(rank);
            *slot = c;
            rank = self.count_less(c) + self.rank(c, rank);
        }
        out
    }
}

macro_rules! forward_csa {
    ($($ptr:tt)*) => {
        impl<T: Csa + ?Sized> Csa for $($ptr)* {
            fn len(&self) -> usize {
                (**self).len()
            }

            fn sigma(&self) -> usize {
                (**self).sigma()
            }

            fn count_less(&self, c: u32) -> usize {
                (**self).count_less(c)
            }

            fn bwt(&self, i: usize) -> u32 {
                (**self).bwt(i)
            }

            fn rank(&self, c: u32, i: usize) -> usize {
                (**self).rank(c, i)
            }

            fn select(&self, c: u32, k: usize) -> Option<usize> {
                (**self).select(c, k)
            }

            fn first_symbol(&self, i: usize) -> u32 {
                (**self).first_symbol(i)
            }

            fn lf(&self, i: usize) -> usize {
                (**self).lf(i)
            }

            fn psi(&self, i: usize) -> usize {
                (**self).psi(i)
            }

            fn supports_locate(&self) -> bool {
                (**self).supports_locate()
            }

            fn locate(&self, i: usize) -> usize {
                (**self).locate(i)
            }

            fn inverse(&self, pos: usize) -> usize {
                (**self).inverse(pos)
            }

            fn extract(&self, range: Range<usize>) -> Vec<u32> {
                (**self).extract(range)
            }
        }
    };
}

forward_csa!(&T);
forward_csa!(std::sync::Arc<T>);
