use libsais::SuffixArrayConstruction;

use crate::succinct::SLArray;

/// Suffix array of a text whose last symbol is a unique, smallest endmarker.
pub fn suffix_array(text: &[u32]) -> Vec<usize> {
    if text.is_empty() {
        return Vec::new();
    }
    assert!(text.len() < i32::MAX as usize, "text too long for 32-bit suffix array construction");
    let max = text.iter().copied().max().unwrap();
    let sa: Vec<i32> = if max < 256 {
        let bytes: Vec<u8> = text.iter().map(|&s| s as u8).collect();
        SuffixArrayConstruction::for_text(&bytes)
            .in_owned_buffer32()
            .single_threaded()
            .run()
            .expect("suffix array construction failed")
            .into_vec()
    } else {
        assert!(max < i32::MAX as u32, "symbol too large for suffix array construction");
        let mut symbols: Vec<i32> = text.iter().map(|&s| s as i32).collect();
        SuffixArrayConstruction::for_text_mut(&mut symbols)
            .in_owned_buffer32()
            .single_threaded()
            .run()
            .expect("suffix array construction failed")
            .into_vec()
    };
    sa.into_iter().map(|p| p as usize).collect()
}

/// LCP array by Kasai's scan: `lcp[i]` is the longest common prefix of the
/// suffixes at ranks `i - 1` and `i`, and `lcp[0] = 0`.
pub fn lcp_array(text: &[u32], sa: &[usize], isa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for pos in 0..n {
        let rank = isa[pos];
        if rank == 0 {
            h = 0;
            continue;
        }
        let prev = sa[rank - 1];
        while pos + h < n && prev + h < n && text[pos + h] == text[prev + h] {
            h += 1;
        }
        lcp[rank] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

pub fn inverse_permutation(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0usize; sa.len()];
    for (rank, &pos) in sa.iter().enumerate() {
        isa[pos] = rank;
    }
    isa
}

/// Suffix array, inverse suffix array, LCP array and BWT of one text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixStructures {
    pub sa: Vec<usize>,
    pub isa: Vec<usize>,
    pub lcp: Vec<usize>,
    pub bwt: Vec<u32>,
}

impl SuffixStructures {
    pub fn new(text: &[u32]) -> Self {
        let sa = suffix_array(text);
        let isa = inverse_permutation(&sa);
        let lcp = lcp_array(text, &sa, &isa);
        let n = text.len();
        let bwt = sa.iter().map(|&p| text[if p == 0 { n - 1 } else { p - 1 }]).collect();
        SuffixStructures { sa, isa, lcp, bwt }
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn lcp_slarray(&self) -> SLArray {
        SLArray::from_usizes(&self.lcp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_sa(text: &[u32]) -> Vec<usize> {
        let mut sa: Vec<usize> = (0..text.len()).collect();
        sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
        sa
    }

    fn symbols(s: &[u8]) -> Vec<u32> {
        s.iter().map(|&b| b as u32).collect()
    }

    #[test]
    fn gattaca() {
        let text = symbols(b"GATTACA\0");
        let ss = SuffixStructures::new(&text);
        // 1-based SA [8,7,5,2,6,1,4,3].
        assert_eq!(ss.sa, [7, 6, 4, 1, 5, 0, 3, 2]);
        assert_eq!(ss.lcp, [0, 0, 1, 1, 0, 0, 0, 1]);
        // T[SA[8] - 1] = T[2] = A, so the last BWT symbol is A.
        assert_eq!(ss.bwt, symbols(b"ACTGA\0TA"));
    }

    #[test]
    fn matches_naive_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = rng.gen_range(0..300);
            let sigma = rng.gen_range(1..5);
            let large = rng.gen_bool(0.3);
            let mut text: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=sigma) * if large { 1000 } else { 1 }).collect();
            text.push(0);
            let ss = SuffixStructures::new(&text);
            assert_eq!(ss.sa, naive_sa(&text));
            for i in 1..text.len() {
                let (a, b) = (ss.sa[i - 1], ss.sa[i]);
                let l = ss.lcp[i];
                assert_eq!(text[a..a + l], text[b..b + l]);
                assert_ne!(text.get(a + l), text.get(b + l));
            }
        }
    }
}
