//! Construction of a bwt-invariant subsequence.
//!
//! The suffixes of R and S are merged into one order, each reference suffix
//! is matched to its neighbouring target suffixes, a longest increasing
//! subsequence of the matches gives a text alignment, and the alignment is
//! carried over to the BWTs.

use super::Alignment;
use crate::succinct::BitVector;
use crate::textindex::{Csa, SuffixStructures};

/// Merging bitvector `B_RS` of R and S: bit `q` is set when the `q`-th suffix
/// in the mutual order belongs to S. R's endmarker sorts before S's.
pub fn merging_bitvector<A: Csa + ?Sized>(reference: &A, s_text: &[u32], s_isa: &[usize]) -> BitVector {
    let n_s = s_text.len();
    assert!(n_s > 0 && s_isa.len() == n_s, "target must be a terminated text");
    let mut ones = vec![0usize; n_s];
    // Reference suffixes smaller than the target suffix at j.
    let mut r = 1;
    ones[n_s - 1] = r + s_isa[n_s - 1];
    for j in (0..n_s - 1).rev() {
        let c = s_text[j];
        r = reference.count_less(c) + reference.rank(c, r);
        ones[j] = r + s_isa[j];
    }
    ones.sort_unstable();
    BitVector::from_ones(reference.len() + n_s, ones)
}

/// One match array (`left` or `right`): for reference positions, the target
/// position of the matched suffix. Stored as runs of consecutive values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchArray {
    len: usize,
    // (start position, run length, first value), sorted by start.
    runs: Vec<(usize, usize, usize)>,
}

impl MatchArray {
    pub fn from_values(values: &[Option<usize>]) -> Self {
        let mut runs: Vec<(usize, usize, usize)> = Vec::new();
        for (x, v) in values.iter().enumerate() {
            let Some(y) = *v else { continue };
            if let Some(last) = runs.last_mut() {
                if last.0 + last.1 == x && last.2 + last.1 == y {
                    last.1 += 1;
                    continue;
                }
            }
            runs.push((x, 1, y));
        }
        MatchArray { len: values.len(), runs }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        let i = self.runs.partition_point(|r| r.0 <= x);
        let &(start, len, value) = self.runs.get(i.checked_sub(1)?)?;
        (x < start + len).then(|| value + x - start)
    }

    /// Defined entries as `(reference position, target position)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.runs.iter().flat_map(|&(start, len, value)| (0..len).map(move |t| (start + t, value + t)))
    }
}

/// `left` and `right` match arrays. A reference suffix is matched to the
/// target suffix just before (after) it in the mutual order when both start
/// with the same symbol. The endmarkers are never matched.
pub fn match_arrays(
    merge: &BitVector,
    r_text: &[u32],
    r: &SuffixStructures,
    s_text: &[u32],
    s: &SuffixStructures,
) -> (MatchArray, MatchArray) {
    let n_r = r.len();
    let mut left = vec![None; n_r];
    let mut right = vec![None; n_r];
    let bits: Vec<bool> = merge.iter().collect();
    let (mut r_rank, mut s_rank) = (0, 0);
    for q in 0..bits.len() {
        if bits[q] {
            s_rank += 1;
            continue;
        }
        let x = r.sa[r_rank];
        r_rank += 1;
        if x + 1 == n_r {
            continue;
        }
        if q > 0 && bits[q - 1] {
            let y = s.sa[s_rank - 1];
            if s_text[y] == r_text[x] {
                left[x] = Some(y);
            }
        }
        if q + 1 < bits.len() && bits[q + 1] {
            let y = s.sa[s_rank];
            if s_text[y] == r_text[x] {
                right[x] = Some(y);
            }
        }
    }
    (MatchArray::from_values(&left), MatchArray::from_values(&right))
}

const NONE: usize = usize::MAX;

/// Longest subsequence of reference positions, each taking its left or right
/// match, with strictly increasing target positions. Among equally long
/// choices the smaller target position wins.
pub fn lis_pairs(left: &MatchArray, right: &MatchArray) -> Vec<(usize, usize)> {
    let mut by_position: Vec<(usize, usize)> = left.iter().chain(right.iter()).collect();
    // Larger candidate first, so two candidates of one position never chain.
    by_position.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    by_position.dedup();
    let mut nodes: Vec<(usize, usize, usize)> = Vec::with_capacity(by_position.len());
    let mut tails: Vec<(usize, usize)> = Vec::new();
    for (x, y) in by_position {
        let p = tails.partition_point(|t| t.0 < y);
        let prev = if p > 0 { tails[p - 1].1 } else { NONE };
        nodes.push((x, y, prev));
        let node = nodes.len() - 1;
        if p == tails.len() {
            tails.push((y, node));
        } else {
            tails[p] = (y, node);
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut node = tails.last().map_or(NONE, |t| t.1);
    while node != NONE {
        let (x, y, prev) = nodes[node];
        out.push((x, y));
        node = prev;
    }
    out.reverse();
    out
}

/// Carries a text alignment over to the BWTs. Text pair `(x, y)` becomes BWT
/// pair `(ISA_R[x + 1], ISA_S[y + 1])`; pairs whose ranks are out of order are
/// dropped so that the surviving pairs line up in both alignments.
pub fn text_to_bwt_alignment(
    pairs: &[(usize, usize)],
    r: &SuffixStructures,
    s: &SuffixStructures,
) -> (Alignment, Alignment) {
    let mut ranked: Vec<(usize, usize, usize)> =
        pairs.iter().enumerate().map(|(t, &(x, y))| (r.isa[x + 1], s.isa[y + 1], t)).collect();
    ranked.sort_unstable();
    let mut nodes: Vec<usize> = vec![NONE; ranked.len()];
    let mut tails: Vec<(usize, usize)> = Vec::new();
    for (k, &(_, rank_s, _)) in ranked.iter().enumerate() {
        let p = tails.partition_point(|t| t.0 < rank_s);
        nodes[k] = if p > 0 { tails[p - 1].1 } else { NONE };
        if p == tails.len() {
            tails.push((rank_s, k));
        } else {
            tails[p] = (rank_s, k);
        }
    }
    let mut kept = Vec::with_capacity(tails.len());
    let mut k = tails.last().map_or(NONE, |t| t.1);
    while k != NONE {
        kept.push(ranked[k]);
        k = nodes[k];
    }
    kept.reverse();
    let bwt_pairs: Vec<(usize, usize)> = kept.iter().map(|&(a, b, _)| (a, b)).collect();
    let mut text_pairs: Vec<(usize, usize)> = kept.iter().map(|&(_, _, t)| pairs[t]).collect();
    text_pairs.sort_unstable();
    (Alignment::from_pairs(r.len(), s.len(), &text_pairs), Alignment::from_pairs(r.len(), s.len(), &bwt_pairs))
}

/// Text and BWT alignments of a bwt-invariant subsequence of R and S.
pub fn bwt_invariant<A: Csa + ?Sized>(
    reference: &A,
    r_text: &[u32],
    r: &SuffixStructures,
    s_text: &[u32],
    s: &SuffixStructures,
) -> (Alignment, Alignment) {
    let merge = merging_bitvector(reference, s_text, &s.isa);
    let (left, right) = match_arrays(&merge, r_text, r, s_text, s);
    let pairs = lis_pairs(&left, &right);
    text_to_bwt_alignment(&pairs, r, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textindex::{FmConfig, FmIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn symbols(t: &[u8]) -> Vec<u32> {
        t.iter().map(|&b| b as u32).collect()
    }

    // Mutual order of all suffixes, with R's endmarker before S's.
    fn mutual_order(r: &[u32], s: &[u32]) -> Vec<(bool, usize)> {
        let mut all: Vec<(bool, usize)> = (0..r.len()).map(|x| (false, x)).chain((0..s.len()).map(|y| (true, y))).collect();
        all.sort_by(|&(ia, a), &(ib, b)| {
            let sa = if ia { &s[a..] } else { &r[a..] };
            let sb = if ib { &s[b..] } else { &r[b..] };
            sa.cmp(sb).then(ia.cmp(&ib))
        });
        all
    }

    fn setup(r: &[u32], s: &[u32]) -> (FmIndex, SuffixStructures, SuffixStructures) {
        let rs = SuffixStructures::new(r);
        let ss = SuffixStructures::new(s);
        (FmIndex::from_structures(&rs, 256, FmConfig::default()), rs, ss)
    }

    fn random_pair(rng: &mut ChaCha8Rng) -> (Vec<u32>, Vec<u32>) {
        let n = rng.gen_range(1..200);
        let mut r: Vec<u32> = (0..n).map(|_| rng.gen_range(1..5)).collect();
        let mut s = Vec::new();
        for &c in &r {
            match rng.gen_range(0..20) {
                0 => s.push(rng.gen_range(1..5)),
                1 => {}
                2 => {
                    s.push(c);
                    s.push(rng.gen_range(1..5));
                }
                _ => s.push(c),
            }
        }
        r.push(0);
        s.push(0);
        (r, s)
    }

    #[test]
    fn merging_bitvector_matches_sorted_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut cases = vec![(symbols(b"GATTACA\0"), symbols(b"GATTAGA\0"))];
        for _ in 0..50 {
            cases.push(random_pair(&mut rng));
        }
        for (r, s) in cases {
            let (fm, _, ss) = setup(&r, &s);
            let merge = merging_bitvector(&fm, &s, &ss.isa);
            let expected: Vec<bool> = mutual_order(&r, &s).iter().map(|e| e.0).collect();
            assert_eq!(merge.iter().collect::<Vec<_>>(), expected);
        }
    }

    #[test]
    fn match_arrays_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let (r, s) = random_pair(&mut rng);
            let (fm, rs, ss) = setup(&r, &s);
            let merge = merging_bitvector(&fm, &s, &ss.isa);
            let (left, right) = match_arrays(&merge, &r, &rs, &s, &ss);
            let order = mutual_order(&r, &s);
            for (q, &(is_s, x)) in order.iter().enumerate() {
                if is_s {
                    continue;
                }
                let pick = |p: Option<&(bool, usize)>| match p {
                    Some(&(true, y)) if x + 1 < r.len() && s[y] == r[x] => Some(y),
                    _ => None,
                };
                assert_eq!(left.get(x), pick(q.checked_sub(1).and_then(|p| order.get(p))));
                assert_eq!(right.get(x), pick(order.get(q + 1)));
            }
        }
    }

    fn lis_oracle(left: &MatchArray, right: &MatchArray, n: usize) -> usize {
        // best[x][side]: longest chain ending at position x using that side.
        let cand = |x: usize| [left.get(x), right.get(x)];
        let mut best = vec![[0usize; 2]; n];
        let mut overall = 0;
        for x in 0..n {
            for side in 0..2 {
                let Some(y) = cand(x)[side] else { continue };
                let mut b = 1;
                for px in 0..x {
                    for ps in 0..2 {
                        if let Some(py) = cand(px)[ps] {
                            if py < y {
                                b = b.max(best[px][ps] + 1);
                            }
                        }
                    }
                }
                best[x][side] = b;
                overall = overall.max(b);
            }
        }
        overall
    }

    #[test]
    fn lis_is_longest_and_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let (r, s) = random_pair(&mut rng);
            let (fm, rs, ss) = setup(&r, &s);
            let merge = merging_bitvector(&fm, &s, &ss.isa);
            let (left, right) = match_arrays(&merge, &r, &rs, &s, &ss);
            let pairs = lis_pairs(&left, &right);
            for w in pairs.windows(2) {
                assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
            }
            for &(x, y) in &pairs {
                assert!(left.get(x) == Some(y) || right.get(x) == Some(y));
            }
            assert_eq!(pairs.len(), lis_oracle(&left, &right, r.len()));
        }
    }

    #[test]
    fn match_array_runs() {
        let values = [None, Some(4), Some(5), Some(6), Some(1), None, Some(2)];
        let m = MatchArray::from_values(&values);
        assert_eq!(m.run_count(), 3);
        for (x, v) in values.iter().enumerate() {
            assert_eq!(m.get(x), *v);
        }
        assert_eq!(m.get(100), None);
    }

    // A bwt-invariant subsequence: aligned BWT symbols agree and
    // the text order of the aligned suffixes is the same in R and S.
    fn check_invariant(rs: &SuffixStructures, ss: &SuffixStructures, bwt: &Alignment) {
        let pairs: Vec<(usize, usize)> = bwt.pairs().collect();
        for &(i, j) in &pairs {
            assert_eq!(rs.bwt[i], ss.bwt[j]);
            assert_ne!(rs.bwt[i], 0);
        }
        for a in 0..pairs.len() {
            for b in 0..pairs.len() {
                let r_order = rs.sa[pairs[a].0].cmp(&rs.sa[pairs[b].0]);
                let s_order = ss.sa[pairs[a].1].cmp(&ss.sa[pairs[b].1]);
                assert_eq!(r_order, s_order);
            }
        }
    }

    #[test]
    fn invariant_subsequence_on_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut cases = vec![
            (symbols(b"GATTACA\0"), symbols(b"GATTAGA\0")),
            (symbols(b"ACCGTAGGTA\0"), symbols(b"GTAACCGTA\0")),
        ];
        for _ in 0..40 {
            cases.push(random_pair(&mut rng));
        }
        for (r, s) in cases {
            let (fm, rs, ss) = setup(&r, &s);
            let (text, bwt) = bwt_invariant(&fm, &r, &rs, &s, &ss);
            assert_eq!(text.len(), bwt.len());
            let text_pairs: Vec<(usize, usize)> = text.pairs().collect();
            for &(x, y) in &text_pairs {
                assert_eq!(r[x], s[y]);
            }
            // Each BWT pair comes from a text pair.
            for (i, j) in bwt.pairs() {
                assert!(text_pairs.binary_search(&(rs.sa[i] - 1, ss.sa[j] - 1)).is_ok());
            }
            check_invariant(&rs, &ss, &bwt);
        }
    }

    #[test]
    fn identical_texts_align_completely() {
        let t = symbols(b"GATTACAGATTACA\0");
        let (fm, rs, ss) = setup(&t, &t);
        let (text, _) = bwt_invariant(&fm, &t, &rs, &t, &ss);
        assert_eq!(text.len(), t.len() - 1);
    }
}
