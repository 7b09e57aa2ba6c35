//! Approximate longest common subsequence of two BWTs.
//!
//! Both BWTs are cut into blocks of suffixes sharing the same context (the
//! first `k` symbols, or the whole suffix if it is shorter). Blocks with equal
//! contexts are paired and aligned with Myers' O(ND) algorithm in windows,
//! bounding both the edit distance explored per window and the trace memory.

use std::ops::Range;

use super::Alignment;
use crate::textindex::SuffixStructures;

/// Parameters of the block aligner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcsConfig {
    /// Longest context used to partition the BWTs. Shorter contexts are used
    /// when the average block would not fill a window.
    pub context_len: usize,
    /// Window length for the diff.
    pub window: usize,
    /// Maximum edit distance explored in one window.
    pub max_d: usize,
}

impl Default for LcsConfig {
    fn default() -> Self {
        LcsConfig { context_len: 2, window: 1024, max_d: 128 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Match,
    SkipA,
    SkipB,
}

// The endmarker never takes part in the subsequence.
#[inline]
fn same(a: u32, b: u32) -> bool {
    a == b && a != 0
}

/// Edit script of a shortest path, or of the furthest-reaching path with
/// `max_d` edits when the end is out of reach. The flag tells which.
fn myers(a: &[u32], b: &[u32], max_d: usize) -> (Vec<Step>, bool) {
    let (n, m) = (a.len() as i64, b.len() as i64);
    let off = max_d as i64 + 1;
    let mut v = vec![0i64; 2 * max_d + 3];
    let mut trace: Vec<Vec<i64>> = Vec::new();
    let mut end: Option<(i64, i64, usize)> = None;
    'rounds: for d in 0..=max_d as i64 {
        for k in (-d..=d).step_by(2) {
            let idx = (k + off) as usize;
            let mut x = if k == -d || (k != d && v[idx - 1] < v[idx + 1]) { v[idx + 1] } else { v[idx - 1] + 1 };
            let mut y = x - k;
            while x < n && y < m && x >= 0 && y >= 0 && same(a[x as usize], b[y as usize]) {
                x += 1;
                y += 1;
            }
            v[idx] = x;
            if x == n && y == m {
                trace.push(v.clone());
                end = Some((x, y, d as usize));
                break 'rounds;
            }
        }
        trace.push(v.clone());
    }
    let reached = end.is_some();
    let (mut x, mut y, d_end) = end.unwrap_or_else(|| {
        // Furthest in-box point after max_d edits.
        let d = max_d as i64;
        let last = &trace[max_d];
        let mut best = (0, 0, i64::MIN);
        for k in (-d..=d).step_by(2) {
            let x = last[(k + off) as usize];
            let y = x - k;
            if x <= n && y <= m && y >= 0 && x + y > best.2 {
                best = (x, y, x + y);
            }
        }
        (best.0, best.1, max_d)
    });
    let mut steps = Vec::new();
    for d in (1..=d_end as i64).rev() {
        let prev = &trace[d as usize - 1];
        let k = x - y;
        let idx = (k + off) as usize;
        let down = k == -d || (k != d && prev[idx - 1] < prev[idx + 1]);
        let prev_k = if down { k + 1 } else { k - 1 };
        let prev_x = prev[(prev_k + off) as usize];
        let prev_y = prev_x - prev_k;
        let start_x = if down { prev_x } else { prev_x + 1 };
        for _ in start_x..x {
            steps.push(Step::Match);
        }
        steps.push(if down { Step::SkipB } else { Step::SkipA });
        x = prev_x;
        y = prev_y;
    }
    for _ in 0..x {
        steps.push(Step::Match);
    }
    debug_assert_eq!(x, y);
    steps.reverse();
    (steps, reached)
}

/// Common subsequence of `a` and `b` as pairs of positions.
pub fn windowed_lcs(a: &[u32], b: &[u32], config: &LcsConfig, out: &mut Vec<(usize, usize)>) {
    assert!(config.max_d >= 1 && config.window >= 1, "window and max_d must be positive");
    let (mut pa, mut pb) = (0, 0);
    while pa < a.len() && pb < b.len() {
        let wa = config.window.min(a.len() - pa);
        let wb = config.window.min(b.len() - pb);
        let last_window = pa + wa == a.len() && pb + wb == b.len();
        let (steps, reached) = myers(&a[pa..pa + wa], &b[pb..pb + wb], config.max_d);
        let total: usize = steps.iter().map(|s| if *s == Step::Match { 2 } else { 1 }).sum();
        // Keep only the first half of a window; its tail is revisited next time.
        let cut = if reached && last_window { total } else { (total / 2).max(1) };
        let (mut x, mut y, mut progress) = (0, 0, 0);
        for step in steps {
            if progress >= cut {
                break;
            }
            match step {
                Step::Match => {
                    out.push((pa + x, pb + y));
                    x += 1;
                    y += 1;
                    progress += 2;
                }
                Step::SkipA => {
                    x += 1;
                    progress += 1;
                }
                Step::SkipB => {
                    y += 1;
                    progress += 1;
                }
            }
        }
        pa += x;
        pb += y;
    }
}

/// Maximal runs of suffix ranks sharing their first `k` symbols.
fn context_blocks(ss: &SuffixStructures, k: usize) -> Vec<Range<usize>> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=ss.len() {
        if i == ss.len() || ss.lcp[i] < k {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks
}

fn context<'a>(text: &'a [u32], ss: &SuffixStructures, block: &Range<usize>, k: usize) -> &'a [u32] {
    let pos = ss.sa[block.start];
    &text[pos..(pos + k).min(text.len())]
}

fn effective_context(r_text: &[u32], s_text: &[u32], config: &LcsConfig) -> usize {
    let mut seen: Vec<u32> = s_text.to_vec();
    seen.sort_unstable();
    seen.dedup();
    let sigma = seen.len().max(2) as f64;
    let n = r_text.len().min(s_text.len()) as f64;
    let mut k = config.context_len;
    while k > 0 && n < config.window as f64 * sigma.powi(k as i32) {
        k -= 1;
    }
    k
}

/// Approximate LCS of `BWT_R` and `BWT_S`, given both texts and their suffix
/// structures.
pub fn approx_lcs(
    r_text: &[u32],
    r: &SuffixStructures,
    s_text: &[u32],
    s: &SuffixStructures,
    config: &LcsConfig,
) -> Alignment {
    let k = effective_context(r_text, s_text, config);
    let r_blocks = context_blocks(r, k);
    let s_blocks = context_blocks(s, k);
    let mut pairs = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < r_blocks.len() && j < s_blocks.len() {
        let (rb, sb) = (&r_blocks[i], &s_blocks[j]);
        match context(r_text, r, rb, k).cmp(context(s_text, s, sb, k)) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let before = pairs.len();
                windowed_lcs(&r.bwt[rb.clone()], &s.bwt[sb.clone()], config, &mut pairs);
                for pair in &mut pairs[before..] {
                    pair.0 += rb.start;
                    pair.1 += sb.start;
                }
                i += 1;
                j += 1;
            }
        }
    }
    Alignment::from_pairs(r.len(), s.len(), &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exact_lcs(a: &[u32], b: &[u32]) -> usize {
        let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                dp[i + 1][j + 1] = if same(a[i], b[j]) { dp[i][j] + 1 } else { dp[i][j + 1].max(dp[i + 1][j]) };
            }
        }
        dp[a.len()][b.len()]
    }

    fn check_common(a: &[u32], b: &[u32], pairs: &[(usize, usize)]) {
        for w in pairs.windows(2) {
            assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
        }
        for &(x, y) in pairs {
            assert!(same(a[x], b[y]));
        }
    }

    #[test]
    fn myers_is_exact_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let a: Vec<u32> = (0..rng.gen_range(0..60)).map(|_| rng.gen_range(1..4)).collect();
            let b: Vec<u32> = (0..rng.gen_range(0..60)).map(|_| rng.gen_range(1..4)).collect();
            let config = LcsConfig { context_len: 2, window: 1000, max_d: 200 };
            let mut pairs = Vec::new();
            windowed_lcs(&a, &b, &config, &mut pairs);
            check_common(&a, &b, &pairs);
            assert_eq!(pairs.len(), exact_lcs(&a, &b));
        }
    }

    #[test]
    fn windows_stay_common_and_close_to_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let a: Vec<u32> = (0..600).map(|_| rng.gen_range(1..5)).collect();
            let mut b = a.clone();
            for _ in 0..30 {
                let p = rng.gen_range(0..b.len());
                if rng.gen_bool(0.5) {
                    b[p] = rng.gen_range(1..5);
                } else {
                    b.remove(p);
                }
            }
            let config = LcsConfig { context_len: 2, window: 64, max_d: 8 };
            let mut pairs = Vec::new();
            windowed_lcs(&a, &b, &config, &mut pairs);
            check_common(&a, &b, &pairs);
            assert!(pairs.len() as f64 >= 0.9 * exact_lcs(&a, &b) as f64);
        }
    }

    #[test]
    fn endmarker_never_matches() {
        let mut pairs = Vec::new();
        windowed_lcs(&[1, 0, 2], &[1, 0, 2], &LcsConfig::default(), &mut pairs);
        assert_eq!(pairs, [(0, 0), (2, 2)]);
    }

    fn bwt_alignment(r: &[u8], s: &[u8]) -> (Vec<u32>, Vec<u32>, Alignment) {
        let r: Vec<u32> = r.iter().map(|&b| b as u32).collect();
        let s: Vec<u32> = s.iter().map(|&b| b as u32).collect();
        let (rs, ss) = (SuffixStructures::new(&r), SuffixStructures::new(&s));
        let align = approx_lcs(&r, &rs, &s, &ss, &LcsConfig::default());
        (rs.bwt, ss.bwt, align)
    }

    #[test]
    fn gattaca_pair() {
        let (a, b, align) = bwt_alignment(b"GATTACA\0", b"GATTAGA\0");
        let pairs: Vec<(usize, usize)> = align.pairs().collect();
        check_common(&a, &b, &pairs);
        let exact = exact_lcs(&a, &b);
        assert!(pairs.len() <= exact);
        assert!(pairs.len() as f64 >= 0.7 * exact as f64);
    }

    #[test]
    fn identical_and_disjoint() {
        let (a, _, align) = bwt_alignment(b"ACGTTGCA\0", b"ACGTTGCA\0");
        // Everything except the endmarker.
        assert_eq!(align.len(), a.len() - 1);
        let (_, _, align) = bwt_alignment(b"AAAA\0", b"CCCC\0");
        assert_eq!(align.len(), 0);
    }
}
