//! Synthetic references and mutated targets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

/// Point mutations at rate `rate`: 90% substitutions, 5% insertions and 5%
/// deletions, with indel lengths `P(k) = 0.2 * 0.8^(k-1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutationModel {
    pub rate: f64,
    pub seed: u64,
}

pub const SUBSTITUTION_SHARE: f64 = 0.9;
pub const INSERTION_SHARE: f64 = 0.05;
/// Success probability of the geometric indel length law.
pub const INDEL_LENGTH_P: f64 = 0.2;

const BASES: &[u8; 4] = b"ACGT";

/// Counts of applied mutations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutationStats {
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
    /// `indel_lengths[k - 1]` indels of length `k`.
    pub indel_lengths: Vec<usize>,
}

impl MutationStats {
    pub fn total(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }

    fn record_indel(&mut self, len: usize) {
        if self.indel_lengths.len() < len {
            self.indel_lengths.resize(len, 0);
        }
        self.indel_lengths[len - 1] += 1;
    }
}

impl MutationModel {
    pub fn new(rate: f64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&rate), "mutation rate outside [0, 1]");
        MutationModel { rate, seed }
    }

    /// Mutates `body` (without endmarker). Every reference position starts a
    /// mutation with probability `rate`; a deletion consumes its length.
    pub fn mutate(&self, body: &[u8]) -> (Vec<u8>, MutationStats) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let lengths = Geometric::new(INDEL_LENGTH_P).expect("valid probability");
        let mut out = Vec::with_capacity(body.len() + body.len() / 16);
        let mut stats = MutationStats::default();
        let mut i = 0;
        while i < body.len() {
            if self.rate == 0.0 || !rng.gen_bool(self.rate) {
                out.push(body[i]);
                i += 1;
                continue;
            }
            let class: f64 = rng.gen();
            if class < SUBSTITUTION_SHARE {
                let old = body[i];
                let choices: Vec<u8> = BASES.iter().copied().filter(|&b| b != old).collect();
                out.push(choices[rng.gen_range(0..choices.len())]);
                stats.substitutions += 1;
                i += 1;
            } else {
                let len = lengths.sample(&mut rng) as usize + 1;
                stats.record_indel(len);
                if class < SUBSTITUTION_SHARE + INSERTION_SHARE {
                    out.extend((0..len).map(|_| BASES[rng.gen_range(0..4)]));
                    out.push(body[i]);
                    stats.insertions += 1;
                    i += 1;
                } else {
                    stats.deletions += 1;
                    i += len;
                }
            }
        }
        (out, stats)
    }
}

/// A DNA reference with genome-like repeats: random sequence in which a
/// share of blocks copy an earlier block with a few changes, and short N runs.
pub fn genome_like(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let block = rng.gen_range(200..2000).min(len - out.len());
        let roll: f64 = rng.gen();
        if roll < 0.25 && out.len() > block {
            let start = rng.gen_range(0..out.len() - block);
            for k in 0..block {
                let b = out[start + k];
                out.push(if rng.gen_bool(0.02) { BASES[rng.gen_range(0..4)] } else { b });
            }
        } else if roll < 0.27 {
            out.extend(std::iter::repeat(b'N').take(block.min(100)));
        } else {
            out.extend((0..block).map(|_| BASES[rng.gen_range(0..4)]));
        }
    }
    out
}

/// Query range `[sp, ep]` over `n` positions with length `16^k`, `k` drawn
/// with probability `0.5^(k+1)`, capped at `n`.
pub fn rmq_range<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    assert!(n > 0, "empty array");
    let mut len = 1;
    while len < n && rng.gen_bool(0.5) {
        len *= 16;
    }
    let len = len.min(n);
    let sp = rng.gen_range(0..=n - len);
    (sp, sp + len - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_is_identity() {
        let reference = genome_like(10_000, 1);
        let (target, stats) = MutationModel::new(0.0, 3).mutate(&reference);
        assert_eq!(target, reference);
        assert_eq!(stats.total(), 0);
    }

    #[test]
    fn deterministic() {
        let reference = genome_like(50_000, 2);
        assert_eq!(reference, genome_like(50_000, 2));
        let model = MutationModel::new(0.01, 9);
        assert_eq!(model.mutate(&reference), model.mutate(&reference));
        assert_ne!(model.mutate(&reference).0, MutationModel::new(0.01, 10).mutate(&reference).0);
    }

    #[test]
    fn mutation_count_is_binomial() {
        let n = 1_000_000;
        let p = 0.01;
        let reference = genome_like(n, 4);
        let (_, stats) = MutationModel::new(p, 5).mutate(&reference);
        // Deletions skip positions, so the number of trials is slightly below n.
        let deleted: usize = stats.indel_lengths.iter().enumerate().map(|(k, &c)| (k + 1) * c).sum::<usize>();
        let trials = (n - deleted) as f64;
        let sigma = (trials * p * (1.0 - p)).sqrt();
        let mean = trials * p;
        assert!((stats.total() as f64 - mean).abs() < 5.0 * sigma, "{} vs {mean}", stats.total());
        let subs = stats.substitutions as f64 / stats.total() as f64;
        assert!((subs - 0.9).abs() < 0.02, "substitution share {subs}");
    }

    #[test]
    fn indel_lengths_are_geometric() {
        let reference = genome_like(2_000_000, 6);
        let (_, stats) = MutationModel::new(0.05, 7).mutate(&reference);
        let total: usize = stats.indel_lengths.iter().sum();
        // Chi-squared over lengths 1..=10 and a tail bin, 10 degrees of freedom.
        let mut chi2 = 0.0;
        let mut tail_observed = total;
        for k in 1..=10 {
            let observed = stats.indel_lengths.get(k - 1).copied().unwrap_or(0);
            tail_observed -= observed;
            let expected = total as f64 * 0.2 * 0.8f64.powi(k as i32 - 1);
            chi2 += (observed as f64 - expected).powi(2) / expected;
        }
        let tail_expected = total as f64 * 0.8f64.powi(10);
        chi2 += (tail_observed as f64 - tail_expected).powi(2) / tail_expected;
        // 99.9% quantile of chi-squared with 10 degrees of freedom.
        assert!(chi2 < 29.59, "chi2 = {chi2}");
    }

    #[test]
    fn rmq_range_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 1 << 20;
        let trials = 100_000;
        let mut counts = [0usize; 6];
        for _ in 0..trials {
            let (sp, ep) = rmq_range(&mut rng, n);
            assert!(ep < n);
            let len = ep - sp + 1;
            assert!(len.is_power_of_two() && len.trailing_zeros() % 4 == 0);
            counts[(len.trailing_zeros() / 4) as usize] += 1;
        }
        for (k, &c) in counts.iter().enumerate().take(4) {
            let p = 0.5f64.powi(k as i32 + 1);
            let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
            assert!((c as f64 - trials as f64 * p).abs() < 5.0 * sigma, "k = {k}: {c}");
        }
        // Lengths capped at n: 16^5 = n, which absorbs the whole tail.
        let tail = trials as f64 * 0.5f64.powi(5);
        assert!((counts[5] as f64 - tail).abs() < 5.0 * tail.sqrt());
    }

    #[test]
    fn genome_like_alphabet() {
        let reference = genome_like(100_000, 8);
        assert_eq!(reference.len(), 100_000);
        assert!(reference.iter().all(|b| b"ACGTN".contains(b)));
    }
}
