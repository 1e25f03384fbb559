//! Permutation oracle for the rank tests.
//!
//! Independent of the analytic implementations: it literally enumerates
//! group assignments (or sign patterns) when the permutation space is at
//! most 10^6, and falls back to seeded, batch-deterministic Monte Carlo
//! sampling otherwise. Exact-mode p-values of the rank tests must agree
//! with full enumeration here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stats::rank::midranks;
use crate::stats::{two_sided_from_tails, Alternative};

const ENUMERATION_LIMIT: u128 = 1_000_000;
const BATCH: usize = 1024;

#[derive(Debug, Clone)]
pub enum PermutationSpec<'a> {
    MannWhitney {
        group_a: &'a [f64],
        group_b: &'a [f64],
        alternative: Alternative,
    },
    WilcoxonSignedRank {
        a: &'a [f64],
        b: &'a [f64],
        alternative: Alternative,
    },
}

/// Permutation p-value: full enumeration when the space fits in 10^6
/// arrangements, else `iterations` Monte Carlo draws. Deterministic for a
/// fixed seed, independent of how batches might be scheduled.
pub fn exact_permutation_pvalue(
    spec: &PermutationSpec,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    match spec {
        PermutationSpec::MannWhitney {
            group_a,
            group_b,
            alternative,
        } => mann_whitney_pvalue(group_a, group_b, *alternative, iterations, seed),
        PermutationSpec::WilcoxonSignedRank { a, b, alternative } => {
            wilcoxon_pvalue(a, b, *alternative, iterations, seed)
        }
    }
}

fn combine(p_less: f64, p_greater: f64, alternative: Alternative) -> f64 {
    match alternative {
        Alternative::Less => p_less,
        Alternative::Greater => p_greater,
        Alternative::TwoSided => two_sided_from_tails(p_less, p_greater),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if result > ENUMERATION_LIMIT * 1000 {
            return u128::MAX;
        }
    }
    result
}

fn mann_whitney_pvalue(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("both groups must be non-empty".into()));
    }
    let n_a = a.len();
    let n = n_a + b.len();
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, _) = midranks(&pooled);
    // Mid-ranks are integer multiples of 1/2, so these sums are exact and
    // tail counting needs no tolerance.
    let u_observed = ranks[..n_a].iter().sum::<f64>() - (n_a * (n_a + 1)) as f64 / 2.0;
    let offset = (n_a * (n_a + 1)) as f64 / 2.0;

    if binomial(n, n_a) <= ENUMERATION_LIMIT {
        let mut le: u64 = 0;
        let mut ge: u64 = 0;
        let mut total: u64 = 0;
        let mut indices: Vec<usize> = (0..n_a).collect();
        loop {
            let u = indices.iter().map(|&i| ranks[i]).sum::<f64>() - offset;
            if u <= u_observed {
                le += 1;
            }
            if u >= u_observed {
                ge += 1;
            }
            total += 1;
            if !next_combination(&mut indices, n) {
                break;
            }
        }
        let denom = total as f64;
        return Ok(combine(le as f64 / denom, ge as f64 / denom, alternative));
    }

    if iterations == 0 {
        return Err(Error::InvalidConfig(
            "permutation space too large for enumeration; iterations must be >= 1".into(),
        ));
    }
    let mut le: u64 = 0;
    let mut ge: u64 = 0;
    let mut scratch: Vec<usize> = (0..n).collect();
    for_each_batch(iterations, seed, |rng, draws| {
        for _ in 0..draws {
            // partial Fisher-Yates: first n_a entries form the resampled group
            for i in 0..n_a {
                let j = rng.gen_range(i..n);
                scratch.swap(i, j);
            }
            let u = scratch[..n_a].iter().map(|&i| ranks[i]).sum::<f64>() - offset;
            if u <= u_observed {
                le += 1;
            }
            if u >= u_observed {
                ge += 1;
            }
            // restore ordering for determinism of the next draw
            scratch.sort_unstable();
        }
    });
    let denom = iterations as f64;
    Ok(combine(le as f64 / denom, ge as f64 / denom, alternative))
}

fn wilcoxon_pvalue(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::AllZeroDifferences);
    }
    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, _) = midranks(&abs);
    let w_observed: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    if n <= 63 && (1u128 << n) <= ENUMERATION_LIMIT {
        let mut le: u64 = 0;
        let mut ge: u64 = 0;
        let total = 1u64 << n;
        for mask in 0..total {
            let mut w = 0.0;
            for (i, r) in ranks.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    w += r;
                }
            }
            if w <= w_observed {
                le += 1;
            }
            if w >= w_observed {
                ge += 1;
            }
        }
        let denom = total as f64;
        return Ok(combine(le as f64 / denom, ge as f64 / denom, alternative));
    }

    if iterations == 0 {
        return Err(Error::InvalidConfig(
            "permutation space too large for enumeration; iterations must be >= 1".into(),
        ));
    }
    let mut le: u64 = 0;
    let mut ge: u64 = 0;
    for_each_batch(iterations, seed, |rng, draws| {
        for _ in 0..draws {
            let mut w = 0.0;
            for r in &ranks {
                if rng.gen::<bool>() {
                    w += r;
                }
            }
            if w <= w_observed {
                le += 1;
            }
            if w >= w_observed {
                ge += 1;
            }
        }
    });
    let denom = iterations as f64;
    Ok(combine(le as f64 / denom, ge as f64 / denom, alternative))
}

/// Lexicographic successor of a k-combination of {0..n-1}; false at the end.
fn next_combination(indices: &mut [usize], n: usize) -> bool {
    let k = indices.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if indices[i] < n - k + i {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Runs `body` over counter-seeded batches: batch b always sees the same RNG
/// stream regardless of scheduling, so results depend only on (seed, total).
fn for_each_batch<F: FnMut(&mut ChaCha8Rng, usize)>(total: usize, seed: u64, mut body: F) {
    let mut remaining = total;
    let mut batch_index: u64 = 0;
    while remaining > 0 {
        let draws = remaining.min(BATCH);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch_index + 1);
        body(&mut rng, draws);
        remaining -= draws;
        batch_index += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_named_mann_whitney_example() {
        let spec = PermutationSpec::MannWhitney {
            group_a: &[1.0, 2.0, 3.0],
            group_b: &[4.0, 5.0, 6.0],
            alternative: Alternative::TwoSided,
        };
        let p = exact_permutation_pvalue(&spec, 0, 0).unwrap();
        assert!((p - 0.1).abs() < 1e-15);
    }

    #[test]
    fn matches_named_wilcoxon_example() {
        let spec = PermutationSpec::WilcoxonSignedRank {
            a: &[2.0, 4.0, 6.0, 8.0, 10.0],
            b: &[1.0, 2.0, 3.0, 4.0, 5.0],
            alternative: Alternative::TwoSided,
        };
        let p = exact_permutation_pvalue(&spec, 0, 0).unwrap();
        assert_eq!(p, 0.0625);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let a: Vec<f64> = (0..40).map(|i| f64::from(i) * 1.3).collect();
        let b: Vec<f64> = (0..40).map(|i| f64::from(i) * 1.1 + 0.7).collect();
        let spec = PermutationSpec::MannWhitney {
            group_a: &a,
            group_b: &b,
            alternative: Alternative::TwoSided,
        };
        let p1 = exact_permutation_pvalue(&spec, 20_000, 42).unwrap();
        let p2 = exact_permutation_pvalue(&spec, 20_000, 42).unwrap();
        assert_eq!(p1.to_bits(), p2.to_bits());
    }

    #[test]
    fn monte_carlo_tracks_exact_distribution() {
        // n = 21 pairs: 2^21 sign patterns exceed the enumeration limit, so
        // the oracle samples; the signed-rank test still has the exact DP.
        let a: Vec<f64> = (1..=21).map(|i| f64::from(i) * 1.01).collect();
        let b: Vec<f64> = (1..=21)
            .map(|i| f64::from(i) - 0.37 * f64::from(i % 5) + 0.11)
            .collect();
        let spec = PermutationSpec::WilcoxonSignedRank {
            a: &a,
            b: &b,
            alternative: Alternative::TwoSided,
        };
        let mc = exact_permutation_pvalue(&spec, 200_000, 7).unwrap();
        let exact = crate::stats::wilcoxon_signed_rank(&a, &b, Alternative::TwoSided).unwrap();
        assert_eq!(exact.mode, crate::stats::Mode::Exact);
        let tolerance = 3.0 * (exact.p_value * (1.0 - exact.p_value) / 200_000.0).sqrt() + 1e-3;
        assert!(
            (mc - exact.p_value).abs() < tolerance.max(5e-3),
            "mc = {mc}, exact = {}",
            exact.p_value
        );
    }

    #[test]
    fn next_combination_walks_choose() {
        let mut indices = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut indices, 6) {
            count += 1;
        }
        assert_eq!(count, 20); // C(6,3)
    }
}
