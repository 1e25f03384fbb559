//! Wilcoxon signed-rank test for matched samples.

use crate::error::{Error, Result};
use crate::stats::rank::midranks;
use crate::stats::{
    std_normal_cdf, std_normal_sf, two_sided_from_tails, Alternative, Mode, TestMethod, TestResult,
};

/// Largest n for which the exact null distribution of W+ is used (tie-free
/// inputs only).
pub const WILCOXON_EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WilcoxonOptions {
    pub continuity_correction: bool,
    /// Overrides the automatic exact/approximate choice. Forcing Exact on
    /// tied or oversized inputs is rejected.
    pub force_mode: Option<Mode>,
}

impl Default for WilcoxonOptions {
    fn default() -> Self {
        WilcoxonOptions {
            continuity_correction: true,
            force_mode: None,
        }
    }
}

/// Signed-rank test on paired samples. Differences `a - b` are ranked by
/// magnitude after dropping zeros (classic policy, zeros reported in
/// `zero_count`). `Alternative::Less` asks whether `a` runs below `b`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alternative: Alternative) -> Result<TestResult> {
    wilcoxon_signed_rank_opts(a, b, alternative, WilcoxonOptions::default())
}

pub fn wilcoxon_signed_rank_opts(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    options: WilcoxonOptions,
) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput("no pairs supplied".into()));
    }

    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let zero_count = a.len() - diffs.len();
    if diffs.is_empty() {
        return Err(Error::AllZeroDifferences);
    }

    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = midranks(&abs);

    let mut w_plus = 0.0;
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > 0.0 {
            w_plus += r;
        }
    }
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let mut result = TestResult::new(TestMethod::WilcoxonSignedRank, alternative);
    result.n_a = a.len();
    result.n_b = Some(b.len());
    result.zero_count = zero_count;
    result.tie_count = ties.tied_values;
    result.statistic = w_plus.min(w_minus);
    result.diagnostics.insert("w_plus".into(), w_plus);
    result.diagnostics.insert("w_minus".into(), w_minus);
    result.diagnostics.insert("n_used".into(), n as f64);

    let exact_ok = n <= WILCOXON_EXACT_LIMIT && !ties.has_ties();
    let use_exact = match options.force_mode {
        Some(Mode::Exact) => {
            if !exact_ok {
                return Err(Error::InvalidConfig(
                    "exact mode requires tie-free differences and n <= 25".into(),
                ));
            }
            true
        }
        Some(Mode::NormalApprox) => false,
        Some(Mode::MonteCarlo) => {
            return Err(Error::InvalidConfig(
                "Monte Carlo mode lives in the permutation oracle".into(),
            ))
        }
        None => exact_ok,
    };

    if use_exact {
        // Tie-free ranks are exactly 1..n, so W+ is integer-valued.
        let w = w_plus.round() as u64;
        let dist = signed_rank_distribution(n);
        let denom = (1u64 << n) as f64;
        let p_less: f64 = dist[..=(w as usize)].iter().sum::<u64>() as f64 / denom;
        let p_greater: f64 = dist[w as usize..].iter().sum::<u64>() as f64 / denom;
        result.mode = Mode::Exact;
        result.p_value = match alternative {
            Alternative::Less => p_less,
            Alternative::Greater => p_greater,
            Alternative::TwoSided => two_sided_from_tails(p_less, p_greater),
        };
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties.correction / 48.0;
        let sd = variance.sqrt();
        let cc = if options.continuity_correction { 0.5 } else { 0.0 };
        result.mode = Mode::NormalApprox;
        result.p_value = match alternative {
            Alternative::Greater => std_normal_sf((w_plus - mean - cc) / sd),
            Alternative::Less => std_normal_cdf((w_plus - mean + cc) / sd),
            Alternative::TwoSided => {
                let z = ((w_plus - mean).abs() - cc).max(0.0) / sd;
                (2.0 * std_normal_sf(z)).min(1.0)
            }
        };
        let centered = w_plus - mean;
        let z = if centered.abs() <= cc {
            0.0
        } else {
            (centered - cc * centered.signum()) / sd
        };
        result.z_value = Some(z);
    }

    Ok(result)
}

/// Counts of sign assignments reaching each value of W+ for tie-free ranks
/// 1..n. Index w holds the number of subsets of {1..n} summing to w.
pub(crate) fn signed_rank_distribution(n: usize) -> Vec<u64> {
    let total = n * (n + 1) / 2;
    let mut dist = vec![0u64; total + 1];
    dist[0] = 1;
    for rank in 1..=n {
        for w in (rank..=total).rev() {
            dist[w] += dist[w - rank];
        }
    }
    dist
}
