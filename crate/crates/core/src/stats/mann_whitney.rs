//! Mann-Whitney U test for two independent samples.

use crate::error::{Error, Result};
use crate::stats::rank::midranks;
use crate::stats::{
    std_normal_cdf, std_normal_sf, two_sided_from_tails, Alternative, Mode, TestMethod, TestResult,
};

/// Largest pooled size for which the exact null distribution of U is used
/// (tie-free inputs only).
pub const MANN_WHITNEY_EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MannWhitneyOptions {
    pub continuity_correction: bool,
    pub force_mode: Option<Mode>,
}

impl Default for MannWhitneyOptions {
    fn default() -> Self {
        MannWhitneyOptions {
            continuity_correction: true,
            force_mode: None,
        }
    }
}

/// Rank-sum test on two independent samples. The reported statistic is
/// min(U_a, U_b); both U values and both rank sums are in `diagnostics`.
/// `Alternative::Less` asks whether `a` runs below `b`.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<TestResult> {
    mann_whitney_u_opts(a, b, alternative, MannWhitneyOptions::default())
}

pub fn mann_whitney_u_opts(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    options: MannWhitneyOptions,
) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("both groups must be non-empty".into()));
    }
    let n_a = a.len();
    let n_b = b.len();
    let n = n_a + n_b;

    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let rank_sum_a: f64 = ranks[..n_a].iter().sum();
    let rank_sum_b: f64 = ranks[n_a..].iter().sum();
    let u_a = rank_sum_a - (n_a * (n_a + 1)) as f64 / 2.0;
    let u_b = (n_a * n_b) as f64 - u_a;

    let mut result = TestResult::new(TestMethod::MannWhitneyU, alternative);
    result.n_a = n_a;
    result.n_b = Some(n_b);
    result.tie_count = ties.tied_values;
    result.statistic = u_a.min(u_b);
    result.diagnostics.insert("u_a".into(), u_a);
    result.diagnostics.insert("u_b".into(), u_b);
    result.diagnostics.insert("rank_sum_a".into(), rank_sum_a);
    result.diagnostics.insert("rank_sum_b".into(), rank_sum_b);

    let exact_ok = n <= MANN_WHITNEY_EXACT_LIMIT && !ties.has_ties();
    let use_exact = match options.force_mode {
        Some(Mode::Exact) => {
            if !exact_ok {
                return Err(Error::InvalidConfig(
                    "exact mode requires tie-free pooled values and n_a + n_b <= 20".into(),
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
        let dist = u_distribution(n_a, n_b);
        let denom: f64 = dist.iter().sum::<u64>() as f64;
        let u = u_a.round() as usize;
        let p_less: f64 = dist[..=u].iter().sum::<u64>() as f64 / denom;
        let p_greater: f64 = dist[u..].iter().sum::<u64>() as f64 / denom;
        result.mode = Mode::Exact;
        result.p_value = match alternative {
            Alternative::Less => p_less,
            Alternative::Greater => p_greater,
            Alternative::TwoSided => two_sided_from_tails(p_less, p_greater),
        };
    } else {
        let (na, nb, nf) = (n_a as f64, n_b as f64, n as f64);
        let mean = na * nb / 2.0;
        let tie_term = if n > 1 { ties.correction / (nf * (nf - 1.0)) } else { 0.0 };
        let variance = na * nb / 12.0 * ((nf + 1.0) - tie_term);
        result.mode = Mode::NormalApprox;
        if variance <= 0.0 {
            // Every pooled value identical: no rank evidence either way.
            result.z_value = Some(0.0);
            result.p_value = 1.0;
            result.note = Some("degenerate pooled sample: all values tied".into());
            return Ok(result);
        }
        let sd = variance.sqrt();
        let cc = if options.continuity_correction { 0.5 } else { 0.0 };
        result.p_value = match alternative {
            Alternative::Greater => std_normal_sf((u_a - mean - cc) / sd),
            Alternative::Less => std_normal_cdf((u_a - mean + cc) / sd),
            Alternative::TwoSided => {
                let z = ((u_a - mean).abs() - cc).max(0.0) / sd;
                (2.0 * std_normal_sf(z)).min(1.0)
            }
        };
        let centered = u_a - mean;
        let z = if centered.abs() <= cc {
            0.0
        } else {
            (centered - cc * centered.signum()) / sd
        };
        result.z_value = Some(z);
    }

    Ok(result)
}

/// Null distribution of U_a for tie-free ranks: index u holds the number of
/// n_a-subsets of {1..n} whose rank sum equals u + n_a(n_a+1)/2.
pub(crate) fn u_distribution(n_a: usize, n_b: usize) -> Vec<u64> {
    let n = n_a + n_b;
    let max_u = n_a * n_b;
    // ways[k][s] = subsets of size k with rank sum s
    let max_sum = n_a * (2 * n - n_a + 1) / 2;
    let mut ways = vec![vec![0u64; max_sum + 1]; n_a + 1];
    ways[0][0] = 1;
    for rank in 1..=n {
        for k in (1..=n_a.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                ways[k][s] += ways[k - 1][s - rank];
            }
        }
    }
    let offset = n_a * (n_a + 1) / 2;
    (0..=max_u).map(|u| ways[n_a][u + offset]).collect()
}
