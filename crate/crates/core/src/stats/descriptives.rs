//! Descriptive statistics for the report tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::rank::midranks;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptives {
    pub label: String,
    pub n: usize,
    /// Midpoint-convention median.
    pub median: f64,
    pub mean: f64,
    /// Interquartile range from type-7 (linear interpolation) quantiles.
    pub iqr: f64,
    /// Mean mid-rank of this group within the pooled comparison, when a
    /// pooled context was supplied.
    pub mean_rank: Option<f64>,
}

/// Summary of one sample; `pooled_with` is the other group of the
/// comparison, used to compute the pooled mean rank.
pub fn descriptives(label: &str, samples: &[f64], pooled_with: Option<&[f64]>) -> Result<Descriptives> {
    if samples.is_empty() {
        return Err(Error::EmptyInput(format!("no samples for group '{label}'")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mean_rank = pooled_with.map(|other| {
        let pooled: Vec<f64> = samples.iter().chain(other).copied().collect();
        let (ranks, _) = midranks(&pooled);
        ranks[..samples.len()].iter().sum::<f64>() / samples.len() as f64
    });

    Ok(Descriptives {
        label: label.to_string(),
        n: samples.len(),
        median: median_of_sorted(&sorted),
        mean: samples.iter().sum::<f64>() / samples.len() as f64,
        iqr: quantile_type7(&sorted, 0.75) - quantile_type7(&sorted, 0.25),
        mean_rank,
    })
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}
