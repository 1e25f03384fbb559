//! Nonparametric test battery: one-sample Kolmogorov-Smirnov normality
//! check, Wilcoxon signed-rank for matched samples, Mann-Whitney U for
//! independent samples, a permutation oracle, and descriptive statistics.
//!
//! Small tie-free inputs get exact p-values from the full null distribution;
//! larger or tied inputs fall back to the normal approximation with tie and
//! continuity corrections.

mod descriptives;
mod ks;
mod mann_whitney;
mod permutation;
mod rank;
mod wilcoxon;

pub use descriptives::{descriptives, Descriptives};
pub use ks::{kolmogorov_sf, ks_normality, ks_statistic};
pub use mann_whitney::{mann_whitney_u, mann_whitney_u_opts, MannWhitneyOptions};
pub use permutation::{exact_permutation_pvalue, PermutationSpec};
pub use rank::{midranks, TieSummary};
pub use wilcoxon::{wilcoxon_signed_rank, wilcoxon_signed_rank_opts, WilcoxonOptions};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    TwoSided,
    /// First sample systematically below the second.
    Less,
    /// First sample systematically above the second.
    Greater,
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alternative::TwoSided => write!(f, "two-sided"),
            Alternative::Less => write!(f, "less"),
            Alternative::Greater => write!(f, "greater"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    NormalApprox,
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::NormalApprox => write!(f, "normal-approx"),
            Mode::MonteCarlo => write!(f, "monte-carlo"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestMethod {
    KsNormality,
    WilcoxonSignedRank,
    MannWhitneyU,
}

impl fmt::Display for TestMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestMethod::KsNormality => write!(f, "Kolmogorov-Smirnov normality"),
            TestMethod::WilcoxonSignedRank => write!(f, "Wilcoxon signed-rank"),
            TestMethod::MannWhitneyU => write!(f, "Mann-Whitney U"),
        }
    }
}

/// Flat, serializable outcome of one test run. `diagnostics` carries the
/// auxiliary numbers (both U values, rank sums, W+ / W-) in a deterministic
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: TestMethod,
    /// D for KS, min(W+, W-) for Wilcoxon, min(U_a, U_b) for Mann-Whitney.
    pub statistic: f64,
    /// Standardized statistic, present only in normal-approximation mode of
    /// the rank tests. Its sign follows (statistic - expectation).
    pub z_value: Option<f64>,
    pub p_value: f64,
    pub alternative: Alternative,
    pub n_a: usize,
    pub n_b: Option<usize>,
    /// Values involved in rank ties.
    pub tie_count: usize,
    /// Zero differences discarded before ranking (signed-rank only).
    pub zero_count: usize,
    pub mode: Mode,
    pub diagnostics: BTreeMap<String, f64>,
    pub note: Option<String>,
}

impl TestResult {
    pub(crate) fn new(method: TestMethod, alternative: Alternative) -> Self {
        TestResult {
            method,
            statistic: 0.0,
            z_value: None,
            p_value: 1.0,
            alternative,
            n_a: 0,
            n_b: None,
            tie_count: 0,
            zero_count: 0,
            mode: Mode::Exact,
            diagnostics: BTreeMap::new(),
            note: None,
        }
    }
}

pub(crate) fn std_normal_cdf(x: f64) -> f64 {
    use statrs::distribution::ContinuousCDF;
    use statrs::distribution::Normal;
    // Unit normal construction cannot fail.
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

pub(crate) fn std_normal_sf(x: f64) -> f64 {
    std_normal_cdf(-x)
}

/// Two-sided p as twice the smaller tail, capped at 1.
pub(crate) fn two_sided_from_tails(p_less: f64, p_greater: f64) -> f64 {
    (2.0 * p_less.min(p_greater)).min(1.0)
}
