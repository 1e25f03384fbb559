//! One-sample Kolmogorov-Smirnov check against a normal distribution fitted
//! to the sample.

use crate::error::{Error, Result};
use crate::stats::{std_normal_cdf, Alternative, Mode, TestMethod, TestResult};

const KS_CAVEAT: &str = "normal parameters estimated from the sample; the asymptotic \
Kolmogorov p-value is biased (Lilliefors caveat) and is reported as a diagnostic only";

/// D = sup |F_empirical - Phi((x - mean)/sd)| with mean and sd (ddof = 1)
/// estimated from the sample. Returns (D, mean, sd).
pub fn ks_statistic(samples: &[f64]) -> Result<(f64, f64, f64)> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptyInput("no samples".into()));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let sd = if n > 1 {
        (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    if sd <= 0.0 {
        return Err(Error::DegenerateSample(
            "sample standard deviation is zero".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = std_normal_cdf((x - mean) / sd);
        let below = f - i as f64 / nf;
        let above = (i + 1) as f64 / nf - f;
        d = d.max(below).max(above);
    }
    Ok((d, mean, sd))
}

/// Survival function of the Kolmogorov distribution,
/// `P(sup |B(t)| > lambda)` for a Brownian bridge B.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // The theta-function form converges fast for small lambda.
        let factor = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let mut cdf = 0.0;
        for k in 0..20 {
            let odd = (2 * k + 1) as f64;
            let term =
                (-odd * odd * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
            cdf += term;
            if term < 1e-18 {
                break;
            }
        }
        (1.0 - factor * cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        let mut sign = 1.0;
        for k in 1..100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sf += sign * term;
            sign = -sign;
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

/// Normality diagnostic. Needs at least 4 points and positive dispersion;
/// the p-value uses the asymptotic Kolmogorov distribution and carries a
/// bias caveat because the normal parameters come from the same sample.
pub fn ks_normality(samples: &[f64]) -> Result<TestResult> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::TooFewSamples { needed: 4, got: n });
    }
    let (d, mean, sd) = ks_statistic(samples)?;
    let lambda = (n as f64).sqrt() * d;

    let mut result = TestResult::new(TestMethod::KsNormality, Alternative::TwoSided);
    result.statistic = d;
    result.p_value = kolmogorov_sf(lambda);
    result.n_a = n;
    result.mode = Mode::NormalApprox;
    result.diagnostics.insert("fitted_mean".into(), mean);
    result.diagnostics.insert("fitted_sd".into(), sd);
    result.diagnostics.insert("lambda".into(), lambda);
    result.note = Some(KS_CAVEAT.to_string());
    Ok(result)
}
