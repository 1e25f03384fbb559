//! Cross-cutting statistical properties checked against independent oracles.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ingroup_outgroup::stats::{
    ks_normality, ks_statistic, mann_whitney_u, wilcoxon_signed_rank, Alternative,
};

/// Test-side D recomputation for the Monte Carlo null.
fn fitted_ks(samples: &[f64]) -> f64 {
    ks_statistic(samples).expect("non-degenerate").0
}

#[test]
fn uniform_quantiles_reject_normality_under_monte_carlo_null() {
    // 500 equally spaced uniform quantiles form a sample that no fitted
    // normal can track; the observed D must sit beyond the far tail of the
    // Monte Carlo null distribution (normal data, parameters re-estimated
    // per draw).
    let n = 500;
    let observed: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    let d_observed = fitted_ks(&observed);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let sims = 1500;
    let mut hits = 0;
    for _ in 0..sims {
        // Box-Muller pairs; the null is location-scale invariant so the
        // standard normal suffices.
        let mut draw = Vec::with_capacity(n);
        while draw.len() < n {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * u2;
            draw.push(r * theta.cos());
            if draw.len() < n {
                draw.push(r * theta.sin());
            }
        }
        if fitted_ks(&draw) >= d_observed {
            hits += 1;
        }
    }
    let p_monte_carlo = hits as f64 / sims as f64;
    assert!(
        p_monte_carlo < 0.001,
        "MC p = {p_monte_carlo} (D = {d_observed})"
    );

    // The asymptotic p-value (biased under estimated parameters) must at
    // least flag the same D and stay in range.
    let result = ks_normality(&observed).unwrap();
    assert_eq!(result.statistic, d_observed);
    assert!(result.p_value >= 0.0 && result.p_value <= 1.0);
}

proptest! {
    /// D stays in (0, 1] for non-degenerate samples of n >= 4.
    #[test]
    fn ks_statistic_is_bounded(mut samples in prop::collection::vec(-1e3..1e3f64, 4..60)) {
        samples[0] += 0.125; // guarantee dispersion
        let (d, _, _) = ks_statistic(&samples).unwrap();
        prop_assert!(d > 0.0 && d <= 1.0);
    }

    /// Shifting one group upward can only move its U statistic upward.
    #[test]
    fn mann_whitney_shift_is_monotone(
        a in prop::collection::vec(-50.0..50.0f64, 3..15),
        b in prop::collection::vec(-50.0..50.0f64, 3..15),
        shift in 0.001..40.0f64,
    ) {
        let shifted: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let before = mann_whitney_u(&a, &b, Alternative::TwoSided).unwrap();
        let after = mann_whitney_u(&shifted, &b, Alternative::TwoSided).unwrap();
        prop_assert!(after.diagnostics["u_a"] >= before.diagnostics["u_a"]);
    }

    /// A positive affine map preserves difference ranks and signs, so the
    /// signed-rank statistic and p-value are unchanged bit for bit.
    #[test]
    fn wilcoxon_affine_invariance(
        pairs in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 2..20),
        scale in 0.5..3.0f64,
        offset in -10.0..10.0f64,
    ) {
        let a: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
        let b: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
        prop_assume!(a.iter().zip(&b).any(|(x, y)| x != y));
        let ta: Vec<f64> = a.iter().map(|x| scale * x + offset).collect();
        let tb: Vec<f64> = b.iter().map(|y| scale * y + offset).collect();
        let before = wilcoxon_signed_rank(&a, &b, Alternative::Less).unwrap();
        let after = wilcoxon_signed_rank(&ta, &tb, Alternative::Less).unwrap();
        // rank pattern may only differ if scaling introduced/removed ties
        prop_assume!(before.tie_count == after.tie_count && before.zero_count == after.zero_count);
        prop_assert_eq!(
            before.diagnostics["w_plus"].to_bits(),
            after.diagnostics["w_plus"].to_bits()
        );
        prop_assert_eq!(before.p_value.to_bits(), after.p_value.to_bits());
    }

    /// Swapping the groups mirrors U and leaves the two-sided p unchanged.
    #[test]
    fn mann_whitney_label_symmetry(
        a in prop::collection::vec(-50.0..50.0f64, 2..12),
        b in prop::collection::vec(-50.0..50.0f64, 2..12),
    ) {
        let ab = mann_whitney_u(&a, &b, Alternative::TwoSided).unwrap();
        let ba = mann_whitney_u(&b, &a, Alternative::TwoSided).unwrap();
        prop_assert_eq!(ab.p_value.to_bits(), ba.p_value.to_bits());
        prop_assert_eq!(ab.diagnostics["u_a"], ba.diagnostics["u_b"]);
    }
}
