//! Exact-vs-oracle verification suite behind the `selftest` CLI subcommand.
//!
//! Checks the frozen enumeration examples and then cross-validates the
//! analytic exact p-values of both rank tests against the independent
//! permutation oracle on randomized tie-free inputs.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stats::{
    exact_permutation_pvalue, mann_whitney_u, wilcoxon_signed_rank, Alternative, Mode,
    PermutationSpec,
};

const ORACLE_CASES: usize = 200;
const ORACLE_TOLERANCE: f64 = 1e-12;

pub struct SelfTestReport {
    pub passed: usize,
    pub failed: usize,
}

impl SelfTestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs the suite, printing one line per check. Returns counts.
pub fn run_selftest(out: &mut dyn Write) -> std::io::Result<SelfTestReport> {
    let mut report = SelfTestReport { passed: 0, failed: 0 };
    let mut check = |out: &mut dyn Write, name: &str, ok: bool, detail: String| {
        if ok {
            report.passed += 1;
            writeln!(out, "PASS  {name}")
        } else {
            report.failed += 1;
            writeln!(out, "FAIL  {name}: {detail}")
        }
    };

    // Frozen enumeration examples.
    let a = [2.0, 4.0, 6.0, 8.0, 10.0];
    let b = [1.0, 2.0, 3.0, 4.0, 5.0];
    match wilcoxon_signed_rank(&a, &b, Alternative::TwoSided) {
        Ok(r) => {
            check(
                out,
                "wilcoxon d={1,2,3,4,5}: W+ = 15, exact two-sided p = 0.0625",
                r.mode == Mode::Exact && r.diagnostics["w_plus"] == 15.0 && r.p_value == 0.0625,
                format!("mode={:?} w_plus={} p={}", r.mode, r.diagnostics["w_plus"], r.p_value),
            )?;
        }
        Err(e) => check(out, "wilcoxon d={1,2,3,4,5}", false, e.to_string())?,
    }

    let a6 = [0.0; 6];
    let b6 = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    match wilcoxon_signed_rank(&a6, &b6, Alternative::TwoSided) {
        Ok(r) => check(
            out,
            "wilcoxon d={-1..-6}: exact two-sided p = 0.03125",
            r.p_value == 0.03125,
            format!("p={}", r.p_value),
        )?,
        Err(e) => check(out, "wilcoxon d={-1..-6}", false, e.to_string())?,
    }

    match mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], Alternative::TwoSided) {
        Ok(r) => check(
            out,
            "mann-whitney {1,2,3} vs {4,5,6}: U = 0, exact two-sided p = 0.1",
            r.mode == Mode::Exact
                && r.diagnostics["u_a"] == 0.0
                && r.statistic == 0.0
                && (r.p_value - 0.1).abs() < 1e-15,
            format!("mode={:?} u_a={} p={}", r.mode, r.diagnostics["u_a"], r.p_value),
        )?,
        Err(e) => check(out, "mann-whitney {1,2,3} vs {4,5,6}", false, e.to_string())?,
    }

    // Randomized exact-vs-oracle agreement.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f7e57);
    let alternatives = [Alternative::TwoSided, Alternative::Less, Alternative::Greater];
    let mut worst: f64 = 0.0;
    let mut mismatches = 0usize;
    for case in 0..ORACLE_CASES {
        let alternative = alternatives[case % alternatives.len()];
        if case % 2 == 0 {
            let n = rng.gen_range(3..=10);
            let (a, b) = random_pairs(&mut rng, n);
            let exact = wilcoxon_signed_rank(&a, &b, alternative).expect("valid pairs");
            assert_eq!(exact.mode, Mode::Exact, "selftest generated an inexact case");
            let oracle = exact_permutation_pvalue(
                &PermutationSpec::WilcoxonSignedRank { a: &a, b: &b, alternative },
                0,
                0,
            )
            .expect("enumeration feasible");
            let diff = (exact.p_value - oracle).abs();
            worst = worst.max(diff);
            if diff > ORACLE_TOLERANCE {
                mismatches += 1;
            }
        } else {
            let n_a = rng.gen_range(2..=6);
            let n_b = rng.gen_range(2..=6);
            let (a, b) = random_groups(&mut rng, n_a, n_b);
            let exact = mann_whitney_u(&a, &b, alternative).expect("valid groups");
            assert_eq!(exact.mode, Mode::Exact, "selftest generated an inexact case");
            let oracle = exact_permutation_pvalue(
                &PermutationSpec::MannWhitney { group_a: &a, group_b: &b, alternative },
                0,
                0,
            )
            .expect("enumeration feasible");
            let diff = (exact.p_value - oracle).abs();
            worst = worst.max(diff);
            if diff > ORACLE_TOLERANCE {
                mismatches += 1;
            }
        }
    }
    check(
        out,
        &format!(
            "{ORACLE_CASES} randomized exact-mode p-values match the permutation oracle to 1e-12"
        ),
        mismatches == 0,
        format!("{mismatches} mismatches, worst |diff| = {worst:e}"),
    )?;

    Ok(report)
}

/// Distinct integers as f64, guaranteeing tie-free nonzero differences.
fn random_pairs(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let diffs = distinct_magnitudes(rng, n);
    let base: Vec<f64> = (0..n).map(|i| (i as f64) * 1000.0).collect();
    let a: Vec<f64> = base.iter().zip(&diffs).map(|(x, d)| x + d).collect();
    (a, base)
}

fn distinct_magnitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut magnitudes = Vec::with_capacity(n);
    while magnitudes.len() < n {
        let candidate = rng.gen_range(1..=500) as f64;
        if !magnitudes.iter().any(|m: &f64| m.abs() == candidate) {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            magnitudes.push(sign * candidate);
        }
    }
    magnitudes
}

fn random_groups(rng: &mut ChaCha8Rng, n_a: usize, n_b: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pool = Vec::with_capacity(n_a + n_b);
    while pool.len() < n_a + n_b {
        let candidate = rng.gen_range(-1000..=1000) as f64;
        if !pool.contains(&candidate) {
            pool.push(candidate);
        }
    }
    let b = pool.split_off(n_a);
    (pool, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let mut buffer = Vec::new();
        let report = run_selftest(&mut buffer).unwrap();
        let output = String::from_utf8(buffer).unwrap();
        assert!(report.ok(), "selftest output:\n{output}");
        assert!(output.lines().all(|l| l.starts_with("PASS")));
    }
}
