//! Named verification batteries behind the `verify` CLI command and the
//! acceptance tests.
//!
//! Every suite returns structured [`Check`] rows so callers can print
//! per-check residuals and fail on any hard violation. Informational rows
//! (`hard = false`) report comparisons that are not contractual.

use crate::error::Result;
use crate::field::PrimeField;
use crate::golden;
use crate::leakage::{
    analytic_leakage, asymmetric_brute_force_mi, asymmetric_total_leakage, brute_force_mi,
    stationarity_residual,
};
use crate::model::{AsymmetricSharePmf, ShareParams, SymmetricSharePmf};
use crate::optimizer::{
    balance_residual, grid_search_oracle, optimality_polynomial, optimize_asymmetric_n2,
    solve_optimal_pmf, tradeoff_point, sweep_sparsity_split,
};
use crate::rng::Xoshiro256StarStar;
use crate::spmat::SourceModel;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational rows never fail a suite.
    pub hard: bool,
}

impl Check {
    fn hard(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            hard: true,
        }
    }

    fn info(name: impl Into<String>, residual: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance: f64::INFINITY,
            pass: true,
            hard: false,
        }
    }
}

/// True when every hard check passes.
pub fn suite_passes(checks: &[Check]) -> bool {
    checks.iter().all(|c| !c.hard || c.pass)
}

fn random_distinct_nonzero(rng: &mut Xoshiro256StarStar, q: u64, n: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    while out.len() < n {
        let candidate = 1 + rng.next_below(q - 1);
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Oracle-equivalence battery: on >= 500 random feasible PMFs across
/// q in {7, 11, 89} and n in {2..6}, the closed-form leakage must match the
/// literal mutual-information sum per share (1e-10), shares must leak
/// identically (1e-12), and the value must not depend on the choice of
/// evaluation points (1e-12). The two-share asymmetric formula is checked
/// against its own brute-force oracle the same way.
pub fn oracle_suite() -> Result<Vec<Check>> {
    let mut rng = Xoshiro256StarStar::from_seed(0x0acc1e);
    let mut worst_formula = 0.0f64;
    let mut worst_symmetry = 0.0f64;
    let mut worst_alpha = 0.0f64;
    let mut count = 0usize;
    for q in [7u64, 11, 89] {
        let field = PrimeField::new(q)?;
        for n in 2..=6usize {
            let params = ShareParams::first_n(field, n)?;
            for _ in 0..34 {
                let s = 0.05 + 0.93 * rng.next_f64();
                let p1 = rng.next_f64();
                let p_star = rng.next_f64() / n as f64;
                let pmf = SymmetricSharePmf::new(field, n, p1, p_star)?;
                let model = SourceModel::new(field, s)?;
                let analytic = analytic_leakage(&pmf, s, pmf.share_sparsity(s))?;
                let per_share: Vec<f64> = (0..n)
                    .map(|i| brute_force_mi(&model, &pmf, &params, i))
                    .collect::<Result<_>>()?;
                for &mi in &per_share {
                    worst_formula = worst_formula.max((mi - analytic).abs());
                    worst_symmetry = worst_symmetry.max((mi - per_share[0]).abs());
                }
                let alt = ShareParams::new(field, random_distinct_nonzero(&mut rng, q, n))?;
                let alt_mi = brute_force_mi(&model, &pmf, &alt, 0)?;
                worst_alpha = worst_alpha.max((alt_mi - per_share[0]).abs());
                count += 1;
            }
        }
    }
    let mut checks = vec![
        Check::hard(
            format!("analytic vs brute-force leakage ({count} PMFs, all shares)"),
            worst_formula,
            1e-10,
        ),
        Check::hard("per-share leakage symmetry", worst_symmetry, 1e-12),
        Check::hard("evaluation-point invariance", worst_alpha, 1e-12),
    ];

    let mut worst_asym = 0.0f64;
    for q in [7u64, 11, 89] {
        let field = PrimeField::new(q)?;
        for _ in 0..20 {
            let s = 0.05 + 0.93 * rng.next_f64();
            let p1 = rng.next_f64();
            let p2 = 0.6 * rng.next_f64();
            let p3 = (1.0 - p2) * rng.next_f64();
            let pmf = AsymmetricSharePmf::new(field, p1, p2, p3)?;
            let (s_r, s_ar) = pmf.sparsities(s);
            let total =
                asymmetric_total_leakage(&pmf, s, 0.5 * (s_r + s_ar), 0.5 * (s_ar - s_r))?;
            let model = SourceModel::new(field, s)?;
            let (mi_r, mi_ar) = asymmetric_brute_force_mi(&model, &pmf)?;
            worst_asym = worst_asym.max((total - (mi_r + mi_ar)).abs());
        }
    }
    checks.push(Check::hard(
        "two-share total leakage vs brute force (60 PMFs)",
        worst_asym,
        1e-10,
    ));
    Ok(checks)
}

/// Optimizer battery: on >= 100 random feasible inputs the solved optimum
/// must zero its polynomial (1e-10 after coefficient scaling), satisfy the
/// stationarity product identity (1e-8) and the balance condition (relative
/// 1e-8), and beat or tie an exhaustive grid scan at resolution 1e-5 within
/// 1e-6.
pub fn stationarity_suite() -> Result<Vec<Check>> {
    let mut rng = Xoshiro256StarStar::from_seed(0x57a7);
    let mut worst_poly = 0.0f64;
    let mut worst_stat = 0.0f64;
    let mut worst_balance = 0.0f64;
    let mut worst_opt = 0.0f64;
    let mut count = 0usize;
    while count < 120 {
        let q = [7u64, 11, 89][rng.next_below(3) as usize];
        let n = 2 + rng.next_below(5.min(q - 2)) as usize;
        let s = 0.1 + 0.85 * rng.next_f64();
        let max_sd = s + (1.0 - s) / n as f64;
        let span = max_sd - 0.02;
        if span <= 0.0 {
            continue;
        }
        let s_d = 0.01 + span * rng.next_f64();
        let field = PrimeField::new(q)?;
        let pmf = solve_optimal_pmf(s, s_d, field, n)?;
        let poly = optimality_polynomial(s, s_d, q, n)?;
        let scale = poly
            .coeffs
            .iter()
            .fold(0.0f64, |m, &b| m.max(b.abs()))
            .max(1.0);
        worst_poly = worst_poly.max(poly.eval(pmf.p_star()).abs() / scale);
        worst_stat = worst_stat.max(stationarity_residual(&pmf));
        worst_balance = worst_balance.max(balance_residual(s, s_d, q, n, pmf.p_star()));
        let solved = analytic_leakage(&pmf, s, pmf.share_sparsity(s))?;
        let grid = grid_search_oracle(s, s_d, field, n, 1e-5)?;
        worst_opt = worst_opt.max(solved - grid.leakage);
        count += 1;
    }
    Ok(vec![
        Check::hard(
            format!("scaled polynomial residual at the root ({count} cases)"),
            worst_poly,
            1e-10,
        ),
        Check::hard("stationarity product identity", worst_stat, 1e-8),
        Check::hard("balance condition, relative", worst_balance, 1e-8),
        Check::hard(
            "solved leakage minus grid-scan minimum (resolution 1e-5)",
            worst_opt,
            1e-6,
        ),
    ])
}

/// Equal-split battery: for each (s, s_avg) combination the total two-share
/// leakage over the split grid [-0.04, 0.04] (step 0.005) must attain its
/// minimum at zero split, be symmetric under split negation (1e-9), and at
/// zero split equal twice the per-share two-evaluation optimum (1e-8).
pub fn equal_split_suite() -> Result<Vec<Check>> {
    let field = PrimeField::new(89)?;
    let grid: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.005).collect();
    let mut checks = Vec::new();
    for s in [0.9, 0.95] {
        for s_avg in [0.7, 0.9] {
            let table = sweep_sparsity_split(s, s_avg, field, &grid)?;
            let tag = format!("s={s}, s_avg={s_avg}");
            let at_zero = table
                .iter()
                .find(|(d, _)| *d == 0.0)
                .expect("zero split is always feasible")
                .1;
            let min = table.iter().map(|&(_, l)| l).fold(f64::INFINITY, f64::min);
            checks.push(Check::hard(
                format!("minimum at zero split ({tag}, {} feasible splits)", table.len()),
                at_zero - min,
                1e-12,
            ));
            let mut sym = 0.0f64;
            for &(d, l) in &table {
                let mirrored = table
                    .iter()
                    .find(|(e, _)| *e == -d)
                    .expect("grid is symmetric")
                    .1;
                sym = sym.max((l - mirrored).abs());
            }
            checks.push(Check::hard(format!("split symmetry ({tag})"), sym, 1e-9));
            let pmf = solve_optimal_pmf(s, s_avg, field, 2)?;
            let per_share = analytic_leakage(&pmf, s, s_avg)?;
            checks.push(Check::hard(
                format!("zero split equals twice the two-evaluation optimum ({tag})"),
                (at_zero - 2.0 * per_share).abs(),
                1e-8,
            ));
        }
    }
    // Spot-check the zero-leakage point of the asymmetric path.
    let (_, l) = optimize_asymmetric_n2(0.95, 1.0 / 89.0, 0.0, field)?;
    checks.push(Check::hard(
        "uniform average sparsity gives zero total leakage",
        l.abs(),
        1e-10,
    ));
    Ok(checks)
}

/// Reference-curve battery.
///
/// Hard checks: the two-constraint (n = 2) optimizer reproduces all 95
/// frozen curve points to 1e-6; the four published summary values near
/// s_d = 0.9 are reproduced to 1e-3 at the sparsities they were reported
/// for (the curves are sampled on offset grids: 1/5081-anchored for q = 89,
/// 1/89-anchored for q = 5081); and the exact optima at s_d = 0.9 match
/// independently frozen 50-digit solves to 1e-9.
///
/// Informational: distance between the three-constraint reference curve and
/// the n = 3 evaluation-share optimum.
pub fn reference_curve_suite() -> Result<Vec<Check>> {
    let f89 = PrimeField::new(89)?;
    let f5081 = PrimeField::new(5081)?;
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for &(s_d, expect) in golden::TWO_CONSTRAINT_CURVE.iter() {
        let point = tradeoff_point(0.95, s_d, f89, 2)?;
        worst = worst.max((point.relative_leakage - expect).abs());
    }
    checks.push(Check::hard(
        "two-constraint curve, 95 points (s = 0.95, q = 89)",
        worst,
        1e-6,
    ));

    // Summary values as published: q = 89 read on its curve grid near 0.9
    // rounds to 0.234 / 0.284 at s_d = 0.9 as well; q = 5081 was read at the
    // 1/89-anchored grid point 0.89 + 1/89.
    let sd_q5081 = 0.89 + 1.0 / 89.0;
    for (field, n, s_d, target) in [
        (f89, 2usize, 0.9, 0.234),
        (f89, 5, 0.9, 0.284),
        (f5081, 2, sd_q5081, 0.199),
        (f5081, 5, sd_q5081, 0.207),
    ] {
        let point = tradeoff_point(0.95, s_d, field, n)?;
        checks.push(Check::hard(
            format!(
                "summary value q={}, n={n} (target {target})",
                field.modulus()
            ),
            (point.relative_leakage - target).abs(),
            1e-3,
        ));
    }

    // Exact optima at s_d = 0.9, frozen from independent 50-digit solves.
    for (field, n, expect) in [
        (f89, 2usize, 0.23347595139987406),
        (f89, 5, 0.28415703133768254),
        (f5081, 2, 0.19779784955848517),
        (f5081, 5, 0.20595813955221225),
    ] {
        let point = tradeoff_point(0.95, 0.9, field, n)?;
        checks.push(Check::hard(
            format!("pinned optimum at s_d = 0.9, q={}, n={n}", field.modulus()),
            (point.relative_leakage - expect).abs(),
            1e-9,
        ));
    }

    let mut three_gap = 0.0f64;
    for &(s_d, expect) in golden::THREE_CONSTRAINT_CURVE.iter() {
        let point = tradeoff_point(0.95, s_d, f89, 3)?;
        three_gap = three_gap.max((point.relative_leakage - expect).abs());
    }
    checks.push(Check::info(
        "three-constraint curve vs n = 3 evaluation shares (reported only)",
        three_gap,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full batteries run in the acceptance suite; here we only pin the
    // row structure and the pass/fail logic.
    #[test]
    fn equal_split_suite_structure() {
        let checks = equal_split_suite().unwrap();
        assert_eq!(checks.len(), 13);
        assert!(suite_passes(&checks));
    }

    #[test]
    fn informational_rows_never_fail_a_suite() {
        let rows = vec![
            Check::hard("a", 0.0, 1.0),
            Check::info("b", f64::INFINITY),
        ];
        assert!(suite_passes(&rows));
        let rows = vec![Check::hard("a", 2.0, 1.0)];
        assert!(!suite_passes(&rows));
    }
}
