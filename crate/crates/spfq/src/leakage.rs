//! Information-leakage computation in q-ary units.
//!
//! Two independent routes are kept side by side: closed-form per-share
//! leakage ([`analytic_leakage`], [`asymmetric_total_leakage`]) and literal
//! mutual-information sums over the joint distribution ([`brute_force_mi`],
//! [`asymmetric_brute_force_mi`]). The brute-force route is the oracle; the
//! two must agree to ~1e-10 on every feasible input.

use crate::error::{Error, Result};
use crate::model::{AsymmetricSharePmf, ShareParams, SymmetricSharePmf};
use crate::spmat::SourceModel;

/// x * log_q(x / y), with the conventions z(0, y) = 0 and z(x, 0) undefined
/// for x > 0 (impossible for valid model parameters).
fn zlog(x: f64, y: f64, ln_q: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    assert!(y > 0.0, "x log(x/y) with x = {x} > 0 and y = {y}");
    x * (x / y).ln() / ln_q
}

/// q-ary entropy of a source entry:
/// H = -s log_q s - (1-s) log_q((1-s)/(q-1)).
pub fn q_entropy(model: &SourceModel) -> f64 {
    let q = model.field().modulus() as f64;
    let s = model.sparsity();
    let ln_q = q.ln();
    let mut h = 0.0;
    if s > 0.0 {
        h -= s * s.ln() / ln_q;
    }
    if s < 1.0 {
        h -= (1.0 - s) * ((1.0 - s) / (q - 1.0)).ln() / ln_q;
    }
    h
}

/// Closed-form per-share leakage for given raw parameters. `s_d` must be the
/// sparsity the parameters realize.
#[allow(clippy::too_many_arguments)]
pub(crate) fn symmetric_leakage_raw(
    q: f64,
    n: f64,
    p1: f64,
    p1_inv: f64,
    p_star: f64,
    p_star_inv: f64,
    s: f64,
    s_d: f64,
) -> f64 {
    let ln_q = q.ln();
    let s_d_inv = (1.0 - s_d) / (q - 1.0);
    let mut total = 0.0;
    if s > 0.0 {
        total += s * (zlog(p1, s_d, ln_q) + (q - 1.0) * zlog(p1_inv, s_d_inv, ln_q));
    }
    if s < 1.0 {
        total += (1.0 - s)
            * (zlog(p_star, s_d, ln_q)
                + (n - 1.0) * zlog(p_star, s_d_inv, ln_q)
                + (q - n) * zlog(p_star_inv, s_d_inv, ln_q));
    }
    total
}

/// Per-share leakage of the symmetric construction, in q-ary units.
///
/// `s_d` is cross-checked against the sparsity the PMF realizes on a source
/// of sparsity `s` (to 1e-9); a mismatch is an error rather than a silent
/// wrong answer.
pub fn analytic_leakage(pmf: &SymmetricSharePmf, s: f64, s_d: f64) -> Result<f64> {
    let realized = pmf.share_sparsity(s);
    if (realized - s_d).abs() > 1e-9 {
        return Err(Error::SparsityMismatch {
            expected: realized,
            got: s_d,
        });
    }
    Ok(symmetric_leakage_raw(
        pmf.field().modulus() as f64,
        pmf.n() as f64,
        pmf.p1(),
        pmf.p1_inv(),
        pmf.p_star(),
        pmf.p_star_inv(),
        s,
        realized,
    ))
}

/// Literal mutual information I_q(A + alpha_i R; A) for share `share_index`
/// (0-based), computed as a double sum over the q^2 joint outcomes with the
/// share marginal obtained by summation. This is the independent oracle for
/// [`analytic_leakage`].
pub fn brute_force_mi(
    model: &SourceModel,
    pmf: &SymmetricSharePmf,
    params: &ShareParams,
    share_index: usize,
) -> Result<f64> {
    model.field().check_same(&pmf.field())?;
    model.field().check_same(&params.field())?;
    if params.n() != pmf.n() {
        return Err(Error::InvalidParameter(format!(
            "evaluation point count {} != share count {}",
            params.n(),
            pmf.n()
        )));
    }
    if share_index >= params.n() {
        return Err(Error::InvalidParameter(format!(
            "share index {share_index} out of range for n = {}",
            params.n()
        )));
    }
    let field = model.field();
    let q = field.modulus();
    let alpha = params.alphas()[share_index];
    let inv_alpha = field.inv(alpha)?;
    let cond = |b: u64, a: u64| -> f64 {
        let r = field.mul(field.sub(b, a), inv_alpha);
        pmf.conditional_prob(params, r, a)
    };
    Ok(discrete_mi(model, q, cond))
}

/// I_q(share; A) for a share whose conditional law given A = a is `cond`.
fn discrete_mi(model: &SourceModel, q: u64, cond: impl Fn(u64, u64) -> f64) -> f64 {
    let ln_q = (q as f64).ln();
    let mut marginal = vec![0.0f64; q as usize];
    for a in 0..q {
        let pa = model.entry_prob(a);
        if pa == 0.0 {
            continue;
        }
        for b in 0..q {
            marginal[b as usize] += pa * cond(b, a);
        }
    }
    let mut total = 0.0;
    for a in 0..q {
        let pa = model.entry_prob(a);
        if pa == 0.0 {
            continue;
        }
        for b in 0..q {
            let c = cond(b, a);
            if c > 0.0 {
                total += pa * c * (c / marginal[b as usize]).ln();
            }
        }
    }
    total / ln_q
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn asymmetric_leakage_raw(
    q: f64,
    p1: f64,
    p1_inv: f64,
    p2: f64,
    p3: f64,
    p23_inv: f64,
    s: f64,
    s_r: f64,
    s_ar: f64,
) -> f64 {
    let ln_q = q.ln();
    let s_r_inv = (1.0 - s_r) / (q - 1.0);
    let s_ar_inv = (1.0 - s_ar) / (q - 1.0);
    let mut total = 0.0;
    if s > 0.0 {
        total += s
            * (zlog(p1, s_ar, ln_q)
                + zlog(p1, s_r, ln_q)
                + (q - 1.0) * (zlog(p1_inv, s_ar_inv, ln_q) + zlog(p1_inv, s_r_inv, ln_q)));
    }
    if s < 1.0 {
        total += (1.0 - s)
            * (zlog(p2, s_ar_inv, ln_q)
                + zlog(p2, s_r, ln_q)
                + zlog(p3, s_ar, ln_q)
                + zlog(p3, s_r_inv, ln_q)
                + (q - 2.0) * (zlog(p23_inv, s_ar_inv, ln_q) + zlog(p23_inv, s_r_inv, ln_q)));
    }
    total
}

/// Total leakage I_q(R; A) + I_q(A+R; A) of the two-share asymmetric scheme,
/// with share sparsities s_R = s_avg - s_delta and s_{A+R} = s_avg + s_delta.
/// Both are cross-checked against what the PMF realizes (to 1e-9).
pub fn asymmetric_total_leakage(
    pmf: &AsymmetricSharePmf,
    s: f64,
    s_avg: f64,
    s_delta: f64,
) -> Result<f64> {
    let (s_r, s_ar) = pmf.sparsities(s);
    let (want_r, want_ar) = (s_avg - s_delta, s_avg + s_delta);
    if (s_r - want_r).abs() > 1e-9 {
        return Err(Error::SparsityMismatch {
            expected: s_r,
            got: want_r,
        });
    }
    if (s_ar - want_ar).abs() > 1e-9 {
        return Err(Error::SparsityMismatch {
            expected: s_ar,
            got: want_ar,
        });
    }
    Ok(asymmetric_leakage_raw(
        pmf.field().modulus() as f64,
        pmf.p1(),
        pmf.p1_inv(),
        pmf.p2(),
        pmf.p3(),
        pmf.p23_inv(),
        s,
        s_r,
        s_ar,
    ))
}

/// Brute-force (I_q(R; A), I_q(A+R; A)) for the asymmetric scheme; the
/// oracle for [`asymmetric_total_leakage`].
pub fn asymmetric_brute_force_mi(
    model: &SourceModel,
    pmf: &AsymmetricSharePmf,
) -> Result<(f64, f64)> {
    model.field().check_same(&pmf.field())?;
    let field = model.field();
    let q = field.modulus();
    let mi_r = discrete_mi(model, q, |b, a| pmf.conditional_prob(b, a));
    let mi_ar = discrete_mi(model, q, |b, a| pmf.conditional_prob(field.sub(b, a), a));
    Ok((mi_r, mi_ar))
}

/// KL divergence sum_i p_i log_base(p_i / q_i). Errors when the supports are
/// incompatible (some p_i > 0 where q_i = 0) or the lengths differ.
pub fn kl_divergence(p: &[f64], q: &[f64], base: u64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidParameter(format!(
            "PMF lengths differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    if base < 2 {
        return Err(Error::InvalidParameter(format!(
            "log base must be >= 2, got {base}"
        )));
    }
    let ln_base = (base as f64).ln();
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi < 0.0 || qi < 0.0 {
            return Err(Error::InvalidParameter(
                "PMF entries must be nonnegative".into(),
            ));
        }
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::InvalidParameter(
                "support mismatch: p > 0 where q = 0".into(),
            ));
        }
        total += pi * (pi / qi).ln() / ln_base;
    }
    // Gibbs guarantees nonnegativity for normalized inputs; absorb rounding.
    if total < 0.0 && total > -1e-12 {
        total = 0.0;
    }
    Ok(total)
}

/// First-order optimality residual |p1 (p_star_inv)^n - p1_inv (p_star)^n|;
/// near zero exactly at a leakage-optimal interior PMF.
pub fn stationarity_residual(pmf: &SymmetricSharePmf) -> f64 {
    let n = pmf.n() as i32;
    (pmf.p1() * pmf.p_star_inv().powi(n) - pmf.p1_inv() * pmf.p_star().powi(n)).abs()
}

/// Leakage bundled with the source entropy and the relative leakage L/H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    pub leakage: f64,
    pub entropy: f64,
    pub relative: f64,
}

impl LeakageReport {
    pub fn new(leakage: f64, entropy: f64) -> Result<Self> {
        if leakage < -1e-12 || entropy < 0.0 || leakage > entropy + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "leakage {leakage} outside [0, H = {entropy}]"
            )));
        }
        let leakage = leakage.max(0.0);
        let relative = if entropy == 0.0 {
            0.0
        } else {
            leakage / entropy
        };
        Ok(Self {
            leakage,
            entropy,
            relative,
        })
    }
}

#[cfg(test)]
// frozen oracle values are kept at full printed precision
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::rng::Xoshiro256StarStar;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn entropy_degenerate_and_uniform() {
        let fld = f(89);
        let det = SourceModel::new(fld, 1.0).unwrap();
        assert_eq!(q_entropy(&det), 0.0);
        let uniform = SourceModel::new(fld, 1.0 / 89.0).unwrap();
        assert!((q_entropy(&uniform) - 1.0).abs() < 1e-14);
        let dense = SourceModel::new(fld, 0.0).unwrap();
        assert!((q_entropy(&dense) - 88f64.ln() / 89f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn entropy_reference_value() {
        // Frozen from an independent 50-digit evaluation of the formula.
        let model = SourceModel::new(f(89), 0.95).unwrap();
        assert!((q_entropy(&model) - 0.094100312272564107).abs() < 1e-15);
        let model = SourceModel::new(f(5081), 0.95).unwrap();
        assert!((q_entropy(&model) - 0.073262542494072591).abs() < 1e-15);
        let model = SourceModel::new(f(7), 0.5).unwrap();
        assert!((q_entropy(&model) - 0.816598297688823072).abs() < 1e-15);
    }

    #[test]
    fn uniform_pmf_leaks_nothing() {
        let fld = f(89);
        let pmf = SymmetricSharePmf::uniform(fld, 3).unwrap();
        let s = 0.95;
        let l = analytic_leakage(&pmf, s, pmf.share_sparsity(s)).unwrap();
        assert!(l.abs() < 1e-14);
        let model = SourceModel::new(fld, s).unwrap();
        let params = ShareParams::first_n(fld, 3).unwrap();
        for i in 0..3 {
            assert!(brute_force_mi(&model, &pmf, &params, i).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_leakage_rejects_wrong_sparsity() {
        let fld = f(89);
        let pmf = SymmetricSharePmf::new(fld, 2, 0.9, 0.4).unwrap();
        assert!(matches!(
            analytic_leakage(&pmf, 0.95, 0.3),
            Err(Error::SparsityMismatch { .. })
        ));
    }

    #[test]
    fn hand_enumerated_value_q7() {
        // 49-term enumeration computed independently at 50-digit precision
        // for q = 7, n = 2, alphas (1, 2), s = 0.5, p1 = 0.6, p_star = 0.3.
        let fld = f(7);
        let pmf = SymmetricSharePmf::new(fld, 2, 0.6, 0.3).unwrap();
        let params = ShareParams::new(fld, vec![1, 2]).unwrap();
        let model = SourceModel::new(fld, 0.5).unwrap();
        let expect = 0.0577679418209110141;
        for i in 0..2 {
            let mi = brute_force_mi(&model, &pmf, &params, i).unwrap();
            assert!((mi - expect).abs() < 1e-15, "share {i}: {mi}");
        }
        let l = analytic_leakage(&pmf, 0.5, 0.45).unwrap();
        assert!((l - expect).abs() < 1e-15);
    }

    #[test]
    fn dense_source_oracle_agrees_with_formula() {
        // s = 0, p_star = 1/n: shares are as sparse as possible for a dense
        // source; formula and oracle must still agree.
        for (q, n) in [(7u64, 2usize), (11, 3)] {
            let fld = f(q);
            let pmf = SymmetricSharePmf::new(fld, n, 1.0 / q as f64, 1.0 / n as f64).unwrap();
            let model = SourceModel::new(fld, 0.0).unwrap();
            let params = ShareParams::first_n(fld, n).unwrap();
            let analytic = analytic_leakage(&pmf, 0.0, pmf.share_sparsity(0.0)).unwrap();
            for i in 0..n {
                let mi = brute_force_mi(&model, &pmf, &params, i).unwrap();
                assert!((mi - analytic).abs() < 1e-12, "q={q} n={n} i={i}");
            }
        }
    }

    #[test]
    fn oracle_equivalence_random_battery() {
        let mut rng = Xoshiro256StarStar::from_seed(77);
        for q in [7u64, 11] {
            let fld = f(q);
            for n in 2..=(q as usize - 1).min(6) {
                let params = ShareParams::first_n(fld, n).unwrap();
                for _ in 0..10 {
                    let s = 0.05 + 0.9 * rng.next_f64();
                    let p1 = rng.next_f64();
                    let p_star = rng.next_f64() / n as f64;
                    let pmf = SymmetricSharePmf::new(fld, n, p1, p_star).unwrap();
                    let model = SourceModel::new(fld, s).unwrap();
                    let analytic = analytic_leakage(&pmf, s, pmf.share_sparsity(s)).unwrap();
                    for i in 0..n {
                        let mi = brute_force_mi(&model, &pmf, &params, i).unwrap();
                        assert!(
                            (mi - analytic).abs() <= 1e-10,
                            "q={q} n={n} i={i}: {mi} vs {analytic}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_invariance() {
        let fld = f(11);
        let n = 3;
        let pmf = SymmetricSharePmf::new(fld, n, 0.55, 0.21).unwrap();
        let model = SourceModel::new(fld, 0.8).unwrap();
        let p1 = ShareParams::first_n(fld, n).unwrap();
        let p2 = ShareParams::new(fld, vec![4, 9, 2]).unwrap();
        let a = brute_force_mi(&model, &pmf, &p1, 0).unwrap();
        for i in 0..n {
            let b1 = brute_force_mi(&model, &pmf, &p1, i).unwrap();
            let b2 = brute_force_mi(&model, &pmf, &p2, i).unwrap();
            assert!((b1 - a).abs() <= 1e-12);
            assert!((b2 - a).abs() <= 1e-12);
        }
    }

    #[test]
    fn asymmetric_uniform_leaks_nothing() {
        let fld = f(89);
        let pmf = AsymmetricSharePmf::uniform(fld).unwrap();
        let s = 1.0 / 89.0;
        let l = asymmetric_total_leakage(&pmf, s, 1.0 / 89.0, 0.0).unwrap();
        assert!(l.abs() < 1e-13);
    }

    #[test]
    fn asymmetric_formula_matches_two_share_oracle() {
        let mut rng = Xoshiro256StarStar::from_seed(78);
        for q in [7u64, 11, 89] {
            let fld = f(q);
            for _ in 0..15 {
                let s = 0.05 + 0.9 * rng.next_f64();
                let p1 = rng.next_f64();
                let p2 = 0.6 * rng.next_f64();
                let p3 = (1.0 - p2) * rng.next_f64();
                let pmf = AsymmetricSharePmf::new(fld, p1, p2, p3).unwrap();
                let (s_r, s_ar) = pmf.sparsities(s);
                let s_avg = 0.5 * (s_r + s_ar);
                let s_delta = 0.5 * (s_ar - s_r);
                let total = asymmetric_total_leakage(&pmf, s, s_avg, s_delta).unwrap();
                let model = SourceModel::new(fld, s).unwrap();
                let (mi_r, mi_ar) = asymmetric_brute_force_mi(&model, &pmf).unwrap();
                assert!(
                    (total - (mi_r + mi_ar)).abs() <= 1e-10,
                    "q={q}: {total} vs {}",
                    mi_r + mi_ar
                );
            }
        }
    }

    #[test]
    fn kl_divergence_cases() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7], 2).unwrap(), 0.0);
        let one_bit = kl_divergence(&[1.0, 0.0], &[0.5, 0.5], 2).unwrap();
        assert!((one_bit - 1.0).abs() < 1e-15);
        assert!(kl_divergence(&[1.0, 0.0], &[0.0, 1.0], 2).is_err());
        assert!(kl_divergence(&[1.0], &[0.5, 0.5], 2).is_err());
        let mut rng = Xoshiro256StarStar::from_seed(9);
        for _ in 0..50 {
            let mut p: Vec<f64> = (0..6).map(|_| rng.next_f64() + 1e-3).collect();
            let mut q: Vec<f64> = (0..6).map(|_| rng.next_f64() + 1e-3).collect();
            let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
            p.iter_mut().for_each(|x| *x /= sp);
            q.iter_mut().for_each(|x| *x /= sq);
            assert!(kl_divergence(&p, &q, 7).unwrap() >= 0.0);
        }
    }

    #[test]
    fn stationarity_residual_uniform_is_zero() {
        let fld = f(89);
        let pmf = SymmetricSharePmf::uniform(fld, 4).unwrap();
        assert!(stationarity_residual(&pmf) < 1e-18);
    }

    #[test]
    fn leakage_report_bounds() {
        let r = LeakageReport::new(0.02, 0.1).unwrap();
        assert!((r.relative - 0.2).abs() < 1e-15);
        let zero_entropy = LeakageReport::new(0.0, 0.0).unwrap();
        assert_eq!(zero_entropy.relative, 0.0);
        assert!(LeakageReport::new(0.2, 0.1).is_err());
        assert!(LeakageReport::new(-0.1, 0.1).is_err());
    }
}
