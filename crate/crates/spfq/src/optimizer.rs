//! Leakage-optimal PMF parameters.
//!
//! For the symmetric n-share construction the optimum is characterized by a
//! first-order balance condition
//!
//! ```text
//! (q-1) (s_d - (1-s) p*) / (s - s_d + (1-s) p*) = ((q-n) p* / (1 - n p*))^n
//! ```
//!
//! whose cleared-denominator form is a degree-(n+1) polynomial in p* with a
//! unique admissible root ([`optimality_polynomial`], [`solve_optimal_pmf`]).
//! [`grid_search_oracle`] is the independent optimality check: an exhaustive
//! scan over the one free parameter. The two-share asymmetric optimum
//! ([`optimize_asymmetric_n2`]) is found by direct one-dimensional convex
//! minimization and backs [`sweep_sparsity_split`]'s sweep over the sparsity split.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::leakage::{asymmetric_leakage_raw, q_entropy, symmetric_leakage_raw};
use crate::model::{AsymmetricSharePmf, SymmetricSharePmf};
use crate::spmat::SourceModel;

/// Above this, (q-n)^n overflows f64 and the solver switches to the
/// log-domain form of the balance condition.
fn needs_log_domain(q: u64, n: usize) -> bool {
    n as f64 * (q as f64).ln() > 300.0 * std::f64::consts::LN_10
}

fn validate_inputs(s: f64, s_d: f64, q: u64, n: usize) -> Result<()> {
    if n < 2 || (n as u64) >= q {
        return Err(Error::InvalidParameter(format!(
            "share count must satisfy 2 <= n < q, got n = {n}, q = {q}"
        )));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidProbability { name: "s", value: s });
    }
    let max = s + (1.0 - s) / n as f64;
    if !(0.0..=1.0).contains(&s_d) || s_d > max + 1e-12 {
        return Err(Error::InfeasibleSparsity { sd: s_d, s, n, max });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The degree-(n+1) polynomial whose admissible root is the optimal p_star.
///
/// Coefficients are stored by ascending power. With s1 = s_d/(1-s),
/// s2 = (s-s_d)/(1-s) and c = (q-1)/(q-n)^n:
///
/// ```text
/// b_0     = c s1
/// b_k     = c (s1 C(n,k) (-n)^k - C(n,k-1) (-n)^(k-1)),  k in [n-1]
/// b_n     = c (s1 (-n)^n - n (-n)^(n-1)) - s2
/// b_(n+1) = -1 - c (-n)^n
/// ```
#[derive(Debug, Clone)]
pub struct OptimalityPolynomial {
    /// s_d / (1 - s).
    pub sparsity_ratio: f64,
    /// (s - s_d) / (1 - s).
    pub sparsity_gap: f64,
    /// (q - 1) / (q - n)^n.
    pub scale: f64,
    /// b_0 ... b_(n+1), ascending powers; always n + 2 entries.
    pub coeffs: Vec<f64>,
}

impl OptimalityPolynomial {
    /// Horner evaluation at `u`.
    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &b| acc * u + b)
    }
}

pub fn optimality_polynomial(s: f64, s_d: f64, q: u64, n: usize) -> Result<OptimalityPolynomial> {
    validate_inputs(s, s_d, q, n)?;
    if s == 0.0 || s == 1.0 {
        return Err(Error::InvalidParameter(format!(
            "polynomial coefficients are undefined for a degenerate source (s = {s})"
        )));
    }
    if needs_log_domain(q, n) {
        return Err(Error::InvalidParameter(format!(
            "(q - n)^n exceeds f64 range for q = {q}, n = {n}; use the log-domain solver"
        )));
    }
    let qf = q as f64;
    let nf = n as f64;
    let s1 = s_d / (1.0 - s);
    let s2 = (s - s_d) / (1.0 - s);
    let c = (qf - 1.0) / (qf - nf).powi(n as i32);
    let neg_n_pow = |k: usize| (-nf).powi(k as i32);

    let mut b = vec![0.0f64; n + 2];
    b[0] = c * s1;
    for (k, coeff) in b.iter_mut().enumerate().take(n).skip(1) {
        *coeff = c * (s1 * binomial(n, k) * neg_n_pow(k) - binomial(n, k - 1) * neg_n_pow(k - 1));
    }
    b[n] = c * (s1 * neg_n_pow(n) - nf * neg_n_pow(n - 1)) - s2;
    b[n + 1] = -1.0 - c * neg_n_pow(n);
    Ok(OptimalityPolynomial {
        sparsity_ratio: s1,
        sparsity_gap: s2,
        scale: c,
        coeffs: b,
    })
}

/// Log-domain residual of the balance condition; same sign and roots as the
/// polynomial on the open admissible interval.
fn log_balance(u: f64, s: f64, s_d: f64, q: f64, n: f64) -> f64 {
    let lhs = (q - 1.0).ln() + (s_d - (1.0 - s) * u).ln() - (s - s_d + (1.0 - s) * u).ln();
    let rhs = n * ((q - n).ln() + u.ln() - (1.0 - n * u).ln());
    lhs - rhs
}

/// Admissible p_star interval [lo, hi]: lower end from p1 <= 1, upper end
/// from p1 >= 0 and p_star <= 1/n.
fn p_star_interval(s: f64, s_d: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let lo = ((s_d - s) / (1.0 - s)).max(0.0);
    let hi = (s_d / (1.0 - s)).min(1.0 / nf);
    (lo, hi.max(lo))
}

fn sign_change(a: f64, b: f64) -> bool {
    !a.is_nan() && !b.is_nan() && (a < 0.0) != (b < 0.0)
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    loop {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if sign_change(fa, fm) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
}

/// Refines a polynomial root against the log-domain balance form, which is
/// monotone on the admissible interval and better conditioned near the root
/// than the expanded polynomial. Walks outward from `u0` until the balance
/// changes sign, then bisects; keeps `u0` when no bracket exists (boundary
/// optima).
fn polish_balance_root(s: f64, s_d: f64, q: f64, n: f64, lo: f64, hi: f64, u0: f64) -> f64 {
    let g = |u: f64| log_balance(u, s, s_d, q, n);
    let g0 = g(u0);
    if g0 == 0.0 || !g0.is_finite() {
        return u0;
    }
    // balance decreases in u, so g > 0 means the true root lies above u0
    let upward = g0 > 0.0;
    let mut delta = (u0.abs() * 1e-12).max(1e-18);
    for _ in 0..200 {
        let other = if upward {
            (u0 + delta).min(hi)
        } else {
            (u0 - delta).max(lo)
        };
        let g_other = g(other);
        if sign_change(g0, g_other) {
            let (a, b, fa) = if upward {
                (u0, other, g0)
            } else {
                (other, u0, g_other)
            };
            return bisect(&g, a, b, fa);
        }
        if other == lo || other == hi {
            break;
        }
        delta *= 4.0;
    }
    u0
}

/// Dense scan (1024 cells) to bracket sign changes, then bisection pushed to
/// f64 resolution. More than one admissible root is surfaced as an error:
/// convexity promises uniqueness, so a tie means a bug or infeasible input.
fn find_unique_root(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    const CELLS: usize = 1024;
    if hi - lo <= f64::EPSILON {
        return Ok(lo);
    }
    let x = |i: usize| lo + (hi - lo) * i as f64 / CELLS as f64;
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if !roots.iter().any(|&p| (p - r).abs() <= 1e-9 * (hi - lo).max(1.0)) {
            roots.push(r);
        }
    };
    let mut prev = f(x(0));
    if prev == 0.0 {
        push(x(0), &mut roots);
    }
    for i in 1..=CELLS {
        let cur = f(x(i));
        if cur == 0.0 {
            push(x(i), &mut roots);
        } else if sign_change(prev, cur) {
            push(bisect(f, x(i - 1), x(i), prev), &mut roots);
        }
        prev = cur;
    }
    match roots.len() {
        0 => Err(Error::NoRoot { lo, hi }),
        1 => Ok(roots[0]),
        _ => Err(Error::MultipleRoots(roots)),
    }
}

/// Optimal (p1, p_star) for `n` shares of sparsity `s_d` from a source of
/// sparsity `s`: p_star is the admissible root of the optimality polynomial,
/// and p1 = (s_d - p_star (1-s)) / s.
///
/// Degenerate sources bypass the polynomial: for s = 1 the sparsity pins
/// p1 = s_d and p_star is vacuous (set to 1/q); for s = 0 it pins
/// p_star = s_d and p1 is vacuous (set to 1/q).
pub fn solve_optimal_pmf(s: f64, s_d: f64, field: PrimeField, n: usize) -> Result<SymmetricSharePmf> {
    let q = field.modulus();
    validate_inputs(s, s_d, q, n)?;
    let inv_q = 1.0 / q as f64;
    if s == 1.0 {
        return SymmetricSharePmf::new(field, n, s_d, inv_q);
    }
    if s == 0.0 {
        return SymmetricSharePmf::new(field, n, inv_q, s_d);
    }
    let (lo, hi) = p_star_interval(s, s_d, n);
    let root = if needs_log_domain(q, n) {
        let qf = q as f64;
        let nf = n as f64;
        // The log form diverges at the interval ends; shave an ulp-scale
        // margin before scanning.
        let margin = 1e-12 * (hi - lo).max(f64::MIN_POSITIVE);
        find_unique_root(
            &|u| log_balance(u, s, s_d, qf, nf),
            lo + margin,
            hi - margin,
        )?
    } else {
        let poly = optimality_polynomial(s, s_d, q, n)?;
        let raw = find_unique_root(&|u| poly.eval(u), lo, hi)?;
        polish_balance_root(s, s_d, q as f64, n as f64, lo, hi, raw)
    };
    let p_star = root.min(1.0 / n as f64);
    let p1 = ((s_d - p_star * (1.0 - s)) / s).clamp(0.0, 1.0);
    SymmetricSharePmf::new(field, n, p1, p_star)
}

/// Relative residual of the balance condition at `p_star`, measured in the
/// log domain: |ln LHS - ln RHS|. Zero (or two matching infinities) at the
/// optimum.
pub fn balance_residual(s: f64, s_d: f64, q: u64, n: usize, p_star: f64) -> f64 {
    let qf = q as f64;
    let nf = n as f64;
    let lhs = (qf - 1.0).ln() + (s_d - (1.0 - s) * p_star).ln()
        - (s - s_d + (1.0 - s) * p_star).ln();
    let rhs = nf * ((qf - nf).ln() + p_star.ln() - (1.0 - nf * p_star).ln());
    if lhs == rhs {
        // covers matching infinities at boundary optima
        0.0
    } else {
        (lhs - rhs).abs()
    }
}

/// One point of the sparsity/leakage tradeoff curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub s: f64,
    pub s_d: f64,
    pub q: u64,
    pub n: usize,
    pub p1: f64,
    pub p_star: f64,
    pub leakage: f64,
    pub relative_leakage: f64,
    /// Set when the optimum sits on the admissible boundary (some PMF mass
    /// exactly zero), where the balance condition degenerates.
    pub boundary: bool,
}

/// Solves for the optimum and evaluates its leakage and relative leakage.
pub fn tradeoff_point(s: f64, s_d: f64, field: PrimeField, n: usize) -> Result<TradeoffPoint> {
    let pmf = solve_optimal_pmf(s, s_d, field, n)?;
    let realized = pmf.share_sparsity(s);
    let leakage = crate::leakage::analytic_leakage(&pmf, s, realized)?;
    let entropy = q_entropy(&SourceModel::new(field, s)?);
    let relative = if entropy == 0.0 { 0.0 } else { leakage / entropy };
    Ok(TradeoffPoint {
        s,
        s_d,
        q: field.modulus(),
        n,
        p1: pmf.p1(),
        p_star: pmf.p_star(),
        leakage,
        relative_leakage: relative,
        boundary: pmf.is_boundary(),
    })
}

/// Tradeoff curve over a grid of desired sparsities, ordered as given.
pub fn sweep_tradeoff(
    s: f64,
    field: PrimeField,
    n: usize,
    s_d_grid: &[f64],
) -> Result<Vec<TradeoffPoint>> {
    s_d_grid
        .iter()
        .map(|&s_d| tradeoff_point(s, s_d, field, n))
        .collect()
}

/// Result of the exhaustive one-parameter scan.
#[derive(Debug, Clone, Copy)]
pub struct GridSearchResult {
    pub p1: f64,
    pub p_star: f64,
    pub leakage: f64,
}

/// Independent optimality oracle: scans p_star over the admissible interval
/// at `resolution`, with p1 implied by the sparsity constraint, and returns
/// the grid minimizer of the per-share leakage.
pub fn grid_search_oracle(
    s: f64,
    s_d: f64,
    field: PrimeField,
    n: usize,
    resolution: f64,
) -> Result<GridSearchResult> {
    let q = field.modulus();
    validate_inputs(s, s_d, q, n)?;
    if s == 0.0 || s == 1.0 {
        return Err(Error::InvalidParameter(
            "grid oracle requires 0 < s < 1".into(),
        ));
    }
    if resolution <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let (lo, hi) = p_star_interval(s, s_d, n);
    let qf = q as f64;
    let nf = n as f64;
    let steps = ((hi - lo) / resolution).ceil() as usize;
    let mut best: Option<GridSearchResult> = None;
    for i in 0..=steps {
        let p_star = (lo + i as f64 * resolution).min(hi);
        let p1 = ((s_d - p_star * (1.0 - s)) / s).clamp(0.0, 1.0);
        let p1_inv = (1.0 - p1) / (qf - 1.0);
        let p_star_inv = ((1.0 - nf * p_star) / (qf - nf)).max(0.0);
        let leakage =
            symmetric_leakage_raw(qf, nf, p1, p1_inv, p_star, p_star_inv, s, s_d);
        if best.is_none_or(|b| leakage < b.leakage) {
            best = Some(GridSearchResult {
                p1,
                p_star,
                leakage,
            });
        }
    }
    best.ok_or(Error::NoRoot { lo, hi })
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if b - a <= tol {
        let x = 0.5 * (a + b);
        return (x, f(x));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Optimal two-share asymmetric PMF for share sparsities s_avg -/+ s_delta.
///
/// p2, p3 and p23_inv are eliminated through the constraints as functions of
/// p1; the remaining one-dimensional convex problem is minimized by
/// derivative-free bracketing to an interval width of 1e-12.
pub fn optimize_asymmetric_n2(
    s: f64,
    s_avg: f64,
    s_delta: f64,
    field: PrimeField,
) -> Result<(AsymmetricSharePmf, f64)> {
    let q = field.modulus();
    if q < 3 {
        return Err(Error::InvalidParameter(format!(
            "two-share model needs q >= 3, got q = {q}"
        )));
    }
    if !(0.0 < s && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "asymmetric optimization requires 0 < s < 1, got s = {s}"
        )));
    }
    let s_r = s_avg - s_delta;
    let s_ar = s_avg + s_delta;
    if !(0.0..=1.0).contains(&s_r) || !(0.0..=1.0).contains(&s_ar) {
        return Err(Error::InvalidParameter(format!(
            "share sparsities ({s_r}, {s_ar}) outside [0, 1]"
        )));
    }
    // Feasible p1: p2, p3 in [0, 1] and p2 + p3 <= 1.
    let lo = (0.0f64)
        .max((s_r - (1.0 - s)) / s)
        .max((s_ar - (1.0 - s)) / s)
        .max((2.0 * s_avg - (1.0 - s)) / (2.0 * s));
    let hi = (1.0f64).min(s_r / s).min(s_ar / s);
    if lo > hi + 1e-12 {
        return Err(Error::EmptyFeasibleInterval { s_avg, s_delta });
    }
    let hi = hi.max(lo);
    let qf = q as f64;
    let objective = |p1: f64| -> f64 {
        let p1_inv = (1.0 - p1) / (qf - 1.0);
        let p2 = ((s_r - s * p1) / (1.0 - s)).clamp(0.0, 1.0);
        let p3 = ((s_ar - s * p1) / (1.0 - s)).clamp(0.0, 1.0);
        let p23_inv = ((1.0 - p2 - p3) / (qf - 2.0)).max(0.0);
        asymmetric_leakage_raw(qf, p1, p1_inv, p2, p3, p23_inv, s, s_r, s_ar)
    };
    let (p1, total) = golden_section_min(objective, lo, hi, 1e-12);
    let p2 = ((s_r - s * p1) / (1.0 - s)).clamp(0.0, 1.0);
    let p3 = ((s_ar - s * p1) / (1.0 - s)).clamp(0.0, 1.0);
    let pmf = AsymmetricSharePmf::new(field, p1, p2, p3)?;
    Ok((pmf, total))
}

/// Total leakage of the optimal two-share scheme over a grid of sparsity
/// splits; the minimum is expected at s_delta = 0.
///
/// Splits with no feasible PMF are skipped: a split of 2|s_delta| between
/// the two share sparsities must come entirely from the nonzero-source mass
/// (1-s)(p3 - p2), so |s_delta| > (1-s)/2 is unreachable.
pub fn sweep_sparsity_split(
    s: f64,
    s_avg: f64,
    field: PrimeField,
    s_delta_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut table = Vec::with_capacity(s_delta_grid.len());
    for &d in s_delta_grid {
        match optimize_asymmetric_n2(s, s_avg, d, field) {
            Ok((_, l)) => table.push((d, l)),
            Err(Error::EmptyFeasibleInterval { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(table)
}
