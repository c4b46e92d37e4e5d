//! Probability models for the padding matrix.
//!
//! [`SymmetricSharePmf`] is the n-share conditional distribution of a padding
//! entry R given the co-located source entry A: when A = 0 it keeps R = 0
//! with probability `p1`; when A = a != 0 it places probability `p_star` on
//! each of the n special values -a/alpha_i (the value that zeroes share i)
//! and spreads the rest uniformly. [`AsymmetricSharePmf`] is the two-share
//! variant whose special values are 0 and -a, with independent masses.

use crate::error::{Error, Result};
use crate::field::PrimeField;

const PROB_SLACK: f64 = 1e-9;

fn checked_prob(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&value) {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Distinct nonzero evaluation points alpha_1..alpha_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareParams {
    field: PrimeField,
    alphas: Vec<u64>,
}

impl ShareParams {
    pub fn new(field: PrimeField, alphas: Vec<u64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one evaluation point".into(),
            ));
        }
        let q = field.modulus();
        for &a in &alphas {
            if a == 0 || a >= q {
                return Err(Error::InvalidParameter(format!(
                    "evaluation point {a} outside [1, {q})"
                )));
            }
        }
        let mut sorted = alphas.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "evaluation points must be distinct".into(),
            ));
        }
        Ok(Self { field, alphas })
    }

    /// The canonical choice alpha_i = i, i = 1..n.
    pub fn first_n(field: PrimeField, n: usize) -> Result<Self> {
        if (n as u64) >= field.modulus() {
            return Err(Error::InvalidParameter(format!(
                "cannot pick {n} distinct nonzero points in a field of size {}",
                field.modulus()
            )));
        }
        Self::new(field, (1..=n as u64).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[u64] {
        &self.alphas
    }

    /// The special padding values {-a/alpha_i} for a nonzero source value,
    /// in evaluation-point order. Pairwise distinct for a != 0.
    pub fn special_values(&self, a: u64) -> Vec<u64> {
        let f = self.field;
        let neg_a = f.neg(a);
        self.alphas
            .iter()
            .map(|&al| f.mul(neg_a, f.inv(al).expect("alpha is nonzero")))
            .collect()
    }
}

/// Construction parameters (p1, p_star) for n equally-sparse shares, with the
/// dependent masses p1_inv = (1-p1)/(q-1) and p_star_inv = (1-n p_star)/(q-n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricSharePmf {
    field: PrimeField,
    n: usize,
    p1: f64,
    p1_inv: f64,
    p_star: f64,
    p_star_inv: f64,
}

impl SymmetricSharePmf {
    pub fn new(field: PrimeField, n: usize, p1: f64, p_star: f64) -> Result<Self> {
        let q = field.modulus();
        if n < 2 || (n as u64) >= q {
            return Err(Error::InvalidParameter(format!(
                "share count must satisfy 2 <= n < q, got n = {n}, q = {q}"
            )));
        }
        let qf = q as f64;
        let nf = n as f64;
        let p1 = checked_prob("p1", p1)?;
        let p_star = checked_prob("p_star", p_star)?;
        let p1_inv = checked_prob("p1_inv", (1.0 - p1) / (qf - 1.0))?;
        let p_star_inv = checked_prob("p_star_inv", (1.0 - nf * p_star) / (qf - nf))?;
        debug_assert!((p1 + (qf - 1.0) * p1_inv - 1.0).abs() < 1e-12);
        debug_assert!((nf * p_star + (qf - nf) * p_star_inv - 1.0).abs() < 1e-12);
        Ok(Self {
            field,
            n,
            p1,
            p1_inv,
            p_star,
            p_star_inv,
        })
    }

    /// The perfectly private choice p1 = p_star = 1/q.
    pub fn uniform(field: PrimeField, n: usize) -> Result<Self> {
        let inv_q = 1.0 / field.modulus() as f64;
        Self::new(field, n, inv_q, inv_q)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p1_inv(&self) -> f64 {
        self.p1_inv
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    pub fn p_star_inv(&self) -> f64 {
        self.p_star_inv
    }

    /// True when a parameter sits on the boundary of its admissible range
    /// (p_star = 1/n or p1 = 1), where some PMF mass vanishes.
    pub fn is_boundary(&self) -> bool {
        self.p_star_inv == 0.0 || self.p1_inv == 0.0 || self.p1 == 0.0 || self.p_star == 0.0
    }

    /// Share sparsity s_d = p1 s + p_star (1 - s) realized on a source of
    /// sparsity s.
    pub fn share_sparsity(&self, s: f64) -> f64 {
        self.p1 * s + self.p_star * (1.0 - s)
    }

    /// Pr(R = r | A = a) under evaluation points `params`.
    ///
    /// Contract: `params` has the same field and share count as the PMF.
    pub fn conditional_prob(&self, params: &ShareParams, r: u64, a: u64) -> f64 {
        assert_eq!(params.n(), self.n, "share count mismatch");
        assert_eq!(
            params.field().modulus(),
            self.field.modulus(),
            "field mismatch"
        );
        if a == 0 {
            return if r == 0 { self.p1 } else { self.p1_inv };
        }
        if params.special_values(a).contains(&r) {
            self.p_star
        } else {
            self.p_star_inv
        }
    }
}

/// Two-share variant with special values 0 (mass p2) and -a (mass p3) for a
/// nonzero source entry, allowing the two shares different sparsities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricSharePmf {
    field: PrimeField,
    p1: f64,
    p1_inv: f64,
    p2: f64,
    p3: f64,
    p23_inv: f64,
}

impl AsymmetricSharePmf {
    pub fn new(field: PrimeField, p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let q = field.modulus();
        if q < 3 {
            return Err(Error::InvalidParameter(format!(
                "two-share model needs q >= 3, got q = {q}"
            )));
        }
        let qf = q as f64;
        let p1 = checked_prob("p1", p1)?;
        let p2 = checked_prob("p2", p2)?;
        let p3 = checked_prob("p3", p3)?;
        let p1_inv = checked_prob("p1_inv", (1.0 - p1) / (qf - 1.0))?;
        let p23_inv = checked_prob("p23_inv", (1.0 - p2 - p3) / (qf - 2.0))?;
        debug_assert!((p1 + (qf - 1.0) * p1_inv - 1.0).abs() < 1e-12);
        debug_assert!((p2 + p3 + (qf - 2.0) * p23_inv - 1.0).abs() < 1e-12);
        Ok(Self {
            field,
            p1,
            p1_inv,
            p2,
            p3,
            p23_inv,
        })
    }

    pub fn uniform(field: PrimeField) -> Result<Self> {
        let inv_q = 1.0 / field.modulus() as f64;
        Self::new(field, inv_q, inv_q, inv_q)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p1_inv(&self) -> f64 {
        self.p1_inv
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn p23_inv(&self) -> f64 {
        self.p23_inv
    }

    /// Sparsities (s_R, s_{A+R}) of the shares R and A + R on a source of
    /// sparsity s: s_R = p1 s + p2 (1-s), s_{A+R} = p1 s + p3 (1-s).
    pub fn sparsities(&self, s: f64) -> (f64, f64) {
        (
            self.p1 * s + self.p2 * (1.0 - s),
            self.p1 * s + self.p3 * (1.0 - s),
        )
    }

    /// Pr(R = r | A = a).
    pub fn conditional_prob(&self, r: u64, a: u64) -> f64 {
        if a == 0 {
            if r == 0 {
                self.p1
            } else {
                self.p1_inv
            }
        } else if r == 0 {
            self.p2
        } else if r == self.field.neg(a) {
            self.p3
        } else {
            self.p23_inv
        }
    }
}

/// The closed interval of achievable share sparsities [0, s + (1-s)/n],
/// from p1 <= 1 and p_star <= 1/n.
pub fn feasible_sd_range(s: f64, q: u64, n: usize) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidProbability { name: "s", value: s });
    }
    if n < 2 || (n as u64) >= q {
        return Err(Error::InvalidParameter(format!(
            "share count must satisfy 2 <= n < q, got n = {n}, q = {q}"
        )));
    }
    Ok((0.0, s + (1.0 - s) / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256StarStar;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn conditional_prob_cases() {
        let fld = f(7);
        let params = ShareParams::new(fld, vec![1, 2]).unwrap();
        let pmf = SymmetricSharePmf::new(fld, 2, 0.6, 0.3).unwrap();
        // a = 0
        assert_eq!(pmf.conditional_prob(&params, 0, 0), 0.6);
        assert!((pmf.conditional_prob(&params, 3, 0) - 0.4 / 6.0).abs() < 1e-15);
        // a = 3: specials are {-3, -3*inv(2)} = {4, 2}
        assert_eq!(params.special_values(3), vec![4, 2]);
        assert_eq!(pmf.conditional_prob(&params, 4, 3), 0.3);
        assert_eq!(pmf.conditional_prob(&params, 2, 3), 0.3);
        assert!((pmf.conditional_prob(&params, 1, 3) - 0.4 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_pmf_is_flat() {
        let fld = f(11);
        let params = ShareParams::first_n(fld, 3).unwrap();
        let pmf = SymmetricSharePmf::uniform(fld, 3).unwrap();
        for a in 0..11 {
            for r in 0..11 {
                assert!((pmf.conditional_prob(&params, r, a) - 1.0 / 11.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn conditional_rows_sum_to_one() {
        let mut rng = Xoshiro256StarStar::from_seed(31);
        for q in [7u64, 11, 101] {
            let fld = f(q);
            for n in 2..=7usize.min(q as usize - 1) {
                let params = ShareParams::first_n(fld, n).unwrap();
                for _ in 0..20 {
                    let p1 = rng.next_f64();
                    let p_star = rng.next_f64() / n as f64;
                    let pmf = SymmetricSharePmf::new(fld, n, p1, p_star).unwrap();
                    for a in 0..q {
                        let total: f64 =
                            (0..q).map(|r| pmf.conditional_prob(&params, r, a)).sum();
                        assert!(
                            (total - 1.0).abs() < 1e-12,
                            "q={q} n={n} a={a} total={total}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn special_values_are_pairwise_distinct() {
        // exhaustive over every prime field up to 101 and every nonzero a
        let primes = [
            3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89, 97, 101,
        ];
        for q in primes {
            let fld = f(q);
            for n in 2..=(q as usize - 1).min(7) {
                let params = ShareParams::first_n(fld, n).unwrap();
                for a in 1..q {
                    let mut sv = params.special_values(a);
                    sv.sort_unstable();
                    sv.dedup();
                    assert_eq!(sv.len(), n, "q={q} n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn share_marginal_matches_share_sparsity() {
        // Exact marginal by summation over the joint for share i:
        // Pr(share = b) = sum_a Pr(a) Pr(R = (b - a)/alpha_i | a).
        let fld = f(11);
        let n = 3;
        let params = ShareParams::first_n(fld, n).unwrap();
        let pmf = SymmetricSharePmf::new(fld, n, 0.7, 0.2).unwrap();
        let s = 0.8;
        let q = 11u64;
        let s_d = pmf.share_sparsity(s);
        let s_d_inv = (1.0 - s_d) / (q as f64 - 1.0);
        for (i, &alpha) in params.alphas().iter().enumerate() {
            let inv_alpha = fld.inv(alpha).unwrap();
            for b in 0..q {
                let mut marginal = 0.0;
                for a in 0..q {
                    let pa = if a == 0 { s } else { (1.0 - s) / (q as f64 - 1.0) };
                    let r = fld.mul(fld.sub(b, a), inv_alpha);
                    marginal += pa * pmf.conditional_prob(&params, r, a);
                }
                let expected = if b == 0 { s_d } else { s_d_inv };
                assert!(
                    (marginal - expected).abs() < 1e-12,
                    "share {i} value {b}: {marginal} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn share_sparsity_examples() {
        let fld = f(89);
        let uniform = SymmetricSharePmf::uniform(fld, 2).unwrap();
        assert!((uniform.share_sparsity(0.4) - 1.0 / 89.0).abs() < 1e-15);
        let pmf = SymmetricSharePmf::new(fld, 2, 0.9, 0.5).unwrap();
        assert!((pmf.share_sparsity(1.0) - 0.9).abs() < 1e-15);
        assert!((pmf.share_sparsity(0.95) - 0.88).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_sparsities_examples() {
        let fld = f(89);
        let pmf = AsymmetricSharePmf::new(fld, 0.8, 0.3, 0.5).unwrap();
        let (s_r, s_ar) = pmf.sparsities(0.9);
        assert!((s_r - 0.75).abs() < 1e-15);
        assert!((s_ar - 0.77).abs() < 1e-15);

        let equal = AsymmetricSharePmf::new(fld, 0.8, 0.4, 0.4).unwrap();
        let (a, b) = equal.sparsities(0.6);
        assert_eq!(a, b);

        let uniform = AsymmetricSharePmf::uniform(fld).unwrap();
        let (a, b) = uniform.sparsities(0.37);
        assert!((a - 1.0 / 89.0).abs() < 1e-15);
        assert!((b - 1.0 / 89.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_conditional_rows_sum_to_one() {
        let fld = f(11);
        let pmf = AsymmetricSharePmf::new(fld, 0.5, 0.25, 0.35).unwrap();
        for a in 0..11 {
            let total: f64 = (0..11).map(|r| pmf.conditional_prob(r, a)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn feasible_range_examples() {
        assert_eq!(feasible_sd_range(1.0, 89, 3).unwrap(), (0.0, 1.0));
        let (_, hi) = feasible_sd_range(0.95, 89, 2).unwrap();
        assert!((hi - 0.975).abs() < 1e-15);
        let (_, hi) = feasible_sd_range(0.95, 89, 5).unwrap();
        assert!((hi - 0.96).abs() < 1e-15);
        assert!(feasible_sd_range(0.95, 89, 89).is_err());
        assert!(feasible_sd_range(1.5, 89, 2).is_err());
    }

    #[test]
    fn pmf_validation_rejects_out_of_range() {
        let fld = f(7);
        assert!(SymmetricSharePmf::new(fld, 2, 1.2, 0.1).is_err());
        assert!(SymmetricSharePmf::new(fld, 2, 0.5, 0.8).is_err(), "p_star > 1/n");
        assert!(SymmetricSharePmf::new(fld, 7, 0.5, 0.1).is_err(), "n = q");
        assert!(SymmetricSharePmf::new(fld, 1, 0.5, 0.1).is_err(), "n < 2");
        assert!(AsymmetricSharePmf::new(fld, 0.5, 0.7, 0.6).is_err(), "p2+p3 > 1");
        assert!(AsymmetricSharePmf::new(PrimeField::new(2).unwrap(), 0.5, 0.2, 0.2).is_err());
    }

    #[test]
    fn share_params_validation() {
        let fld = f(7);
        assert!(ShareParams::new(fld, vec![0]).is_err());
        assert!(ShareParams::new(fld, vec![1, 1]).is_err());
        assert!(ShareParams::new(fld, vec![7]).is_err());
        assert!(ShareParams::first_n(fld, 7).is_err());
        assert_eq!(ShareParams::first_n(fld, 6).unwrap().alphas(), &[1, 2, 3, 4, 5, 6]);
    }
}
