//! Share generation and product reconstruction.
//!
//! A source matrix A is encoded into n shares A + alpha_i R, where the
//! padding R is drawn entrywise from a conditional distribution given the
//! co-located entry of A. The product of two encoded matrices is a degree-2
//! matrix polynomial in the evaluation point, so any three distinct
//! evaluations recover the true product by interpolation at zero.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{AsymmetricSharePmf, ShareParams, SymmetricSharePmf};
use crate::rng::Xoshiro256StarStar;
use crate::spmat::SparseMatrix;

/// Core conditioned sampler.
///
/// Draws one matrix entrywise, row-major, one uniform per entry, inverse-CDF
/// over a fixed category order:
/// * given A = 0: r = 0 (mass `p_zero`), then nonzero values ascending;
/// * given A = a != 0: the `specials(a)` values in the order given, then the
///   remaining field elements ascending, sharing the leftover mass equally.
fn sample_conditioned(
    a: &SparseMatrix,
    p_zero: f64,
    specials: &dyn Fn(u64) -> Vec<(u64, f64)>,
    seed: u64,
) -> Result<SparseMatrix> {
    let field = a.field();
    let q = field.modulus();
    let qf = q as f64;
    let p_zero_inv = (1.0 - p_zero) / (qf - 1.0);
    let mut rng = Xoshiro256StarStar::from_seed(seed);
    let mut entries: Vec<(usize, usize, u64)> = Vec::new();
    let mut a_iter = a.iter().peekable();
    for row in 0..a.rows() {
        for col in 0..a.cols() {
            let a_val = match a_iter.peek() {
                Some(&(r, c, v)) if (r, c) == (row, col) => {
                    a_iter.next();
                    v
                }
                _ => 0,
            };
            let u = rng.next_f64();
            let r_val = if a_val == 0 {
                if u < p_zero || p_zero_inv <= 0.0 {
                    0
                } else {
                    let k = ((u - p_zero) / p_zero_inv) as u64;
                    1 + k.min(q - 2)
                }
            } else {
                let sv = specials(a_val);
                let special_mass: f64 = sv.iter().map(|&(_, p)| p).sum();
                let rest = (1.0 - special_mass) / (qf - sv.len() as f64);
                if u < special_mass || rest <= 0.0 {
                    let mut acc = 0.0;
                    let mut chosen = sv[sv.len() - 1].0;
                    for &(value, p) in &sv {
                        acc += p;
                        if u < acc {
                            chosen = value;
                            break;
                        }
                    }
                    chosen
                } else {
                    let j = (((u - special_mass) / rest) as u64).min(q - sv.len() as u64 - 1);
                    let mut sorted: Vec<u64> = sv.iter().map(|&(v, _)| v).collect();
                    sorted.sort_unstable();
                    let mut value = j;
                    for &sp in &sorted {
                        if value >= sp {
                            value += 1;
                        }
                    }
                    value
                }
            };
            if r_val != 0 {
                entries.push((row, col, r_val));
            }
        }
    }
    SparseMatrix::from_triplets(field, a.rows(), a.cols(), entries)
}

/// Samples the padding R for the symmetric n-share construction: given a
/// nonzero source entry the special values are -a/alpha_1, ..., -a/alpha_n,
/// each with mass p_star. Deterministic for a fixed seed.
pub fn sample_padding(
    a: &SparseMatrix,
    pmf: &SymmetricSharePmf,
    params: &ShareParams,
    seed: u64,
) -> Result<SparseMatrix> {
    a.field().check_same(&pmf.field())?;
    a.field().check_same(&params.field())?;
    if pmf.n() != params.n() {
        return Err(Error::InvalidParameter(format!(
            "share count mismatch: pmf has {}, params have {}",
            pmf.n(),
            params.n()
        )));
    }
    let p_star = pmf.p_star();
    sample_conditioned(
        a,
        pmf.p1(),
        &|a_val| {
            params
                .special_values(a_val)
                .into_iter()
                .map(|v| (v, p_star))
                .collect()
        },
        seed,
    )
}

/// Samples the padding for the two-share asymmetric scheme with shares R and
/// A + R: special values 0 (mass p2) and -a (mass p3).
pub fn sample_padding_asymmetric(
    a: &SparseMatrix,
    pmf: &AsymmetricSharePmf,
    seed: u64,
) -> Result<SparseMatrix> {
    a.field().check_same(&pmf.field())?;
    let field = a.field();
    let (p2, p3) = (pmf.p2(), pmf.p3());
    sample_conditioned(
        a,
        pmf.p1(),
        &|a_val| vec![(0, p2), (field.neg(a_val), p3)],
        seed,
    )
}

/// Samples the padding for the three-task scheme whose sparse shares are R,
/// A + R and A + 2^{-1} R: special values 0, -a and -2a, each with the mass
/// p_star of a three-share symmetric PMF.
pub fn sample_padding_three_tasks(
    a: &SparseMatrix,
    pmf: &SymmetricSharePmf,
    seed: u64,
) -> Result<SparseMatrix> {
    a.field().check_same(&pmf.field())?;
    if pmf.n() != 3 {
        return Err(Error::InvalidParameter(format!(
            "three-task padding needs a 3-share PMF, got n = {}",
            pmf.n()
        )));
    }
    let field = a.field();
    if field.modulus() < 5 {
        return Err(Error::InvalidParameter(
            "three-task padding needs q >= 5 for distinct special values".into(),
        ));
    }
    let p_star = pmf.p_star();
    sample_conditioned(
        a,
        pmf.p1(),
        &|a_val| {
            let neg_a = field.neg(a_val);
            let neg_2a = field.neg(field.mul(2 % field.modulus(), a_val));
            vec![(0, p_star), (neg_a, p_star), (neg_2a, p_star)]
        },
        seed,
    )
}

/// The n shares A + alpha_i R.
pub fn make_shares(
    a: &SparseMatrix,
    r: &SparseMatrix,
    params: &ShareParams,
) -> Result<Vec<(u64, SparseMatrix)>> {
    a.field().check_same(&r.field())?;
    a.field().check_same(&params.field())?;
    if a.rows() != r.rows() || a.cols() != r.cols() {
        return Err(Error::DimensionMismatch(format!(
            "source is {}x{}, padding is {}x{}",
            a.rows(),
            a.cols(),
            r.rows(),
            r.cols()
        )));
    }
    params
        .alphas()
        .iter()
        .map(|&alpha| Ok((alpha, a.add_scaled(r, alpha)?)))
        .collect()
}

/// A full encoding: the shares plus everything needed to reproduce them.
#[derive(Debug, Clone)]
pub struct ShareSet {
    pub params: ShareParams,
    pub pmf: SymmetricSharePmf,
    pub seed: u64,
    pub shares: Vec<(u64, SparseMatrix)>,
}

/// Samples the padding and builds all n shares in one step.
pub fn generate_share_set(
    a: &SparseMatrix,
    pmf: &SymmetricSharePmf,
    params: &ShareParams,
    seed: u64,
) -> Result<ShareSet> {
    let r = sample_padding(a, pmf, params, seed)?;
    let shares = make_shares(a, &r, params)?;
    Ok(ShareSet {
        params: params.clone(),
        pmf: *pmf,
        seed,
        shares,
    })
}

/// One worker's result: the product of the two shares evaluated at `alpha`.
#[derive(Debug, Clone)]
pub struct ProductEvaluation {
    pub alpha: u64,
    pub product: SparseMatrix,
}

/// Interpolates the degree-2 product polynomial at zero from the 3 smallest
/// evaluation points: C = sum_i H(alpha_i) prod_{j != i} alpha_j / (alpha_j - alpha_i).
///
/// With `check_extra` set, every remaining evaluation is verified to lie on
/// the interpolated polynomial, which cheaply detects corrupted results.
pub fn reconstruct_product(
    evals: &[ProductEvaluation],
    check_extra: bool,
) -> Result<SparseMatrix> {
    if evals.len() < 3 {
        return Err(Error::NotEnoughEvaluations(evals.len()));
    }
    let field = evals[0].product.field();
    let (rows, cols) = (evals[0].product.rows(), evals[0].product.cols());
    for e in evals {
        field.check_same(&e.product.field())?;
        if e.product.rows() != rows || e.product.cols() != cols {
            return Err(Error::DimensionMismatch(
                "evaluations have differing dimensions".into(),
            ));
        }
        if e.alpha == 0 || e.alpha >= field.modulus() {
            return Err(Error::InvalidParameter(format!(
                "evaluation point {} outside [1, {})",
                e.alpha,
                field.modulus()
            )));
        }
    }
    let mut order: Vec<usize> = (0..evals.len()).collect();
    order.sort_by_key(|&i| evals[i].alpha);
    for w in order.windows(2) {
        if evals[w[0]].alpha == evals[w[1]].alpha {
            return Err(Error::DuplicateEvaluation(evals[w[0]].alpha));
        }
    }
    let base: Vec<&ProductEvaluation> = order[..3].iter().map(|&i| &evals[i]).collect();

    // Lagrange weights at x = 0.
    let mut c = SparseMatrix::zero(field, rows, cols)?;
    for i in 0..3 {
        let mut w = 1u64;
        for j in 0..3 {
            if j == i {
                continue;
            }
            let denom = field.sub(base[j].alpha, base[i].alpha);
            w = field.mul(w, field.mul(base[j].alpha, field.inv(denom)?));
        }
        c = c.add_scaled(&base[i].product, w)?;
    }

    if check_extra {
        for &i in &order[3..] {
            let x = evals[i].alpha;
            let mut predicted = SparseMatrix::zero(field, rows, cols)?;
            for bi in 0..3 {
                let mut w = 1u64;
                for bj in 0..3 {
                    if bj == bi {
                        continue;
                    }
                    let num = field.sub(x, base[bj].alpha);
                    let denom = field.sub(base[bi].alpha, base[bj].alpha);
                    w = field.mul(w, field.mul(num, field.inv(denom)?));
                }
                predicted = predicted.add_scaled(&base[bi].product, w)?;
            }
            if predicted != evals[i].product {
                return Err(Error::InconsistentEvaluation(x));
            }
        }
    }
    Ok(c)
}

/// The four computational tasks built from paddings R, S and their exact
/// combination C = T1 - T2 - T3 + T4 = AB.
#[derive(Debug, Clone)]
pub struct FourTaskScheme {
    pub tasks: [SparseMatrix; 4],
    pub product: SparseMatrix,
}

pub fn four_task_scheme(
    a: &SparseMatrix,
    b: &SparseMatrix,
    r: &SparseMatrix,
    s: &SparseMatrix,
) -> Result<FourTaskScheme> {
    let a_plus_r = a.add(r)?;
    let b_plus_s = b.add(s)?;
    let t1 = a_plus_r.sp_mul(&b_plus_s)?;
    let t2 = a_plus_r.sp_mul(s)?;
    let t3 = r.sp_mul(&b_plus_s)?;
    let t4 = r.sp_mul(s)?;
    let product = t1.sub(&t2)?.sub(&t3)?.add(&t4)?;
    Ok(FourTaskScheme {
        tasks: [t1, t2, t3, t4],
        product,
    })
}

/// The three-task variant C = T1' - T2' - T3', which trades one worker for
/// an extra sparsity constraint on the padding. Needs q >= 3 for 2^{-1}.
#[derive(Debug, Clone)]
pub struct ThreeTaskScheme {
    pub tasks: [SparseMatrix; 3],
    pub product: SparseMatrix,
}

pub fn three_task_scheme(
    a: &SparseMatrix,
    b: &SparseMatrix,
    r: &SparseMatrix,
    s: &SparseMatrix,
) -> Result<ThreeTaskScheme> {
    let field = a.field();
    let inv2 = field.inv(2 % field.modulus())?;
    let t1 = a.add(r)?.sp_mul(&b.add(s)?)?;
    let t2 = a.add_scaled(r, inv2)?.sp_mul(s)?;
    let t3 = r.sp_mul(&b.add_scaled(s, inv2)?)?;
    let product = t1.sub(&t2)?.sub(&t3)?;
    Ok(ThreeTaskScheme {
        tasks: [t1, t2, t3],
        product,
    })
}

const MANIFEST_NAME: &str = "manifest.txt";

fn share_file_name(index: usize) -> String {
    format!("share_{}.spfq", index + 1)
}

/// Writes one SPFQ file per share plus a plain-text manifest
/// (n, q, alpha list, seed, PMF parameters) into `dir`.
pub fn write_share_set(set: &ShareSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    writeln!(manifest, "SPFQ-SHARES 1").unwrap();
    writeln!(manifest, "q {}", set.params.field().modulus()).unwrap();
    writeln!(manifest, "n {}", set.params.n()).unwrap();
    let alphas: Vec<String> = set.params.alphas().iter().map(u64::to_string).collect();
    writeln!(manifest, "alphas {}", alphas.join(" ")).unwrap();
    writeln!(manifest, "seed {}", set.seed).unwrap();
    writeln!(manifest, "p1 {:.16e}", set.pmf.p1()).unwrap();
    writeln!(manifest, "p_star {:.16e}", set.pmf.p_star()).unwrap();
    fs::write(dir.join(MANIFEST_NAME), manifest)?;
    for (i, (_, share)) in set.shares.iter().enumerate() {
        share.write_spfq(&dir.join(share_file_name(i)))?;
    }
    Ok(())
}

/// Reads a share set written by [`write_share_set`].
pub fn read_share_set(dir: &Path) -> Result<ShareSet> {
    let manifest_path = dir.join(MANIFEST_NAME);
    let fail = |msg: String| Error::Format {
        path: manifest_path.clone(),
        msg,
    };
    let text = fs::read_to_string(&manifest_path)?;
    let mut q = None;
    let mut n = None;
    let mut alphas: Option<Vec<u64>> = None;
    let mut seed = None;
    let mut p1 = None;
    let mut p_star = None;
    let mut lines = text.lines();
    match lines.next() {
        Some("SPFQ-SHARES 1") => {}
        other => {
            return Err(fail(format!(
                "bad magic line {other:?}, expected \"SPFQ-SHARES 1\""
            )))
        }
    }
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| fail(format!("malformed line {line:?}")))?;
        match key {
            "q" => q = Some(value.parse::<u64>().map_err(|e| fail(e.to_string()))?),
            "n" => n = Some(value.parse::<usize>().map_err(|e| fail(e.to_string()))?),
            "alphas" => {
                let parsed: std::result::Result<Vec<u64>, _> =
                    value.split_whitespace().map(str::parse).collect();
                alphas = Some(parsed.map_err(|e: std::num::ParseIntError| fail(e.to_string()))?);
            }
            "seed" => seed = Some(value.parse::<u64>().map_err(|e| fail(e.to_string()))?),
            "p1" => p1 = Some(value.parse::<f64>().map_err(|e| fail(e.to_string()))?),
            "p_star" => p_star = Some(value.parse::<f64>().map_err(|e| fail(e.to_string()))?),
            other => return Err(fail(format!("unknown manifest key {other:?}"))),
        }
    }
    let q = q.ok_or_else(|| fail("missing q".into()))?;
    let n = n.ok_or_else(|| fail("missing n".into()))?;
    let alphas = alphas.ok_or_else(|| fail("missing alphas".into()))?;
    let seed = seed.ok_or_else(|| fail("missing seed".into()))?;
    let p1 = p1.ok_or_else(|| fail("missing p1".into()))?;
    let p_star = p_star.ok_or_else(|| fail("missing p_star".into()))?;
    if alphas.len() != n {
        return Err(fail(format!(
            "manifest says n = {n} but lists {} alphas",
            alphas.len()
        )));
    }
    let field = crate::field::PrimeField::new(q)?;
    let params = ShareParams::new(field, alphas)?;
    let pmf = SymmetricSharePmf::new(field, n, p1, p_star)?;
    let mut shares = Vec::with_capacity(n);
    for i in 0..n {
        let m = SparseMatrix::read_spfq(&dir.join(share_file_name(i)))?;
        m.field().check_same(&field)?;
        shares.push((params.alphas()[i], m));
    }
    Ok(ShareSet {
        params,
        pmf,
        seed,
        shares,
    })
}
