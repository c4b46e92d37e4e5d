//! Discrete-event simulation of the main node and n honest-but-curious
//! workers with stragglers.
//!
//! Worker i receives the task (f_A(alpha_i), g_B(alpha_i)); the decoder uses
//! the three earliest results. Finish times follow a shifted-exponential
//! delay plus a work term proportional to the multiply-add count of the
//! sparse product, so sparser tasks finish sooner. Nothing runs over a real
//! network; event order is resolved purely by sampled timestamps, which makes
//! every report a deterministic function of the seed.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::leakage::{analytic_leakage, q_entropy};
use crate::model::{AsymmetricSharePmf, ShareParams, SymmetricSharePmf};
use crate::optimizer::solve_optimal_pmf;
use crate::rng::{derive_seeds, Xoshiro256StarStar};
use crate::sharing::{
    four_task_scheme, generate_share_set, reconstruct_product, sample_padding_asymmetric,
    sample_padding_three_tasks, three_task_scheme, ProductEvaluation,
};
use crate::spmat::{sample_source_matrix, SourceModel, SparseMatrix};

/// Shifted-exponential delay model: finish = base + Exp(rate) + per_op * work.
#[derive(Debug, Clone, Copy)]
pub struct DelayModel {
    /// Fixed startup latency in seconds.
    pub base: f64,
    /// Rate of the exponential tail (1/seconds).
    pub rate: f64,
    /// Seconds per multiply-add of the cost proxy.
    pub per_op: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        Self {
            base: 0.5,
            rate: 2.0,
            per_op: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub field: PrimeField,
    pub n: usize,
    /// A is rows x inner, B is inner x cols.
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
    pub s_a: f64,
    pub s_b: f64,
    pub sd_a: f64,
    pub sd_b: f64,
    pub delay: DelayModel,
    /// Workers whose finish time is forced to infinity.
    pub forced_stragglers: Vec<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct WorkerOutcome {
    pub index: usize,
    pub alpha: u64,
    pub finish_time: f64,
    /// Multiply-add count of this worker's sparse product.
    pub cost: u64,
    pub forced_straggler: bool,
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub seed: u64,
    pub n: usize,
    pub q: u64,
    pub s_a: f64,
    pub s_b: f64,
    pub sd_a: f64,
    pub sd_b: f64,
    /// Time of the third-fastest finish.
    pub completion_time: f64,
    pub workers: Vec<WorkerOutcome>,
    /// Indices of the three workers whose results were decoded.
    pub used_workers: [usize; 3],
    pub share_sparsity_a: Vec<f64>,
    pub share_sparsity_b: Vec<f64>,
    pub decode_ok: bool,
    /// Total multiply-adds over all n workers with the optimized sparse
    /// encoding, and with the dense baseline (uniform padding, s_d = 1/q).
    pub cost_sparse: u64,
    pub cost_dense_baseline: u64,
    /// Analytic per-share leakage for the A-side encoding, q-ary units.
    pub leakage_per_share: f64,
    pub relative_leakage: f64,
}

impl SimReport {
    pub const CSV_HEADER: &'static str = "seed,n,q,s,s_d,completion_time,decode_ok,\
cost_sparse,cost_dense_baseline,leakage_per_share,relative_leakage";

    /// One CSV row matching [`Self::CSV_HEADER`] (A-side sparsities).
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.q,
            fmt_sig15(self.s_a),
            fmt_sig15(self.sd_a),
            fmt_sig15(self.completion_time),
            self.decode_ok,
            self.cost_sparse,
            self.cost_dense_baseline,
            fmt_sig15(self.leakage_per_share),
            fmt_sig15(self.relative_leakage),
        )
    }

    /// Flat key=value block with per-worker and per-share detail.
    pub fn text_block(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed={}", self.seed).unwrap();
        writeln!(out, "n={}", self.n).unwrap();
        writeln!(out, "q={}", self.q).unwrap();
        writeln!(out, "s_a={}", fmt_sig15(self.s_a)).unwrap();
        writeln!(out, "s_b={}", fmt_sig15(self.s_b)).unwrap();
        writeln!(out, "sd_a={}", fmt_sig15(self.sd_a)).unwrap();
        writeln!(out, "sd_b={}", fmt_sig15(self.sd_b)).unwrap();
        writeln!(out, "completion_time={}", fmt_sig15(self.completion_time)).unwrap();
        writeln!(out, "decode_ok={}", self.decode_ok).unwrap();
        writeln!(
            out,
            "used_workers={} {} {}",
            self.used_workers[0], self.used_workers[1], self.used_workers[2]
        )
        .unwrap();
        writeln!(out, "cost_sparse={}", self.cost_sparse).unwrap();
        writeln!(out, "cost_dense_baseline={}", self.cost_dense_baseline).unwrap();
        writeln!(out, "leakage_per_share={}", fmt_sig15(self.leakage_per_share)).unwrap();
        writeln!(out, "relative_leakage={}", fmt_sig15(self.relative_leakage)).unwrap();
        for w in &self.workers {
            writeln!(out, "worker_{}_finish={}", w.index, fmt_sig15(w.finish_time)).unwrap();
            writeln!(out, "worker_{}_cost={}", w.index, w.cost).unwrap();
            writeln!(out, "worker_{}_straggler={}", w.index, w.forced_straggler).unwrap();
        }
        for (i, s) in self.share_sparsity_a.iter().enumerate() {
            writeln!(out, "share_a_{}_sparsity={}", i + 1, fmt_sig15(*s)).unwrap();
        }
        for (i, s) in self.share_sparsity_b.iter().enumerate() {
            writeln!(out, "share_b_{}_sparsity={}", i + 1, fmt_sig15(*s)).unwrap();
        }
        out
    }
}

/// 15 significant digits, stable across runs.
pub fn fmt_sig15(x: f64) -> String {
    format!("{x:.14e}")
}

fn validate_config(config: &SimConfig) -> Result<()> {
    let q = config.field.modulus();
    if config.n < 3 {
        return Err(Error::InvalidParameter(format!(
            "decoding needs 3 results, so n >= 3; got n = {}",
            config.n
        )));
    }
    if (config.n as u64) >= q {
        return Err(Error::InvalidParameter(format!(
            "n = {} must be below q = {q}",
            config.n
        )));
    }
    if config.rows == 0 || config.inner == 0 || config.cols == 0 {
        return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
    }
    for &w in &config.forced_stragglers {
        if w >= config.n {
            return Err(Error::InvalidParameter(format!(
                "forced straggler index {w} out of range for n = {}",
                config.n
            )));
        }
    }
    if config.delay.rate <= 0.0 {
        return Err(Error::InvalidParameter("delay rate must be positive".into()));
    }
    Ok(())
}

/// Runs the full protocol once: sample sources, solve the optimal PMFs,
/// encode, simulate worker finish times, decode from the three earliest,
/// and verify against the directly computed product.
///
/// Sub-seed derivation (SplitMix64 outputs of `seed`, in order): A, B,
/// padding of A, padding of B, worker delays, baseline padding of A,
/// baseline padding of B.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    validate_config(config)?;
    let field = config.field;
    let [seed_a, seed_b, seed_ra, seed_rb, seed_delay, seed_base_a, seed_base_b] =
        derive_seeds(config.seed);

    let model_a = SourceModel::new(field, config.s_a)?;
    let model_b = SourceModel::new(field, config.s_b)?;
    let a = sample_source_matrix(&model_a, config.rows, config.inner, seed_a)?;
    let b = sample_source_matrix(&model_b, config.inner, config.cols, seed_b)?;

    let pmf_a = solve_optimal_pmf(config.s_a, config.sd_a, field, config.n)?;
    let pmf_b = solve_optimal_pmf(config.s_b, config.sd_b, field, config.n)?;
    let params = ShareParams::first_n(field, config.n)?;
    let set_a = generate_share_set(&a, &pmf_a, &params, seed_ra)?;
    let set_b = generate_share_set(&b, &pmf_b, &params, seed_rb)?;

    // Dense baseline: uniform padding gives shares of sparsity 1/q.
    let uniform = SymmetricSharePmf::uniform(field, config.n)?;
    let base_a = generate_share_set(&a, &uniform, &params, seed_base_a)?;
    let base_b = generate_share_set(&b, &uniform, &params, seed_base_b)?;

    let mut delay_rng = Xoshiro256StarStar::from_seed(seed_delay);
    let mut workers = Vec::with_capacity(config.n);
    let mut cost_sparse = 0u64;
    let mut cost_dense = 0u64;
    for i in 0..config.n {
        let (alpha, fa) = &set_a.shares[i];
        let (_, gb) = &set_b.shares[i];
        let cost = fa.mul_work(gb)?;
        cost_sparse += cost;
        cost_dense += base_a.shares[i].1.mul_work(&base_b.shares[i].1)?;
        let forced = config.forced_stragglers.contains(&i);
        let u = delay_rng.next_f64();
        let finish = if forced {
            f64::INFINITY
        } else {
            config.delay.base - (1.0 - u).ln() / config.delay.rate
                + config.delay.per_op * cost as f64
        };
        workers.push(WorkerOutcome {
            index: i,
            alpha: *alpha,
            finish_time: finish,
            cost,
            forced_straggler: forced,
        });
    }

    // Three earliest results; ties broken by worker index.
    let mut order: Vec<usize> = (0..config.n).collect();
    order.sort_by(|&i, &j| {
        workers[i]
            .finish_time
            .partial_cmp(&workers[j].finish_time)
            .unwrap()
            .then(i.cmp(&j))
    });
    let used = [order[0], order[1], order[2]];
    let completion_time = workers[used[2]].finish_time;

    let evals: Vec<ProductEvaluation> = used
        .iter()
        .map(|&i| {
            let (alpha, fa) = &set_a.shares[i];
            let (_, gb) = &set_b.shares[i];
            Ok(ProductEvaluation {
                alpha: *alpha,
                product: fa.sp_mul(gb)?,
            })
        })
        .collect::<Result<_>>()?;
    let decoded = reconstruct_product(&evals, false)?;
    let reference = a.sp_mul(&b)?;
    let decode_ok = decoded == reference;

    let leakage = analytic_leakage(&pmf_a, config.s_a, pmf_a.share_sparsity(config.s_a))?;
    let entropy = q_entropy(&model_a);
    let relative = if entropy == 0.0 { 0.0 } else { leakage / entropy };

    Ok(SimReport {
        seed: config.seed,
        n: config.n,
        q: field.modulus(),
        s_a: config.s_a,
        s_b: config.s_b,
        sd_a: config.sd_a,
        sd_b: config.sd_b,
        completion_time,
        used_workers: used,
        share_sparsity_a: set_a
            .shares
            .iter()
            .map(|(_, m)| m.empirical_sparsity())
            .collect(),
        share_sparsity_b: set_b
            .shares
            .iter()
            .map(|(_, m)| m.empirical_sparsity())
            .collect(),
        workers,
        decode_ok,
        cost_sparse,
        cost_dense_baseline: cost_dense,
        leakage_per_share: leakage,
        relative_leakage: relative,
    })
}

/// One scheme's row in the comparison table.
#[derive(Debug, Clone)]
pub struct SchemeRow {
    pub name: String,
    pub workers: usize,
    /// Nonzero count of each computational task handed to a worker.
    pub task_nnz: Vec<usize>,
    /// Empirical sparsities of the A-side shares the scheme makes sparse.
    pub share_sparsities: Vec<f64>,
    /// Analytic per-share relative leakage at the matched target sparsity.
    pub relative_leakage: f64,
    pub decode_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SchemeComparison {
    pub s_d: f64,
    pub rows: Vec<SchemeRow>,
}

impl SchemeComparison {
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "scheme workers decode_ok relative_leakage_per_share task_nnz share_sparsities"
        )
        .unwrap();
        for r in &self.rows {
            let nnz: Vec<String> = r.task_nnz.iter().map(usize::to_string).collect();
            let sp: Vec<String> = r
                .share_sparsities
                .iter()
                .map(|s| format!("{s:.6}"))
                .collect();
            writeln!(
                out,
                "{} {} {} {} {} {}",
                r.name,
                r.workers,
                r.decode_ok,
                fmt_sig15(r.relative_leakage),
                nnz.join("/"),
                sp.join("/")
            )
            .unwrap();
        }
        out
    }
}

/// Runs the four-task, three-task and n-share schemes on the same inputs at
/// a matched target share sparsity `s_d`, reporting worker counts, per-task
/// nonzero costs, achieved share sparsities, analytic leakage and decode
/// correctness.
///
/// Padding distributions: the four-task scheme (sparse shares R, A+R) uses
/// the two-share optimum; the three-task scheme (sparse shares R, A+R,
/// A+2^{-1}R) uses the three-constraint optimum; the n-share scheme uses the
/// n-share optimum. The source sparsity is taken as each input's empirical
/// sparsity.
pub fn compare_schemes(
    a: &SparseMatrix,
    b: &SparseMatrix,
    s_d: f64,
    n: usize,
    seed: u64,
) -> Result<SchemeComparison> {
    a.field().check_same(&b.field())?;
    let field = a.field();
    if field.modulus() < 5 {
        return Err(Error::InvalidParameter(
            "scheme comparison needs q >= 5".into(),
        ));
    }
    let expected = a.sp_mul(b)?;
    let s_a = a.empirical_sparsity();
    let s_b = b.empirical_sparsity();
    let entropy = q_entropy(&SourceModel::new(field, s_a)?);
    let rel = |l: f64| if entropy == 0.0 { 0.0 } else { l / entropy };
    let [seed_r4, seed_s4, seed_r3, seed_s3, seed_rn, seed_sn, _] = derive_seeds(seed);
    let mut rows = Vec::new();

    // Four tasks from two sparse shares per input (R and A + R).
    {
        let pmf2 = solve_optimal_pmf(s_a, s_d, field, 2)?;
        let pad_a = AsymmetricSharePmf::new(field, pmf2.p1(), pmf2.p_star(), pmf2.p_star())?;
        let pmf2_b = solve_optimal_pmf(s_b, s_d, field, 2)?;
        let pad_b = AsymmetricSharePmf::new(field, pmf2_b.p1(), pmf2_b.p_star(), pmf2_b.p_star())?;
        let r = sample_padding_asymmetric(a, &pad_a, seed_r4)?;
        let s = sample_padding_asymmetric(b, &pad_b, seed_s4)?;
        let scheme = four_task_scheme(a, b, &r, &s)?;
        let leak = analytic_leakage(&pmf2, s_a, pmf2.share_sparsity(s_a))?;
        rows.push(SchemeRow {
            name: "four-task".into(),
            workers: 4,
            task_nnz: scheme.tasks.iter().map(SparseMatrix::nnz).collect(),
            share_sparsities: vec![
                r.empirical_sparsity(),
                a.add(&r)?.empirical_sparsity(),
            ],
            relative_leakage: rel(leak),
            decode_ok: scheme.product == expected,
        });
    }

    // Three tasks; the padding must keep R, A+R and A+2^{-1}R sparse.
    {
        let pmf3 = solve_optimal_pmf(s_a, s_d, field, 3)?;
        let pmf3_b = solve_optimal_pmf(s_b, s_d, field, 3)?;
        let r = sample_padding_three_tasks(a, &pmf3, seed_r3)?;
        let s = sample_padding_three_tasks(b, &pmf3_b, seed_s3)?;
        let scheme = three_task_scheme(a, b, &r, &s)?;
        let leak = analytic_leakage(&pmf3, s_a, pmf3.share_sparsity(s_a))?;
        let inv2 = field.inv(2)?;
        rows.push(SchemeRow {
            name: "three-task".into(),
            workers: 3,
            task_nnz: scheme.tasks.iter().map(SparseMatrix::nnz).collect(),
            share_sparsities: vec![
                r.empirical_sparsity(),
                a.add(&r)?.empirical_sparsity(),
                a.add_scaled(&r, inv2)?.empirical_sparsity(),
            ],
            relative_leakage: rel(leak),
            decode_ok: scheme.product == expected,
        });
    }

    // n evaluations of the degree-1 encodings; any 3 decode.
    {
        let pmf_n = solve_optimal_pmf(s_a, s_d, field, n)?;
        let pmf_n_b = solve_optimal_pmf(s_b, s_d, field, n)?;
        let params = ShareParams::first_n(field, n)?;
        let set_a = generate_share_set(a, &pmf_n, &params, seed_rn)?;
        let set_b = generate_share_set(b, &pmf_n_b, &params, seed_sn)?;
        let evals: Vec<ProductEvaluation> = set_a
            .shares
            .iter()
            .zip(&set_b.shares)
            .map(|((alpha, fa), (_, gb))| {
                Ok(ProductEvaluation {
                    alpha: *alpha,
                    product: fa.sp_mul(gb)?,
                })
            })
            .collect::<Result<_>>()?;
        let decoded = reconstruct_product(&evals, true)?;
        let leak = analytic_leakage(&pmf_n, s_a, pmf_n.share_sparsity(s_a))?;
        rows.push(SchemeRow {
            name: format!("{n}-share"),
            workers: n,
            task_nnz: evals.iter().map(|e| e.product.nnz()).collect(),
            share_sparsities: set_a
                .shares
                .iter()
                .map(|(_, m)| m.empirical_sparsity())
                .collect(),
            relative_leakage: rel(leak),
            decode_ok: decoded == expected,
        });
    }

    Ok(SchemeComparison { s_d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config(seed: u64) -> SimConfig {
        SimConfig {
            field: PrimeField::new(89).unwrap(),
            n: 5,
            rows: 30,
            inner: 25,
            cols: 35,
            s_a: 0.95,
            s_b: 0.9,
            sd_a: 0.9,
            sd_b: 0.85,
            delay: DelayModel::default(),
            forced_stragglers: vec![],
            seed,
        }
    }

    #[test]
    fn simulation_decodes_and_is_deterministic() {
        let config = base_config(1);
        let r1 = run_simulation(&config).unwrap();
        let r2 = run_simulation(&config).unwrap();
        assert!(r1.decode_ok);
        assert_eq!(r1.text_block(), r2.text_block());
        assert_eq!(r1.csv_row(), r2.csv_row());
        let r3 = run_simulation(&base_config(2)).unwrap();
        assert!(r3.decode_ok);
        assert_ne!(r1.csv_row(), r3.csv_row());
    }

    #[test]
    fn forced_stragglers_are_never_used() {
        let mut config = base_config(3);
        config.forced_stragglers = vec![0, 3];
        let report = run_simulation(&config).unwrap();
        assert!(report.decode_ok);
        for &u in &report.used_workers {
            assert!(!report.workers[u].forced_straggler);
        }
        // completion is the slowest of the three remaining workers
        let mut remaining: Vec<f64> = report
            .workers
            .iter()
            .filter(|w| !w.forced_straggler)
            .map(|w| w.finish_time)
            .collect();
        remaining.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(report.completion_time, remaining[2]);
    }

    #[test]
    fn sparse_tasks_cost_less_than_dense_baseline() {
        let report = run_simulation(&base_config(4)).unwrap();
        assert!(
            report.cost_sparse < report.cost_dense_baseline,
            "{} vs {}",
            report.cost_sparse,
            report.cost_dense_baseline
        );
    }

    #[test]
    fn cost_decreases_with_sparsity_on_average() {
        let mut sparse_total = 0u64;
        let mut denser_total = 0u64;
        for seed in 0..30 {
            let mut hi = base_config(seed);
            hi.sd_a = 0.9;
            hi.sd_b = 0.9;
            let mut lo = base_config(seed);
            lo.sd_a = 0.5;
            lo.sd_b = 0.5;
            sparse_total += run_simulation(&hi).unwrap().cost_sparse;
            denser_total += run_simulation(&lo).unwrap().cost_sparse;
        }
        assert!(
            sparse_total < denser_total,
            "{sparse_total} vs {denser_total}"
        );
    }

    #[test]
    fn decode_succeeds_across_the_regression_battery() {
        for q in [89u64, 5081] {
            for n in [3usize, 4, 5] {
                for seed in 0..100u64 {
                    let config = SimConfig {
                        field: PrimeField::new(q).unwrap(),
                        n,
                        rows: 50,
                        inner: 40,
                        cols: 60,
                        s_a: 0.95,
                        s_b: 0.95,
                        sd_a: 0.9,
                        sd_b: 0.9,
                        delay: DelayModel::default(),
                        forced_stragglers: vec![],
                        seed,
                    };
                    let report = run_simulation(&config).unwrap();
                    assert!(report.decode_ok, "q={q} n={n} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = base_config(1);
        config.n = 2;
        assert!(run_simulation(&config).is_err());
        let mut config = base_config(1);
        config.forced_stragglers = vec![7];
        assert!(run_simulation(&config).is_err());
        let mut config = base_config(1);
        config.sd_a = 0.99; // above s + (1-s)/n
        assert!(run_simulation(&config).is_err());
    }

    #[test]
    fn scheme_comparison_decodes_everywhere_and_orders_leakage() {
        let field = PrimeField::new(89).unwrap();
        let model = SourceModel::new(field, 0.95).unwrap();
        let a = sample_source_matrix(&model, 40, 30, 6).unwrap();
        let b = sample_source_matrix(&model, 30, 45, 7).unwrap();
        let cmp = compare_schemes(&a, &b, 0.9, 5, 8).unwrap();
        assert_eq!(cmp.rows.len(), 3);
        assert!(cmp.rows.iter().all(|r| r.decode_ok));
        assert_eq!(
            cmp.rows.iter().map(|r| r.workers).collect::<Vec<_>>(),
            vec![4, 3, 5]
        );
        // two-constraint scheme leaks less than the three-constraint one
        assert!(cmp.rows[0].relative_leakage < cmp.rows[1].relative_leakage);
        // n >= 3 evaluation shares leak at least as much as three constraints
        assert!(cmp.rows[2].relative_leakage >= cmp.rows[1].relative_leakage - 1e-12);
        // every scheme's sparse shares sit near the target
        for row in &cmp.rows {
            for &s in &row.share_sparsities {
                assert!((s - 0.9).abs() < 0.02, "{}: {s}", row.name);
            }
        }
    }
}
