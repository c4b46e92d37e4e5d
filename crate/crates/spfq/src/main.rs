//! Command-line surface: optimize | sweep | encode | multiply | simulate | verify.
//!
//! Exit codes: 0 success, 1 usage error, 2 infeasible or domain error,
//! 3 verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spfq::checks::{self, Check};
use spfq::field::PrimeField;
use spfq::leakage::q_entropy;
use spfq::model::ShareParams;
use spfq::optimizer::{sweep_tradeoff, tradeoff_point};
use spfq::sharing::{
    generate_share_set, read_share_set, reconstruct_product, write_share_set, ProductEvaluation,
};
use spfq::simulator::{
    compare_schemes, fmt_sig15, run_simulation, DelayModel, SimConfig, SimReport,
};
use spfq::spmat::{SourceModel, SparseMatrix};
use spfq::Result;

#[derive(Parser)]
#[command(name = "spfq", version, about = "Sparse secret sharing over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Lemma1,
    Stationarity,
    Figure1,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the leakage-optimal share distribution for one operating point.
    Optimize {
        /// Source sparsity in [0, 1].
        #[arg(long)]
        s: f64,
        /// Desired share sparsity.
        #[arg(long)]
        sd: f64,
        /// Prime field modulus.
        #[arg(long)]
        q: u64,
        /// Number of shares.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Sweep the sparsity/leakage tradeoff over a grid, one CSV row per point.
    Sweep {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        q: u64,
        /// Share counts, comma separated (e.g. 2,3,5).
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Grid as comma-separated values or lo:step:hi.
        #[arg(long = "sd-grid")]
        sd_grid: String,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a matrix into n share files plus a manifest.
    Encode {
        /// Input matrix in SPFQ format.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        /// Desired share sparsity.
        #[arg(long)]
        sd: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Multiply two encoded matrices from picked share products and decode.
    Multiply {
        #[arg(long = "shares-a")]
        shares_a: PathBuf,
        #[arg(long = "shares-b")]
        shares_b: PathBuf,
        /// 1-based share indices, comma separated; at least three.
        #[arg(long, value_delimiter = ',', required = true)]
        pick: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Cross-check evaluations beyond the three used for decoding.
        #[arg(long, default_value_t = false)]
        check_extra: bool,
    },
    /// Simulate the worker protocol with stragglers.
    Simulate {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Rows of A.
        #[arg(long, default_value_t = 50)]
        k: usize,
        /// Columns of A and rows of B.
        #[arg(long, default_value_t = 40)]
        l: usize,
        /// Columns of B.
        #[arg(long, default_value_t = 60)]
        m: usize,
        /// Source sparsity for both inputs.
        #[arg(long)]
        s: f64,
        /// Desired share sparsity for both inputs.
        #[arg(long)]
        sd: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed startup latency, seconds.
        #[arg(long, default_value_t = 0.5)]
        base: f64,
        /// Exponential delay rate, 1/seconds.
        #[arg(long, default_value_t = 2.0)]
        rate: f64,
        /// Seconds per multiply-add.
        #[arg(long = "per-op", default_value_t = 1e-6)]
        per_op: f64,
        /// Worker indices forced to straggle (0-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        stragglers: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Additionally compare the four-task, three-task and n-share schemes.
        #[arg(long = "compare-schemes", default_value_t = false)]
        compare: bool,
    },
    /// Run a named verification battery and print per-check residuals.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit codes differ; pin usage errors to 1.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Optimize { s, sd, q, n, format } => cmd_optimize(s, sd, q, n, format),
        Command::Sweep {
            s,
            q,
            n_list,
            sd_grid,
            out,
        } => cmd_sweep(s, q, n_list, &sd_grid, out),
        Command::Encode {
            input,
            n,
            sd,
            seed,
            outdir,
        } => cmd_encode(&input, n, sd, seed, &outdir),
        Command::Multiply {
            shares_a,
            shares_b,
            pick,
            out,
            check_extra,
        } => cmd_multiply(&shares_a, &shares_b, &pick, &out, check_extra),
        Command::Simulate {
            q,
            n,
            k,
            l,
            m,
            s,
            sd,
            seed,
            base,
            rate,
            per_op,
            stragglers,
            format,
            out,
            compare,
        } => {
            let config = SimConfig {
                field: PrimeField::new(q)?,
                n,
                rows: k,
                inner: l,
                cols: m,
                s_a: s,
                s_b: s,
                sd_a: sd,
                sd_b: sd,
                delay: DelayModel { base, rate, per_op },
                forced_stragglers: stragglers,
                seed,
            };
            cmd_simulate(&config, format, out, compare)
        }
        Command::Verify { suite } => cmd_verify(suite),
    }
}

const CURVE_CSV_HEADER: &str = "s_d,n,q,p1,p_star,leakage,relative_leakage";

fn curve_csv_row(p: &spfq::optimizer::TradeoffPoint) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_sig15(p.s_d),
        p.n,
        p.q,
        fmt_sig15(p.p1),
        fmt_sig15(p.p_star),
        fmt_sig15(p.leakage),
        fmt_sig15(p.relative_leakage)
    )
}

fn cmd_optimize(s: f64, sd: f64, q: u64, n: usize, format: Format) -> Result<u8> {
    let field = PrimeField::new(q)?;
    let point = tradeoff_point(s, sd, field, n)?;
    match format {
        Format::Csv => {
            println!("{CURVE_CSV_HEADER}");
            println!("{}", curve_csv_row(&point));
        }
        Format::Text => {
            println!("s={}", fmt_sig15(point.s));
            println!("s_d={}", fmt_sig15(point.s_d));
            println!("q={q}");
            println!("n={n}");
            println!("p1={}", fmt_sig15(point.p1));
            println!("p_star={}", fmt_sig15(point.p_star));
            println!("leakage={}", fmt_sig15(point.leakage));
            println!("relative_leakage={}", fmt_sig15(point.relative_leakage));
            println!(
                "entropy={}",
                fmt_sig15(q_entropy(&SourceModel::new(field, s)?))
            );
            println!("boundary={}", point.boundary);
        }
    }
    Ok(0)
}

/// Grid spec: either comma-separated values or lo:step:hi (inclusive).
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let invalid = spfq::Error::InvalidParameter;
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.len() {
        1 => spec
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| invalid(format!("bad grid value {v:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?,
        3 => {
            let lo: f64 = parts[0]
                .parse()
                .map_err(|e| invalid(format!("bad grid start {:?}: {e}", parts[0])))?;
            let step: f64 = parts[1]
                .parse()
                .map_err(|e| invalid(format!("bad grid step {:?}: {e}", parts[1])))?;
            let hi: f64 = parts[2]
                .parse()
                .map_err(|e| invalid(format!("bad grid end {:?}: {e}", parts[2])))?;
            if step <= 0.0 || hi < lo {
                return Err(invalid(format!("bad grid range {spec:?}")));
            }
            let mut grid = Vec::new();
            let mut i = 0u64;
            loop {
                let v = lo + i as f64 * step;
                if v > hi + step * 1e-9 {
                    break;
                }
                grid.push(v.min(hi));
                i += 1;
            }
            grid
        }
        _ => {
            return Err(invalid(format!(
                "grid must be values or lo:step:hi, got {spec:?}"
            )))
        }
    };
    if grid.is_empty() {
        return Err(invalid("empty sparsity grid".into()));
    }
    Ok(grid)
}

fn cmd_sweep(
    s: f64,
    q: u64,
    mut n_list: Vec<usize>,
    sd_grid: &str,
    out: Option<PathBuf>,
) -> Result<u8> {
    let field = PrimeField::new(q)?;
    let mut grid = parse_grid(sd_grid)?;
    n_list.sort_unstable();
    n_list.dedup();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut csv = String::from(CURVE_CSV_HEADER);
    csv.push('\n');
    for &n in &n_list {
        for point in sweep_tradeoff(s, field, n, &grid)? {
            csv.push_str(&curve_csv_row(&point));
            csv.push('\n');
        }
    }
    match out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_encode(input: &Path, n: usize, sd: f64, seed: u64, outdir: &Path) -> Result<u8> {
    let a = SparseMatrix::read_spfq(input)?;
    let field = a.field();
    let s = a.empirical_sparsity();
    if sd < 1.0 / field.modulus() as f64 {
        eprintln!(
            "warning: requested share sparsity {sd} is below 1/q = {}; \
shares will be denser than uniform padding",
            1.0 / field.modulus() as f64
        );
    }
    let pmf = spfq::optimizer::solve_optimal_pmf(s, sd, field, n)?;
    let params = ShareParams::first_n(field, n)?;
    let set = generate_share_set(&a, &pmf, &params, seed)?;
    write_share_set(&set, outdir)?;
    println!(
        "encoded {}x{} matrix (empirical sparsity {}) into {n} shares under {}",
        a.rows(),
        a.cols(),
        fmt_sig15(s),
        outdir.display()
    );
    Ok(0)
}

fn cmd_multiply(
    shares_a: &Path,
    shares_b: &Path,
    pick: &[usize],
    out: &Path,
    check_extra: bool,
) -> Result<u8> {
    let set_a = read_share_set(shares_a)?;
    let set_b = read_share_set(shares_b)?;
    set_a.params.field().check_same(&set_b.params.field())?;
    let mut picked: Vec<usize> = pick.to_vec();
    picked.sort_unstable();
    picked.dedup();
    if picked.len() < 3 {
        return Err(spfq::Error::NotEnoughEvaluations(picked.len()));
    }
    let mut evals = Vec::with_capacity(picked.len());
    for &index in &picked {
        if index == 0 || index > set_a.shares.len() || index > set_b.shares.len() {
            return Err(spfq::Error::InvalidParameter(format!(
                "share index {index} out of range (1..={})",
                set_a.shares.len().min(set_b.shares.len())
            )));
        }
        let (alpha_a, fa) = &set_a.shares[index - 1];
        let (alpha_b, gb) = &set_b.shares[index - 1];
        if alpha_a != alpha_b {
            return Err(spfq::Error::InvalidParameter(format!(
                "share {index} evaluates A at {alpha_a} but B at {alpha_b}"
            )));
        }
        evals.push(ProductEvaluation {
            alpha: *alpha_a,
            product: fa.sp_mul(gb)?,
        });
    }
    let c = reconstruct_product(&evals, check_extra)?;
    c.write_spfq(out)?;
    println!(
        "decoded {}x{} product from shares {:?} into {}",
        c.rows(),
        c.cols(),
        picked,
        out.display()
    );
    Ok(0)
}

fn cmd_simulate(
    config: &SimConfig,
    format: Format,
    out: Option<PathBuf>,
    compare: bool,
) -> Result<u8> {
    let report = run_simulation(config)?;
    let body = match format {
        Format::Text => report.text_block(),
        Format::Csv => format!("{}\n{}\n", SimReport::CSV_HEADER, report.csv_row()),
    };
    print!("{body}");
    if let Some(path) = out {
        fs::write(path, &body)?;
    }
    if compare {
        let [seed_a, seed_b, seed_cmp] = spfq::rng::derive_seeds(config.seed ^ 0x5eed);
        let model = SourceModel::new(config.field, config.s_a)?;
        let a = spfq::spmat::sample_source_matrix(&model, config.rows, config.inner, seed_a)?;
        let b = spfq::spmat::sample_source_matrix(&model, config.inner, config.cols, seed_b)?;
        let cmp = compare_schemes(&a, &b, config.sd_a, config.n, seed_cmp)?;
        print!("{}", cmp.text_table());
    }
    Ok(0)
}

fn print_checks(rows: &[Check]) {
    for c in rows {
        let status = if !c.hard {
            "INFO"
        } else if c.pass {
            "PASS"
        } else {
            "FAIL"
        };
        if c.hard {
            println!(
                "{status} {} (residual {:.3e}, tolerance {:.1e})",
                c.name, c.residual, c.tolerance
            );
        } else {
            println!("{status} {} (residual {:.3e})", c.name, c.residual);
        }
    }
}

fn cmd_verify(suite: Suite) -> Result<u8> {
    let rows = match suite {
        Suite::Oracle => checks::oracle_suite()?,
        Suite::Lemma1 => checks::equal_split_suite()?,
        Suite::Stationarity => checks::stationarity_suite()?,
        Suite::Figure1 => checks::reference_curve_suite()?,
    };
    print_checks(&rows);
    if checks::suite_passes(&rows) {
        println!("all checks passed");
        Ok(0)
    } else {
        println!("verification failed");
        Ok(3)
    }
}
