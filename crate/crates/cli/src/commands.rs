//! The `refine`, `bench` and `gen` subcommands.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use schur_core::matrix::frobenius_norm;
use schur_core::orthogonalize::OrthoStrategy;
use schur_core::refine::{
    refine_mixed, refine_symmetric, refine_template, verify_pair, RefineConfig, RefineStatus,
};
use schur_core::schur::{order_by_random_line, qr_schur_lp, reorder_schur};
use schur_core::HpMatrix;
use serde::{Deserialize, Serialize};

use crate::gen::ClusterParams;
use crate::mm::write_matrix_market;
use crate::record::{MatrixKind, MatrixSpec, RunRecord, SCHEMA_VERSION};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Complex standard normal entries.
    Randn,
    /// Real standard normal entries.
    RandnReal,
    /// Companion matrix of prod (x - i), i = 1..n.
    Wilkinson,
    /// X D X^-1 with clustered eigenvalues.
    Clustered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrthoArg {
    /// Newton-Schulz (merged update).
    Ns,
    /// Householder QR retraction.
    Qr,
}

/// Where the input matrix comes from.
#[derive(Clone, Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, value_enum, default_value = "randn")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix Market file; overrides --kind and --n.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Number of eigenvalue clusters (clustered kind).
    #[arg(long, default_value_t = 2)]
    pub clusters: usize,
    /// Eigenvalues per cluster (clustered kind).
    #[arg(long, default_value_t = 10)]
    pub cluster_size: usize,
    /// Maximum distance of cluster members from their center.
    #[arg(long, default_value_t = 1e-5)]
    pub radius: f64,
    /// 2-norm condition number of the eigenvector matrix.
    #[arg(long, default_value_t = 1e5)]
    pub cond: f64,
}

impl MatrixArgs {
    pub fn spec(&self) -> MatrixSpec {
        let kind = match (&self.file, self.kind) {
            (Some(_), _) => MatrixKind::FromFile,
            (None, KindArg::Randn) => MatrixKind::RandnComplex,
            (None, KindArg::RandnReal) => MatrixKind::RandnReal,
            (None, KindArg::Wilkinson) => MatrixKind::WilkinsonCompanion,
            (None, KindArg::Clustered) => MatrixKind::Clustered,
        };
        let cluster = (kind == MatrixKind::Clustered).then_some(ClusterParams {
            cluster_count: self.clusters,
            cluster_size: self.cluster_size,
            cluster_radius: self.radius,
            cond_x: self.cond,
        });
        MatrixSpec {
            kind,
            n: if self.file.is_some() { 0 } else { self.n },
            seed: self.seed,
            cluster,
            path: self.file.clone(),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Zero entries of L above this magnitude as they are computed.
    #[arg(long)]
    pub clip: Option<f64>,
    /// Recursion cutoff of the blocked triangular solver.
    #[arg(long, default_value_t = schur_core::trisolve::DEFAULT_N_MIN)]
    pub nmin: usize,
    #[arg(long, default_value_t = 20)]
    pub max_iters: usize,
    /// Use the Hermitian driver (diagonal T).
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, value_enum, default_value = "ns")]
    pub ortho: OrthoArg,
    /// Converged once ||E||_F <= tol_factor * n * u_hp * ||A||_F and the last
    /// correction had ||W||_F <= sqrt(u_hp).
    #[arg(long, default_value_t = 10.0)]
    pub tol_factor: f64,
    /// Append the run record to this file instead of printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RefineArgs {
    pub fn config(&self) -> RefineConfig {
        RefineConfig {
            tol_factor: self.tol_factor,
            max_iters: self.max_iters,
            n_min: self.nmin,
            clip_threshold: self.clip,
            ortho: match self.ortho {
                OrthoArg::Ns => OrthoStrategy::NewtonSchulz,
                OrthoArg::Qr => OrthoStrategy::QrRetraction,
            },
            seed: self.matrix.seed,
            ..RefineConfig::default()
        }
    }
}

/// Binary64 Schur decomposition, random-line ordering, then the generic
/// driver with the configured orthogonalization.
fn refine_via_template(a: &HpMatrix, cfg: &RefineConfig) -> Result<RefineOutput, CliError> {
    let start = Instant::now();
    let lp = qr_schur_lp(&a.to_lp())?;
    let (order, theta) = order_by_random_line(&lp.t.diag(), cfg.seed);
    let lp = reorder_schur(lp, &order)?;
    let (pair, mut report) = refine_template(a, &lp.q.to_hp(), cfg)?;
    report.theta = Some(theta);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((pair, report))
}

type RefineOutput = (
    schur_core::schur::SchurPair<schur_core::DDComplex>,
    schur_core::refine::RefineReport,
);

/// Builds the matrix, runs the selected driver and verifies the result.
pub fn run_refine(args: &RefineArgs) -> Result<RunRecord, CliError> {
    let mut spec = args.matrix.spec();
    let a = spec.build()?;
    let config = args.config();
    let (pair, report) = if args.symmetric {
        refine_symmetric(&a, &config)?
    } else if config.ortho == OrthoStrategy::QrRetraction {
        refine_via_template(&a, &config)?
    } else {
        refine_mixed(&a, &config)?
    };
    let residuals = verify_pair(&a, &pair)?;
    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        spec,
        symmetric: args.symmetric,
        config,
        report,
        residuals,
    })
}

pub fn status_exit_code(status: RefineStatus) -> i32 {
    match status {
        RefineStatus::Converged => EXIT_OK,
        RefineStatus::MaxIters | RefineStatus::Diverged | RefineStatus::NonFinite => {
            EXIT_NOT_CONVERGED
        }
    }
}

fn append_line(path: &Path, line: &str) -> Result<(), CliError> {
    let io = |e| CliError::Io(path.display().to_string(), e);
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io)?;
    writeln!(f, "{line}").map_err(io)
}

/// `refine`: writes one record and returns the process exit code.
pub fn cmd_refine(args: &RefineArgs, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let rec = match run_refine(args) {
        Ok(rec) => rec,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let r = &rec.report;
    let _ = writeln!(
        stderr,
        "{:?} after {} iteration(s): hp products {}, ||Q^H Q - I|| = {:.3e}, ||stril(Q^H A Q)|| = {:.3e}, clipped {}",
        r.status, r.iterations, r.hp_matmul_count, rec.residuals.ortho, rec.residuals.tri, r.clipped_total
    );
    if let Some(hint) = &r.hint {
        let _ = writeln!(stderr, "hint: {hint}");
    }
    let line = rec.to_line();
    match &args.out {
        Some(path) => {
            if let Err(e) = append_line(path, &line) {
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
        }
        None => {
            let _ = writeln!(stdout, "{line}");
        }
    }
    status_exit_code(r.status)
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the products (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Append one JSON line per size to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One size of `bench`, on a complex standard normal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub status: RefineStatus,
    pub iterations: usize,
    pub hp_matmul_count: usize,
    pub wall_time: f64,
    pub hp_matmul_time: f64,
    /// Double-double product time spent on the orthogonality residuals.
    pub diagnostic_time: f64,
    /// Share of the wall time spent in double-double products:
    /// `(hp_matmul_time + diagnostic_time) / wall_time`.
    pub hp_fraction: f64,
    pub ortho: f64,
    /// `||stril(Q^H A Q)||_F / ||A||_F`.
    pub tri_relative: f64,
}

pub fn run_bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let rows = || -> Result<Vec<BenchRow>, CliError> {
        args.sizes
            .iter()
            .map(|&n| {
                let a = crate::gen::gen_randn_complex(n, args.seed);
                let cfg = RefineConfig {
                    seed: args.seed,
                    ..RefineConfig::default()
                };
                let (pair, r) = refine_mixed(&a, &cfg)?;
                let res = verify_pair(&a, &pair)?;
                let a_norm = frobenius_norm(&a).to_f64();
                Ok(BenchRow {
                    n,
                    status: r.status,
                    iterations: r.iterations,
                    hp_matmul_count: r.hp_matmul_count,
                    wall_time: r.wall_time,
                    hp_matmul_time: r.hp_matmul_time,
                    diagnostic_time: r.diagnostic_time,
                    hp_fraction: if r.wall_time > 0.0 {
                        (r.hp_matmul_time + r.diagnostic_time) / r.wall_time
                    } else {
                        0.0
                    },
                    ortho: res.ortho,
                    tri_relative: if a_norm > 0.0 { res.tri / a_norm } else { 0.0 },
                })
            })
            .collect()
    };
    match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::InvalidSpec(format!("thread pool: {e}")))?
            .install(rows),
        None => rows(),
    }
}

/// `bench`: prints a table and optionally writes JSON lines.
pub fn cmd_bench(args: &BenchArgs, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let rows = match run_bench(args) {
        Ok(rows) => rows,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let _ = writeln!(
        stdout,
        "{:>6} {:>10} {:>5} {:>6} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10}",
        "n",
        "status",
        "iter",
        "hp-mm",
        "wall[s]",
        "hp-mm[s]",
        "diag[s]",
        "hp-frac",
        "ortho",
        "tri/|A|"
    );
    for r in &rows {
        let _ = writeln!(
            stdout,
            "{:>6} {:>10} {:>5} {:>6} {:>10.3} {:>10.3} {:>10.3} {:>8.3} {:>10.2e} {:>10.2e}",
            r.n,
            format!("{:?}", r.status),
            r.iterations,
            r.hp_matmul_count,
            r.wall_time,
            r.hp_matmul_time,
            r.diagnostic_time,
            r.hp_fraction,
            r.ortho,
            r.tri_relative
        );
    }
    if let Some(path) = &args.out {
        for r in &rows {
            let line = serde_json::to_string(r).expect("bench rows are serializable");
            if let Err(e) = append_line(path, &line) {
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
        }
    }
    if rows.iter().all(|r| r.status == RefineStatus::Converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

#[derive(Clone, Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Output Matrix Market file.
    #[arg(long)]
    pub out: PathBuf,
}

/// `gen`: writes a generated matrix in Matrix Market array format.
pub fn cmd_gen(args: &GenArgs, stderr: &mut impl Write) -> i32 {
    let result = args
        .matrix
        .spec()
        .build()
        .and_then(|a| write_matrix_market(&args.out, &a));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
