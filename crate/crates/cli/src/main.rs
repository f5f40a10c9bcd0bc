//! Command-line frontend: read pencils from files, run any extraction method
//! end to end, and emit machine-readable results or paper-style tables.

use singpencil_cli::{inputs, mtx, report};

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use singpencil::apps;
use singpencil::classify::{extract_finite, ClassifierConfig};
use singpencil::kcf;
use singpencil::nrank::{diagnose_rank, estimate_normal_rank, RankVerdict};
use singpencil::pencil::to_tall;
use singpencil::sampling::rng_from_seed;
use singpencil::solvers::{run_method, Method, SolverConfig};
use singpencil::Pencil;

#[derive(Parser)]
#[command(name = "singpencil", version, about = "Regular eigenvalues of singular matrix pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Project,
    ProjectPerm,
    Augment,
    AugmentSimple,
    Perturb,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Project => Method::Project,
            MethodArg::ProjectPerm => Method::ProjectPermutation,
            MethodArg::Augment => Method::Augment,
            MethodArg::AugmentSimple => Method::AugmentSimple,
            MethodArg::Perturb => Method::Perturb,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct CommonOpts {
    /// Random seed for all sampled matrices.
    #[arg(long, env = "SINGPENCIL_SEED", default_value_t = 1)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ThresholdOpts {
    /// Residual threshold for the true-eigenvalue test (default eps^(1/2)).
    #[arg(long)]
    delta: Option<f64>,
    /// Classifier: gamma bound of the large-gap criterion (default eps^(1/2)).
    #[arg(long)]
    delta1: Option<f64>,
    /// Classifier: gamma bound of the near-zero criterion (default 100 eps).
    #[arg(long)]
    delta2: Option<f64>,
    /// Classifier: gap bound of the large-gap criterion.
    #[arg(long, default_value_t = 0.95)]
    xi1: f64,
    /// Classifier: gap bound of the near-zero criterion.
    #[arg(long, default_value_t = 0.01)]
    xi2: f64,
}

impl ThresholdOpts {
    fn classifier(&self) -> ClassifierConfig {
        let mut cfg = ClassifierConfig::default();
        if let Some(d1) = self.delta1 {
            cfg.delta1 = d1;
        }
        if let Some(d2) = self.delta2 {
            cfg.delta2 = d2;
        }
        cfg.xi1 = self.xi1;
        cfg.xi2 = self.xi2;
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract and classify the regular eigenvalues of a pencil.
    Solve {
        /// Matrix Market file for A.
        a: PathBuf,
        /// Matrix Market file for B.
        b: PathBuf,
        /// Extraction method.
        #[arg(long, value_enum, default_value_t = MethodArg::Project)]
        method: MethodArg,
        /// Normal rank: a number, or "auto" to estimate it.
        #[arg(long, default_value = "auto")]
        nrank: String,
        /// Rank-estimation trials.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Perturbation strength for the perturbation method.
        #[arg(long, default_value_t = 1e-2)]
        tau: f64,
        /// Retain eigenvectors in memory during the solve.
        #[arg(long)]
        keep_vectors: bool,
        /// Regular-part size, when known; sharpens the overestimate check.
        #[arg(long)]
        expected_regular: Option<usize>,
        /// Zero out the timing block for byte-reproducible output.
        #[arg(long)]
        zero_timings: bool,
        #[command(flatten)]
        thresholds: ThresholdOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Estimate the normal rank of a pencil.
    Nrank {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a pencil with prescribed Kronecker structure.
    GenKcf {
        /// JSON structure description.
        spec: PathBuf,
        /// Output directory for A.mtx, B.mtx, truth.json.
        #[arg(short, long)]
        out: PathBuf,
        /// Use complex Gaussian disguise transforms instead of real ones.
        #[arg(long)]
        complex: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Roots of a bivariate polynomial system given by a determinantal
    /// representation.
    Poly2 {
        /// JSON file with the six representation blocks.
        rep: PathBuf,
        #[command(flatten)]
        thresholds: ThresholdOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Values lambda where A + lambda B has a double eigenvalue.
    DoubleEig {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Transmission zeros of a state-space system.
    Tzeros {
        /// JSON file with matrices a, b, c, d.
        sys: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve {
            a,
            b,
            method,
            nrank,
            trials,
            tau,
            keep_vectors,
            expected_regular,
            zero_timings,
            thresholds,
            common,
        } => cmd_solve(
            &a,
            &b,
            method.into(),
            &nrank,
            trials,
            tau,
            keep_vectors,
            expected_regular,
            zero_timings,
            &thresholds,
            &common,
        ),
        Command::Nrank { a, b, trials, common } => cmd_nrank(&a, &b, trials, &common),
        Command::GenKcf {
            spec,
            out,
            complex,
            common,
        } => cmd_gen_kcf(&spec, &out, complex, &common),
        Command::Poly2 {
            rep,
            thresholds,
            common,
        } => cmd_poly2(&rep, &thresholds, &common),
        Command::DoubleEig { a, b, common } => cmd_double_eig(&a, &b, &common),
        Command::Tzeros { sys, common } => cmd_tzeros(&sys, &common),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    a_path: &std::path::Path,
    b_path: &std::path::Path,
    method: Method,
    nrank_arg: &str,
    trials: usize,
    tau: f64,
    keep_vectors: bool,
    expected_regular: Option<usize>,
    zero_timings: bool,
    thresholds: &ThresholdOpts,
    common: &CommonOpts,
) -> Result<ExitCode> {
    let t_start = Instant::now();
    let a = mtx::read_matrix(a_path)?;
    let b = mtx::read_matrix(b_path)?;
    let pencil = Pencil::new(a, b)?;
    let (n_orig, m_orig) = (pencil.nrows(), pencil.ncols());
    let (tall, transposed) = to_tall(&pencil);
    let t_load = t_start.elapsed();

    let mut rng = rng_from_seed(common.seed);
    let t_rank = Instant::now();
    let (nrank, nrank_source) = if nrank_arg == "auto" {
        (estimate_normal_rank(&tall, trials, &mut rng).nrank, "estimated")
    } else {
        let v: usize = nrank_arg
            .parse()
            .map_err(|_| anyhow!("--nrank takes a number or \"auto\""))?;
        if v > tall.ncols() {
            bail!("normal rank {v} exceeds the pencil width {}", tall.ncols());
        }
        (v, "override")
    };
    let t_rank = t_rank.elapsed();
    let k = tall
        .nrows()
        .checked_sub(nrank)
        .ok_or_else(|| anyhow!("normal rank {nrank} exceeds the row count"))?;

    let mut cfg = SolverConfig {
        method,
        tau,
        seed: common.seed,
        keep_vectors,
        ..SolverConfig::default()
    };
    if let Some(d) = thresholds.delta {
        cfg.delta = d;
    }
    let t_solve = Instant::now();
    let mut spectrum = run_method(&tall, k, &cfg, &mut rng)?;
    if transposed {
        spectrum.conjugate_transpose_back();
    }
    let t_solve = t_solve.elapsed();

    let t_classify = Instant::now();
    let classifier = thresholds.classifier();
    classifier.validate()?;
    let fin = extract_finite(&spectrum.true_gamma_pairs(), &classifier);
    let diagnosis = diagnose_rank(&spectrum, k, expected_regular);
    let t_classify = t_classify.elapsed();

    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let timings = if zero_timings {
        report::Timings {
            load: 0.0,
            nrank: 0.0,
            solve: 0.0,
            classify: 0.0,
            total: 0.0,
        }
    } else {
        report::Timings {
            load: ms(t_load),
            nrank: ms(t_rank),
            solve: ms(t_solve),
            classify: ms(t_classify),
            total: ms(t_start.elapsed()),
        }
    };
    let report = report::build_report(
        &spectrum,
        &fin,
        &diagnosis,
        n_orig,
        m_orig,
        nrank_source,
        timings,
    );
    print_report(&report, common.format)?;
    Ok(match diagnosis.verdict {
        RankVerdict::Consistent => ExitCode::from(0),
        RankVerdict::LikelyUnderestimate => ExitCode::from(2),
        RankVerdict::PossibleOverestimate => ExitCode::from(3),
    })
}

fn print_report(r: &report::RunReport, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(r)?),
        Format::Table => print!("{}", report::render_table(r)),
        Format::Csv => print!("{}", report::render_csv(r)),
    }
    Ok(())
}

fn cmd_nrank(
    a_path: &std::path::Path,
    b_path: &std::path::Path,
    trials: usize,
    common: &CommonOpts,
) -> Result<ExitCode> {
    let a = mtx::read_matrix(a_path)?;
    let b = mtx::read_matrix(b_path)?;
    let pencil = Pencil::new(a, b)?;
    let mut rng = rng_from_seed(common.seed);
    let est = estimate_normal_rank(&pencil, trials, &mut rng);

    #[derive(Serialize)]
    struct NrankOut {
        nrank: usize,
        trials: usize,
        per_trial_ranks: Vec<usize>,
        sample_points: Vec<report::FiniteRow>,
    }
    let out = NrankOut {
        nrank: est.nrank,
        trials: est.trials,
        per_trial_ranks: est.per_trial_ranks.clone(),
        sample_points: est
            .sample_points
            .iter()
            .map(|e| report::FiniteRow { re: e.re, im: e.im })
            .collect(),
    };
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        _ => {
            println!("nrank {}", est.nrank);
            for (i, r) in est.per_trial_ranks.iter().enumerate() {
                println!("trial {}: rank {} at eta = {}", i + 1, r, est.sample_points[i]);
            }
        }
    }
    Ok(ExitCode::from(0))
}

fn cmd_gen_kcf(
    spec_path: &std::path::Path,
    out_dir: &std::path::Path,
    complex: bool,
    common: &CommonOpts,
) -> Result<ExitCode> {
    let text = std::fs::read_to_string(spec_path)
        .with_context(|| format!("cannot read {}", spec_path.display()))?;
    let spec_json: inputs::KcfSpecJson = serde_json::from_str(&text)?;
    let spec = spec_json.to_spec();
    let mut rng = rng_from_seed(common.seed);
    let generated = kcf::generate_with(&spec, &mut rng, complex)?;

    std::fs::create_dir_all(out_dir)?;
    mtx::write_matrix(&out_dir.join("A.mtx"), generated.pencil.a())?;
    mtx::write_matrix(&out_dir.join("B.mtx"), generated.pencil.b())?;

    #[derive(Serialize)]
    struct TruthEigen {
        re: f64,
        im: f64,
        infinite: bool,
        multiplicity: usize,
    }
    #[derive(Serialize)]
    struct Truth {
        n: usize,
        m: usize,
        nrank: usize,
        regular_size: usize,
        true_eigenvalues: Vec<TruthEigen>,
        spec: inputs::KcfSpecJson,
    }
    let truth = Truth {
        n: generated.pencil.nrows(),
        m: generated.pencil.ncols(),
        nrank: generated.nrank,
        regular_size: spec.regular_size(),
        true_eigenvalues: generated
            .true_eigenvalues
            .iter()
            .map(|(v, mult)| {
                let inf = v.is_exactly_infinite();
                let l = if inf {
                    num_complex::Complex64::ZERO
                } else {
                    v.lambda()
                };
                TruthEigen {
                    re: l.re,
                    im: l.im,
                    infinite: inf,
                    multiplicity: *mult,
                }
            })
            .collect(),
        spec: spec_json,
    };
    std::fs::write(
        out_dir.join("truth.json"),
        serde_json::to_string_pretty(&truth)?,
    )?;
    println!(
        "wrote {}x{} pencil with normal rank {} to {}",
        truth.n,
        truth.m,
        truth.nrank,
        out_dir.display()
    );
    Ok(ExitCode::from(0))
}

fn cmd_poly2(
    rep_path: &std::path::Path,
    thresholds: &ThresholdOpts,
    common: &CommonOpts,
) -> Result<ExitCode> {
    let text = std::fs::read_to_string(rep_path)
        .with_context(|| format!("cannot read {}", rep_path.display()))?;
    let rep_json: inputs::RepJson = serde_json::from_str(&text)?;
    let rep = rep_json.to_rep()?;
    let mut cfg = SolverConfig {
        seed: common.seed,
        ..SolverConfig::default()
    };
    if let Some(d) = thresholds.delta {
        cfg.delta = d;
    }
    let mut rng = rng_from_seed(common.seed);
    let roots = apps::solve_bivariate_lambda(&rep, &cfg, &mut rng)?;

    #[derive(Serialize)]
    struct RootOut {
        lambda: report::FiniteRow,
        mu: report::FiniteRow,
        residuals: [f64; 2],
    }
    #[derive(Serialize)]
    struct PolyOut {
        count: usize,
        roots: Vec<RootOut>,
    }
    let out = PolyOut {
        count: roots.len(),
        roots: roots
            .iter()
            .map(|r| RootOut {
                lambda: report::FiniteRow {
                    re: r.lambda.re,
                    im: r.lambda.im,
                },
                mu: report::FiniteRow {
                    re: r.mu.re,
                    im: r.mu.im,
                },
                residuals: [r.residuals.0, r.residuals.1],
            })
            .collect(),
    };
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        _ => {
            for r in &roots {
                println!(
                    "lambda = {:.7}{:+.7}i  mu = {:.7}{:+.7}i  residuals {:.2e} {:.2e}",
                    r.lambda.re, r.lambda.im, r.mu.re, r.mu.im, r.residuals.0, r.residuals.1
                );
            }
            println!("{} roots", roots.len());
        }
    }
    Ok(ExitCode::from(0))
}

fn cmd_double_eig(
    a_path: &std::path::Path,
    b_path: &std::path::Path,
    common: &CommonOpts,
) -> Result<ExitCode> {
    let a = mtx::read_matrix(a_path)?;
    let b = mtx::read_matrix(b_path)?;
    let cfg = SolverConfig {
        seed: common.seed,
        ..SolverConfig::default()
    };
    let mut rng = rng_from_seed(common.seed);
    let lams = apps::find_double_eigs(&a, &b, &cfg, &mut rng)?;

    #[derive(Serialize)]
    struct DoubleOut {
        count: usize,
        lambdas: Vec<report::FiniteRow>,
    }
    let out = DoubleOut {
        count: lams.len(),
        lambdas: lams
            .iter()
            .map(|l| report::FiniteRow { re: l.re, im: l.im })
            .collect(),
    };
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        _ => {
            for l in &lams {
                println!("{:.10}{:+.10}i", l.re, l.im);
            }
            println!("{} values", lams.len());
        }
    }
    Ok(ExitCode::from(0))
}

fn cmd_tzeros(sys_path: &std::path::Path, common: &CommonOpts) -> Result<ExitCode> {
    let text = std::fs::read_to_string(sys_path)
        .with_context(|| format!("cannot read {}", sys_path.display()))?;
    let sys: inputs::SystemJson = serde_json::from_str(&text)?;
    let (a, b, c, d) = sys.to_matrices()?;
    let cfg = SolverConfig {
        seed: common.seed,
        ..SolverConfig::default()
    };
    let mut rng = rng_from_seed(common.seed);
    let zeros = apps::transmission_zeros(&a, &b, &c, &d, &cfg, &mut rng)?;

    #[derive(Serialize)]
    struct TzOut {
        count: usize,
        zeros: Vec<report::FiniteRow>,
    }
    let out = TzOut {
        count: zeros.len(),
        zeros: zeros
            .iter()
            .map(|z| report::FiniteRow { re: z.re, im: z.im })
            .collect(),
    };
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        _ => {
            for z in &zeros {
                println!("{:.10}{:+.10}i", z.re, z.im);
            }
            println!("{} zeros", zeros.len());
        }
    }
    Ok(ExitCode::from(0))
}
