//! `slpencil`: direct and inverse spectral problems for Sturm–Liouville
//! operators with eigenparameter-dependent boundary conditions.
//!
//! Exit codes: 0 success, 2 bad input or domain error, 3 convergence failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use slpencil::chain::Chain;
use slpencil::inverse::{inverse_report, reduction_depth, Basis, InverseConfig, Reduction};
use slpencil::io::{spectral_from_json, spectral_to_json, ProblemFile};
use slpencil::metrics::{lipschitz_experiment, Direction, MetricConfig, Sampler};
use slpencil::study::finite_study;
use slpencil::{complete_finite_data, Error, SpectralData};

#[derive(Parser)]
#[command(name = "slpencil", version, about = "Sturm–Liouville spectral problems with eigenparameter-dependent boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Input file (problem TOML, spectral JSON or experiment TOML)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Number of eigenpairs
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Smoothness index of the metrics
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cells of the uniform grid on [0, π]
    #[arg(long, global = true)]
    grid_size: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and norming constants of a problem file
    Direct,
    /// Reconstruct a problem from spectral data
    Inverse(InverseArgs),
    /// Apply a chain of transforms such as "T- T+(auto)"
    Transform(TransformArgs),
    /// Distance to the truth when inverting from the first m pairs
    FiniteStudy(StudyArgs),
    /// Sampled Lipschitz ratios of the direct map
    Stability(StabilityArgs),
}

#[derive(Args)]
struct InverseArgs {
    /// Treat the pairs as the first m of an infinite sequence and complete the rest
    #[arg(long)]
    finite: bool,
    #[arg(long)]
    n_data: Option<usize>,
    #[arg(long)]
    base_k: Option<usize>,
    /// Iteration cap of each least-squares fit
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    /// Skip the final refit of (σ, f, F) against all pairs
    #[arg(long)]
    no_polish: bool,
    /// Where to write the residual report (JSON); stderr when absent
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Cosine,
    Chebyshev,
}

#[derive(Args)]
struct TransformArgs {
    /// Whitespace-separated steps: T-, T+(mu,nu), T+(auto), T-+, T+-
    #[arg(long)]
    chain: String,
    /// Also run the chain on the spectral data and compare
    #[arg(long)]
    data: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    /// Comma-separated numbers of known pairs
    #[arg(long, value_delimiter = ',')]
    ms: Option<Vec<usize>>,
    /// Exponent of the stronger norm; --alpha sets the measured one
    #[arg(long)]
    alpha2: Option<f64>,
    /// Comma-separated noise levels
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    n_data: Option<usize>,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i32>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Direct,
    Inverse,
}

/// Experiment file for `stability`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilityFile {
    pairs: Option<usize>,
    direction: Option<Direction>,
    #[serde(default)]
    metrics: Option<MetricConfig>,
    #[serde(default)]
    sampler: SamplerSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplerSection {
    m: Option<i32>,
    n: Option<i32>,
    sigma_ranges: Option<Vec<(f64, f64)>>,
    h_range: Option<(f64, f64)>,
    max_attempts: Option<usize>,
}

#[derive(Serialize)]
struct FitSummary {
    residual: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct InverseSummary {
    #[serde(rename = "M")]
    m: i32,
    #[serde(rename = "N")]
    n: i32,
    pairs_used: usize,
    completed_from: Option<usize>,
    pops: usize,
    swaps: usize,
    steps: Vec<String>,
    levels: Vec<(i32, i32, f64)>,
    base_fit: FitSummary,
    polish_fit: Option<FitSummary>,
    max_lambda_error: f64,
    max_gamma_error: f64,
}

#[derive(Serialize)]
struct TransformSummary {
    chain: String,
    indices_before: (i32, i32),
    indices_after: (i32, i32),
    compared_pairs: Option<usize>,
    max_lambda_error: Option<f64>,
    max_gamma_error: Option<f64>,
}

struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: Option<&Path>) -> Result<String, Failure> {
    let path = path.ok_or_else(|| Error::Parse("--input is required".into()))?;
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn write(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(path: Option<&Path>, value: &impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))? + "\n";
    match path {
        Some(_) => write(path, &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn load_problem(common: &Common) -> Result<(ProblemFile, slpencil::Problem), Failure> {
    let file = ProblemFile::parse(&read(common.input.as_deref())?)?;
    let p = file.problem(common.grid_size)?;
    Ok((file, p))
}

fn cmd_direct(common: &Common) -> CmdResult {
    let (file, p) = load_problem(common)?;
    let n = common.n_max.or(file.solver.n_max).unwrap_or(20);
    let data = p.spectral_data(n)?;
    write(common.output.as_deref(), &(spectral_to_json(&data)? + "\n"))
}

fn relative_errors(a: &SpectralData, b: &SpectralData, count: usize) -> (f64, f64) {
    let lam = (0..count)
        .map(|i| (a.lambda[i] - b.lambda[i]).abs() / (1.0 + b.lambda[i].abs()))
        .fold(0.0, f64::max);
    let gam = (0..count)
        .map(|i| (a.gamma[i] - b.gamma[i]).abs() / b.gamma[i].abs())
        .fold(0.0, f64::max);
    (lam, gam)
}

fn cmd_inverse(common: &Common, args: &InverseArgs) -> CmdResult {
    let data = spectral_from_json(&read(common.input.as_deref())?)?;
    let mut cfg = InverseConfig::default();
    if let Some(n) = args.n_data.or(common.n_max) {
        cfg.n_data = n;
    }
    if let Some(k) = args.base_k {
        cfg.base_k = k;
    }
    if let Some(i) = args.max_iter {
        cfg.max_iter = i;
    }
    if let Some(b) = args.basis {
        cfg.basis = match b {
            BasisArg::Cosine => Basis::Cosine,
            BasisArg::Chebyshev => Basis::Chebyshev,
        };
    }
    if let Some(g) = common.grid_size {
        cfg.grid_size = g;
    }
    cfg.polish = !args.no_polish;
    let (pops, _) = reduction_depth(data.m, data.n)?;
    let (input, completed_from) = if args.finite {
        let full = complete_finite_data(&data.lambda, &data.gamma, data.m, data.n, cfg.n_data + pops);
        (full, Some(data.len()))
    } else {
        (data, None)
    };
    let r = inverse_report(&input, &cfg)?;
    let summary = InverseSummary {
        m: input.m,
        n: input.n,
        pairs_used: r.checked,
        completed_from,
        pops: r.pops(),
        swaps: r.swaps(),
        steps: r
            .steps
            .iter()
            .map(|s| match s {
                Reduction::Pop { lambda, gamma } => format!("pop({lambda:.17e}, {gamma:.17e})"),
                Reduction::RaiseF => "swap f←F".into(),
                Reduction::RaiseBigF => "swap f→F".into(),
            })
            .collect(),
        levels: r.levels.clone(),
        base_fit: FitSummary {
            residual: r.base.residual,
            iterations: r.base.iterations,
        },
        polish_fit: r.polished.as_ref().map(|f| FitSummary {
            residual: f.residual,
            iterations: f.iterations,
        }),
        max_lambda_error: r.max_lambda_error,
        max_gamma_error: r.max_gamma_error,
    };
    write(common.output.as_deref(), &ProblemFile::from_problem(&r.problem).to_toml()?)?;
    report(args.report.as_deref(), &summary)
}

fn cmd_transform(common: &Common, args: &TransformArgs) -> CmdResult {
    let chain: Chain = args.chain.parse()?;
    let (_, p) = load_problem(common)?;
    let out = chain.apply(&p)?;
    let mut summary = TransformSummary {
        chain: args.chain.clone(),
        indices_before: p.indices(),
        indices_after: out.indices(),
        compared_pairs: None,
        max_lambda_error: None,
        max_gamma_error: None,
    };
    if args.data {
        let count = common.n_max.unwrap_or(10);
        let removed = chain.0.iter().filter(|s| matches!(s, slpencil::chain::Step::Minus)).count();
        let predicted = chain.apply_data(&p.spectral_data(count + removed)?)?;
        let actual = out.spectral_data(count)?;
        let (l, g) = relative_errors(&actual, &predicted, count);
        summary.compared_pairs = Some(count);
        summary.max_lambda_error = Some(l);
        summary.max_gamma_error = Some(g);
    }
    write(common.output.as_deref(), &ProblemFile::from_problem(&out).to_toml()?)?;
    report(args.report.as_deref(), &summary)
}

fn cmd_finite_study(common: &Common, args: &StudyArgs) -> CmdResult {
    let (file, p) = load_problem(common)?;
    let mut cfg = file.study.clone().unwrap_or_default();
    if let Some(ms) = &args.ms {
        cfg.ms = ms.clone();
    }
    if let Some(a) = common.alpha {
        cfg.alpha1 = a;
    }
    if let Some(a) = args.alpha2 {
        cfg.alpha2 = a;
    }
    if let Some(e) = &args.eps {
        cfg.eps = e.clone();
    }
    if let Some(d) = args.draws {
        cfg.draws = d;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.n_data {
        cfg.inverse.n_data = n;
    }
    if let Some(g) = common.grid_size {
        cfg.inverse.grid_size = g;
    }
    let r = finite_study(&p, &cfg)?;
    write(common.output.as_deref(), &r.to_csv())?;
    for c in &r.cells {
        eprintln!("m = {:>3}  eps = {:.1e}  d_max = {:.6e}  runs = {}", c.m, c.eps, c.d_max, c.runs);
    }
    match r.slope {
        Some(s) => eprintln!("log-log slope {s:.4} (theory {:.4})", r.theoretical_slope),
        None => eprintln!("log-log slope not available (theory {:.4})", r.theoretical_slope),
    }
    Ok(())
}

fn cmd_stability(common: &Common, args: &StabilityArgs) -> CmdResult {
    let file: StabilityFile = match &common.input {
        Some(path) => toml::from_str(&read(Some(path))?).map_err(|e| Error::Parse(e.to_string()))?,
        None => StabilityFile::default(),
    };
    let mut cfg = file.metrics.unwrap_or_default();
    if let Some(a) = common.alpha {
        cfg.alpha = a;
    }
    if let Some(n) = common.n_max {
        cfg.n_max = n;
    }
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    let s = &file.sampler;
    let mut sampler = Sampler::new(
        args.m.or(s.m).unwrap_or(0),
        args.n.or(s.n).unwrap_or(0),
        cfg.alpha,
        cfg.q,
        cfg.delta,
    );
    if let Some(r) = &s.sigma_ranges {
        sampler.sigma_ranges = r.clone();
    }
    if let Some(h) = s.h_range {
        sampler.h_range = h;
    }
    if let Some(a) = s.max_attempts {
        sampler.max_attempts = a;
    }
    if let Some(g) = common.grid_size {
        sampler.grid_size = g;
    }
    let direction = match args.direction {
        Some(DirectionArg::Direct) => Direction::Direct,
        Some(DirectionArg::Inverse) => Direction::Inverse,
        None => file.direction.unwrap_or(Direction::Direct),
    };
    let pairs = args.pairs.or(file.pairs).unwrap_or(100);
    let table = lipschitz_experiment(&sampler, pairs, &cfg, direction, common.seed.unwrap_or(0))?;
    write(common.output.as_deref(), &table.to_csv())?;
    for (id, seed) in &table.skipped {
        eprintln!("pair {id} (seed {seed}) skipped as degenerate");
    }
    eprintln!(
        "{} pairs, max ratio {:.6e}, median {:.6e}, max/median {:.3}{}",
        table.rows.len(),
        table.max,
        table.median,
        table.max / table.median,
        if table.uniform() { "" } else { " (exceeds 10)" }
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Direct => cmd_direct(&cli.common),
        Command::Inverse(a) => cmd_inverse(&cli.common, a),
        Command::Transform(a) => cmd_transform(&cli.common, a),
        Command::FiniteStudy(a) => cmd_finite_study(&cli.common, a),
        Command::Stability(a) => cmd_stability(&cli.common, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_convergence() { 3 } else { 2 })
        }
    }
}
