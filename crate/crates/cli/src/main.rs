//! `bosonkit`: many-boson scattering amplitudes, boson-sampling
//! distributions, random-matrix ensembles, permanent moments, and the
//! cross-path validation suite, from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or parse error,
//! 3 precondition violation (the message names the violated bound).

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;

use bosonkit_cli::output::{float, Table};
use bosonkit_core::ensembles;
use bosonkit_core::error::Error as CoreError;
use bosonkit_core::fock::{self, OccupationVector};
use bosonkit_core::matrix::UnitaryMatrix;
use bosonkit_core::moments;
use bosonkit_core::representations::{self, CoherentLabel};
use bosonkit_core::semiclassics::{self, ShootingProblem};
use bosonkit_core::textfmt;
use bosonkit_core::validation::{self, SuiteConfig};

const EXIT_VALIDATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "bosonkit",
    version,
    about = "Boson scattering amplitudes, permanents, and Ginibre moments",
    after_help = "Set BOSONKIT_THREADS to cap internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fock transition amplitude between occupation vectors
    Amplitude(AmplitudeArgs),
    /// Exact output distribution over all outcomes
    Distribution(DistributionArgs),
    /// Draw outcomes from the output distribution
    Sample(SampleArgs),
    /// Exact or Monte Carlo Ginibre permanent moments
    Moments(MomentsArgs),
    /// Draw a Haar-random unitary (matrix text format)
    Haar(HaarArgs),
    /// Draw a complex Ginibre matrix (matrix text format)
    Ginibre(GinibreArgs),
    /// Draw a disordered Fourier unitary (matrix text format)
    Quench(QuenchArgs),
    /// Solve the saddle-point phase-matching problem
    Shooting(ShootingArgs),
    /// Coherent-to-coherent transition amplitude
    CoherentAmplitude(CoherentAmplitudeArgs),
    /// State-independent quadrature transition probability
    QuadratureProbability(QuadratureProbabilityArgs),
    /// Run the cross-path consistency suite
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Where the unitary comes from: a file or a seeded ensemble draw.
#[derive(Args)]
struct MatrixSource {
    /// Matrix file in the shared text format
    #[arg(long, conflicts_with_all = ["haar", "quench"])]
    matrix: Option<PathBuf>,
    /// Draw a Haar unitary of this dimension
    #[arg(long, value_name = "M")]
    haar: Option<usize>,
    /// Draw a disordered Fourier unitary of this dimension
    #[arg(long, value_name = "M", conflicts_with = "haar")]
    quench: Option<usize>,
    /// Phase-disorder strength for --quench
    #[arg(long, default_value_t = 1.0)]
    disorder: f64,
    /// Seed for ensemble draws (and sampling, where applicable)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MatrixSource {
    fn load(&self) -> Result<UnitaryMatrix, CliError> {
        if let Some(path) = &self.matrix {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let m = textfmt::parse_matrix(&text).map_err(CliError::from_core)?;
            return UnitaryMatrix::new(m).map_err(CliError::from_core);
        }
        if let Some(dim) = self.haar {
            return ensembles::sample_haar(dim, self.seed).map_err(CliError::from_core);
        }
        if let Some(dim) = self.quench {
            return ensembles::quench_unitary(dim, self.disorder, self.seed)
                .map_err(CliError::from_core);
        }
        Err(CliError::usage(
            "provide a matrix via --matrix FILE, --haar M, or --quench M".into(),
        ))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PathChoice {
    Permanent,
    Contour,
    Oracle,
    Integral,
}

#[derive(Args)]
struct AmplitudeArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// Input occupations, comma-separated
    #[arg(long = "in", value_name = "n1,n2,...")]
    input: String,
    /// Output occupations, comma-separated
    #[arg(long = "out", value_name = "m1,m2,...")]
    out: String,
    /// Evaluation path
    #[arg(long, value_enum, default_value = "permanent")]
    path: PathChoice,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DistributionArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long = "in", value_name = "n1,n2,...")]
    input: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long = "in", value_name = "n1,n2,...")]
    input: String,
    /// Number of outcomes to draw
    #[arg(long)]
    count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MomentsArgs {
    /// Moment order: 2, 4, or 6 (i.e. <|Perm|^order>)
    #[arg(long)]
    order: u32,
    /// Matrix dimension N
    #[arg(long)]
    dim: u32,
    /// Exact evaluation (default)
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo with this many draws
    #[arg(long, value_name = "DRAWS")]
    mc: Option<usize>,
    /// Per-component entry variance for --mc
    #[arg(long, default_value_t = 0.5)]
    sigma2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HaarArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GinibreArgs {
    #[arg(long)]
    dim: usize,
    /// Variance of each real and imaginary entry part
    #[arg(long, default_value_t = 0.5)]
    sigma2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct QuenchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    disorder: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ShootingArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long = "in", value_name = "n1,n2,...")]
    input: String,
    #[arg(long = "out", value_name = "m1,m2,...")]
    out: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CoherentAmplitudeArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// Input label: semicolon-separated re,im pairs, one per mode
    #[arg(long, value_name = "re,im;re,im;...")]
    phi: String,
    /// Output label, same format
    #[arg(long, value_name = "re,im;re,im;...")]
    psi: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QuadratureProbabilityArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValidateFormat {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct ValidateArgs {
    /// Cap on mode counts / moment dimensions used by the checks
    #[arg(long, default_value_t = 12)]
    dim_max: usize,
    /// Flip a sign inside one check (negative control; the suite fails)
    #[arg(long, hide = true)]
    inject_fault: bool,
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    format: ValidateFormat,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: String) -> Self {
        Self {
            code: EXIT_USAGE,
            message,
        }
    }

    fn from_core(e: CoreError) -> Self {
        let code = match e {
            CoreError::Parse(_) => EXIT_USAGE,
            _ => EXIT_PRECONDITION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() {
    if let Ok(threads) = std::env::var("BOSONKIT_THREADS") {
        if let Ok(n) = threads.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Amplitude(args) => cmd_amplitude(args),
        Command::Distribution(args) => cmd_distribution(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Haar(args) => {
            let u = ensembles::sample_haar(args.dim, args.seed).map_err(CliError::from_core)?;
            emit_text(&args.output, textfmt::format_matrix(u.matrix()))
        }
        Command::Ginibre(args) => {
            let m = ensembles::sample_ginibre(args.dim, args.sigma2, args.seed)
                .map_err(CliError::from_core)?;
            emit_text(&args.output, textfmt::format_matrix(&m))
        }
        Command::Quench(args) => {
            let u = ensembles::quench_unitary(args.dim, args.disorder, args.seed)
                .map_err(CliError::from_core)?;
            emit_text(&args.output, textfmt::format_matrix(u.matrix()))
        }
        Command::Shooting(args) => cmd_shooting(args),
        Command::CoherentAmplitude(args) => cmd_coherent_amplitude(args),
        Command::QuadratureProbability(args) => cmd_quadrature_probability(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn parse_occupations(text: &str) -> Result<OccupationVector, CliError> {
    OccupationVector::from_str(text).map_err(CliError::from_core)
}

fn parse_coherent(text: &str) -> Result<CoherentLabel, CliError> {
    let amplitudes: Result<Vec<Complex64>, CliError> = text
        .split(';')
        .map(|pair| {
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| CliError::usage(format!("bad coherent entry {pair:?}")))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|e| CliError::usage(format!("bad real part {re:?}: {e}")))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|e| CliError::usage(format!("bad imaginary part {im:?}: {e}")))?;
            Ok(Complex64::new(re, im))
        })
        .collect();
    CoherentLabel::new(amplitudes?).map_err(CliError::from_core)
}

fn cmd_amplitude(args: AmplitudeArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let n = parse_occupations(&args.input)?;
    let m = parse_occupations(&args.out)?;
    let amp = match args.path {
        PathChoice::Permanent => fock::amplitude_fock(&u, &n, &m),
        PathChoice::Contour => fock::amplitude_fock_contour(&u, &n, &m),
        PathChoice::Oracle => fock::amplitude_fock_oracle(&u, &n, &m),
        PathChoice::Integral => representations::amplitude_fock_integral(&u, &n, &m),
    }
    .map_err(CliError::from_core)?;
    let table = Table::single(vec![
        ("re", float(amp.value.re)),
        ("im", float(amp.value.im)),
        ("modulus", float(amp.value.norm())),
        ("probability", float(amp.probability())),
        ("path", Value::from(amp.path.to_string())),
    ]);
    emit_table(&args.output, &table)
}

fn cmd_distribution(args: DistributionArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let n = parse_occupations(&args.input)?;
    let dist = fock::output_distribution(&u, &n).map_err(CliError::from_core)?;
    let table = Table {
        rows: dist
            .iter()
            .map(|(m, p)| {
                vec![
                    ("occupation", Value::from(m.occupations().to_vec())),
                    ("probability", float(*p)),
                ]
            })
            .collect(),
    };
    emit_table(&args.output, &table)
}

fn cmd_sample(args: SampleArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let n = parse_occupations(&args.input)?;
    let samples =
        fock::sample_outputs(&u, &n, args.count, args.source.seed).map_err(CliError::from_core)?;
    let table = Table {
        rows: samples
            .iter()
            .map(|s| vec![("occupation", Value::from(s.occupations().to_vec()))])
            .collect(),
    };
    emit_table(&args.output, &table)
}

fn cmd_moments(args: MomentsArgs) -> Result<i32, CliError> {
    let order = match args.order {
        2 => 1,
        4 => 2,
        6 => 3,
        other => {
            return Err(CliError::usage(format!(
                "--order must be 2, 4, or 6 (powers of |Perm|), got {other}"
            )))
        }
    };
    if let Some(draws) = args.mc {
        let (estimate, stderr) =
            moments::moment_monte_carlo(order, args.dim, args.sigma2, draws, args.seed)
                .map_err(CliError::from_core)?;
        let table = Table::single(vec![
            ("order", Value::from(args.order)),
            ("dim", Value::from(args.dim)),
            ("sigma2", float(args.sigma2)),
            ("draws", Value::from(draws as u64)),
            ("estimate", float(estimate)),
            ("stderr", float(stderr)),
        ]);
        return emit_table(&args.output, &table);
    }
    let result = match order {
        1 => moments::moment2_exact(args.dim),
        2 => moments::moment4_exact(args.dim),
        _ => moments::moment6_exact(args.dim),
    }
    .map_err(CliError::from_core)?;
    let table = Table::single(vec![
        ("order", Value::from(args.order)),
        ("dim", Value::from(args.dim)),
        ("coefficient", Value::from(result.coefficient.to_string())),
        ("sigma_power", Value::from(result.sigma_power)),
        ("scaled", Value::from(result.scaled.to_string())),
    ]);
    emit_table(&args.output, &table)
}

fn cmd_shooting(args: ShootingArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let n = parse_occupations(&args.input)?;
    let m = parse_occupations(&args.out)?;
    let problem = ShootingProblem::new(u, n, m).map_err(CliError::from_core)?;
    let (theta, chi, residual, converged) =
        match semiclassics::solve_shooting(&problem, args.source.seed) {
            Ok(s) => (s.theta, s.chi, s.residual, true),
            Err(CoreError::NoSolutionFound { best_residual, .. }) => {
                (Vec::new(), Vec::new(), best_residual, false)
            }
            Err(e) => return Err(CliError::from_core(e)),
        };
    let table = Table::single(vec![
        ("theta", Value::from(theta)),
        ("chi", Value::from(chi)),
        ("residual", float(residual)),
        ("converged", Value::from(converged)),
    ]);
    emit_table(&args.output, &table)
}

fn cmd_coherent_amplitude(args: CoherentAmplitudeArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let phi = parse_coherent(&args.phi)?;
    let psi = parse_coherent(&args.psi)?;
    let amp = representations::amplitude_coherent(&u, &phi, &psi).map_err(CliError::from_core)?;
    let prob =
        representations::probability_coherent(&u, &phi, &psi).map_err(CliError::from_core)?;
    let table = Table::single(vec![
        ("re", float(amp.re)),
        ("im", float(amp.im)),
        ("modulus", float(amp.norm())),
        ("probability", float(prob)),
    ]);
    emit_table(&args.output, &table)
}

fn cmd_quadrature_probability(args: QuadratureProbabilityArgs) -> Result<i32, CliError> {
    let u = args.source.load()?;
    let p = representations::probability_quadrature(&u).map_err(CliError::from_core)?;
    let table = Table::single(vec![("probability", float(p))]);
    emit_table(&args.output, &table)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32, CliError> {
    let results = validation::run_suite(&SuiteConfig {
        dim_max: args.dim_max,
        inject_fault: args.inject_fault,
    });
    let all_passed = results.iter().all(|r| r.passed);
    let text = match args.format {
        ValidateFormat::Table => {
            let mut s = String::new();
            for r in &results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{verdict}  {:<40} {}\n", r.name, r.detail));
            }
            let passed = results.iter().filter(|r| r.passed).count();
            s.push_str(&format!("{passed}/{} checks passed\n", results.len()));
            s
        }
        ValidateFormat::Json | ValidateFormat::Csv => {
            let table = Table {
                rows: results
                    .iter()
                    .map(|r| {
                        vec![
                            ("name", Value::from(r.name)),
                            ("passed", Value::from(r.passed)),
                            ("detail", Value::from(r.detail.clone())),
                        ]
                    })
                    .collect(),
            };
            match args.format {
                ValidateFormat::Json => {
                    let mut s = table.to_json();
                    s.push('\n');
                    s
                }
                _ => table.to_csv(),
            }
        }
    };
    emit_text(&args.output, text)?;
    Ok(if all_passed { 0 } else { EXIT_VALIDATION })
}

fn emit_table(out: &OutputArgs, table: &Table) -> Result<i32, CliError> {
    let text = match out.format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv(),
    };
    emit_text(&out.output, text)
}

fn emit_text(path: &Option<PathBuf>, text: String) -> Result<i32, CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}
