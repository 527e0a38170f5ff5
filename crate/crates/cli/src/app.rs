use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polar_core::format::{tensor_from_json, tensor_to_json};
use polar_core::spectral::{
    chiara_report, inverse_with_eps, min_spectral_magnitude, polar_product_fft, pseudo_inverse,
    DEFAULT_INVERTIBILITY_EPS, DEFAULT_PSEUDO_EPS,
};
use polar_core::{Domain, PolarError, PolarTensor, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bench::{self, BenchConfig, Path as BenchPath};
use crate::demo::{self, Example};

/// Naive and FFT results must agree to this relative tolerance.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "polar", version, about = "Polar tensor algebra on radial x cyclic grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polar product (angular circular convolution) of two tensors.
    Convolve(ConvolveArgs),
    /// Exact inverse, or regularized pseudo-inverse, under the polar product.
    Invert(InvertArgs),
    /// Test a property of a tensor; exit 0 if it holds, 1 if not.
    Check(CheckArgs),
    /// Time the naive and FFT polar product and fit log-log slopes.
    Bench(BenchArgs),
    /// Replay a worked example against its known values.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Naive,
    Fft,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Fft)]
    pub method: Method,
    /// Run both methods and report their max deviation. Without --a/--b,
    /// random inputs of --shape are drawn from --seed.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Shape of random inputs; the first axis is radial, the rest angular.
    #[arg(long, value_delimiter = ',', default_value = "4,16")]
    pub shape: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Singularity threshold, or the regularizer with --pseudo.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub pseudo: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Invertible,
    SelfAdjoint,
    Chiara,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub what: Property,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchOp {
    PolarProduct,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchOp::PolarProduct)]
    pub op: BenchOp,
    #[arg(long, default_value_t = 4)]
    pub nr: usize,
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048,4096,8192")]
    pub ntheta_list: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 2)]
    pub warmup: usize,
    /// Minimum duration of one repetition; short calls are looped.
    #[arg(long, default_value_t = 20)]
    pub min_rep_ms: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_enum)]
    pub example: Example,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: PolarError,
    },
    #[error(transparent)]
    Core(#[from] PolarError),
    #[error("{0} check(s) did not match")]
    Mismatch(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input { .. } => 2,
            CliError::Core(e) => match e {
                PolarError::Conformability { .. } | PolarError::Domain { .. } | PolarError::RotorAxes { .. } => 3,
                PolarError::SingularSpectrum { .. } => 4,
                _ => 2,
            },
            CliError::Mismatch(_) => 5,
        }
    }
}

type CliResult = Result<i32, CliError>;

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Convolve(a) => convolve(&a, out),
        Command::Invert(a) => invert(&a, out, err),
        Command::Check(a) => check(&a, out),
        Command::Bench(a) => bench_cmd(&a, out, err),
        Command::Demo(a) => demo_cmd(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

pub fn read_tensor(path: &Path) -> Result<PolarTensor, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    tensor_from_json(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

fn emit_tensor(t: &PolarTensor, dest: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = tensor_to_json(t);
    match dest {
        Some(p) => write_text(p, &text),
        None => writeln!(out, "{text}").map_err(stdout_err),
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, shape: &[usize]) -> Result<PolarTensor, CliError> {
    let n = shape.iter().product();
    let values = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let axes = (1..shape.len()).collect();
    Ok(PolarTensor::new(shape.to_vec(), axes, values, Domain::Spatial)?)
}

fn index_str(index: &[usize]) -> String {
    format!("({})", index.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

fn convolve(args: &ConvolveArgs, out: &mut dyn Write) -> CliResult {
    let (a, b, seed) = match (&args.a, &args.b) {
        (Some(pa), Some(pb)) => (read_tensor(pa)?, read_tensor(pb)?, None),
        (None, None) if args.verify => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let a = random_tensor(&mut rng, &args.shape)?;
            let b = random_tensor(&mut rng, &args.shape)?;
            (a, b, Some(args.seed))
        }
        _ => return Err(CliError::Usage("convolve needs both --a and --b (or --verify alone)".into())),
    };
    let naive = || a.polar_product_naive(&b);
    let fast = || polar_product_fft(&a, &b);
    let result = match args.method {
        Method::Naive => naive()?,
        Method::Fft => fast()?,
    };
    if args.out.is_some() || !args.verify {
        emit_tensor(&result, args.out.as_deref(), out)?;
    }
    if !args.verify {
        return Ok(0);
    }
    let other = match args.method {
        Method::Naive => fast()?,
        Method::Fft => naive()?,
    };
    let scale = result.max_abs().max(other.max_abs()).max(1.0);
    let dev = result.max_abs_diff(&other)? / scale;
    let seed = seed.map(|s| format!(" seed={s}")).unwrap_or_default();
    let shape = a.shape().iter().map(usize::to_string).collect::<Vec<_>>().join("x");
    let agree = dev < VERIFY_TOL;
    writeln!(out, "verify{seed} shape={shape} max_deviation={dev:e} agree={agree}").map_err(stdout_err)?;
    Ok(if agree { 0 } else { 1 })
}

fn invert(args: &InvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let a = read_tensor(&args.input)?;
    let (min, at) = min_spectral_magnitude(&a)?;
    let _ = writeln!(err, "min |spectrum| = {min:e} at (r,m) = {}", index_str(&at));
    let result = if args.pseudo {
        pseudo_inverse(&a, args.eps.unwrap_or(DEFAULT_PSEUDO_EPS))?
    } else {
        inverse_with_eps(&a, args.eps.unwrap_or(DEFAULT_INVERTIBILITY_EPS))?
    };
    emit_tensor(&result, args.out.as_deref(), out)?;
    Ok(0)
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> CliResult {
    let a = read_tensor(&args.input)?;
    let (holds, line) = match args.what {
        Property::Invertible => {
            let eps = args.tol.unwrap_or(DEFAULT_INVERTIBILITY_EPS);
            let (min, at) = min_spectral_magnitude(&a)?;
            let ok = min > eps;
            (ok, format!("invertible={ok} min_abs={min:e} at={} eps={eps:e}", index_str(&at)))
        }
        Property::SelfAdjoint => {
            let tol = args.tol.unwrap_or(1e-12);
            let gap = a.max_asymmetry()?;
            let ok = gap <= tol;
            (ok, format!("self_adjoint={ok} max_asymmetry={gap:e} tol={tol:e}"))
        }
        Property::Chiara => {
            let tol = args.tol.unwrap_or(1e-12);
            match chiara_report(&a, tol) {
                Ok(r) => (
                    r.real_spectrum,
                    format!(
                        "chiara={} max_imag={:e} spectrum_max={:e} max_asymmetry={:e} tol={tol:e}",
                        r.real_spectrum, r.max_imag, r.spectrum_max, r.max_asymmetry
                    ),
                ),
                Err(PolarError::NotSelfAdjoint { max_asymmetry, .. }) => (
                    false,
                    format!("chiara=false not_self_adjoint max_asymmetry={max_asymmetry:e} tol={tol:e}"),
                ),
                Err(e) => return Err(e.into()),
            }
        }
    };
    writeln!(out, "{line}").map_err(stdout_err)?;
    Ok(if holds { 0 } else { 1 })
}

fn bench_cmd(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let BenchOp::PolarProduct = args.op;
    let cfg = BenchConfig {
        nr: args.nr,
        ntheta: args.ntheta_list.clone(),
        reps: args.reps,
        warmup: args.warmup,
        min_rep_time: Duration::from_millis(args.min_rep_ms),
        seed: args.seed,
    };
    let records = bench::run_polar_product(&cfg)?;
    let csv = bench::to_csv(&records);
    // Slopes go wherever the CSV does not.
    let slopes: Vec<String> = [BenchPath::Naive, BenchPath::Fft]
        .iter()
        .map(|&p| match bench::fit_slope(&records, p) {
            Some(s) => format!("slope path={} value={s:.4}", p.name()),
            None => format!("slope path={} value=nan (need 3+ sizes)", p.name()),
        })
        .collect();
    match &args.out {
        Some(p) => {
            write_text(p, &csv)?;
            for s in &slopes {
                writeln!(out, "{s}").map_err(stdout_err)?;
            }
        }
        None => {
            write!(out, "{csv}").map_err(stdout_err)?;
            for s in &slopes {
                let _ = writeln!(err, "{s}");
            }
        }
    }
    Ok(0)
}

fn demo_cmd(args: &DemoArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let checks = demo::run(args.example, out).map_err(stdout_err)?;
    let mut failed = 0;
    for c in &checks {
        if c.passed() {
            writeln!(out, "PASS {} (max deviation {:e})", c.label, c.max_deviation()).map_err(stdout_err)?;
        } else {
            failed += 1;
            writeln!(out, "FAIL {}", c.label).map_err(stdout_err)?;
            let _ = writeln!(err, "--- expected {}: {}", c.label, demo::fmt_values(&c.expected));
            let _ = writeln!(err, "+++ got      {}: {}", c.label, demo::fmt_values(&c.got));
        }
    }
    if failed > 0 {
        return Err(CliError::Mismatch(failed));
    }
    Ok(0)
}
