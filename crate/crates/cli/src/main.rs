use std::f64::consts::TAU;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use ringlaw::bm::{circ_bm_density, BmLaw};
use ringlaw::error::Error;
use ringlaw::fractional::{space_frac_law, space_time_frac_law, v_time_frac, wrapped_stable_law};
use ringlaw::harmonic::{GridDensity, GridKind, HarmonicLaw};
use ringlaw::kernels::{even_kernel_cdf, even_kernel_density, odd_kernel_cdf, odd_kernel_density};
use ringlaw::pseudo::{positivity_time, v_even, v_odd_wrapped};
use ringlaw::specfun::Tolerance;
use ringlaw::validation::{self, ValidationConfig};

#[derive(Parser)]
#[command(name = "ringlaw", version, about = "Circular laws of wrapped pseudoprocesses and fractional diffusions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a density on an equispaced grid of [0, 2π).
    Density(GridArgs),
    /// Tabulate a CDF on an equispaced grid of [0, 2π].
    Cdf(GridArgs),
    /// Locate the time after which an even-order law is nonnegative.
    Positivity(PositivityArgs),
    /// Run the acceptance suite and write a JSON report.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LawKind {
    Even,
    Odd,
    Bm,
    Timefrac,
    Spacefrac,
    Spacetimefrac,
    Wrappedstable,
    KernelEven,
    KernelOdd,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_enum)]
    law: LawKind,
    /// Order index: the equation order is 2n (even) or 2n+1 (odd).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 512)]
    grid_points: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PositivityArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = ValidationConfig::default().seed)]
    seed: u64,
    /// Run one group only.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(validation::GROUPS))]
    only: Option<String>,
    /// Replace every Kolmogorov-Smirnov threshold.
    #[arg(long)]
    ks_threshold: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Validation(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Density(a) => cmd_grid(&a, GridKind::Density),
        Command::Cdf(a) => cmd_grid(&a, GridKind::Cdf),
        Command::Positivity(a) => cmd_positivity(&a),
        Command::Validate(a) => cmd_validate(&a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            let kind = error_kind(&e);
            eprintln!("error kind={kind} {e}");
            ExitCode::from(if e.is_parameter_error() { 2 } else { 3 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error kind=io: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(ids)) => {
            eprintln!("validation failed: {}", ids.join(", "));
            ExitCode::from(1)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::NonConvergence(_) => "non_convergence",
        Error::Overflow(_) => "overflow",
        Error::Truncation(_) => "truncation",
        Error::SignedLaw(_) => "signed_law",
        Error::DomainGap(_) => "domain_gap",
        Error::Diagnostic(_) => "diagnostic",
        Error::EmptySample => "empty_sample",
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::Domain(msg.into()))
}

fn need<T>(v: Option<T>, flag: &str, law: &str) -> Result<T, Failure> {
    v.ok_or_else(|| invalid(format!("--{flag} is required for law {law}")))
}

/// A law that can be evaluated at single angles.
enum Evaluator {
    Series(HarmonicLaw),
    Pointwise(Box<dyn Fn(f64) -> ringlaw::error::Result<f64> + Sync>),
}

fn evaluator(a: &GridArgs, kind: GridKind) -> Result<Evaluator, Failure> {
    let tol = Tolerance::new(a.tol, Tolerance::default().max_terms)?;
    let t = a.t;
    let cdf = kind == GridKind::Cdf;
    Ok(match a.law {
        LawKind::Even => Evaluator::Series(v_even(need(a.n, "n", "even")?, t, tol)?),
        LawKind::Odd => {
            let n = need(a.n, "n", "odd")?;
            if cdf {
                return Err(invalid("odd-order laws are distributions without a convergent CDF series; use density"));
            }
            v_odd_wrapped(n, 0.0, t, tol)?;
            Evaluator::Pointwise(Box::new(move |th| v_odd_wrapped(n, th, t, tol)))
        }
        LawKind::Bm if cdf => Evaluator::Series(BmLaw::new(t, tol)?.representation),
        LawKind::Bm => {
            circ_bm_density(0.0, t, tol)?;
            Evaluator::Pointwise(Box::new(move |th| circ_bm_density(th, t, tol)))
        }
        LawKind::Timefrac => {
            Evaluator::Series(v_time_frac(need(a.n, "n", "timefrac")?, need(a.nu, "nu", "timefrac")?, t, tol)?)
        }
        LawKind::Spacefrac => Evaluator::Series(space_frac_law(need(a.beta, "beta", "spacefrac")?, t, tol)?),
        LawKind::Spacetimefrac => Evaluator::Series(space_time_frac_law(
            need(a.nu, "nu", "spacetimefrac")?,
            need(a.beta, "beta", "spacetimefrac")?,
            t,
            tol,
        )?),
        LawKind::Wrappedstable => Evaluator::Series(wrapped_stable_law(need(a.beta, "beta", "wrappedstable")?, t, tol)?),
        LawKind::KernelEven => {
            even_kernel_density(0.0, t)?;
            if cdf {
                Evaluator::Pointwise(Box::new(move |th| if th >= TAU { Ok(1.0) } else { even_kernel_cdf(th, t) }))
            } else {
                Evaluator::Pointwise(Box::new(move |th| even_kernel_density(th, t)))
            }
        }
        LawKind::KernelOdd => {
            let n = need(a.n, "n", "kernel-odd")?;
            odd_kernel_density(n, 0.0, t)?;
            if cdf {
                Evaluator::Pointwise(Box::new(move |th| if th >= TAU { Ok(1.0) } else { odd_kernel_cdf(n, th, t) }))
            } else {
                Evaluator::Pointwise(Box::new(move |th| odd_kernel_density(n, th, t)))
            }
        }
    })
}

fn cmd_grid(a: &GridArgs, kind: GridKind) -> Result<(), Failure> {
    if a.grid_points < 8 {
        return Err(invalid(format!("--grid-points must be at least 8, got {}", a.grid_points)));
    }
    if !(a.t > 0.0 && a.t.is_finite()) {
        return Err(invalid(format!("--t must be positive, got {}", a.t)));
    }
    let grid = match evaluator(a, kind)? {
        Evaluator::Series(law) => GridDensity::of_law(&law, a.grid_points, kind)?,
        Evaluator::Pointwise(f) => {
            let mut g = GridDensity::tabulate(a.grid_points, kind, String::new(), |_| Ok(0.0))?;
            g.values = g.thetas.par_iter().map(|&th| f(th)).collect::<ringlaw::error::Result<_>>()?;
            g
        }
    };
    let mut csv = String::with_capacity(48 * grid.thetas.len());
    csv.push_str("theta,value\n");
    for (th, v) in grid.thetas.iter().zip(&grid.values) {
        csv.push_str(&format!("{th:.16e},{v:.16e}\n"));
    }
    emit(a.output.as_ref(), &csv, || format!("wrote {} rows", grid.thetas.len()))
}

fn cmd_positivity(a: &PositivityArgs) -> Result<(), Failure> {
    let tol = Tolerance::new(a.tol, Tolerance::default().max_terms)?;
    let p = positivity_time(a.n, tol)?;
    let json = serde_json::json!({ "t_bar": p.t_bar, "min_theta_at_t_bar": p.min_theta });
    let text = serde_json::to_string_pretty(&json).expect("plain JSON object") + "\n";
    emit(a.output.as_ref(), &text, || format!("t_bar = {:.7}, minimum at θ = {:.6}", p.t_bar, p.min_theta))
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    let cfg = ValidationConfig { seed: a.seed, only: a.only.clone(), ks_threshold: a.ks_threshold };
    let report = validation::run(&cfg)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = &a.output {
        fs::write(path, &text)?;
        for c in &report.criteria {
            println!("{} {:>4} {:.4e} (threshold {:.1e}) {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.measured, c.threshold, c.name);
        }
    } else {
        io::stdout().write_all(text.as_bytes())?;
    }
    if report.all_passed {
        Ok(())
    } else {
        Err(Failure::Validation(report.failures().map(|c| c.id.clone()).collect()))
    }
}

/// Writes `data` to `path` and prints `summary`, or writes `data` to stdout.
fn emit(path: Option<&PathBuf>, data: &str, summary: impl FnOnce() -> String) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, data)?;
            println!("{} to {}", summary(), p.display());
        }
        None => io::stdout().write_all(data.as_bytes())?,
    }
    Ok(())
}
