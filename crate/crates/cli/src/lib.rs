//! The `seqconvex` command-line front end.
//!
//! [`run`] parses an argument vector, executes one subcommand and writes a
//! JSON [`report::Report`] to `out`. Exit codes: 0 on success, 1 when a
//! `--strict` classification does not hold (or a decomposition cannot be
//! certified, or a verification sweep finds a violation), 2 on input and
//! usage errors.

pub mod input;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use seqconvex_core::decompose::{affine_approx, convex_approx_hyers, convex_approx_optimal};
use seqconvex_core::extend::{check_eps_convex_function, SamplePlan};
use seqconvex_core::oracle::RNG_ALGORITHM;
use seqconvex_core::verify::{run_suite, Suite};
use seqconvex_core::{
    classify, Decomposition, Epsilon, PiecewiseLinear, QuantifierMode, Sequence, Tolerance, Verdict,
};

use report::{
    ExtensionReport, Failure, NamedDecomposition, NamedEpsMin, NamedVerdict, Point, Report,
    VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOES_NOT_HOLD: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read input file '{path}': {message}")]
    Io { path: String, message: String },
    #[error("malformed number at {location}: '{token}'")]
    Malformed { location: String, token: String },
    #[error("non-finite value '{token}' at index {index}")]
    NonFinite { index: usize, token: String },
    #[error("input contains no values")]
    EmptyInput,
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("cannot write '{path}': {message}")]
    Output { path: String, message: String },
    #[error(transparent)]
    Core(#[from] seqconvex_core::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "seqconvex",
    version,
    about = "Convexity, ε-convexity and stability analysis of finite real sequences"
)]
struct Cli {
    /// Quantifier over the deciding index: exists | forall.
    #[arg(long, global = true, default_value = "exists")]
    mode: QuantifierMode,
    /// Absolute tolerance on inequality checks.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT.value())]
    tol: f64,
    /// Exit 1 when the requested classification does not hold.
    #[arg(long, global = true)]
    strict: bool,
    /// Omit the `timing_ms` field so reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a sequence.
    Classify(ClassifyArgs),
    /// Minimal ε for ε-convexity and ε-affinity.
    EpsMin(InputArgs),
    /// Split a sequence into a structured part and a bounded residual.
    Decompose(DecomposeArgs),
    /// Evaluate the piecewise-linear extension.
    Extend(ExtendArgs),
    /// Run seeded property sweeps.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV (one value per line, or a comma-separated row) or JSON array.
    input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Class {
    Convex,
    Wright,
    EpsConvex,
    EpsAffine,
}

impl Class {
    fn name(self) -> &'static str {
        match self {
            Class::Convex => "convex",
            Class::Wright => "wright",
            Class::EpsConvex => "eps_convex",
            Class::EpsAffine => "eps_affine",
        }
    }
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Slack for the ε-convex and ε-affine checks.
    #[arg(long)]
    eps: Option<f64>,
    /// Classification that decides `--strict` (default: eps-convex with
    /// `--eps`, convex without). `wright` is only computed when requested.
    #[arg(long, value_enum)]
    class: Option<Class>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Convex,
    ConvexOptimal,
    Affine,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Convex => "convex",
            Target::ConvexOptimal => "convex_optimal",
            Target::Affine => "affine",
        }
    }
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "convex")]
    target: Target,
    /// Write `n  u_n  structured_n  residual_n` as TSV to this path.
    #[arg(long, value_name = "PATH")]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("points").required(true).multiple(true).args(["at", "grid"])))]
struct ExtendArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Evaluate at x (repeatable).
    #[arg(long, allow_negative_numbers = true)]
    at: Vec<f64>,
    /// Evaluate at k evenly spaced points spanning the domain.
    #[arg(long, value_name = "K")]
    grid: Option<usize>,
    /// Also check ε-convexity of the extension on sampled triples.
    #[arg(long, value_name = "EPS")]
    check_eps: Option<f64>,
    /// Random triples for `--check-eps`.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, env = "SEQCONVEX_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// thm09 | thm10 | thm11 | lemma22 | all
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, env = "SEQCONVEX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            let _ = if informational {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return if informational { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let started = Instant::now();
    let tol = Tolerance::new(cli.tol)?;
    let (mut report, code) = match &cli.command {
        Command::Classify(a) => classify_cmd(cli, a, tol)?,
        Command::EpsMin(a) => eps_min_cmd(cli, a, tol)?,
        Command::Decompose(a) => decompose_cmd(cli, a, tol)?,
        Command::Extend(a) => extend_cmd(cli, a, tol)?,
        Command::Verify(a) => verify_cmd(a, tol)?,
    };
    if !cli.no_timing {
        report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    report.write_json(out).map_err(|e| CliError::Output {
        path: "<stdout>".into(),
        message: e.to_string(),
    })?;
    Ok(code)
}

fn start(command: &str, cli: &Cli, path: &Path, tol: Tolerance) -> Result<(Report, Sequence), CliError> {
    let (u, digest) = input::load(path)?;
    let mut report = Report::new(command, tol.value());
    report.input = Some(digest);
    report.mode = Some(cli.mode);
    Ok((report, u))
}

fn classify_cmd(cli: &Cli, a: &ClassifyArgs, tol: Tolerance) -> Result<(Report, i32), CliError> {
    let eps = a.eps.map(Epsilon::new).transpose()?;
    let class = a.class.unwrap_or(if eps.is_some() {
        Class::EpsConvex
    } else {
        Class::Convex
    });
    if matches!(class, Class::EpsConvex | Class::EpsAffine) && eps.is_none() {
        return Err(CliError::Usage(format!(
            "--class {} requires --eps",
            class.name()
        )));
    }
    let (mut report, u) = start("classify", cli, &a.input.input, tol)?;

    let mut push = |c: Class, eps: Option<Epsilon>, verdict: Verdict| {
        report.verdicts.push(NamedVerdict {
            class: c.name().into(),
            eps: eps.map(Epsilon::value),
            verdict,
        });
        verdict.holds
    };
    let mut decided = push(Class::Convex, None, classify::is_convex(&u, tol));
    if class == Class::Wright {
        decided = push(Class::Wright, None, classify::is_wright_convex(&u, tol));
    }
    if let Some(e) = eps {
        let convex = push(
            Class::EpsConvex,
            Some(e),
            classify::is_eps_convex(&u, e, cli.mode, tol),
        );
        let affine = push(
            Class::EpsAffine,
            Some(e),
            classify::is_eps_affine(&u, e, cli.mode, tol),
        );
        match class {
            Class::EpsConvex => decided = convex,
            Class::EpsAffine => decided = affine,
            _ => {}
        }
    }
    let code = if cli.strict && !decided {
        EXIT_DOES_NOT_HOLD
    } else {
        EXIT_OK
    };
    Ok((report, code))
}

fn eps_min_cmd(cli: &Cli, a: &InputArgs, tol: Tolerance) -> Result<(Report, i32), CliError> {
    let (mut report, u) = start("eps-min", cli, &a.input, tol)?;
    for (class, e) in [
        ("eps_convex", classify::min_eps_convex(&u, cli.mode)),
        ("eps_affine", classify::min_eps_affine(&u, cli.mode)),
    ] {
        report.eps_min.push(NamedEpsMin {
            class: class.into(),
            mode: cli.mode,
            eps: e.eps,
            tight: e.tight,
        });
    }
    Ok((report, EXIT_OK))
}

fn decompose_cmd(cli: &Cli, a: &DecomposeArgs, tol: Tolerance) -> Result<(Report, i32), CliError> {
    let (mut report, u) = start("decompose", cli, &a.input.input, tol)?;
    let result: Result<Decomposition, seqconvex_core::Error> = match a.target {
        Target::Convex => convex_approx_hyers(&u, cli.mode, tol),
        Target::ConvexOptimal => Ok(convex_approx_optimal(&u)),
        Target::Affine => Ok(affine_approx(&u)),
    };
    let code = match result {
        Ok(d) => {
            if let Some(path) = &a.plot_data {
                write_plot(path, &u, &d)?;
            }
            report.decompositions.push(NamedDecomposition {
                target: a.target.name().into(),
                decomposition: d,
            });
            EXIT_OK
        }
        Err(e @ seqconvex_core::Error::GapExceeded { .. }) => {
            report.failures.push(Failure {
                target: a.target.name().into(),
                message: e.to_string(),
            });
            EXIT_DOES_NOT_HOLD
        }
        Err(e) => return Err(e.into()),
    };
    Ok((report, code))
}

fn write_plot(path: &Path, u: &Sequence, d: &Decomposition) -> Result<(), CliError> {
    let output_err = |e: std::io::Error| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut w = BufWriter::new(File::create(path).map_err(output_err)?);
    report::write_plot_data(&mut w, u, d).map_err(output_err)?;
    w.flush().map_err(output_err)
}

fn grid(upper: f64, k: usize) -> Result<Vec<f64>, CliError> {
    match k {
        0 => Err(CliError::Usage("--grid needs at least one point".into())),
        1 => Ok(vec![0.0]),
        _ => Ok((0..k)
            .map(|i| {
                if i + 1 == k {
                    upper
                } else {
                    upper * i as f64 / (k - 1) as f64
                }
            })
            .collect()),
    }
}

fn extend_cmd(cli: &Cli, a: &ExtendArgs, tol: Tolerance) -> Result<(Report, i32), CliError> {
    let (mut report, u) = start("extend", cli, &a.input.input, tol)?;
    let f = PiecewiseLinear::new(u);
    let mut xs = a.at.clone();
    if let Some(k) = a.grid {
        xs.extend(grid(f.upper(), k)?);
    }
    let points = xs
        .into_iter()
        .map(|x| Ok(Point { x, y: f.eval(x)? }))
        .collect::<Result<Vec<_>, seqconvex_core::Error>>()?;
    let eps = a.check_eps.map(Epsilon::new).transpose()?;
    let functional_check = eps.map(|e| {
        let plan = SamplePlan {
            knot_triples: true,
            random_triples: a.samples,
            seed: a.seed,
        };
        check_eps_convex_function(&f, e, plan, tol)
    });
    let code = match functional_check {
        Some(v) if cli.strict && !v.holds => EXIT_DOES_NOT_HOLD,
        _ => EXIT_OK,
    };
    report.extension = Some(ExtensionReport {
        points,
        eps: eps.map(Epsilon::value),
        functional_check,
    });
    Ok((report, code))
}

fn verify_cmd(a: &VerifyArgs, tol: Tolerance) -> Result<(Report, i32), CliError> {
    let results = run_suite(a.suite, a.seed, a.trials, tol);
    let code = if results.iter().all(|r| r.ok()) {
        EXIT_OK
    } else {
        EXIT_DOES_NOT_HOLD
    };
    let mut report = Report::new("verify", tol.value());
    report.verification = Some(VerificationReport {
        suite: a.suite.to_string(),
        seed: a.seed,
        trials: a.trials,
        rng: RNG_ALGORITHM.into(),
        results,
    });
    Ok((report, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spans_domain() {
        assert_eq!(grid(4.0, 5).unwrap(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(grid(3.0, 1).unwrap(), vec![0.0]);
        assert!(grid(3.0, 0).is_err());
    }

    #[test]
    fn help_and_version_exit_zero() {
        for flag in ["--help", "--version"] {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            assert_eq!(run(["seqconvex", flag], &mut out, &mut err), EXIT_OK);
            assert!(!out.is_empty());
        }
    }

    #[test]
    fn clap_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
