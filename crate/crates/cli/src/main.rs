use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use vblaschke::experiment::{self, append_csv_rows, SweepConfig, CSV_HEADER};
use vblaschke::verify::{self, VerifyOptions};
use vblaschke::{Error, Polynomial, RadiusSchedule, RootForm};

const SEED_VAR: &str = "UNWIND_SEED";

#[derive(Parser)]
#[command(
    name = "vblaschke",
    version,
    about = "Variable-radius Blaschke factorization and unwinding series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a polynomial as B_r * G and print the factorization as JSON.
    Factor {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    /// Build the unwinding series and print it as JSON.
    Unwind {
        poly: PathBuf,
        /// fixed:R, minimal:M, c615 or ostrowski.
        #[arg(long, default_value = "fixed:1")]
        schedule: RadiusSchedule,
        /// Defaults to the degree of the polynomial.
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Random-polynomial error sweep; writes CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contraction threshold m0 for F = (z - m)^n.
    M0Scan {
        #[arg(long, value_delimiter = ',', default_value = "2,10,50,100,500")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Unwinding rows followed by truncated Taylor rows (radius 0).
    CompareTaylor {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites and print the JSON summary.
    Verify {
        /// Only suites whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Samples of p(r e^{it}) as CSV t,re,im.
    Trace {
        poly: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
}

enum Failure {
    /// Bad input: unreadable file, malformed JSON, invalid parameters.
    Input(String),
    /// Numerical failure or a violated invariant.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite(_)
            | Error::DegreeZero
            | Error::NonPositiveLambda(_)
            | Error::NonPositiveRadius(_)
            | Error::InvalidArgument(_)
            | Error::DomainError(_)
            | Error::LambdaTooSmall { .. }
            | Error::HypothesisViolated(_)
            | Error::RootOutsideDisk { .. } => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyInput {
    Coefficients(Polynomial),
    Roots(RootForm),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<PolyInput, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        Failure::Input(format!(
            "{}: expected {{\"coeffs\": [[re, im], ...]}} or {{\"lead\": [re, im], \"roots\": [...]}}: {e}",
            path.display()
        ))
    })
}

fn read_config(path: &Path) -> Result<SweepConfig, Failure> {
    let mut config: SweepConfig = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed_override()? {
        config.master_seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn seed_override() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| Failure::Input(format!("{SEED_VAR}={v}: {e}"))),
        Err(_) => Ok(None),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Factor { poly, radius } => {
            let fac = match read_poly(&poly)? {
                PolyInput::Coefficients(p) => vblaschke::factorize_polynomial(&p, radius)?,
                PolyInput::Roots(rf) => vblaschke::factorize(&rf, radius)?,
            };
            emit(None, &to_json(&fac))
        }
        Command::Unwind {
            poly,
            schedule,
            max_terms,
        } => {
            let f = match read_poly(&poly)? {
                PolyInput::Coefficients(p) => p,
                PolyInput::Roots(rf) => rf.to_polynomial(),
            };
            let series = vblaschke::unwind(&f, &schedule, max_terms.unwrap_or(f.degree()))?;
            emit(None, &to_json(&series))
        }
        Command::Sweep { config, out } => {
            let config = read_config(&config)?;
            emit(out.as_deref(), &experiment::error_sweep(&config)?.to_csv())
        }
        Command::M0Scan { n, tol } => {
            let mut text = String::from("n,m0\n");
            for (n, m0) in experiment::m0_scan(&n, tol)? {
                writeln!(text, "{n},{m0}").unwrap();
            }
            emit(None, &text)
        }
        Command::CompareTaylor { config, out } => {
            let config = read_config(&config)?;
            let unwinding = experiment::error_sweep(&config)?;
            let taylor = experiment::compare_taylor(&config)?;
            let mut text = format!("{CSV_HEADER}\n");
            append_csv_rows(&mut text, &unwinding.rows);
            append_csv_rows(&mut text, &taylor.rows);
            let cells = unwinding.rows.len();
            let below = unwinding
                .rows
                .iter()
                .filter(|row| row.mean_log_error <= taylor.rows[row.l - 1].mean_log_error)
                .count();
            eprintln!("unwinding at or below Taylor in {below} of {cells} (radius, L) cells");
            emit(out.as_deref(), &text)
        }
        Command::Verify { filter } => {
            let mut options = VerifyOptions {
                filter: filter.as_deref(),
                ..Default::default()
            };
            if let Some(seed) = seed_override()? {
                options.master_seed = seed;
            }
            let report = verify::verify(&options);
            emit(None, &to_json(&report))?;
            if verify::all_pass(&report) {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .iter()
                    .filter(|(_, s)| s.failures > 0)
                    .map(|(name, _)| name.as_str())
                    .collect();
                Err(Failure::Check(format!(
                    "failing suites: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Trace {
            poly,
            radius,
            samples,
        } => {
            let p = match read_poly(&poly)? {
                PolyInput::Coefficients(p) => p,
                PolyInput::Roots(rf) => rf.to_polynomial(),
            };
            let mut text = String::from("t,re,im\n");
            for (t, v) in p.boundary_trace(radius, samples)? {
                writeln!(text, "{t},{},{}", v.re, v.im).unwrap();
            }
            emit(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
