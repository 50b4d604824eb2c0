use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ergodec::generate::{generate, GenConfig};
use ergodec::report::{
    classification_report, decomposition_report, girsanov_report, measures_report, random_density,
    superposition_report, verification_report,
};
use ergodec::schema::{from_json, parse_form, to_json, FormJson, SuperpositionJson};
use ergodec::Error;

mod render;

/// Ergodic decomposition of Dirichlet forms on finite measure spaces.
///
/// Exit status: 0 when every check passes, 2 on invalid input, 3 when a
/// residual exceeds the tolerance.
#[derive(Debug, Parser)]
#[command(name = "ergodec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Pass/fail threshold for residuals.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive)]
    tolerance: f64,

    /// Seed for random test vectors, densities and generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a form into irreducible fibers and check the reassembly.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Conservative, transient and recurrent parts.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// All decomposition identities on random test vectors.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Weighted decomposition through a Girsanov transform.
    Girsanov {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated positive density, or `random`.
        #[arg(long, default_value = "random")]
        phi: String,
    },
    /// Superposition of fiber forms over a measure family.
    Superpose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Ergodic invariant measures, optionally decomposing a given one.
    Measures {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated invariant measure to split into ergodic parts.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Random instance with a given number of components.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        components: usize,
        #[arg(long, default_value_t = 0.0)]
        killing_prob: f64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// Invalid input, reported with exit status 2.
struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Invalid> {
    fs::read_to_string(path).map_err(|e| Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<f64>, Invalid> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Invalid(format!("not a number in list: {t:?}")))
        })
        .collect()
}

struct Output {
    body: String,
    passed: bool,
}

fn emit<T: Serialize>(report: &T, passed: bool, format: Format) -> Output {
    let body = match format {
        Format::Json => to_json(report),
        Format::Text => render::text(&serde_json::to_value(report).expect("reports serialize")),
    };
    Output { body, passed }
}

fn run(cli: &Cli) -> Result<Output, Invalid> {
    let (tol, seed, format) = (cli.tolerance, cli.seed, cli.format);
    Ok(match &cli.command {
        Command::Decompose { input } => {
            let r = decomposition_report(&parse_form(&read(input)?)?, tol)?;
            emit(&r, r.residuals.passed, format)
        }
        Command::Classify { input } => {
            let r = classification_report(&parse_form(&read(input)?)?)?;
            emit(&r, r.passed, format)
        }
        Command::Verify { input } => {
            let r = verification_report(&parse_form(&read(input)?)?, tol, seed)?;
            emit(&r, r.passed, format)
        }
        Command::Girsanov { input, phi } => {
            let form = parse_form(&read(input)?)?;
            let phi = if phi == "random" {
                random_density(seed, form.len())
            } else {
                parse_list(phi)?
            };
            let r = girsanov_report(&form, &phi, tol, seed)?;
            emit(&r, r.passed, format)
        }
        Command::Superpose { input } => {
            let sup: SuperpositionJson = from_json(&read(input)?)?;
            let r = superposition_report(&sup, tol, seed)?;
            emit(&r, r.passed, format)
        }
        Command::Measures { input, eta } => {
            let form = parse_form(&read(input)?)?;
            let eta = eta.as_deref().map(parse_list).transpose()?;
            let r = measures_report(&form, eta.as_deref(), tol)?;
            emit(&r, r.passed, format)
        }
        Command::Gen {
            n,
            components,
            killing_prob,
            density,
        } => {
            let form = generate(GenConfig {
                seed,
                n: *n,
                components: *components,
                killing_prob: *killing_prob,
                density: *density,
            })?;
            emit(&FormJson::from(&form), true, format)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut body = out.body;
            body.push('\n');
            let written = match &cli.out {
                Some(path) => fs::write(path, &body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: residuals exceed tolerance {}", cli.tolerance);
                ExitCode::from(3)
            }
        }
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
