use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use chart_core::default_base_step;
use clap::{Parser, Subcommand};

use crate::compute::{compute, table, Axis, TensorName};
use crate::convergence::{convergence, DEFAULT_SWEEP};
use crate::error::CliError;
use crate::output::to_json;
use crate::source::load_manifold;
use crate::verify::{verify_bundle, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "igcurv",
    version,
    about = "Curvature, Einstein tensors and identity checks for dual connections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the identity suite at Halton points and report residuals.
    Verify {
        /// Built-in name (e.g. sphere:1, random_statistical:3:42), spec path or inline JSON.
        manifold: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Offset into the Halton sequence.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Finite-difference step (default: IGCURV_DEFAULT_H or 1e-4).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Include wall time (makes output non-deterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Print the components of one tensor at a point as JSON.
    Compute {
        manifold: String,
        #[arg(long, value_enum)]
        tensor: TensorName,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// Comma-separated coordinates.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        at: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate one tensor over a grid.
    Table {
        manifold: String,
        #[arg(long, value_enum)]
        tensor: TensorName,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// One lo:hi:count axis per coordinate, comma-separated.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        grid: Vec<String>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual of one identity against the finite-difference step.
    Convergence {
        manifold: String,
        #[arg(long)]
        identity: String,
        #[arg(long, value_delimiter = ',')]
        h_sweep: Option<Vec<f64>>,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Output text and exit code of a successful run.
struct Outcome {
    text: String,
    out: Option<PathBuf>,
    code: i32,
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify {
            manifold,
            points,
            seed,
            h,
            json,
            csv,
            out,
            threads,
            timing,
        } => {
            let bundle = load_manifold(&manifold)?;
            let mut opts = VerifyOptions::new(points, seed, h.unwrap_or_else(default_base_step));
            opts.threads = threads;
            opts.timing = timing;
            let report = verify_bundle(&bundle, &opts)?;
            let text = if json {
                to_json(&report)
            } else if csv {
                report.to_csv()
            } else {
                report.to_text()
            };
            Ok(Outcome {
                text,
                out,
                code: report.exit_code(),
            })
        }
        Command::Compute {
            manifold,
            tensor,
            alpha,
            at,
            out,
        } => {
            let bundle = load_manifold(&manifold)?;
            let result = compute(&bundle, tensor, alpha, &at)?;
            Ok(Outcome {
                text: to_json(&result),
                out,
                code: 0,
            })
        }
        Command::Table {
            manifold,
            tensor,
            alpha,
            grid,
            csv,
            out,
        } => {
            let bundle = load_manifold(&manifold)?;
            let axes = grid
                .iter()
                .map(|s| Axis::parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let t = table(&bundle, tensor, alpha, &axes)?;
            Ok(Outcome {
                text: if csv { t.to_csv() } else { t.to_text() },
                out,
                code: 0,
            })
        }
        Command::Convergence {
            manifold,
            identity,
            h_sweep,
            points,
            seed,
            json,
        } => {
            let bundle = load_manifold(&manifold)?;
            let steps = h_sweep.unwrap_or_else(|| DEFAULT_SWEEP.to_vec());
            let report = convergence(&bundle, &identity, &steps, points, seed)?;
            Ok(Outcome {
                text: if json {
                    to_json(&report)
                } else {
                    report.to_text()
                },
                out: None,
                code: report.exit_code(),
            })
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code: 0 when everything passes, 1 on an identity failure, 2 on a
/// usage or specification error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(path) => std::fs::write(path, &outcome.text).map_err(CliError::from),
                None => stdout
                    .write_all(outcome.text.as_bytes())
                    .map_err(CliError::from),
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
