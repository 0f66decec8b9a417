//! Command-line front end: a small model language for factor graphs and
//! Bayesian networks, composition of open factor graphs along their open
//! ports, joint and marginal tables, Graphviz export and the law suites.

pub mod commands;
pub mod dsl;
pub mod error;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use copycat_core::laws::LawConfig;

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "copycat",
    version,
    about = "Compose and evaluate open factor graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Glue the right open ports of G1 to the left open ports of G2.
    Compose {
        g1: PathBuf,
        g2: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Print the joint table of a model.
    Joint {
        model: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Print the marginal table over a comma-separated list of variables.
    Marginal {
        model: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', num_args = 0..=1)]
        vars: Vec<String>,
        #[arg(long)]
        normalize: bool,
    },
    /// Write the factor/variable graph in Graphviz format.
    Dot {
        model: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Run the law suites and report one line per check.
    Check {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Test fixture: corrupt one entry of every copy map.
        #[arg(long, hide = true)]
        inject_copy_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    Laws,
    All,
}

fn load(path: &Path) -> CliResult<dsl::ModelFile> {
    dsl::parse_file(path)
}

fn deliver(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    let io = |path: &str, source| CliError::Io {
        path: path.to_string(),
        source,
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io(&p.display().to_string(), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| io("standard output", e)),
    }
}

/// Runs one command, writing its output to `stdout` unless it goes to a
/// file.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Compose { g1, g2, out } => {
            let composed = commands::compose(&load(g1)?, &load(g2)?)?;
            deliver(&dsl::emit(&composed), out.as_deref(), stdout)
        }
        Command::Joint { model, normalize } => {
            let f = commands::joint(&load(model)?)?;
            deliver(&commands::render_table(&f, *normalize)?, None, stdout)
        }
        Command::Marginal {
            model,
            vars,
            normalize,
        } => {
            let keep: Vec<String> = vars.iter().filter(|v| !v.is_empty()).cloned().collect();
            let f = commands::marginal(&load(model)?, &keep)?;
            deliver(&commands::render_table(&f, *normalize)?, None, stdout)
        }
        Command::Dot { model, out } => {
            deliver(&commands::dot(&load(model)?), out.as_deref(), stdout)
        }
        Command::Check {
            suite,
            seed,
            count,
            inject_copy_fault,
        } => {
            let cfg = LawConfig {
                seed: *seed,
                count: *count,
                inject_copy_fault: *inject_copy_fault,
            };
            let suite = match suite {
                SuiteArg::Laws => commands::Suite::Laws,
                SuiteArg::All => commands::Suite::All,
            };
            let report = commands::check(suite, &cfg);
            deliver(&report.text, None, stdout)?;
            if report.failed > 0 {
                return Err(CliError::ChecksFailed(report.failed, report.total));
            }
            Ok(())
        }
    }
}

/// Applies `COPYCAT_MAX_CELLS` to the table-size cap.
pub fn apply_cell_cap(value: Option<&str>) -> CliResult<()> {
    if let Some(v) = value {
        let cap: usize = v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "COPYCAT_MAX_CELLS must be a positive integer, got {v:?}"
            ))
        })?;
        if cap == 0 {
            return Err(CliError::Usage("COPYCAT_MAX_CELLS must be positive".into()));
        }
        copycat_core::limits::set_max_cells(cap);
    }
    Ok(())
}
