mod catalog;
mod config;
mod error;
mod report;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use smms_core::catalog::{FamilySpec, FamilyTag};

use crate::config::{parse_assignments, Config, DEFAULT_TOL};
use crate::error::{exit, CliError, CliResult};
use crate::report::Options;

/// Verify weighted Einstein structures on warped products.
#[derive(Debug, Parser)]
#[command(name = "smms", version)]
struct Cli {
    /// Residual and constant tolerance; overrides the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Grid size; overrides the config.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a config's instance against its declared expectations.
    Verify { config: PathBuf },
    /// Apply the config's conformal factor and verify the image.
    Conformal { config: PathBuf },
    /// List the families or emit a config for one.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Pointwise residuals of a table row as CSV.
    Table {
        row: table::Row,
        /// Parameters as name=value.
        params: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    List,
    Make {
        family: String,
        /// Parameters as name=value.
        params: Vec<String>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let opts = Options {
        tol: cli.tol,
        grid: cli.grid,
    };
    let out = cli.out.as_deref();
    let status = |ok: bool| if ok { exit::OK } else { exit::UNMET };
    match cli.command {
        Command::Verify { config } => {
            let r = report::verify(Config::load(&config)?, opts)?;
            emit(out, &(serde_json::to_string_pretty(&r)? + "\n"))?;
            Ok(status(r.ok))
        }
        Command::Conformal { config } => {
            let r = report::conformal(Config::load(&config)?, opts)?;
            emit(out, &(serde_json::to_string_pretty(&r)? + "\n"))?;
            Ok(status(r.ok))
        }
        Command::Catalog(CatalogCommand::List) => {
            emit(out, &catalog::list())?;
            Ok(exit::OK)
        }
        Command::Catalog(CatalogCommand::Make { family, params }) => {
            let tag: FamilyTag = family.parse()?;
            let spec = FamilySpec {
                tag,
                params: parse_assignments(&params)?,
            };
            let cfg = catalog::make_config(tag, spec)?;
            emit(out, &(serde_json::to_string_pretty(&cfg)? + "\n"))?;
            Ok(exit::OK)
        }
        Command::Table { row, params } => {
            let t = table::table(row, &params, cli.grid)?;
            emit(out, &t.csv)?;
            Ok(status(t.ok(cli.tol.unwrap_or(DEFAULT_TOL))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::ERROR } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::ERROR)
        }
    }
}
