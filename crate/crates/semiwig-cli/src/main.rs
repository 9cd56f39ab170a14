//! `semiwig`: runs scenario configs and compares their artifacts.
//!
//! Exit codes: 0 success, 2 configuration or comparability error, 3 numerical
//! failure, 4 coverage or resolution failure, 1 anything else.

mod compare;
mod config;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Method;
use crate::error::{CliError, CliResult};

/// Size of the worker pool; unset means one thread per core.
const THREADS_ENV: &str = "SEMIWIG_THREADS";

#[derive(Parser)]
#[command(
    name = "semiwig",
    version,
    about = "Semiclassical Wigner expansions: scenario runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario (a TOML path or a bundled name) and write its artifact directory.
    Run {
        config: String,
        /// Artifact directory; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the artifacts of two runs on identical grids and ε.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "comparison")]
        out: PathBuf,
        /// Expansion read from `a`; defaults to its only one, else harmonic.
        #[arg(long, value_enum)]
        expansion_a: Option<Method>,
        /// Expansion read from `b`; defaults to its only one, else classical.
        #[arg(long, value_enum)]
        expansion_b: Option<Method>,
    },
    /// Check a config against the schema without computing anything.
    Validate { config: String },
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::schema(THREADS_ENV, format!("`{raw}` is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::schema(THREADS_ENV, e.to_string()))
}

fn execute(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Validate { config } => {
            let loaded = config::load(&config)?;
            println!(
                "ok: {} (config sha256 {})",
                loaded.config.name,
                loaded.config.hash()
            );
        }
        Command::Run { config, out } => {
            let loaded = config::load(&config)?;
            let out = out
                .or_else(|| loaded.config.output.clone())
                .unwrap_or_else(|| PathBuf::from("runs").join(&loaded.config.name));
            let manifest = run::run(&loaded, &out)?;
            println!(
                "{}: wrote {} files to {}",
                manifest.name,
                manifest.files.len(),
                out.display()
            );
        }
        Command::Compare {
            a,
            b,
            out,
            expansion_a,
            expansion_b,
        } => {
            let report = compare::compare(&a, &b, &out, expansion_a, expansion_b)?;
            println!(
                "{} ({}) vs {} ({}): max field delta {:e}",
                a.display(),
                report.a.expansion.label(),
                b.display(),
                report.b.expansion.label(),
                report.max_field_delta()
            );
            for p in &report.focal {
                println!(
                    "focal ε = {} ν = {}: {:.6} vs {:.6} (ratio {:.3}{})",
                    p.eps,
                    p.nu,
                    p.amplitude_a,
                    p.amplitude_b,
                    p.ratio,
                    if p.same_order {
                        ""
                    } else {
                        ", not within a factor 2"
                    }
                );
            }
            for s in &report.scaling {
                let flag = if s.order_mismatch {
                    "  ORDER MISMATCH"
                } else {
                    ""
                };
                println!(
                    "focal slope ν = {}: {:.3} vs {:.3}{flag}",
                    s.nu, s.slope_a, s.slope_b
                );
            }
            if report.order_mismatch() {
                println!("the two expansions scale with different powers of ε");
            }
            println!("tables written to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
