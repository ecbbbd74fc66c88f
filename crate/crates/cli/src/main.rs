mod cache;
mod commands;
mod error;
mod input;
mod poly;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::cache::CacheFile;
use crate::commands::{Command, JobSpec};
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact lattice point sums, local Euler-Maclaurin contributions and
/// Ehrhart quasipolynomials of rational polytopes.
#[derive(Debug, Parser)]
#[command(name = "emlattice", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Polytope or cone JSON, as a file path or inline
    #[arg(long, value_name = "FILE")]
    input: Option<String>,
    /// Polynomial such as "x1^20*x2 - 3/2*x2^2"
    #[arg(long, value_name = "STR")]
    poly: Option<String>,
    /// Truncation order of the series (mu and genfun default to 4)
    #[arg(long, value_name = "N")]
    order: Option<usize>,
    /// JSON file with a scalar product matrix, overriding any inline "Q"
    #[arg(long, value_name = "FILE")]
    q: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Persisted mu-cache file
    #[arg(long, value_name = "FILE")]
    cache: Option<PathBuf>,
}

fn execute(cli: Cli) -> CliResult<i32> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let engine = emlattice::mu::default_engine();
    let mut cache = cli.cache.as_deref().map(|p| CacheFile::open(p, engine)).transpose()?;
    if let Some(c) = &cache {
        log::info!("loaded {} cached series", c.loaded());
    }
    let job = JobSpec {
        command: cli.command,
        input: cli.input,
        poly: cli.poly,
        order: cli.order,
        q: cli.q,
        json: cli.format == Format::Json,
    };
    let report = commands::run(&job)?;
    if let Some(c) = &mut cache {
        let n = c.save(engine)?;
        log::info!("appended {n} series to the cache");
    }
    let mut out = std::io::stdout().lock();
    out.write_all(report.render(job.json).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    Ok(report.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("emlattice: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
