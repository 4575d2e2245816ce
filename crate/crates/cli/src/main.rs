mod cache;
mod commands;
mod config;
mod error;
mod report;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::cache::ResultCache;
use crate::commands::Context;
use crate::config::{Cli, Settings};
use crate::error::{CliError, Result};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let settings = Settings::resolve(cli.options)?;
    if let Some(t) = settings.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let cache = settings.cache_dir.as_deref().map(ResultCache::new);
    let mut ctx = Context { settings, cache };
    let report = commands::run(cli.command, &mut ctx)?;
    let written = report.write(&ctx.settings.out)?;
    if let Some(cache) = ctx.cache.as_mut() {
        cache.flush()?;
    }
    for line in &report.summary {
        println!("{line}");
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(report.passed())
}
