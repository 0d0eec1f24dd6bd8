//! Command-line front end: `run`, `tables` and `selftest`.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 bad usage or
//! configuration, 3 infrastructure failure.

pub mod config;
pub mod selftest;
pub mod tables;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{self, ExperimentConfig};

pub use config::{load_config, parse_config};

pub const THREADS_ENV: &str = "QUANTCLT_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFRA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "quantclt",
    version,
    about = "Empirical quantile processes: simulation, limit laws and Monte Carlo checks"
)]
pub struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for manifest.json and report.csv.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Replace the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// `key=value` replacing a config key (repeatable).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Print analytic objects as CSV.
    Tables {
        #[command(subcommand)]
        kind: tables::TableKind,
    },
    /// Run the identity suite and analytic oracle checks.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SELFTEST_SEED)]
        seed: u64,
    },
}

/// Provenance written next to every report.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config_path: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub status: String,
    pub outputs: Vec<String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn write_manifest(path: &Path, m: &RunManifest) -> Result<()> {
    let json = serde_json::to_string_pretty(m)
        .map_err(|e| Error::Config(format!("cannot serialize manifest: {e}")))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// `run`: 0 pass, 1 verdict failure, 2 config error, 3 infrastructure error.
pub fn cmd_run(
    config: &Path,
    out: &Path,
    seed: Option<u64>,
    overrides: &[String],
    threads: Option<usize>,
) -> i32 {
    let mut cfg = match load_config(config, overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {}: {e}", config.display());
        return EXIT_USAGE;
    }
    match execute(&cfg, config, out, threads) {
        Ok(report) => {
            print!("{}", report.summary());
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INFRA
        }
    }
}

fn execute(
    cfg: &ExperimentConfig,
    config: &Path,
    out: &Path,
    threads: Option<usize>,
) -> Result<harness::Report> {
    fs::create_dir_all(out)?;
    let manifest_path = out.join("manifest.json");
    let report_path = out.join("report.csv");
    let mut manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_path: config.display().to_string(),
        config: cfg.clone(),
        seed: cfg.seed,
        started_at: now(),
        finished_at: None,
        status: "running".into(),
        outputs: vec![
            manifest_path.display().to_string(),
            report_path.display().to_string(),
        ],
    };
    write_manifest(&manifest_path, &manifest)?;
    let result = harness::run(cfg, threads).and_then(|report| {
        report.write_csv(fs::File::create(&report_path)?)?;
        Ok(report)
    });
    manifest.finished_at = Some(now());
    manifest.status = match &result {
        Ok(r) => r.verdict().to_string(),
        Err(_) => "error".into(),
    };
    write_manifest(&manifest_path, &manifest)?;
    result
}

/// `tables`: prints CSV; 2 on invalid parameters.
pub fn cmd_tables(kind: &tables::TableKind) -> i32 {
    match tables::render(kind) {
        Ok(csv) => {
            print!("{csv}");
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// `selftest`: 0 iff every check passes; otherwise 1 naming the first failure.
pub fn cmd_selftest(seed: u64, threads: Option<usize>) -> i32 {
    let corrupt = std::env::var(selftest::CORRUPT_ENV).ok();
    let checks =
        pool(threads).and_then(|p| p.install(|| selftest::run_checks(seed, corrupt.as_deref())));
    let checks = match checks {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INFRA;
        }
    };
    let lines: Vec<String> = checks.iter().map(selftest::Check::line).collect();
    for l in &lines {
        println!("{l}");
    }
    println!(
        "seed {seed}; summary sha256 {}",
        selftest::summary_hash(&lines)
    );
    match checks.iter().find(|c| !c.passed()) {
        Some(c) => {
            eprintln!("selftest failed: {}", c.name);
            EXIT_FAIL
        }
        None => EXIT_PASS,
    }
}

/// Parse arguments and dispatch; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Run {
            config,
            out,
            seed,
            overrides,
        } => cmd_run(config, out, *seed, overrides, cli.threads),
        Command::Tables { kind } => cmd_tables(kind),
        Command::Selftest { seed } => cmd_selftest(*seed, cli.threads),
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    main_with_args(std::env::args_os())
}
