use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wavemap::harness::{
    analyze, default_output_root, exit_code_for_error, run, sweep, verify, RunConfig, SweepAxis, VerifyTolerances,
};
use wavemap::{Error, Result};

#[derive(Parser)]
#[command(name = "wavemap", version, about = "Equivariant wave map experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one config and write its bundle.
    Run {
        config: PathBuf,
        /// Bundle directory (default: <output root>/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config key, e.g. --set initial_data.amplitude=0.3
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run one member per value of a config key.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        key: String,
        /// Comma-separated TOML literals.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Recompute diagnostics and decomposition from stored fields.
    Analyze { bundle: PathBuf },
    /// Check invariants on a bundle.
    Verify { bundle: PathBuf },
}

fn load(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("override {o:?} is not KEY=VALUE")))?;
        cfg = cfg.with_override(k.trim(), v.trim())?;
    }
    Ok(cfg)
}

fn bundle_dir(cfg: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    let root = default_output_root();
    match (out, &cfg.output.directory) {
        (Some(p), _) => p,
        (None, Some(d)) if d.is_absolute() => d.clone(),
        (None, Some(d)) => root.join(d),
        (None, None) => root.join(&cfg.name),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { config, out, overrides } => {
            let cfg = load(&config, &overrides)?;
            let dir = bundle_dir(&cfg, out);
            let s = run(&cfg, &dir)?;
            println!("{}: {} (energy {}, drift {:.3e})", dir.display(), s.verdict.as_str(), s.energy, s.relative_energy_drift);
            Ok(s.exit_code)
        }
        Command::Sweep { config, key, values, out, workers, overrides } => {
            let cfg = load(&config, &overrides)?;
            let root = out.unwrap_or_else(|| default_output_root().join(&cfg.name));
            let members = sweep(&cfg, &SweepAxis { key, values }, &root, workers)?;
            for m in &members {
                match (&m.summary, &m.error) {
                    (Some(s), _) => println!("{:>3} {:>12} {:<16} energy {}", m.index, m.value, s.verdict.as_str(), s.energy),
                    (None, Some(e)) => println!("{:>3} {:>12} failed: {e}", m.index, m.value),
                    _ => {}
                }
            }
            Ok(members.iter().map(|m| m.exit_code).max().unwrap_or(0))
        }
        Command::Analyze { bundle } => {
            let d = analyze(&bundle)?;
            println!("{} snapshots re-analyzed; drift {:.3e}", d.ledger.rows.len(), d.ledger.relative_energy_drift());
            Ok(0)
        }
        Command::Verify { bundle } => {
            let report = verify(&bundle, &VerifyTolerances::default())?;
            for c in &report.checks {
                if c.skipped {
                    println!("SKIP {} (stored snapshots too sparse)", c.name);
                    continue;
                }
                println!("{} {} (measured {:.3e}, limit {:.3e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.limit);
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match dispatch(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for_error(&e)
        }
    };
    ExitCode::from(code as u8)
}
