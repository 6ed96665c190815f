use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::RunConfig;
use super::run::{exit_code_for_error, run, RunSummary};

pub const SWEEP_SUMMARY: &str = "sweep_summary.csv";

/// One config key and the values it takes, as TOML literals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    pub fn numeric(key: &str, values: &[f64]) -> Self {
        Self { key: key.to_string(), values: values.iter().map(|v| format!("{v:?}")).collect() }
    }
}

#[derive(Debug, Clone)]
pub struct SweepMember {
    pub index: usize,
    pub value: String,
    pub directory: PathBuf,
    pub exit_code: i32,
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

fn run_member(template: &RunConfig, axis: &SweepAxis, root: &Path, index: usize) -> SweepMember {
    let value = axis.values[index].clone();
    let directory = root.join(format!("member_{index:03}"));
    let result = template
        .with_override(&axis.key, &value)
        .map(|mut c| {
            c.name = format!("{}_{index:03}", template.name);
            c.output.directory = Some(directory.clone());
            c
        })
        .and_then(|c| run(&c, &directory));
    match result {
        Ok(s) => SweepMember { index, value, directory, exit_code: s.exit_code, summary: Some(s), error: None },
        Err(e) => SweepMember {
            index,
            value,
            directory,
            exit_code: exit_code_for_error(&e),
            summary: None,
            error: Some(e.to_string()),
        },
    }
}

/// Runs one member per axis value on a pool of `workers` threads (default:
/// available parallelism). Member failures are recorded, not propagated.
pub fn sweep(template: &RunConfig, axis: &SweepAxis, root: &Path, workers: Option<usize>) -> Result<Vec<SweepMember>> {
    if axis.values.is_empty() {
        return Err(Error::InvalidConfig("sweep axis has no values".into()));
    }
    fs::create_dir_all(root)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    let members: Vec<SweepMember> =
        pool.install(|| (0..axis.values.len()).into_par_iter().map(|i| run_member(template, axis, root, i)).collect());
    write_sweep_summary(root, &axis.key, &members)?;
    Ok(members)
}

fn write_sweep_summary(root: &Path, key: &str, members: &[SweepMember]) -> Result<()> {
    let mut w = csv::Writer::from_path(root.join(SWEEP_SUMMARY))?;
    w.write_record(["index", key, "exit_code", "verdict", "energy", "final_eps_norm", "final_lambda", "error"])?;
    let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_default();
    for m in members {
        let s = m.summary.as_ref();
        w.write_record([
            m.index.to_string(),
            m.value.clone(),
            m.exit_code.to_string(),
            s.map(|s| s.verdict.as_str().to_string()).unwrap_or_default(),
            opt(s.map(|s| s.energy)),
            opt(s.and_then(|s| s.final_eps_norm)),
            opt(s.and_then(|s| s.final_lambda)),
            m.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
