//! Artifact bundles: one directory per run.
//!
//! ```text
//! manifest.json       resolved config, code version, energy report
//! config.toml         the same config as a standalone file
//! summary.json        verdict and headline numbers
//! ledger.csv          energy ledger per snapshot
//! scales.csv          gradient concentration and fitted bubble scale
//! trends.csv          exterior decay trends
//! decomposition.csv   soliton + radiation records (when enabled)
//! null_cone.csv       null-cone energies and fluxes (when enabled)
//! fields.csv          t, r, psi, psi_t (when enabled)
//! ```
//!
//! Bundles are assembled in a hidden staging directory and renamed into
//! place, so a failed write never leaves a half-written bundle behind.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::RadialGrid;

use super::config::RunConfig;
use super::run::{RunArtifacts, RunDiagnostics, RunSummary};

pub const MANIFEST: &str = "manifest.json";
pub const SUMMARY: &str = "summary.json";
pub const FIELDS: &str = "fields.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub degree: i32,
    pub soliton_tail_lambda: Option<f64>,
    pub dynamic_support: f64,
    pub compact_support: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub package: String,
    pub code_version: String,
    /// Resolved config; enough to recreate the run.
    pub config: String,
    pub energy_report: EnergyReport,
    pub files: Vec<String>,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn write_csv(dir: &Path, name: &str, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join(name))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Writes the diagnostic CSVs and returns their names.
pub fn write_diagnostics(dir: &Path, d: &RunDiagnostics) -> Result<Vec<String>> {
    let mut files = Vec::new();

    write_csv(
        dir,
        "ledger.csv",
        &d.ledger.column_names(),
        d.ledger.rows.iter().map(|r| {
            let mut row = vec![num(r.time), num(r.total_energy)];
            row.extend(r.self_similar.iter().map(|&x| opt(x)));
            row.extend(r.exterior_h.iter().map(|&x| opt(x)));
            row.extend(r.cesaro_integral.iter().map(|&x| num(x)));
            row.push(opt(r.virial));
            row
        }),
    )?;
    files.push("ledger.csv".to_string());

    write_csv(
        dir,
        "scales.csv",
        &strings(&["t", "max_abs_psi_r", "lambda_est_inv_max_psi_r", "lambda_fit"]),
        d.scales
            .iter()
            .map(|s| vec![num(s.time), num(s.max_gradient), num(s.lambda_est), opt(s.lambda_fit)]),
    )?;
    files.push("scales.csv".to_string());

    let sched = &d.trends.schedule;
    let mut header = vec!["t".to_string()];
    header.extend(sched.pairs().iter().map(|(l, a)| format!("E_lambda_t_to_t_minus_A[lambda={l};A={a}]")));
    header.extend(sched.lambdas.iter().map(|l| format!("sup_abs_psi_minus_n_pi[r>={l}t]")));
    for a in &sched.offsets {
        header.push(format!("sup_abs_psi_minus_psi_inf[r>=t-{a}]"));
        header.push(format!("sqrt_E_sqrt_A_plus_R_over_t_minus_A[A={a}]"));
    }
    write_csv(
        dir,
        "trends.csv",
        &header,
        d.trends.rows.iter().map(|r| {
            let mut row = vec![num(r.time)];
            row.extend(r.self_similar.iter().map(|&x| opt(x)));
            row.extend(r.exterior_linf.iter().map(|&x| num(x)));
            for b in &r.exterior_bound {
                row.push(opt(b.map(|x| x.0)));
                row.push(opt(b.map(|x| x.1)));
            }
            row
        }),
    )?;
    files.push("trends.csv".to_string());

    if let Some(dec) = &d.decomposition {
        write_csv(
            dir,
            "decomposition.csv",
            &strings(&[
                "t",
                "lambda_fit",
                "eps_norm_HxL2",
                "radiation_energy",
                "a_energy",
                "psi_energy",
                "lambda_over_t",
                "lambda_over_T_minus_t",
                "ambiguous",
                "degenerate",
            ]),
            dec.records.iter().map(|r| {
                vec![
                    num(r.t),
                    num(r.lambda_fit),
                    num(r.eps_norm()),
                    num(r.radiation_energy),
                    num(r.a_energy),
                    num(r.psi_energy),
                    opt(r.lambda_over_t),
                    opt(r.lambda_over_remaining),
                    r.ambiguous.to_string(),
                    r.degenerate.to_string(),
                ]
            }),
        )?;
        files.push("decomposition.csv".to_string());
    }

    if let Some(nc) = &d.null_cone {
        let cumulative = nc.cumulative_flux();
        write_csv(
            dir,
            "null_cone.csv",
            &strings(&["u", "E_lambda_u", "F_u0_u", "partial"]),
            nc.samples
                .iter()
                .zip(&cumulative)
                .map(|(s, f)| vec![num(s.u), num(s.energy), num(*f), s.partial.to_string()]),
        )?;
        files.push("null_cone.csv".to_string());
    }
    Ok(files)
}

/// Writes `t, r, psi, psi_t` for every `stride`-th snapshot and the last one.
pub fn write_fields(dir: &Path, history: &[FieldState], stride: usize) -> Result<()> {
    let stride = stride.max(1);
    let mut w = csv::Writer::from_path(dir.join(FIELDS))?;
    w.write_record(["t", "r", "psi", "psi_t"])?;
    let last = history.len().saturating_sub(1);
    for (k, s) in history.iter().enumerate() {
        if k % stride != 0 && k != last {
            continue;
        }
        let t = num(s.time);
        for i in 0..s.len() {
            w.write_record([t.as_str(), &num(s.grid.r(i)), &num(s.psi[i]), &num(s.psi_t[i])])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_contents(dir: &Path, art: &RunArtifacts, summary: &RunSummary) -> Result<()> {
    let config_text = art.config.to_toml_string()?;
    fs::write(dir.join("config.toml"), &config_text)?;
    let mut files = write_diagnostics(dir, &art.diagnostics)?;
    if art.config.output.fields {
        write_fields(dir, &art.outcome.snapshots, art.config.output.field_stride)?;
        files.push(FIELDS.to_string());
    }
    files.push(SUMMARY.to_string());
    write_json(&dir.join(SUMMARY), summary)?;
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME").to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config_text,
        energy_report: EnergyReport {
            energy: art.data.energy,
            degree: art.data.degree,
            soliton_tail_lambda: art.data.soliton_tail,
            dynamic_support: art.data.dynamic_support,
            compact_support: art.data.compact_support,
        },
        files,
    };
    write_json(&dir.join(MANIFEST), &manifest)
}

/// Stages into a sibling directory, then renames over `dir`. An existing
/// `dir` is replaced only if it is itself a bundle.
pub fn write_bundle(art: &RunArtifacts, dir: &Path) -> Result<RunSummary> {
    let summary = art.summary();
    let name = dir
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("bad bundle path {}", dir.display())))?
        .to_string_lossy()
        .into_owned();
    let parent = dir.parent().map(Path::to_path_buf).unwrap_or_default();
    if !parent.as_os_str().is_empty() {
        fs::create_dir_all(&parent)?;
    }
    let staging = parent.join(format!(".{name}.partial"));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir_all(&staging)?;
    let result = write_contents(&staging, art, &summary).and_then(|_| {
        if dir.exists() {
            if !dir.join(MANIFEST).exists() {
                return Err(Error::InvalidConfig(format!(
                    "{} exists and is not a bundle; refusing to replace it",
                    dir.display()
                )));
            }
            fs::remove_dir_all(dir)?;
        }
        fs::rename(&staging, dir)?;
        Ok(())
    });
    if let Err(e) = result {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    Ok(summary)
}

/// A bundle read back from disk.
#[derive(Debug, Clone)]
pub struct StoredBundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub config: RunConfig,
    pub summary: RunSummary,
    pub history: Vec<FieldState>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn parse(field: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::InvalidState(format!("not a number in {FIELDS}: {field:?}")))
}

/// Reads the snapshots stored in `fields.csv`.
pub fn read_fields(path: &Path, grid: RadialGrid, degree: i32) -> Result<Vec<FieldState>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut history = Vec::new();
    let mut current: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let finish = |c: (f64, Vec<f64>, Vec<f64>), out: &mut Vec<FieldState>| -> Result<()> {
        out.push(FieldState::new(grid, c.1, c.2, c.0, degree)?);
        Ok(())
    };
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 4 {
            return Err(Error::InvalidState(format!("{FIELDS} rows need 4 columns")));
        }
        let t = parse(&rec[0])?;
        let (psi, psi_t) = (parse(&rec[2])?, parse(&rec[3])?);
        match &mut current {
            Some(c) if c.0 == t => {
                c.1.push(psi);
                c.2.push(psi_t);
            }
            _ => {
                if let Some(c) = current.take() {
                    finish(c, &mut history)?;
                }
                current = Some((t, vec![psi], vec![psi_t]));
            }
        }
    }
    if let Some(c) = current {
        finish(c, &mut history)?;
    }
    Ok(history)
}

pub fn read_bundle(dir: &Path) -> Result<StoredBundle> {
    let manifest: Manifest = read_json(&dir.join(MANIFEST))?;
    let summary: RunSummary = read_json(&dir.join(SUMMARY))?;
    let config = RunConfig::from_toml_str(&manifest.config)?;
    let fields = dir.join(FIELDS);
    let history = if fields.exists() {
        read_fields(&fields, config.grid()?, manifest.energy_report.degree)?
    } else {
        Vec::new()
    };
    Ok(StoredBundle { dir: dir.to_path_buf(), manifest, config, summary, history })
}
