//! On-disk artifacts.
//!
//! JSON is written with sorted keys and shortest round-trip floats, so
//! identical runs produce identical bytes apart from the `metadata` block.
//! Every write goes to a temporary file in the target directory that is
//! then renamed over the destination.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use logsphere_core::{MinimizeResult, SphereConfiguration};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const ENERGIES_CSV: &str = "energies.csv";

pub fn config_file_name(n: usize) -> String {
    format!("config_{n}.json")
}

/// Serializes through `serde_json::Value`, whose object map is ordered by
/// key.
pub fn to_canonical_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(e.to_string()))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub timestamp: u64,
    pub version: String,
}

impl Metadata {
    pub fn now() -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            timestamp,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Contents of `config_<n>.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub n: usize,
    pub energy: f64,
    pub grad_norm: f64,
    pub min_separation: f64,
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
    pub seed: u64,
    pub points: SphereConfiguration,
    /// The run that produced this record; replaying it reproduces the file.
    pub run: RunConfig,
    pub metadata: Metadata,
}

impl ConfigRecord {
    pub fn new(res: &MinimizeResult, run: RunConfig, seed: u64) -> Self {
        Self {
            n: res.n(),
            energy: res.energy,
            grad_norm: res.grad_norm,
            min_separation: res.min_separation,
            converged: res.converged,
            iterations: res.iterations,
            restarts_used: res.restarts_used,
            seed,
            points: res.best.clone(),
            run,
            metadata: Metadata::now(),
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// One row of `energies.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub n: usize,
    pub energy: f64,
    pub min_separation: f64,
    pub converged: bool,
    pub seed: u64,
}

pub fn read_energies(path: &Path) -> CliResult<Vec<EnergyRow>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// Fails if any `(n, seed)` of `new_rows` is already in the file or repeats
/// within `new_rows`.
pub fn check_new_rows(path: &Path, new_rows: &[(usize, u64)]) -> CliResult<()> {
    let mut seen: BTreeSet<(usize, u64)> = if path.exists() {
        read_energies(path)?.iter().map(|r| (r.n, r.seed)).collect()
    } else {
        BTreeSet::new()
    };
    for &(n, seed) in new_rows {
        if !seen.insert((n, seed)) {
            return Err(CliError::Data(format!(
                "{} already has a row for n = {n}, seed = {seed}",
                path.display()
            )));
        }
    }
    Ok(())
}

/// Appends rows, rewriting the whole file atomically.
pub fn append_energies(path: &Path, rows: &[EnergyRow]) -> CliResult<()> {
    check_new_rows(
        path,
        &rows.iter().map(|r| (r.n, r.seed)).collect::<Vec<_>>(),
    )?;
    let mut all = if path.exists() {
        read_energies(path)?
    } else {
        Vec::new()
    };
    all.extend_from_slice(rows);
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &all {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Data(e.to_string()))?;
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, seed: u64, energy: f64) -> EnergyRow {
        EnergyRow {
            n,
            energy,
            min_separation: 1.0,
            converged: true,
            seed,
        }
    }

    #[test]
    fn energies_append_and_reject_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(ENERGIES_CSV);
        append_energies(&path, &[row(4, 1, -5.884_919_142_165_488)]).unwrap();
        append_energies(&path, &[row(4, 2, -5.8), row(5, 1, 0.1 + 0.2)]).unwrap();
        let rows = read_energies(&path).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows[0].energy.to_bits(),
            (-5.884_919_142_165_488f64).to_bits()
        );
        assert_eq!(rows[2].energy.to_bits(), (0.1f64 + 0.2).to_bits());
        assert!(append_energies(&path, &[row(4, 2, 0.0)]).is_err());
        assert!(append_energies(&path, &[row(6, 2, 0.0), row(6, 2, 1.0)]).is_err());
        assert_eq!(read_energies(&path).unwrap().len(), 3);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("n,energy,min_separation,converged,seed\n"));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: f64,
        }
        let s = to_canonical_json(&S {
            zeta: 0.1,
            alpha: 1e-300,
        })
        .unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["zeta"].as_f64().unwrap().to_bits(), 0.1f64.to_bits());
        assert_eq!(
            back["alpha"].as_f64().unwrap().to_bits(),
            1e-300f64.to_bits()
        );
    }
}
