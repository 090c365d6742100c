use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use logsphere_core::lattice::{w_anchor, w_density_one};
use logsphere_core::{
    expansion_report, minimize_log_energy, paper_constants, reduce_lattice, separation_check,
    w_lattice, BravaisLattice, ExpansionReport, FitModel, InitStrategy, LatticeShape,
    MinimizeOptions, MinimizeResult, TableEntry,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Command, FitArgs, InitArg, LatticeArgs, ModelArg, OptimizerArgs};
use crate::config::{LatticeInput, RunConfig};
use crate::error::{CliError, CliResult};
use crate::formats::{
    append_energies, check_new_rows, config_file_name, read_energies, to_canonical_json,
    write_atomic, ConfigRecord, EnergyRow, Metadata, ENERGIES_CSV,
};
use crate::selftest;

/// Separation constant used for the diagnostic after each minimization.
const SEPARATION_C: f64 = 1.0;

pub fn execute(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let run = match command {
        Command::Minimize(a) => RunConfig::Minimize {
            n: a.n,
            options: options_from(&a.opt, Some(a.n))?,
            out_dir: a.opt.out_dir.clone(),
        },
        Command::Sweep(a) => {
            if a.opt.init_from.is_some() {
                return Err(CliError::Usage(
                    "--init-from is not available for sweep".into(),
                ));
            }
            if a.step == 0 || a.from > a.to {
                return Err(CliError::Usage(
                    "need --from <= --to and --step >= 1".into(),
                ));
            }
            RunConfig::Sweep {
                n_list: (a.from..=a.to).step_by(a.step).collect(),
                options: options_from(&a.opt, None)?,
                out_dir: a.opt.out_dir.clone(),
            }
        }
        Command::Lattice(a) => lattice_config(&a)?,
        Command::Fit(a) => fit_config(&a),
        Command::Selftest(a) => RunConfig::Selftest { seed: a.seed },
        Command::Replay(a) => {
            let mut run = load_run_config(&a.config)?;
            if let Some(dir) = a.out_dir {
                match &mut run {
                    RunConfig::Minimize { out_dir, .. } | RunConfig::Sweep { out_dir, .. } => {
                        *out_dir = dir
                    }
                    _ => {}
                }
            }
            run
        }
    };
    run_config(&run, out)
}

pub fn run_config(run: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    match run {
        RunConfig::Minimize {
            n,
            options,
            out_dir,
        } => {
            check_new_rows(&out_dir.join(ENERGIES_CSV), &[(*n, options.seed)])?;
            let res = minimize_log_energy(*n, options)?;
            record(&res, run.clone(), options.seed, out_dir)?;
            print_result(out, &res)?;
            Ok(())
        }
        RunConfig::Sweep {
            n_list,
            options,
            out_dir,
        } => sweep(n_list, options, out_dir, out),
        RunConfig::Lattice { input, density } => lattice(input, *density, out),
        RunConfig::Fit {
            csv,
            model,
            out: path,
        } => fit(csv, *model, path, out),
        RunConfig::Selftest { seed } => {
            let outcomes = selftest::run_all(*seed);
            for o in &outcomes {
                writeln!(out, "{}", o.line())?;
            }
            let failed: Vec<&str> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.name)
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Selftest(failed.join(", ")))
            }
        }
    }
}

fn options_from(a: &OptimizerArgs, n: Option<usize>) -> CliResult<MinimizeOptions> {
    let init = match (&a.init_from, a.init) {
        (Some(path), _) => {
            let rec = ConfigRecord::read(path)?;
            if Some(rec.n) != n {
                return Err(CliError::Usage(format!(
                    "{} holds {} points, expected {}",
                    path.display(),
                    rec.n,
                    n.unwrap_or(0)
                )));
            }
            InitStrategy::Provided(rec.points)
        }
        (None, InitArg::Spiral) => InitStrategy::SpiralPerturbed,
        (None, InitArg::Random) => InitStrategy::RandomUniform,
    };
    Ok(MinimizeOptions {
        restarts: a.restarts,
        max_iters: a.max_iters,
        grad_tol: a.grad_tol,
        seed: a.seed,
        init,
        step0: a.step0,
        lbfgs_memory: a.lbfgs_memory,
        ..MinimizeOptions::default()
    })
}

fn load_run_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    let run = match value.get("run") {
        Some(inner) => inner.clone(),
        None => value,
    };
    Ok(serde_json::from_value(run)?)
}

fn print_result(out: &mut dyn Write, res: &MinimizeResult) -> CliResult<()> {
    writeln!(
        out,
        "n={} energy={} grad_norm={:.3e} converged={} min_separation={} iterations={}",
        res.n(),
        res.energy,
        res.grad_norm,
        res.converged,
        res.min_separation,
        res.iterations
    )?;
    Ok(())
}

/// Appends the energy row and writes `config_<n>.json` unless a stored
/// configuration already has a lower energy.
fn record(res: &MinimizeResult, run: RunConfig, seed: u64, out_dir: &Path) -> CliResult<()> {
    let n = res.n();
    if !separation_check(res, SEPARATION_C) {
        log::warn!(
            "n = {n}: minimum separation {} below {SEPARATION_C}/sqrt(n-1)",
            res.min_separation
        );
    }
    let config_path = out_dir.join(config_file_name(n));
    let keep_existing = config_path.exists()
        && ConfigRecord::read(&config_path).is_ok_and(|old| old.energy <= res.energy);
    if keep_existing {
        log::info!(
            "{} already holds an energy at most {}",
            config_path.display(),
            res.energy
        );
    } else {
        let rec = ConfigRecord::new(res, run, seed);
        write_atomic(&config_path, to_canonical_json(&rec)?.as_bytes())?;
    }
    append_energies(
        &out_dir.join(ENERGIES_CSV),
        &[EnergyRow {
            n,
            energy: res.energy,
            min_separation: res.min_separation,
            converged: res.converged,
            seed,
        }],
    )
}

fn sweep(
    n_list: &[usize],
    options: &MinimizeOptions,
    out_dir: &Path,
    out: &mut dyn Write,
) -> CliResult<()> {
    let keys: Vec<(usize, u64)> = n_list.iter().map(|&n| (n, options.seed)).collect();
    check_new_rows(&out_dir.join(ENERGIES_CSV), &keys)?;
    let mut failed = Vec::new();
    for &n in n_list {
        match minimize_log_energy(n, options) {
            Ok(res) => {
                let run = RunConfig::Minimize {
                    n,
                    options: options.clone(),
                    out_dir: out_dir.to_path_buf(),
                };
                record(&res, run, options.seed, out_dir)?;
                print_result(out, &res)?;
            }
            Err(e @ logsphere_core::Error::NoProgress { .. }) => {
                log::warn!("{e}");
                writeln!(out, "n={n} failed: {e}")?;
                failed.push(n);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::NoProgress(format!(
            "no progress for n in {failed:?}"
        )))
    }
}

fn lattice_config(a: &LatticeArgs) -> CliResult<RunConfig> {
    let input = if a.constants {
        LatticeInput::Constants
    } else if a.triangular {
        LatticeInput::Triangular
    } else if a.square {
        LatticeInput::Square
    } else if let Some(b) = &a.basis {
        LatticeInput::Basis {
            u: [b[0], b[1]],
            v: [b[2], b[3]],
        }
    } else if let Some(t) = &a.tau {
        LatticeInput::Tau { re: t[0], im: t[1] }
    } else {
        return Err(CliError::Usage("no lattice given".into()));
    };
    Ok(RunConfig::Lattice {
        input,
        density: a.density,
    })
}

fn lattice(input: &LatticeInput, density: Option<f64>, out: &mut dyn Write) -> CliResult<()> {
    let shape = match input {
        LatticeInput::Constants => {
            let c = paper_constants();
            writeln!(out, "c_bhs = {}", c.c_bhs)?;
            writeln!(out, "w_tri_density1 = {}", c.w_tri_density1)?;
            writeln!(out, "rsz_a = {}", c.rsz_a)?;
            writeln!(out, "rsz_b = {}", c.rsz_b)?;
            writeln!(out, "rsz_minw_lower = {}", c.rsz_minw_lower)?;
            writeln!(out, "rsz_c_lower = {}", c.rsz_c_lower)?;
            return Ok(());
        }
        LatticeInput::Triangular => LatticeShape::triangular(1.0)?,
        LatticeInput::Square => LatticeShape::from_tau(Complex64::new(0.0, 1.0), 1.0)?,
        LatticeInput::Basis { u, v } => reduce_lattice(&BravaisLattice::new(*u, *v)?)?,
        LatticeInput::Tau { re, im } => LatticeShape::from_tau(Complex64::new(*re, *im), 1.0)?,
    };
    let m = density.unwrap_or(shape.density);
    if m.is_nan() || m <= 0.0 || !m.is_finite() {
        return Err(CliError::Usage(format!(
            "density must be positive, got {m}"
        )));
    }
    writeln!(out, "tau = {} + {}i", shape.tau.re, shape.tau.im)?;
    writeln!(out, "density = {}", shape.density)?;
    writeln!(out, "W(m=1/(2pi)) = {}", w_anchor(shape.tau)?)?;
    writeln!(out, "W(m=1) = {}", w_density_one(shape.tau)?)?;
    let at_m = LatticeShape {
        tau: shape.tau,
        density: m,
    };
    writeln!(out, "W(m={m}) = {}", w_lattice(&at_m)?)?;
    Ok(())
}

fn fit_config(a: &FitArgs) -> RunConfig {
    let out = a.out.clone().unwrap_or_else(|| {
        a.csv
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default()
            .join("fit_report.json")
    });
    RunConfig::Fit {
        csv: a.csv.clone(),
        model: match a.model {
            ModelArg::Plain => FitModel::PlainMean,
            ModelArg::Power => FitModel::PowerLaw,
        },
        out,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReportFile {
    pub source: PathBuf,
    pub report: ExpansionReport,
    pub metadata: Metadata,
}

/// Best energy per `n`, paired with its configuration when the stored
/// `config_<n>.json` holds exactly that energy.
pub fn load_table(csv: &Path) -> CliResult<Vec<TableEntry>> {
    let rows = read_energies(csv)?;
    let mut best: BTreeMap<usize, f64> = BTreeMap::new();
    for r in rows {
        best.entry(r.n)
            .and_modify(|e| {
                if r.energy < *e {
                    *e = r.energy
                }
            })
            .or_insert(r.energy);
    }
    let dir = csv.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut table = Vec::with_capacity(best.len());
    for (n, energy) in best {
        let path = dir.join(config_file_name(n));
        let config = match ConfigRecord::read(&path) {
            Ok(rec) if rec.energy.to_bits() == energy.to_bits() => Some(rec.points),
            _ => None,
        };
        table.push(TableEntry { n, energy, config });
    }
    Ok(table)
}

fn fit(csv: &Path, model: FitModel, path: &Path, out: &mut dyn Write) -> CliResult<()> {
    if !csv.exists() {
        return Err(CliError::Data(format!("{}: no such file", csv.display())));
    }
    let table = load_table(csv)?;
    let report = expansion_report(&table, &paper_constants(), model)?;
    let file = FitReportFile {
        source: csv.to_path_buf(),
        report,
        metadata: Metadata::now(),
    };
    write_atomic(path, to_canonical_json(&file)?.as_bytes())?;
    let fit = &file.report.fit;
    writeln!(
        out,
        "C_hat={} bounds=[{},{}] within={}",
        fit.c_hat, fit.lower_bound, fit.upper_bound, fit.within_bounds
    )?;
    writeln!(
        out,
        "gap={} model={:?} n_range={:?}",
        file.report.gap, fit.model, fit.n_range
    )?;
    Ok(())
}
