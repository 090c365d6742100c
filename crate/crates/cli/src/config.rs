use std::path::PathBuf;

use logsphere_core::{FitModel, MinimizeOptions};
use serde::{Deserialize, Serialize};

/// How the lattice calculator receives its lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeInput {
    Triangular,
    Square,
    Basis { u: [f64; 2], v: [f64; 2] },
    Tau { re: f64, im: f64 },
    Constants,
}

/// A complete, replayable description of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Minimize {
        n: usize,
        options: MinimizeOptions,
        out_dir: PathBuf,
    },
    Sweep {
        n_list: Vec<usize>,
        options: MinimizeOptions,
        out_dir: PathBuf,
    },
    Lattice {
        input: LatticeInput,
        density: Option<f64>,
    },
    Fit {
        csv: PathBuf,
        model: FitModel,
        out: PathBuf,
    },
    Selftest {
        seed: u64,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use logsphere_core::{InitStrategy, SphereConfiguration};

    fn round_trip(cfg: &RunConfig) {
        let a = crate::formats::to_canonical_json(cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&a).unwrap();
        assert_eq!(&back, cfg);
        let b = crate::formats::to_canonical_json(&back).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_configs_round_trip() {
        let start = SphereConfiguration::from_vectors(&[
            [0.1, 0.2, 0.97],
            [0.3, -0.9, 0.1],
            [-0.7, 0.7, 1.0 / 3.0],
        ])
        .unwrap();
        let options = MinimizeOptions {
            seed: u64::MAX,
            grad_tol: 1.0 / 3.0 * 1e-7,
            step0: Some(0.1),
            init: InitStrategy::Provided(start),
            ..MinimizeOptions::default()
        };
        round_trip(&RunConfig::Minimize {
            n: 3,
            options: options.clone(),
            out_dir: "out".into(),
        });
        round_trip(&RunConfig::Sweep {
            n_list: vec![10, 20],
            options: MinimizeOptions::default(),
            out_dir: "sweep".into(),
        });
        round_trip(&RunConfig::Lattice {
            input: LatticeInput::Basis {
                u: [1.0, 0.0],
                v: [0.1, 0.7],
            },
            density: Some(0.5),
        });
        round_trip(&RunConfig::Lattice {
            input: LatticeInput::Constants,
            density: None,
        });
        round_trip(&RunConfig::Fit {
            csv: "energies.csv".into(),
            model: FitModel::PowerLaw,
            out: "report.json".into(),
        });
        round_trip(&RunConfig::Selftest { seed: 7 });
    }
}
