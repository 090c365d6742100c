use std::f64::consts::{LN_2, PI};

use logsphere_core::asymptotics::{leading_coefficient, planar_pullback};
use logsphere_core::{
    expansion_report, fit_constant, hamiltonian_w, log_energy_sphere, paper_constants, residuals,
    ExpansionResidual, FitModel, FittedModel, PotentialHandle, SphereConfiguration, TableEntry,
};

fn leading(n: f64) -> f64 {
    (0.5 - LN_2) * n * n - 0.5 * n * n.ln()
}

fn synthetic(ns: &[usize], r: impl Fn(f64) -> f64) -> Vec<ExpansionResidual> {
    let table: Vec<(usize, f64)> = ns
        .iter()
        .map(|&n| (n, leading(n as f64) + n as f64 * r(n as f64)))
        .collect();
    residuals(&table)
}

#[test]
fn planted_power_law_is_recovered() {
    let ns: Vec<usize> = (4..=12).map(|k| 1usize << k).collect();
    let res = synthetic(&ns, |n| -0.0556 + 0.3 / n.sqrt());
    let fit = fit_constant(&res, FitModel::PowerLaw, &paper_constants()).unwrap();
    assert!((fit.c_hat + 0.0556).abs() < 1e-3, "{}", fit.c_hat);
    assert_eq!(fit.n_range, (16, 4096));
}

#[test]
fn fit_is_self_consistent() {
    let ns: Vec<usize> = (10..=200).step_by(10).collect();
    for (c, amp, p) in [(-0.05, 0.7, 0.5), (0.2, -1.3, 1.0), (-0.1, 0.0, 1.0)] {
        let res = synthetic(&ns, |n| c + amp * n.powf(-p));
        let fit = fit_constant(&res, FitModel::PowerLaw, &paper_constants()).unwrap();
        assert!(
            (fit.c_hat - c).abs() < 1e-6 * c.abs(),
            "{} vs {c}",
            fit.c_hat
        );
        if let FittedModel::PowerLaw {
            amp: a, exponent, ..
        } = fit.model
        {
            assert!((a - amp).abs() <= 1e-6 * amp.abs().max(1e-3));
            if amp != 0.0 {
                assert_eq!(exponent, p);
            }
        } else {
            panic!("expected a power law");
        }
        let flat = synthetic(&ns, |_| c);
        let mean = fit_constant(&flat, FitModel::PlainMean, &paper_constants()).unwrap();
        assert!((mean.c_hat - c).abs() < 1e-6 * c.abs());
    }
}

#[test]
fn residuals_reconstruct_their_energies() {
    for n in [2usize, 7, 100, 5000] {
        for e in [-1.0e3, 0.0, 17.25] {
            let r = ExpansionResidual::new(n, e);
            let ulp_n2 = f64::EPSILON * (n * n) as f64;
            assert!((r.reconstruct() - e).abs() <= 4.0 * ulp_n2.max(f64::EPSILON * e.abs()));
        }
    }
    let r2 = ExpansionResidual::new(2, -2.0 * LN_2);
    assert!((r2.r_n - (3.0 * LN_2 - 2.0) / 2.0).abs() < 1e-15);
    let shifted = ExpansionResidual::new(40, leading(40.0) + 0.3 * 40.0);
    assert!((shifted.r_n - 0.3).abs() < 1e-12);
    assert_eq!(leading_coefficient(), 0.5 - LN_2);
}

#[test]
fn bounds_are_wired_to_the_constants() {
    let c = paper_constants();
    let res = synthetic(&[10, 20, 40, 80], |_| -0.1);
    let fit = fit_constant(&res, FitModel::PlainMean, &c).unwrap();
    assert!((fit.upper_bound - c.c_bhs).abs() < 1e-12);
    let lower = c.rsz_minw_lower / PI + 0.5 * PI.ln() + LN_2;
    assert!((fit.lower_bound - lower).abs() < 1e-12);
    assert!(fit.within_bounds);
    assert!(fit_constant(&res[..3], FitModel::PlainMean, &c).is_err());
}

fn exact_table() -> Vec<TableEntry> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut ico = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            ico.push([0.0, a, b]);
            ico.push([a, b, 0.0]);
            ico.push([b, 0.0, a]);
        }
    }
    let configs: Vec<Vec<[f64; 3]>> = vec![
        vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
        vec![
            [1.0, 0.0, 0.0],
            [-0.5, 0.75f64.sqrt(), 0.0],
            [-0.5, -(0.75f64.sqrt()), 0.0],
        ],
        vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ],
        vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
        ico,
    ];
    configs
        .into_iter()
        .map(|v| {
            let cfg = SphereConfiguration::from_vectors(&v).unwrap();
            TableEntry {
                n: cfg.n(),
                energy: log_energy_sphere(&cfg).unwrap(),
                config: Some(cfg),
            }
        })
        .collect()
}

#[test]
fn report_on_exact_minima() {
    let c = paper_constants();
    let table = exact_table();
    let rep = expansion_report(&table, &c, FitModel::PowerLaw).unwrap();
    assert_eq!(rep.constants, c);
    assert!((rep.conjectural_c + 0.055_605_3).abs() < 5e-7);
    assert!((rep.gap - (rep.c_hat - c.c_bhs)).abs() < 1e-15);
    assert!(rep.c_hat_is_upper_biased);
    let ns: Vec<usize> = rep.residuals.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![2, 3, 4, 6, 12]);
    assert!((rep.residuals[0].r_n - (3.0 * LN_2 - 2.0) / 2.0).abs() < 1e-14);
    assert!((rep.residuals[1].r_n - (-3.0 * 3f64.ln() - leading(3.0)) / 3.0).abs() < 1e-14);
    assert_eq!(rep.splittings.len(), 4);
    for s in &rep.splittings {
        assert!(s.renormalized_term.is_finite());
        assert_eq!(s.n_planar + 1, s.n_sphere);
    }
}

#[test]
fn pullback_energy_matches_sphere_energy() {
    // w_{n-1}(pullback) is the radius-1/2 energy of all n points
    for entry in exact_table().into_iter().skip(1) {
        let cfg = entry.config.unwrap();
        let planar = planar_pullback(&cfg).unwrap();
        let w = hamiltonian_w(&planar, &PotentialHandle::Canonical).unwrap();
        let k = cfg.n() as f64;
        assert!((w - (entry.energy + k * (k - 1.0) * LN_2)).abs() < 1e-10);
    }
}
