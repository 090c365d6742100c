//! Minimization of the logarithmic energy of `n` points on the unit sphere.
//!
//! Each restart runs Riemannian descent: the Euclidean gradient is projected
//! onto the tangent planes, a backtracking Armijo search picks the step, and
//! the retraction renormalizes every point. Restarts are independent and may
//! run on any number of threads; each one draws from its own ChaCha stream
//! and the winner is chosen in restart order, so results do not depend on
//! the thread count.
//!
//! Found minima are local. The energies reported are upper bounds for the
//! true minimal energy.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{energy_and_tangent_grad, log_energy_sphere};
use crate::geometry::{dot3, norm3, SphereConfiguration};
use crate::{Error, Result};

/// Steps below this abort the line search.
pub const MIN_STEP: f64 = 1e-18;
/// Energies closer than this are ties between restarts.
pub const ENERGY_TIE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InitStrategy {
    /// Generalized spiral plus tangent Gaussian noise of size `0.5/√n`.
    SpiralPerturbed,
    RandomUniform,
    /// Used as given on the first restart and perturbed on later ones.
    Provided(SphereConfiguration),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Threshold on the largest tangent-gradient norm.
    pub grad_tol: f64,
    pub seed: u64,
    pub init: InitStrategy,
    /// First trial step; `None` means `1/n`.
    pub step0: Option<f64>,
    pub armijo_c: f64,
    pub shrink: f64,
    /// Number of curvature pairs for L-BFGS directions; 0 uses plain
    /// steepest descent.
    #[serde(default)]
    pub lbfgs_memory: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 20_000,
            grad_tol: 1e-7,
            seed: 0,
            init: InitStrategy::SpiralPerturbed,
            step0: None,
            armijo_c: 1e-4,
            shrink: 0.5,
            lbfgs_memory: 0,
        }
    }
}

impl MinimizeOptions {
    fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidInput("grad_tol must be positive".into()));
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return Err(Error::InvalidInput("armijo_c must lie in (0, 1)".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidInput("shrink must lie in (0, 1)".into()));
        }
        if let Some(s) = self.step0 {
            if !(s > 0.0) {
                return Err(Error::InvalidInput("step0 must be positive".into()));
            }
        }
        if let InitStrategy::Provided(cfg) = &self.init {
            if cfg.n() != n {
                return Err(Error::InvalidInput(format!(
                    "provided configuration has {} points, expected {n}",
                    cfg.n()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub best: SphereConfiguration,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub min_separation: f64,
}

impl MinimizeResult {
    pub fn n(&self) -> usize {
        self.best.n()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RestartOutcome {
    pub points: Vec<[f64; 3]>,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub progressed: bool,
}

/// Rakhmanov–Saff–Zhou generalized spiral.
pub fn spiral_points(n: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(n);
    let mut phi: f64 = 0.0;
    for k in 0..n {
        let h = if n == 1 {
            0.0
        } else {
            -1.0 + 2.0 * k as f64 / (n - 1) as f64
        };
        let theta = h.clamp(-1.0, 1.0).acos();
        if k == 0 || k == n - 1 {
            phi = 0.0;
        } else {
            phi = (phi + 3.6 / (n as f64).sqrt() / (1.0 - h * h).sqrt()) % TAU;
        }
        let (st, ct) = theta.sin_cos();
        out.push([st * phi.cos(), st * phi.sin(), ct]);
    }
    out
}

fn normalize(v: &mut [f64; 3]) {
    let n = norm3(v);
    for c in v.iter_mut() {
        *c /= n;
    }
}

fn perturb(points: &mut [[f64; 3]], sigma: f64, rng: &mut ChaCha8Rng) {
    for p in points.iter_mut() {
        let mut g: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let radial = dot3(&g, p);
        for k in 0..3 {
            g[k] -= radial * p[k];
            p[k] += sigma * g[k];
        }
        normalize(p);
    }
}

fn initial_points(n: usize, opts: &MinimizeOptions, restart: usize) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let sigma = 0.5 / (n as f64).sqrt();
    match &opts.init {
        InitStrategy::SpiralPerturbed => {
            let mut pts = spiral_points(n);
            perturb(&mut pts, sigma, &mut rng);
            pts
        }
        InitStrategy::RandomUniform => (0..n)
            .map(|_| {
                // Uniform on the sphere via z ~ U(-1, 1), azimuth ~ U(0, 2π).
                let z: f64 = rng.random_range(-1.0..1.0);
                let a: f64 = rng.random_range(0.0..2.0 * PI);
                let r = (1.0 - z * z).max(0.0).sqrt();
                [r * a.cos(), r * a.sin(), z]
            })
            .collect(),
        InitStrategy::Provided(cfg) => {
            let mut pts = cfg.vectors();
            if restart > 0 {
                perturb(&mut pts, sigma, &mut rng);
            }
            pts
        }
    }
}

fn sup_norm(grad: &[[f64; 3]]) -> f64 {
    grad.iter().map(norm3).fold(0.0, f64::max)
}

fn inner(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    a.iter().zip(b).map(|(x, y)| dot3(x, y)).sum()
}

fn project_onto(points: &[[f64; 3]], v: &mut [[f64; 3]]) {
    for (vi, p) in v.iter_mut().zip(points) {
        let r = dot3(vi, p);
        for k in 0..3 {
            vi[k] -= r * p[k];
        }
    }
}

/// Step `s`, gradient change `y` and `1 / <y, s>`.
type CurvaturePair = (Vec<[f64; 3]>, Vec<[f64; 3]>, f64);

struct CurvaturePairs {
    memory: usize,
    pairs: VecDeque<CurvaturePair>,
}

impl CurvaturePairs {
    fn new(memory: usize) -> Self {
        Self {
            memory,
            pairs: VecDeque::with_capacity(memory),
        }
    }

    fn push(&mut self, s: Vec<[f64; 3]>, y: Vec<[f64; 3]>) {
        let sy = inner(&s, &y);
        if self.memory == 0 || !(sy > 1e-300) {
            return;
        }
        if self.pairs.len() == self.memory {
            self.pairs.pop_front();
        }
        self.pairs.push_back((s, y, 1.0 / sy));
    }

    fn clear(&mut self) {
        self.pairs.clear();
    }

    /// Two-loop recursion: returns `-H g`.
    fn direction(&self, grad: &[[f64; 3]]) -> Option<Vec<[f64; 3]>> {
        let (s_last, y_last, _) = self.pairs.back()?;
        let mut q: Vec<[f64; 3]> = grad.to_vec();
        let mut alphas = Vec::with_capacity(self.pairs.len());
        for (s, y, rho) in self.pairs.iter().rev() {
            let a = rho * inner(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                for k in 0..3 {
                    qi[k] -= a * yi[k];
                }
            }
            alphas.push(a);
        }
        let gamma = inner(s_last, y_last) / inner(y_last, y_last);
        for qi in q.iter_mut() {
            for c in qi.iter_mut() {
                *c *= gamma;
            }
        }
        for ((s, y, rho), a) in self.pairs.iter().zip(alphas.into_iter().rev()) {
            let b = rho * inner(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                for k in 0..3 {
                    qi[k] += (a - b) * si[k];
                }
            }
        }
        for qi in q.iter_mut() {
            for c in qi.iter_mut() {
                *c = -*c;
            }
        }
        Some(q)
    }
}

/// One descent run from `points`. When `history` is given, the energy after
/// every accepted step is appended to it.
pub(crate) fn descend(
    mut points: Vec<[f64; 3]>,
    opts: &MinimizeOptions,
    mut history: Option<&mut Vec<f64>>,
) -> Result<RestartOutcome> {
    let n = points.len();
    let mut grad = vec![[0.0; 3]; n];
    let mut energy = energy_and_tangent_grad(&points, &mut grad)?;
    if let Some(h) = history.as_deref_mut() {
        h.push(energy);
    }
    let base_step = opts.step0.unwrap_or(1.0 / n as f64);
    let mut step = base_step;
    let mut grad_norm = sup_norm(&grad);
    let mut iterations = 0;
    let mut progressed = false;
    let mut pairs = CurvaturePairs::new(opts.lbfgs_memory);
    let mut trial = vec![[0.0; 3]; n];
    let mut trial_grad = vec![[0.0; 3]; n];

    while iterations < opts.max_iters && grad_norm > opts.grad_tol {
        let quasi_newton = pairs.direction(&grad);
        let use_qn = quasi_newton.is_some();
        let mut direction =
            quasi_newton.unwrap_or_else(|| grad.iter().map(|g| [-g[0], -g[1], -g[2]]).collect());
        project_onto(&points, &mut direction);
        let mut slope = inner(&grad, &direction);
        if !(slope < 0.0) {
            pairs.clear();
            direction = grad.iter().map(|g| [-g[0], -g[1], -g[2]]).collect();
            slope = -inner(&grad, &grad);
        }
        let mut t = if use_qn { 1.0 } else { step };
        let mut accepted = None;
        while t >= MIN_STEP {
            for i in 0..n {
                let mut p = [
                    points[i][0] + t * direction[i][0],
                    points[i][1] + t * direction[i][1],
                    points[i][2] + t * direction[i][2],
                ];
                normalize(&mut p);
                trial[i] = p;
            }
            match energy_and_tangent_grad(&trial, &mut trial_grad) {
                Ok(e) if e <= energy + opts.armijo_c * t * slope => {
                    accepted = Some(e);
                    break;
                }
                _ => t *= opts.shrink,
            }
        }
        let Some(new_energy) = accepted else {
            if use_qn {
                // Fall back to steepest descent before giving up.
                pairs.clear();
                continue;
            }
            break;
        };
        if opts.lbfgs_memory > 0 {
            let mut s: Vec<[f64; 3]> = trial
                .iter()
                .zip(&points)
                .map(|(a, b)| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
                .collect();
            project_onto(&trial, &mut s);
            let mut old = grad.clone();
            project_onto(&trial, &mut old);
            let y: Vec<[f64; 3]> = trial_grad
                .iter()
                .zip(&old)
                .map(|(a, b)| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
                .collect();
            pairs.push(s, y);
        }
        if !use_qn {
            step = if t == step { 2.0 * t } else { t };
        }
        std::mem::swap(&mut points, &mut trial);
        std::mem::swap(&mut grad, &mut trial_grad);
        energy = new_energy;
        grad_norm = sup_norm(&grad);
        progressed = true;
        iterations += 1;
        if let Some(h) = history.as_deref_mut() {
            h.push(energy);
        }
    }
    Ok(RestartOutcome {
        converged: grad_norm <= opts.grad_tol,
        points,
        energy,
        grad_norm,
        iterations,
        progressed,
    })
}

fn lexicographic(a: &[[f64; 3]], b: &[[f64; 3]]) -> Ordering {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

fn better(candidate: &RestartOutcome, incumbent: &RestartOutcome) -> bool {
    if (candidate.energy - incumbent.energy).abs() > ENERGY_TIE {
        return candidate.energy < incumbent.energy;
    }
    let canon = |pts: &[[f64; 3]]| {
        let rot = crate::geometry::canonical_rotation_of(pts);
        pts.iter().map(|p| rot.apply(p)).collect::<Vec<_>>()
    };
    lexicographic(&canon(&candidate.points), &canon(&incumbent.points)) == Ordering::Less
}

pub fn minimize_log_energy(n: usize, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    opts.validate(n)?;
    let outcomes: Vec<Result<RestartOutcome>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| descend(initial_points(n, opts, k), opts, None))
        .collect();
    let mut best: Option<RestartOutcome> = None;
    let mut any_progress = false;
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(o) => {
                any_progress |= o.progressed || o.converged;
                if best.as_ref().is_none_or(|b| better(&o, b)) {
                    best = Some(o);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let Some(best) = best else {
        return Err(first_error.unwrap_or(Error::NoProgress { n }));
    };
    if !any_progress {
        return Err(Error::NoProgress { n });
    }
    let config = SphereConfiguration::from_vectors(&best.points)?;
    let energy = log_energy_sphere(&config)?;
    Ok(MinimizeResult {
        min_separation: config.min_separation(),
        best: config,
        energy,
        grad_norm: best.grad_norm,
        iterations: best.iterations,
        restarts_used: opts.restarts,
        converged: best.converged,
    })
}

/// Whether the minimum separation exceeds `c / √(n - 1)`. The constant in
/// the separation theorem is not explicit; `c = 1` is a heuristic default.
pub fn separation_check(res: &MinimizeResult, c: f64) -> bool {
    let n = res.n();
    let bound = c / ((n - 1) as f64).sqrt();
    let ok = res.min_separation > bound;
    if !ok {
        log::warn!(
            "n = {n}: minimum separation {} does not exceed {c}/sqrt(n-1) = {bound}",
            res.min_separation
        );
    }
    ok
}

/// Best energies for each `n`; a failure for one `n` does not stop the
/// sweep.
pub fn energy_table(
    n_list: &[usize],
    opts: &MinimizeOptions,
) -> Vec<(usize, Result<MinimizeResult>)> {
    n_list
        .iter()
        .map(|&n| (n, minimize_log_energy(n, opts)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::log_energy_vectors;
    use crate::geometry::Rotation3;
    use std::f64::consts::LN_2;

    fn opts(restarts: usize) -> MinimizeOptions {
        MinimizeOptions {
            restarts,
            ..MinimizeOptions::default()
        }
    }

    #[test]
    fn spiral_is_on_sphere_and_distinct() {
        for n in [2, 3, 10, 57] {
            let pts = spiral_points(n);
            assert!(pts.iter().all(|p| (norm3(p) - 1.0).abs() < 1e-15));
            assert!(SphereConfiguration::from_vectors(&pts).is_ok());
        }
    }

    #[test]
    fn two_points_are_antipodal() {
        let res = minimize_log_energy(2, &opts(3)).unwrap();
        assert!((res.energy + 2.0 * LN_2).abs() < 1e-10);
        assert!((res.min_separation - 2.0).abs() < 1e-6);
        assert!(res.converged);
    }

    #[test]
    fn provided_optimum_converges_immediately() {
        let cfg = SphereConfiguration::from_vectors(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]).unwrap();
        let o = MinimizeOptions {
            init: InitStrategy::Provided(cfg),
            ..opts(1)
        };
        let res = minimize_log_energy(2, &o).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        assert_eq!(res.energy, -2.0 * LN_2);
    }

    #[test]
    fn tetrahedron() {
        let res = minimize_log_energy(4, &opts(5)).unwrap();
        assert!((res.energy + 6.0 * (8.0f64 / 3.0).ln()).abs() < 1e-8);
        assert!(separation_check(&res, 1.0));
    }

    #[test]
    fn descent_is_monotone_and_stays_on_sphere() {
        for memory in [0, 5] {
            let o = MinimizeOptions {
                lbfgs_memory: memory,
                max_iters: 300,
                ..opts(1)
            };
            let mut history = Vec::new();
            let out = descend(initial_points(9, &o, 0), &o, Some(&mut history)).unwrap();
            assert!(history.windows(2).all(|w| w[1] <= w[0]));
            assert!(out.points.iter().all(|p| (norm3(p) - 1.0).abs() <= 1e-12));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let o = MinimizeOptions {
            seed: 11,
            ..opts(4)
        };
        let a = minimize_log_energy(7, &o).unwrap();
        let b = minimize_log_energy(7, &o).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    }

    #[test]
    fn rotated_initialization_gives_same_energy() {
        let start = SphereConfiguration::from_vectors(&spiral_points(6)).unwrap();
        let rot = Rotation3::from_axis_angle([0.2, 0.9, -0.4], 1.7);
        let run = |cfg: SphereConfiguration| {
            let o = MinimizeOptions {
                init: InitStrategy::Provided(cfg),
                ..opts(1)
            };
            minimize_log_energy(6, &o).unwrap().energy
        };
        let e0 = run(start.clone());
        let e1 = run(start.rotated(&rot));
        assert!((e0 - e1).abs() < 1e-8);
    }

    #[test]
    fn lbfgs_agrees_with_descent() {
        let plain = minimize_log_energy(12, &opts(2)).unwrap();
        let qn = minimize_log_energy(
            12,
            &MinimizeOptions {
                lbfgs_memory: 8,
                ..opts(2)
            },
        )
        .unwrap();
        assert!((plain.energy - qn.energy).abs() < 1e-8);
    }

    #[test]
    fn validation_errors() {
        assert!(minimize_log_energy(1, &opts(1)).is_err());
        assert!(minimize_log_energy(5, &opts(0)).is_err());
        let bad = MinimizeOptions {
            grad_tol: 0.0,
            ..opts(1)
        };
        assert!(minimize_log_energy(5, &bad).is_err());
        let cfg = SphereConfiguration::from_vectors(&spiral_points(3)).unwrap();
        let mismatched = MinimizeOptions {
            init: InitStrategy::Provided(cfg),
            ..opts(1)
        };
        assert!(minimize_log_energy(4, &mismatched).is_err());
    }

    #[test]
    fn table_keeps_going_after_errors() {
        let table = energy_table(&[1, 2, 3], &opts(2));
        assert!(table[0].1.is_err());
        let e3 = table[2].1.as_ref().unwrap().energy;
        assert!((e3 + 3.0 * 3f64.ln()).abs() < 1e-8);
        let direct = log_energy_vectors(&table[1].1.as_ref().unwrap().best.vectors()).unwrap();
        assert_eq!(direct, table[1].1.as_ref().unwrap().energy);
    }
}
