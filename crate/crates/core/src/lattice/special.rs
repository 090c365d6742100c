use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments (Lanczos, g = 7, nine terms;
/// reflection below 1/2).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("gamma_fn needs x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Threshold on `|q|^N` at which the eta product is truncated.
pub const ETA_TRUNCATION: f64 = 1e-18;
/// Hard cap on the number of product factors.
pub const ETA_MAX_TERMS: usize = 200;

/// Dedekind eta `η(τ) = q^{1/24} Π_{n≥1} (1 - q^n)`, `q = e^{2πiτ}`.
pub fn dedekind_eta(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(Error::DomainError(format!(
            "dedekind_eta needs Im τ > 0, got {tau}"
        )));
    }
    let two_pi_i_tau = Complex64::new(0.0, 2.0 * PI) * tau;
    let q = two_pi_i_tau.exp();
    let q_abs = q.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    let mut qn_abs = q_abs;
    for _ in 0..ETA_MAX_TERMS {
        prod *= Complex64::new(1.0, 0.0) - qn;
        if qn_abs < ETA_TRUNCATION {
            break;
        }
        qn *= q;
        qn_abs *= q_abs;
    }
    Ok((two_pi_i_tau / 24.0).exp() * prod)
}
