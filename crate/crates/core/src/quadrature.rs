//! Adaptive Gauss–Kronrod quadrature, plus the half-line map `r = tan θ`
//! used for the radial integrals of the canonical equilibrium measure.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights; every second
// abscissa is also a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]` by global adaptive bisection of the segment
/// with the largest error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::DomainError(
            "integration bounds must be finite".into(),
        ));
    }
    let (value, error) = kronrod15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;
    while total_err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_intervals {
            return Err(Error::DomainError(format!(
                "quadrature did not converge: estimate {total:e}, error {total_err:e}"
            )));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (lv, le) = kronrod15(&mut f, seg.a, mid);
        let (rv, re) = kronrod15(&mut f, mid, seg.b);
        evaluations += 30;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
        // Resum from scratch in a fixed order to avoid drift.
        let mut parts: Vec<&Segment> = heap.iter().collect();
        parts.sort_by(|x, y| x.a.total_cmp(&y.a));
        total = crate::sum::kahan_sum(parts.iter().map(|s| s.value));
        total_err = crate::sum::kahan_sum(parts.iter().map(|s| s.error));
    }
    Ok(QuadResult {
        value: total,
        abs_error: total_err,
        evaluations,
    })
}

/// `∫_0^∞ f(r) dr` through `r = tan θ`, `dr = dθ / cos² θ`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    opts: QuadOptions,
) -> Result<QuadResult> {
    integrate(
        |theta| {
            let (s, c) = theta.sin_cos();
            if c <= 0.0 {
                return 0.0;
            }
            f(s / c) / (c * c)
        },
        0.0,
        FRAC_PI_2,
        opts,
    )
}
