//! Composite Simpson quadrature on uniform grids with Richardson error
//! estimates and compensated, fixed-order summation.

use crate::density::Density1D;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::special::CompensatedSum;
use alloc::vec::Vec;

/// Divisor applied to the difference between two resolutions. The asymptotic
/// value for a fourth-order rule is 15; 10 leaves room for higher-order terms.
const RICHARDSON: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub n_evals: usize,
}

/// Unit-step weights for `n` equally spaced nodes: Simpson on an even number
/// of intervals, with a 3/8 panel closing an odd count.
pub fn rule_weights(n: usize) -> Vec<f64> {
    let mut w = alloc::vec![0.0; n];
    match n {
        0 | 1 => {}
        2 => {
            w[0] = 0.5;
            w[1] = 0.5;
        }
        _ => {
            let intervals = n - 1;
            let simpson_intervals = if intervals % 2 == 0 { intervals } else { intervals - 3 };
            for k in (0..simpson_intervals).step_by(2) {
                w[k] += 1.0 / 3.0;
                w[k + 1] += 4.0 / 3.0;
                w[k + 2] += 1.0 / 3.0;
            }
            if simpson_intervals < intervals {
                let k = simpson_intervals;
                w[k] += 3.0 / 8.0;
                w[k + 1] += 9.0 / 8.0;
                w[k + 2] += 9.0 / 8.0;
                w[k + 3] += 3.0 / 8.0;
            }
        }
    }
    w
}

/// Apply the rule to `values` sampled with spacing `h`.
pub fn rule_sum(values: &[f64], h: f64) -> f64 {
    let w = rule_weights(values.len());
    let s: CompensatedSum = values.iter().zip(&w).map(|(v, w)| v * w).collect();
    h * s.value()
}

fn roundoff_floor(values: &[f64], h: f64) -> f64 {
    let s: CompensatedSum = values.iter().map(|v| v.abs()).collect();
    8.0 * f64::EPSILON * h * s.value()
}

/// Quadrature of already-sampled node values. The error estimate compares the
/// rule against the same rule on every other node (Richardson, order 4).
pub fn integrate_samples(values: &[f64], spec: &GridSpec) -> QuadResult {
    let h = spec.step();
    let value = rule_sum(values, h);
    let n = values.len();
    let even_end = if (n - 1) % 2 == 0 { n } else { n - 1 };
    let coarse: Vec<f64> = values[..even_end].iter().step_by(2).copied().collect();
    let fine_part = rule_sum(&values[..even_end], h);
    let coarse_part = rule_sum(&coarse, 2.0 * h);
    QuadResult {
        value,
        abs_error_estimate: (fine_part - coarse_part).abs() / RICHARDSON + roundoff_floor(values, h),
        n_evals: n,
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, spec: &GridSpec) -> Result<Vec<f64>> {
    spec.nodes()
        .map(|x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteIntegrand { x })
            }
        })
        .collect()
}

/// `∫ f` over `spec`. With `refine`, the grid is doubled and the estimate is
/// the Richardson difference between the two resolutions.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &GridSpec, refine: bool) -> Result<QuadResult> {
    let coarse = sample(&f, spec)?;
    if !refine {
        return Ok(integrate_samples(&coarse, spec));
    }
    let fine_spec = spec.refined();
    let h = fine_spec.step();
    let mut fine = Vec::with_capacity(fine_spec.n_points);
    for (k, &v) in coarse.iter().enumerate() {
        fine.push(v);
        if k + 1 < coarse.len() {
            let x = spec.x_lo + (2 * k + 1) as f64 * h;
            let m = f(x);
            if !m.is_finite() {
                return Err(Error::NonFiniteIntegrand { x });
            }
            fine.push(m);
        }
    }
    let s_coarse = rule_sum(&coarse, spec.step());
    let s_fine = rule_sum(&fine, h);
    Ok(QuadResult {
        value: s_fine,
        abs_error_estimate: (s_fine - s_coarse).abs() / RICHARDSON + roundoff_floor(&fine, h),
        n_evals: fine.len(),
    })
}

/// `∫ f p` over the support grid of `d`.
pub fn expectation<F: Fn(f64) -> f64>(d: &Density1D, f: F) -> Result<QuadResult> {
    let spec = d.support();
    let values: Vec<f64> = d
        .node_pdf()
        .iter()
        .zip(spec.nodes())
        .map(|(p, x)| {
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFiniteIntegrand { x });
            }
            Ok(if *p == 0.0 { 0.0 } else { fx * p })
        })
        .collect::<Result<_>>()?;
    Ok(integrate_samples(&values, &spec))
}

/// `∫ |g|` over `spec`, splitting the domain at the sign changes of `g` so
/// that the kinks of `|g|` fall on panel boundaries.
pub fn integrate_abs<F: Fn(f64) -> f64>(g: F, spec: &GridSpec) -> Result<QuadResult> {
    let values = sample(&g, spec)?;
    let mut breaks = alloc::vec![spec.x_lo];
    for k in 0..values.len() - 1 {
        let (a, b) = (values[k], values[k + 1]);
        if a == 0.0 && k > 0 {
            breaks.push(spec.node(k));
        } else if a * b < 0.0 {
            breaks.push(bisect_root(&g, spec.node(k), spec.node(k + 1), a));
        }
    }
    breaks.push(spec.x_hi);
    let h = spec.step();
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    let mut evals = values.len();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mut m = libm::ceil((b - a) / h) as usize;
        m = m.max(4);
        m += m % 2;
        let piece = GridSpec { x_lo: a, x_hi: b, n_points: m + 1 };
        let vals = sample(&|x| g(x).abs(), &piece)?;
        evals += vals.len();
        let r = integrate_samples(&vals, &piece);
        total.add(r.value);
        err += r.abs_error_estimate;
    }
    Ok(QuadResult { value: total.value(), abs_error_estimate: err, n_evals: evals })
}

pub(crate) fn bisect_root<F: Fn(f64) -> f64>(g: &F, mut a: f64, mut b: f64, ga: f64) -> f64 {
    let sa = ga.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Tensor-product rule over a row-major `nx × ny` array (`values[i * ny + j]`).
pub fn integrate_2d(values: &[f64], spec_x: &GridSpec, spec_y: &GridSpec) -> QuadResult {
    let (nx, ny) = (spec_x.n_points, spec_y.n_points);
    debug_assert_eq!(values.len(), nx * ny);
    let rows: Vec<f64> = (0..nx)
        .map(|i| rule_sum(&values[i * ny..(i + 1) * ny], spec_y.step()))
        .collect();
    let r = integrate_samples(&rows, spec_x);
    // coarse-in-y estimate for the inner direction
    let inner_err: f64 = (0..nx)
        .map(|i| integrate_samples(&values[i * ny..(i + 1) * ny], spec_y).abs_error_estimate)
        .zip(rule_weights(nx))
        .map(|(e, w)| e * w * spec_x.step())
        .sum();
    QuadResult {
        value: r.value,
        abs_error_estimate: r.abs_error_estimate + inner_err,
        n_evals: values.len(),
    }
}
