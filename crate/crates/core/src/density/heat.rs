//! Gaussian smoothing `X + √t Z` and convolution of independent laws.

use super::{Component, Density1D, Family};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::special::log_sum_exp;
use alloc::format;
use alloc::vec::Vec;

/// Kernel window half-width in units of `√t`.
const WINDOW: f64 = 10.0;

/// Grid density of `X + √t Z` by trapezoid quadrature of the convolution
/// integral on a support enlarged by `10√t` on each side.
pub fn gaussian_convolve(d: &Density1D, t: f64) -> Result<Density1D> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::arg(format!("smoothing time must be positive, got {t}")));
    }
    let s = d.support();
    let st = libm::sqrt(t);
    let out = GridSpec::new(s.x_lo - WINDOW * st, s.x_hi + WINDOW * st, s.n_points)?;
    let (xs, lw) = source_nodes(d, d.resolution().min(st / 6.0))?;
    let h = xs[1] - xs[0];
    let log_norm = -0.5 * libm::log(2.0 * core::f64::consts::PI * t);
    let values: Vec<f64> = out
        .nodes()
        .map(|y| {
            let lo = (libm::floor((y - WINDOW * st - xs[0]) / h).max(0.0) as usize).min(xs.len() - 1);
            let hi = (libm::ceil((y + WINDOW * st - xs[0]) / h).max(0.0) as usize).min(xs.len() - 1);
            let terms: Vec<f64> = (lo..=hi)
                .map(|j| {
                    let u = y - xs[j];
                    lw[j] - 0.5 * u * u / t
                })
                .collect();
            log_sum_exp(&terms) + log_norm
        })
        .collect();
    Density1D::grid(out, values)
}

/// Abscissae spanning the support of `d` with spacing at most `step`, and the
/// log of trapezoid weight times density at each.
fn source_nodes(d: &Density1D, step: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = d.support();
    let spec = if matches!(d.family(), Family::Grid) && s.step() <= step * (1.0 + 1e-12) {
        s
    } else {
        let m = libm::ceil(s.width() / step).max(16.0) as usize;
        GridSpec::new(s.x_lo, s.x_hi, m + 1)?
    };
    let xs: Vec<f64> = spec.nodes().collect();
    let lh = libm::log(spec.step());
    let last = xs.len() - 1;
    let lw = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let end = if j == 0 || j == last { core::f64::consts::LN_2 } else { 0.0 };
            d.log_pdf(x) + lh - end
        })
        .collect();
    Ok((xs, lw))
}

/// Law of `X + √t Z`: closed form for Gaussians and mixtures, quadrature
/// otherwise.
pub(crate) fn heat_flow(d: &Density1D, t: f64) -> Result<Density1D> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::arg(format!("smoothing time must be positive, got {t}")));
    }
    match d.family() {
        Family::Gaussian { mean, var } => Density1D::gaussian_with(*mean, var + t, d.settings()),
        Family::Mixture(cs) => {
            Density1D::mixture_with(cs.iter().map(|c| Component { var: c.var + t, ..*c }).collect(), d.settings())
        }
        _ => gaussian_convolve(d, t),
    }
}

/// Law of `X + Y` for independent `X ~ a`, `Y ~ b`. Gaussian and mixture
/// pairs are combined exactly; anything else is convolved by quadrature on
/// the sum of the two supports.
pub fn convolve(a: &Density1D, b: &Density1D) -> Result<Density1D> {
    if let (Some(ca), Some(cb)) = (components(a), components(b)) {
        let settings = a.settings();
        if ca.len() == 1 && cb.len() == 1 {
            return Density1D::gaussian_with(ca[0].mean + cb[0].mean, ca[0].var + cb[0].var, settings);
        }
        let mut out = Vec::with_capacity(ca.len() * cb.len());
        for x in &ca {
            for y in &cb {
                out.push(Component::new(x.weight * y.weight, x.mean + y.mean, x.var + y.var));
            }
        }
        return Density1D::mixture_with(out, settings);
    }
    let (sa, sb) = (a.support(), b.support());
    let n = sa.n_points.max(sb.n_points);
    let out = GridSpec::new(sa.x_lo + sb.x_lo, sa.x_hi + sb.x_hi, n)?;
    let (xs, lw) = source_nodes(a, a.resolution().min(b.resolution()))?;
    let slack = 1e-9 * sb.width();
    let values: Vec<f64> = out
        .nodes()
        .map(|y| {
            let terms: Vec<f64> = xs
                .iter()
                .zip(&lw)
                .filter(|(x, _)| y - **x >= sb.x_lo - slack && y - **x <= sb.x_hi + slack)
                .map(|(x, w)| w + b.log_pdf((y - x).clamp(sb.x_lo, sb.x_hi)))
                .collect();
            log_sum_exp(&terms)
        })
        .collect();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIntegrand { x: out.node(k) });
    }
    Density1D::grid(out, values)
}

fn components(d: &Density1D) -> Option<Vec<Component>> {
    match d.family() {
        Family::Gaussian { mean, var } => Some(alloc::vec![Component::new(1.0, *mean, *var)]),
        Family::Mixture(cs) => Some(cs.clone()),
        _ => None,
    }
}
