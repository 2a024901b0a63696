//! Relative entropy, Fisher information, Shannon entropy and entropy power,
//! total variation, the log-Sobolev deficit and the de Bruijn residual.
//!
//! Products are handled factor by factor wherever the functional tensorises
//! exactly; planar grids use the tensor Simpson rule on their own nodes.

use crate::density::{heat_flow, Density, Density1D, Grid2DDensity, ProductDensity};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quadrature::{integrate_2d, integrate_abs, integrate_samples};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

/// Below this density value `p log(p/q)` is taken to be 0.
pub const ZERO_LOG_ZERO: f64 = 1e-300;
/// Below this density value a node is left out of Fisher integrands.
pub const FISHER_CUTOFF: f64 = 1e-290;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FunctionalName {
    /// Relative entropy `D`.
    D,
    /// Relative Fisher information `I(μ|ν)`.
    IRel,
    /// Fisher information `I(X)`.
    IPlain,
    /// Shannon entropy `h`.
    H,
    /// Entropy power `N`.
    N,
    TV,
    Deficit,
    /// An optimal transport cost.
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FunctionalValue {
    pub name: FunctionalName,
    pub value: f64,
    pub error_estimate: f64,
}

impl FunctionalValue {
    pub(crate) fn new(name: FunctionalName, value: f64, error_estimate: f64) -> Self {
        FunctionalValue { name, value, error_estimate: error_estimate.abs() }
    }

    fn sum(name: FunctionalName, parts: impl IntoIterator<Item = FunctionalValue>) -> Self {
        let (mut v, mut e) = (0.0, 0.0);
        for p in parts {
            v += p.value;
            e += p.error_estimate;
        }
        FunctionalValue::new(name, v, e)
    }
}

/// `γ_n` shaped like `mu`, built with `mu`'s settings.
pub fn reference_gaussian(mu: &Density) -> Density {
    Density::standard_gaussian_with(mu.dim(), &mu.settings())
}

fn shape_error(mu: &Density, nu: &Density) -> Error {
    Error::ShapeMismatch(format!("cannot compare a {}-dimensional law with a {}-dimensional one", mu.dim(), nu.dim()))
}

fn line_nodes(d: &Density1D) -> (GridSpec, impl Iterator<Item = (f64, f64, f64)> + '_) {
    let s = d.support();
    (s, s.nodes().zip(d.node_pdf().iter().copied()).zip(d.node_log_pdf().iter().copied()).map(|((x, p), l)| (x, p, l)))
}

/// `D(μ|ν) = ∫ p log(p/q)`.
pub fn relative_entropy(mu: &Density, nu: &Density) -> Result<FunctionalValue> {
    match (mu, nu) {
        (Density::Line(a), Density::Line(b)) => relative_entropy_1d(a, b),
        (Density::Product(a), Density::Product(b)) if a.dim() == b.dim() => Ok(FunctionalValue::sum(
            FunctionalName::D,
            a.factors().iter().zip(b.factors()).map(|(a, b)| relative_entropy_1d(a, b)).collect::<Result<Vec<_>>>()?,
        )),
        (Density::Plane(a), _) if nu.dim() == 2 => {
            let logq = plane_reference_log(a, nu)?;
            let ny = a.spec_y().n_points;
            let mut v = Vec::with_capacity(a.log_p().len());
            for (k, &l) in a.log_p().iter().enumerate() {
                let p = libm::exp(l);
                if p < ZERO_LOG_ZERO {
                    v.push(0.0);
                } else if logq[k] == f64::NEG_INFINITY {
                    return Err(Error::AbsoluteContinuity { x: a.spec_x().node(k / ny) });
                } else {
                    v.push(p * (l - logq[k]));
                }
            }
            let r = integrate_2d(&v, &a.spec_x(), &a.spec_y());
            Ok(FunctionalValue::new(FunctionalName::D, r.value, r.abs_error_estimate))
        }
        _ => Err(shape_error(mu, nu)),
    }
}

pub(crate) fn relative_entropy_1d(a: &Density1D, b: &Density1D) -> Result<FunctionalValue> {
    let (spec, nodes) = line_nodes(a);
    let v = nodes
        .map(|(x, p, l)| {
            if p < ZERO_LOG_ZERO {
                return Ok(0.0);
            }
            let lq = b.log_pdf(x);
            if lq == f64::NEG_INFINITY {
                return Err(Error::AbsoluteContinuity { x });
            }
            Ok(p * (l - lq))
        })
        .collect::<Result<Vec<_>>>()?;
    let r = integrate_samples(&v, &spec);
    Ok(FunctionalValue::new(FunctionalName::D, r.value, r.abs_error_estimate))
}

/// `log q` of a two-dimensional reference at the nodes of `a`.
fn plane_reference_log(a: &Grid2DDensity, nu: &Density) -> Result<Vec<f64>> {
    match nu {
        Density::Product(p) if p.dim() == 2 => {
            let (fx, fy) = (&p.factors()[0], &p.factors()[1]);
            let ly: Vec<f64> = a.spec_y().nodes().map(|y| fy.log_pdf(y)).collect();
            let mut out = Vec::with_capacity(a.log_p().len());
            for x in a.spec_x().nodes() {
                let lx = fx.log_pdf(x);
                out.extend(ly.iter().map(|l| lx + l));
            }
            Ok(out)
        }
        Density::Plane(b) => {
            let mut out = Vec::with_capacity(a.log_p().len());
            for x in a.spec_x().nodes() {
                for y in a.spec_y().nodes() {
                    out.push(b.log_pdf(x, y));
                }
            }
            Ok(out)
        }
        _ => Err(Error::ShapeMismatch("a 2D grid can only be compared with a 2D law".into())),
    }
}

/// Scores of a two-dimensional reference at the nodes of `a`.
fn plane_reference_grad(a: &Grid2DDensity, nu: &Density) -> Result<(Vec<f64>, Vec<f64>)> {
    match nu {
        Density::Product(p) if p.dim() == 2 => {
            let sx: Vec<f64> = a.spec_x().nodes().map(|x| p.factors()[0].score(x)).collect();
            let sy: Vec<f64> = a.spec_y().nodes().map(|y| p.factors()[1].score(y)).collect();
            let mut gx = Vec::with_capacity(a.log_p().len());
            let mut gy = Vec::with_capacity(a.log_p().len());
            for s in &sx {
                for t in &sy {
                    gx.push(*s);
                    gy.push(*t);
                }
            }
            Ok((gx, gy))
        }
        Density::Plane(b) if b.spec_x() == a.spec_x() && b.spec_y() == a.spec_y() => Ok(b.node_gradient()),
        Density::Plane(_) => Err(Error::ShapeMismatch("relative Fisher information between 2D grids needs identical grids".into())),
        _ => Err(Error::ShapeMismatch("a 2D grid can only be compared with a 2D law".into())),
    }
}

/// `I(X) = ∫ |∇ log p|² p`.
pub fn fisher_information(mu: &Density) -> Result<FunctionalValue> {
    match mu {
        Density::Line(d) => fisher_1d(d, None),
        Density::Product(p) => product_sum(FunctionalName::IPlain, p, |d| fisher_1d(d, None)),
        Density::Plane(g) => {
            let (gx, gy) = g.node_gradient();
            fisher_plane(g, |k| gx[k] * gx[k] + gy[k] * gy[k], FunctionalName::IPlain)
        }
    }
}

/// `I(μ|ν) = ∫ |∇ log p − ∇ log q|² p`.
pub fn relative_fisher(mu: &Density, nu: &Density) -> Result<FunctionalValue> {
    match (mu, nu) {
        (Density::Line(a), Density::Line(b)) => fisher_1d(a, Some(b)),
        (Density::Product(a), Density::Product(b)) if a.dim() == b.dim() => Ok(FunctionalValue::sum(
            FunctionalName::IRel,
            a.factors().iter().zip(b.factors()).map(|(a, b)| fisher_1d(a, Some(b))).collect::<Result<Vec<_>>>()?,
        )),
        (Density::Plane(a), _) if nu.dim() == 2 => {
            let (gx, gy) = a.node_gradient();
            let (rx, ry) = plane_reference_grad(a, nu)?;
            fisher_plane(
                a,
                |k| {
                    let (u, v) = (gx[k] - rx[k], gy[k] - ry[k]);
                    u * u + v * v
                },
                FunctionalName::IRel,
            )
        }
        _ => Err(shape_error(mu, nu)),
    }
}

fn product_sum(
    name: FunctionalName,
    p: &ProductDensity,
    f: impl Fn(&Density1D) -> Result<FunctionalValue>,
) -> Result<FunctionalValue> {
    Ok(FunctionalValue::sum(name, p.factors().iter().map(f).collect::<Result<Vec<_>>>()?))
}

pub(crate) fn fisher_1d(a: &Density1D, reference: Option<&Density1D>) -> Result<FunctionalValue> {
    let spec = a.support();
    let scores = a.node_scores();
    let v = spec
        .nodes()
        .zip(a.node_pdf())
        .zip(&scores)
        .map(|((x, &p), &s)| {
            if p < FISHER_CUTOFF {
                return Ok(0.0);
            }
            let d = match reference {
                Some(b) => s - b.score(x),
                None => s,
            };
            if !d.is_finite() {
                return Err(Error::InfiniteInformation { x });
            }
            Ok(d * d * p)
        })
        .collect::<Result<Vec<_>>>()?;
    let r = integrate_samples(&v, &spec);
    let name = if reference.is_some() { FunctionalName::IRel } else { FunctionalName::IPlain };
    Ok(FunctionalValue::new(name, r.value, r.abs_error_estimate))
}

fn fisher_plane(g: &Grid2DDensity, sq: impl Fn(usize) -> f64, name: FunctionalName) -> Result<FunctionalValue> {
    let ny = g.spec_y().n_points;
    let v = g
        .log_p()
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let p = libm::exp(l);
            if p < FISHER_CUTOFF {
                return Ok(0.0);
            }
            let s = sq(k);
            if !s.is_finite() {
                return Err(Error::InfiniteInformation { x: g.spec_x().node(k / ny) });
            }
            Ok(s * p)
        })
        .collect::<Result<Vec<_>>>()?;
    let r = integrate_2d(&v, &g.spec_x(), &g.spec_y());
    Ok(FunctionalValue::new(name, r.value, r.abs_error_estimate))
}

/// `h(X) = −∫ p log p`.
pub fn shannon_entropy(mu: &Density) -> Result<FunctionalValue> {
    match mu {
        Density::Line(d) => Ok(entropy_1d(d)),
        Density::Product(p) => product_sum(FunctionalName::H, p, |d| Ok(entropy_1d(d))),
        Density::Plane(g) => {
            let v: Vec<f64> = g
                .log_p()
                .iter()
                .map(|&l| {
                    let p = libm::exp(l);
                    if p < ZERO_LOG_ZERO {
                        0.0
                    } else {
                        -p * l
                    }
                })
                .collect();
            let r = integrate_2d(&v, &g.spec_x(), &g.spec_y());
            Ok(FunctionalValue::new(FunctionalName::H, r.value, r.abs_error_estimate))
        }
    }
}

pub(crate) fn entropy_1d(d: &Density1D) -> FunctionalValue {
    let (spec, nodes) = line_nodes(d);
    let v: Vec<f64> = nodes.map(|(_, p, l)| if p < ZERO_LOG_ZERO { 0.0 } else { -p * l }).collect();
    let r = integrate_samples(&v, &spec);
    FunctionalValue::new(FunctionalName::H, r.value, r.abs_error_estimate)
}

/// `N(X) = exp(2h(X)/n)`.
pub fn entropy_power(mu: &Density) -> Result<FunctionalValue> {
    let h = shannon_entropy(mu)?;
    let n = mu.dim() as f64;
    let v = libm::exp(2.0 * h.value / n);
    Ok(FunctionalValue::new(FunctionalName::N, v, v * 2.0 * h.error_estimate / n))
}

/// `∫ |p − q|`, so that values lie in `[0, 2]`.
///
/// In one dimension the integral is split at the crossings of `p` and `q`.
/// In two dimensions it uses the tensor rule on a common grid. For three or
/// more coordinates only the largest marginal distance is returned, which is
/// a lower bound.
pub fn total_variation(mu: &Density, nu: &Density) -> Result<FunctionalValue> {
    if mu.dim() != nu.dim() {
        return Err(shape_error(mu, nu));
    }
    match (mu, nu) {
        (Density::Line(a), Density::Line(b)) => tv_1d(a, b),
        _ if mu.dim() == 2 => tv_plane(mu, nu),
        _ => {
            let (ma, mb) = (mu.marginals()?, nu.marginals()?);
            let mut best = FunctionalValue::new(FunctionalName::TV, 0.0, 0.0);
            for (a, b) in ma.iter().zip(&mb) {
                let t = tv_1d(a, b)?;
                if t.value > best.value {
                    best = t;
                }
            }
            Ok(best)
        }
    }
}

pub(crate) fn tv_1d(a: &Density1D, b: &Density1D) -> Result<FunctionalValue> {
    let (sa, sb) = (a.support(), b.support());
    let h = sa.step().min(sb.step());
    let (lo, hi) = (sa.x_lo.min(sb.x_lo), sa.x_hi.max(sb.x_hi));
    let n = (libm::ceil((hi - lo) / h) as usize + 1).max(GridSpec::MIN_POINTS);
    let spec = GridSpec::new(lo, hi, n)?;
    let r = integrate_abs(|x| a.pdf(x) - b.pdf(x), &spec)?;
    Ok(FunctionalValue::new(FunctionalName::TV, r.value.min(2.0), r.abs_error_estimate))
}

fn tv_plane(mu: &Density, nu: &Density) -> Result<FunctionalValue> {
    let (sx, sy) = plane_common_grid(mu, nu)?;
    let mut v = Vec::with_capacity(sx.n_points * sy.n_points);
    for x in sx.nodes() {
        for y in sy.nodes() {
            let p = libm::exp(mu.log_pdf(&[x, y]));
            let q = libm::exp(nu.log_pdf(&[x, y]));
            v.push((p - q).abs());
        }
    }
    let r = integrate_2d(&v, &sx, &sy);
    Ok(FunctionalValue::new(FunctionalName::TV, r.value.min(2.0), r.abs_error_estimate))
}

/// Bounding box of two planar laws, at the finer of their resolutions.
fn plane_common_grid(mu: &Density, nu: &Density) -> Result<(GridSpec, GridSpec)> {
    let boxes = |d: &Density| -> Vec<(GridSpec, GridSpec)> {
        match d {
            Density::Plane(g) => alloc::vec![(g.spec_x(), g.spec_y())],
            Density::Product(p) => alloc::vec![(p.factors()[0].support(), p.factors()[1].support())],
            Density::Line(_) => Vec::new(),
        }
    };
    let mut all = boxes(mu);
    all.extend(boxes(nu));
    let axis = |sel: fn(&(GridSpec, GridSpec)) -> GridSpec| -> Result<GridSpec> {
        let lo = all.iter().map(|b| sel(b).x_lo).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(|b| sel(b).x_hi).fold(f64::NEG_INFINITY, f64::max);
        let n = mu.settings().plane_points.max(GridSpec::MIN_POINTS) | 1;
        GridSpec::new(lo, hi, n)
    };
    Ok((axis(|b| b.0)?, axis(|b| b.1)?))
}

/// `δ(μ) = ½ I(μ|γ) − D(μ|γ)`.
pub fn deficit(mu: &Density) -> Result<FunctionalValue> {
    let g = reference_gaussian(mu);
    let i = relative_fisher(mu, &g)?;
    let d = relative_entropy(mu, &g)?;
    Ok(FunctionalValue::new(
        FunctionalName::Deficit,
        0.5 * i.value - d.value,
        0.5 * i.error_estimate + d.error_estimate,
    ))
}

/// `|[h(X_{t+s}) − h(X_{t−s})]/(2s) − ½ I(X_t)|` with `X_t = X + √t Z`.
pub fn de_bruijn_residual(mu: &Density1D, t: f64, h_step: f64) -> Result<f64> {
    if !(h_step > 0.0 && t > h_step) || !t.is_finite() {
        return Err(Error::arg(format!("need t > h_step > 0, got t = {t}, h_step = {h_step}")));
    }
    let h_plus = entropy_1d(&heat_flow(mu, t + h_step)?).value;
    let h_minus = entropy_1d(&heat_flow(mu, t - h_step)?).value;
    let i = fisher_1d(&heat_flow(mu, t)?, None)?.value;
    Ok(((h_plus - h_minus) / (2.0 * h_step) - 0.5 * i).abs())
}

/// `½ ln(2πe σ²)`.
pub fn gaussian_entropy(var: f64) -> f64 {
    0.5 * libm::log(2.0 * PI * E * var)
}
