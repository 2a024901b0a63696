//! Densities on the line, products of them, and tabulated densities on the
//! plane.
//!
//! Every [`Density1D`] carries a quadrature support: a uniform grid outside of
//! which its mass is negligible. Parametric families are evaluated in closed
//! form anywhere; grid densities interpolate `log p` quadratically through
//! the three nearest nodes and are `-∞` off their grid.

mod heat;
mod plane;
mod product;
mod tables;

pub use heat::{convolve, gaussian_convolve};
pub(crate) use heat::heat_flow;
pub use plane::Grid2DDensity;
pub use product::{Density, ProductDensity};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quadrature::{self, rule_sum};
use crate::settings::Settings;
use crate::special::{self, HALF_LN_2PI};
use alloc::format;
use alloc::vec::Vec;
use tables::Tables;

/// One Gaussian component `weight · N(mean, var)` of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub var: f64,
}

impl Component {
    pub fn new(weight: f64, mean: f64, var: f64) -> Self {
        Component { weight, mean, var }
    }

    #[inline]
    fn log_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / libm::sqrt(self.var);
        libm::log(self.weight) - 0.5 * z * z - HALF_LN_2PI - 0.5 * libm::log(self.var)
    }
}

/// Representation of a [`Density1D`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gaussian { mean: f64, var: f64 },
    Mixture(Vec<Component>),
    /// `p(x) = exp(-v(x - shift) - log_z)` with `v(y) = Σ coeffs[k] y^k`.
    Tilted { coeffs: Vec<f64>, shift: f64, log_z: f64 },
    /// Normalised `log p` tabulated on the support grid.
    Grid,
}

/// Score together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub value: f64,
    /// Grid densities only: the query sat on the first or last cell, so the
    /// derivative is a one-sided difference.
    pub one_sided: bool,
}

#[derive(Debug, Clone)]
pub struct Density1D {
    family: Family,
    support: GridSpec,
    log_nodes: Vec<f64>,
    pdf_nodes: Vec<f64>,
    tables: Option<Tables>,
    eps: Option<f64>,
    settings: Settings,
}

impl Density1D {
    pub fn gaussian(mean: f64, var: f64) -> Result<Self> {
        Self::gaussian_with(mean, var, &Settings::default())
    }

    pub fn gaussian_with(mean: f64, var: f64, settings: &Settings) -> Result<Self> {
        if !mean.is_finite() || !(var > 0.0 && var.is_finite()) {
            return Err(Error::arg(format!("gaussian needs finite mean and var > 0, got ({mean}, {var})")));
        }
        let r = settings.support_radius * libm::sqrt(var);
        let support = GridSpec::new(mean - r, mean + r, settings.odd_points())?;
        Ok(Self::build(Family::Gaussian { mean, var }, support, Some(1.0 / var), *settings))
    }

    pub fn standard_gaussian() -> Self {
        Self::gaussian(0.0, 1.0).expect("N(0,1) is valid")
    }

    pub fn mixture(components: Vec<Component>) -> Result<Self> {
        Self::mixture_with(components, &Settings::default())
    }

    pub fn mixture_with(mut components: Vec<Component>, settings: &Settings) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::arg("mixture needs at least one component"));
        }
        let mut total = 0.0;
        for c in &components {
            if !(c.weight > 0.0 && c.weight.is_finite()) || !c.mean.is_finite() || !(c.var > 0.0 && c.var.is_finite()) {
                return Err(Error::arg(format!("invalid mixture component {c:?}")));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!("mixture weights sum to {total}, not 1")));
        }
        for c in &mut components {
            c.weight /= total;
        }
        let r = settings.support_radius;
        let lo = components.iter().map(|c| c.mean - r * libm::sqrt(c.var)).fold(f64::INFINITY, f64::min);
        let hi = components.iter().map(|c| c.mean + r * libm::sqrt(c.var)).fold(f64::NEG_INFINITY, f64::max);
        let support = GridSpec::new(lo, hi, settings.odd_points())?;
        Ok(Self::build(Family::Mixture(components), support, None, *settings))
    }

    /// Density proportional to `exp(-v)` for the polynomial potential with the
    /// given coefficients (constant term first). `eps` is a claimed lower
    /// bound on `v''`; it is kept only if it holds on the support grid.
    pub fn tilted(coeffs: Vec<f64>, eps: Option<f64>) -> Result<Self> {
        Self::tilted_with(coeffs, eps, &Settings::default())
    }

    pub fn tilted_with(mut coeffs: Vec<f64>, eps: Option<f64>, settings: &Settings) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::arg("potential coefficients must be finite"));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        let deg = coeffs.len().saturating_sub(1);
        if deg < 2 || deg % 2 == 1 || coeffs[deg] <= 0.0 {
            return Err(Error::arg("potential must have even degree >= 2 and positive leading coefficient"));
        }
        let (lo, hi) = tilted_extent(&coeffs)?;
        // mean and spread on a fine grid over the region that carries mass
        let probe = GridSpec::new(lo, hi, 4097)?;
        let v: Vec<f64> = probe.nodes().map(|x| horner(&coeffs, x)).collect();
        let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = v.iter().map(|v| libm::exp(vmin - v)).collect();
        let z = rule_sum(&w, probe.step());
        let xs: Vec<f64> = probe.nodes().collect();
        let m1 = rule_sum(&w.iter().zip(&xs).map(|(w, x)| w * x).collect::<Vec<_>>(), probe.step()) / z;
        let m2 = rule_sum(&w.iter().zip(&xs).map(|(w, x)| w * (x - m1) * (x - m1)).collect::<Vec<_>>(), probe.step()) / z;
        let sd = libm::sqrt(m2);
        let r = settings.support_radius * sd;
        let support = GridSpec::new(m1 - r, m1 + r, settings.odd_points())?;
        let v: Vec<f64> = support.nodes().map(|x| horner(&coeffs, x)).collect();
        let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = v.iter().map(|v| libm::exp(vmin - v)).collect();
        let log_z = libm::log(rule_sum(&w, support.step())) - vmin;
        let mut d = Self::build(Family::Tilted { coeffs, shift: 0.0, log_z }, support, None, *settings);
        if let Some(e) = eps {
            d = d.with_convexity(e);
        }
        Ok(d)
    }

    /// Tabulated density; `log_p` may be unnormalised but must be finite.
    pub fn grid(spec: GridSpec, mut log_p: Vec<f64>) -> Result<Self> {
        if log_p.len() != spec.n_points {
            return Err(Error::arg(format!("grid has {} points but {} values", spec.n_points, log_p.len())));
        }
        if let Some(k) = log_p.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg(format!("log_p must be finite on the grid (node {k} is {})", log_p[k])));
        }
        let m = log_p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mass: Vec<f64> = log_p.iter().map(|v| libm::exp(v - m)).collect();
        let log_mass = libm::log(rule_sum(&mass, spec.step())) + m;
        for v in &mut log_p {
            *v -= log_mass;
        }
        let mut d = Density1D {
            family: Family::Grid,
            support: spec,
            pdf_nodes: log_p.iter().map(|v| libm::exp(*v)).collect(),
            log_nodes: log_p,
            tables: None,
            eps: None,
            settings: Settings { grid_points: spec.n_points, ..Settings::default() },
        };
        d.tables = Some(Tables::build(&d));
        let c = d.min_curvature();
        d.eps = (c > 0.0).then_some(c);
        Ok(d)
    }

    /// Grid density sampled from `log_p` on `spec`.
    pub fn grid_from_fn(spec: GridSpec, log_p: impl Fn(f64) -> f64) -> Result<Self> {
        Self::grid(spec, spec.nodes().map(log_p).collect())
    }

    fn build(family: Family, support: GridSpec, eps: Option<f64>, settings: Settings) -> Self {
        let mut d = Density1D {
            family,
            support,
            log_nodes: Vec::new(),
            pdf_nodes: Vec::new(),
            tables: None,
            eps,
            settings,
        };
        d.log_nodes = support.nodes().map(|x| d.log_pdf(x)).collect();
        d.pdf_nodes = d.log_nodes.iter().map(|v| libm::exp(*v)).collect();
        if matches!(d.family, Family::Tilted { .. }) {
            d.tables = Some(Tables::build(&d));
        }
        d
    }

    /// Rebuild the support for new settings. Grid densities are unchanged.
    pub fn with_settings(&self, settings: &Settings) -> Result<Self> {
        let shifted = |d: Self, c: f64| if c == 0.0 { d } else { d.shifted(c) };
        match &self.family {
            Family::Gaussian { mean, var } => Self::gaussian_with(*mean, *var, settings),
            Family::Mixture(c) => Self::mixture_with(c.clone(), settings),
            Family::Tilted { coeffs, shift, .. } => {
                let d = Self::tilted_with(coeffs.clone(), self.eps, settings)?;
                Ok(shifted(d, *shift))
            }
            Family::Grid => Ok(self.clone()),
        }
    }

    /// Keep `eps` as the convexity bound if `-(log p)'' >= eps` holds on the
    /// support; otherwise clear it.
    pub fn with_convexity(mut self, eps: f64) -> Self {
        let ok = eps > 0.0 && self.min_curvature() >= eps - 1e-6 * eps.max(1.0);
        self.eps = ok.then_some(eps);
        self
    }

    /// Settings this density was built with.
    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn support(&self) -> GridSpec {
        self.support
    }

    /// `log p` at the support nodes.
    pub fn node_log_pdf(&self) -> &[f64] {
        &self.log_nodes
    }

    /// `p` at the support nodes.
    pub fn node_pdf(&self) -> &[f64] {
        &self.pdf_nodes
    }

    /// Certified lower bound on `v''` where `p = e^{-v}`.
    pub fn convexity_lower_bound(&self) -> Option<f64> {
        self.eps
    }

    /// `(mean, var)` when the density is a single Gaussian.
    pub fn as_gaussian(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Gaussian { mean, var } => Some((mean, var)),
            _ => None,
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Gaussian { mean, var } => {
                let z = (x - mean) / libm::sqrt(*var);
                -0.5 * z * z - HALF_LN_2PI - 0.5 * libm::log(*var)
            }
            Family::Mixture(cs) => {
                let mut acc = f64::NEG_INFINITY;
                for c in cs {
                    acc = special::log_add_exp(acc, c.log_pdf(x));
                }
                acc
            }
            Family::Tilted { coeffs, shift, log_z } => -horner(coeffs, x - shift) - log_z,
            Family::Grid => {
                if !self.support.contains(x) {
                    return f64::NEG_INFINITY;
                }
                let (k, t) = self.locate(x);
                let f = &self.log_nodes;
                let (a, b, c) = (f[k - 1], f[k], f[k + 1]);
                b + 0.5 * t * (c - a) + 0.5 * t * t * (c - 2.0 * b + a)
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        libm::exp(self.log_pdf(x))
    }

    /// Nearest interior node `k` (so that `k ± 1` exist) and the offset
    /// `(x - x_k) / h`.
    fn locate(&self, x: f64) -> (usize, f64) {
        let s = &self.support;
        let h = s.step();
        let r = libm::round((x - s.x_lo) / h);
        let k = (r.max(1.0) as usize).min(s.n_points - 2);
        (k, (x - s.node(k)) / h)
    }

    /// `(log p)'(x)`.
    pub fn score(&self, x: f64) -> f64 {
        self.score_detailed(x).value
    }

    pub fn score_detailed(&self, x: f64) -> Score {
        let value = match &self.family {
            Family::Gaussian { mean, var } => -(x - mean) / var,
            Family::Mixture(cs) => {
                let l = self.log_pdf(x);
                cs.iter().map(|c| libm::exp(c.log_pdf(x) - l) * (-(x - c.mean) / c.var)).sum()
            }
            Family::Tilted { coeffs, shift, .. } => -horner_deriv(coeffs, x - shift),
            Family::Grid => {
                if !self.support.contains(x) {
                    return Score { value: f64::NAN, one_sided: true };
                }
                let (k, t) = self.locate(x);
                let h = self.support.step();
                let f = &self.log_nodes;
                let (a, b, c) = (f[k - 1], f[k], f[k + 1]);
                let value = (c - a) / (2.0 * h) + t * (c - 2.0 * b + a) / h;
                let one_sided = t < -0.5 || t > 0.5;
                return Score { value, one_sided };
            }
        };
        Score { value, one_sided: false }
    }

    /// Scores at the support nodes: closed form for parametric families,
    /// central differences (one-sided at the two ends) for grids.
    pub fn node_scores(&self) -> Vec<f64> {
        match self.family {
            Family::Grid => {
                let f = &self.log_nodes;
                let n = f.len();
                let h = self.support.step();
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
                        } else if k == n - 1 {
                            (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
                        } else {
                            (f[k + 1] - f[k - 1]) / (2.0 * h)
                        }
                    })
                    .collect()
            }
            _ => self.support.nodes().map(|x| self.score(x)).collect(),
        }
    }

    /// `min v''` over the support nodes, `v = -log p`.
    pub(crate) fn min_curvature(&self) -> f64 {
        match &self.family {
            Family::Gaussian { var, .. } => 1.0 / var,
            Family::Mixture(cs) => self
                .support
                .nodes()
                .map(|x| {
                    let l = self.log_pdf(x);
                    let (mut r_inv_var, mut m1, mut m2) = (0.0, 0.0, 0.0);
                    for c in cs {
                        let r = libm::exp(c.log_pdf(x) - l);
                        let s = -(x - c.mean) / c.var;
                        r_inv_var += r / c.var;
                        m1 += r * s;
                        m2 += r * s * s;
                    }
                    r_inv_var - (m2 - m1 * m1)
                })
                .fold(f64::INFINITY, f64::min),
            Family::Tilted { coeffs, shift, .. } => {
                self.support.nodes().map(|x| horner_deriv2(coeffs, x - shift)).fold(f64::INFINITY, f64::min)
            }
            Family::Grid => {
                let h2 = self.support.step() * self.support.step();
                self.log_nodes
                    .windows(3)
                    .map(|w| -(w[0] - 2.0 * w[1] + w[2]) / h2)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Gaussian { mean, var } => special::std_normal_cdf((x - mean) / libm::sqrt(*var)),
            Family::Mixture(cs) => cs
                .iter()
                .map(|c| c.weight * special::std_normal_cdf((x - c.mean) / libm::sqrt(c.var)))
                .sum::<f64>()
                .min(1.0),
            _ => self.tables().cdf(self, x),
        }
    }

    /// `1 - F(x)`, computed without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Gaussian { mean, var } => special::std_normal_sf((x - mean) / libm::sqrt(*var)),
            Family::Mixture(cs) => cs
                .iter()
                .map(|c| c.weight * special::std_normal_sf((x - c.mean) / libm::sqrt(c.var)))
                .sum::<f64>()
                .min(1.0),
            _ => self.tables().sf(self, x),
        }
    }

    /// `F^{-1}(u)` for `0 < u < 1`. The upper half is solved through the
    /// survival function.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::arg(format!("quantile level must lie in (0, 1), got {u}")));
        }
        if u > 0.5 {
            return self.isf(1.0 - u);
        }
        Ok(match &self.family {
            Family::Gaussian { mean, var } => mean + libm::sqrt(*var) * special::std_normal_inv_cdf(u),
            Family::Mixture(cs) => {
                let z = special::std_normal_inv_cdf(u);
                let (lo, hi) = component_bracket(cs, z);
                invert(|x| self.cdf(x) - u, |x| self.pdf(x), lo, hi)
            }
            _ => self.tables().quantile(self, u),
        })
    }

    /// `x` with `1 - F(x) = q`, for `0 < q < 1`.
    pub fn isf(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::arg(format!("survival level must lie in (0, 1), got {q}")));
        }
        if q > 0.5 {
            return self.quantile(1.0 - q);
        }
        Ok(match &self.family {
            Family::Gaussian { mean, var } => mean + libm::sqrt(*var) * special::std_normal_inv_sf(q),
            Family::Mixture(cs) => {
                let z = special::std_normal_inv_sf(q);
                let (lo, hi) = component_bracket(cs, z);
                invert(|x| q - self.sf(x), |x| self.pdf(x), lo, hi)
            }
            _ => self.tables().isf(self, q),
        })
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    fn tables(&self) -> &Tables {
        self.tables.as_ref().expect("tabulated families carry cdf tables")
    }

    /// `∫ x^k p` for `k` in `1..=4`.
    pub fn moments(&self, k: u32) -> Result<f64> {
        if !(1..=4).contains(&k) {
            return Err(Error::arg(format!("moment order must be in 1..=4, got {k}")));
        }
        Ok(quadrature::expectation(self, |x| libm::pow(x, k as f64))?.value)
    }

    pub fn mean(&self) -> f64 {
        self.node_expectation(|x| x)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.node_expectation(|x| (x - m) * (x - m))
    }

    pub fn second_moment(&self) -> f64 {
        self.node_expectation(|x| x * x)
    }

    pub(crate) fn node_expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        let v: Vec<f64> = self.support.nodes().zip(&self.pdf_nodes).map(|(x, p)| f(x) * p).collect();
        rule_sum(&v, self.support.step())
    }

    /// Law of `X + c`.
    pub fn shifted(&self, c: f64) -> Self {
        let family = match &self.family {
            Family::Gaussian { mean, var } => Family::Gaussian { mean: mean + c, var: *var },
            Family::Mixture(cs) => Family::Mixture(cs.iter().map(|k| Component { mean: k.mean + c, ..*k }).collect()),
            Family::Tilted { coeffs, shift, log_z } => {
                Family::Tilted { coeffs: coeffs.clone(), shift: shift + c, log_z: *log_z }
            }
            Family::Grid => Family::Grid,
        };
        Density1D { family, support: self.support.shifted(c), ..self.clone() }
    }

    /// Law of `λX` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::arg(format!("scale must be positive, got {lambda}")));
        }
        let family = match &self.family {
            Family::Gaussian { mean, var } => Family::Gaussian { mean: lambda * mean, var: lambda * lambda * var },
            Family::Mixture(cs) => Family::Mixture(
                cs.iter()
                    .map(|k| Component { weight: k.weight, mean: lambda * k.mean, var: lambda * lambda * k.var })
                    .collect(),
            ),
            Family::Tilted { coeffs, shift, log_z } => Family::Tilted {
                coeffs: coeffs.iter().enumerate().map(|(k, c)| c / libm::pow(lambda, k as f64)).collect(),
                shift: lambda * shift,
                log_z: log_z + libm::log(lambda),
            },
            Family::Grid => Family::Grid,
        };
        let s = self.support;
        let support = GridSpec::new(lambda * s.x_lo, lambda * s.x_hi, s.n_points)?;
        let log_nodes: Vec<f64> = self.log_nodes.iter().map(|v| v - libm::log(lambda)).collect();
        Ok(Density1D {
            family,
            support,
            pdf_nodes: log_nodes.iter().map(|v| libm::exp(*v)).collect(),
            log_nodes,
            tables: self.tables.clone(),
            eps: self.eps.map(|e| e / (lambda * lambda)),
            settings: self.settings,
        })
    }

    /// Step used when this density is sampled off its own nodes.
    pub(crate) fn resolution(&self) -> f64 {
        match &self.family {
            Family::Gaussian { var, .. } => libm::sqrt(*var) / 8.0,
            Family::Mixture(cs) => cs.iter().map(|c| libm::sqrt(c.var) / 8.0).fold(f64::INFINITY, f64::min),
            _ => self.support.step(),
        }
    }
}

/// Interval `[min_i, max_i]` of the component quantiles at standard score `z`;
/// the mixture quantile lies inside it.
fn component_bracket(cs: &[Component], z: f64) -> (f64, f64) {
    let qs = cs.iter().map(|c| c.mean + libm::sqrt(c.var) * z);
    let lo = qs.clone().fold(f64::INFINITY, f64::min);
    let hi = qs.fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Root of an increasing `g` on `[lo, hi]` with `g(lo) <= 0 <= g(hi)`:
/// Newton steps, falling back to bisection when a step leaves the bracket.
pub(crate) fn invert(g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = dg(x);
        let mut nx = x - gx / d;
        if !(nx > lo && nx < hi) {
            nx = 0.5 * (lo + hi);
        }
        let tol = 4.0 * f64::EPSILON * (1.0 + x.abs());
        if (nx - x).abs() <= tol || hi - lo <= tol {
            return nx;
        }
        x = nx;
    }
    x
}

/// Range where `exp(-v)` is within `e^{-750}` of its peak.
fn tilted_extent(coeffs: &[f64]) -> Result<(f64, f64)> {
    const DROP: f64 = 750.0;
    let mut half = 8.0;
    while half <= 1e6 {
        let g = GridSpec::new(-half, half, 4001)?;
        let v: Vec<f64> = g.nodes().map(|x| horner(coeffs, x)).collect();
        let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
        if v[0] - vmin > DROP && v[v.len() - 1] - vmin > DROP {
            let first = v.iter().position(|v| v - vmin <= DROP).unwrap_or(0);
            let last = v.iter().rposition(|v| v - vmin <= DROP).unwrap_or(v.len() - 1);
            return Ok((g.node(first.saturating_sub(1)), g.node((last + 1).min(v.len() - 1))));
        }
        half *= 4.0;
    }
    Err(Error::arg("potential does not confine mass to a bounded region"))
}

#[inline]
pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

#[inline]
fn horner_deriv(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, a)| acc * x + k as f64 * a)
}

#[inline]
fn horner_deriv2(c: &[f64], x: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(2)
        .rev()
        .fold(0.0, |acc, (k, a)| acc * x + (k * (k - 1)) as f64 * a)
}

pub(crate) fn log_mass(log_values: &[f64], h: f64) -> f64 {
    let m = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_values.iter().map(|v| libm::exp(v - m)).collect();
    libm::log(rule_sum(&w, h)) + m
}
