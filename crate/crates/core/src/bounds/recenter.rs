//! Recentering by successive conditional means and the coordinate-wise
//! chain-rule decomposition of `D`, `I` and the transport costs.

use crate::density::{log_mass, Density, Density1D, Grid2DDensity, ProductDensity};
use crate::error::Result;
use crate::functionals::{fisher_1d, relative_entropy_1d};
use crate::grid::GridSpec;
use crate::quadrature::integrate_samples;
use crate::settings::Settings;
use crate::transport::{transport_costs, CostFn};
use alloc::vec::Vec;

/// Rows whose marginal weight times the axis width falls below this are left
/// out of conditional averages.
pub const NEGLIGIBLE_ROW: f64 = 1e-14;

/// A conditional mean `t_k(x_{1:k−1})`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftFn {
    Constant(f64),
    /// Tabulated against the previous coordinate, interpolated quadratically.
    Table { spec: GridSpec, values: Vec<f64> },
}

impl ShiftFn {
    pub fn at(&self, prev: f64) -> f64 {
        match self {
            ShiftFn::Constant(c) => *c,
            ShiftFn::Table { spec, values } => sample(values, spec, prev),
        }
    }
}

/// `μ` together with the law of `X̄` and the shifts that produce it.
#[derive(Debug, Clone)]
pub struct RecenteredDensity {
    pub original: Density,
    pub recentered: Density,
    /// `shifts[k]` is `t_{k+1}`, a function of the original coordinates.
    pub shifts: Vec<ShiftFn>,
}

impl RecenteredDensity {
    /// `T(x) = (x_1 − t_1, x_2 − t_2(x_1), …)`, which pushes `μ` onto `μ̄`.
    pub fn map(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(k, &v)| {
                let prev = if k == 0 { 0.0 } else { x[k - 1] };
                v - self.shifts[k].at(prev)
            })
            .collect()
    }
}

/// Subtract from each coordinate its conditional mean given the earlier ones.
///
/// For a single coordinate this is mean-centering and for products each
/// factor is centred on its own. For planar grids the first axis is shifted
/// and every row is resampled at `y + t_2(x_1)`.
pub fn recenter(mu: &Density) -> Result<RecenteredDensity> {
    let (recentered, shifts) = match mu {
        Density::Line(d) => {
            let m = d.mean();
            (Density::Line(d.shifted(-m)), alloc::vec![ShiftFn::Constant(m)])
        }
        Density::Product(p) => {
            let means: Vec<f64> = p.factors().iter().map(|f| f.mean()).collect();
            let factors = p.factors().iter().zip(&means).map(|(f, m)| f.shifted(-m)).collect();
            (Density::Product(ProductDensity::new(factors)?), means.into_iter().map(ShiftFn::Constant).collect())
        }
        Density::Plane(g) => {
            let (g2, t1, t2) = recenter_plane(g)?;
            (Density::Plane(g2), alloc::vec![ShiftFn::Constant(t1), ShiftFn::Table { spec: g.spec_x(), values: t2 }])
        }
    };
    Ok(RecenteredDensity { original: mu.clone(), recentered, shifts })
}

fn recenter_plane(g: &Grid2DDensity) -> Result<(Grid2DDensity, f64, Vec<f64>)> {
    let (sx, sy) = (g.spec_x(), g.spec_y());
    let t1 = g.marginal_x()?.mean();
    let ys: Vec<f64> = sy.nodes().collect();
    let mut t2 = Vec::with_capacity(sx.n_points);
    let mut out = Vec::with_capacity(g.log_p().len());
    for i in 0..sx.n_points {
        let row = g.row(i);
        let m = row_mean(row, &sy, &ys);
        t2.push(m);
        out.extend(ys.iter().map(|y| sample(row, &sy, y + m)));
    }
    let mut g2 = Grid2DDensity::new(sx.shifted(-t1), sy, out)?;
    if let Some(e) = g.convexity_lower_bound() {
        g2 = g2.with_convexity(e);
    }
    Ok((g2, t1, t2))
}

/// Mean of the normalised row `exp(row)` on the `y` nodes.
fn row_mean(row: &[f64], sy: &GridSpec, ys: &[f64]) -> f64 {
    let lm = log_mass(row, sy.step());
    let v: Vec<f64> = row.iter().zip(ys).map(|(l, y)| y * libm::exp(l - lm)).collect();
    integrate_samples(&v, sy).value
}

/// Quadratic interpolation through the nearest three nodes, extrapolating
/// from the end cells outside the grid.
fn sample(values: &[f64], spec: &GridSpec, x: f64) -> f64 {
    let h = spec.step();
    let r = libm::round((x - spec.x_lo) / h);
    let k = r.clamp(1.0, (spec.n_points - 2) as f64) as usize;
    let t = (x - spec.node(k)) / h;
    let (a, b, c) = (values[k - 1], values[k], values[k + 1]);
    b + 0.5 * t * (c - a) + 0.5 * t * t * (c - 2.0 * b + a)
}

/// Per-coordinate contributions: entry `k` is the `μ`-average of the
/// functional of the `k`-th conditional law against `N(0, 1)`.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tensorisation {
    /// Relative entropy; sums to `D(μ|γ_n)`.
    pub d_parts: Vec<f64>,
    /// Relative Fisher information; sums to at most `I(μ|γ_n)`.
    pub i_parts: Vec<f64>,
    /// `Δ(|·|)` transport cost; sums to at least `T(μ, γ_n)`.
    pub t_parts: Vec<f64>,
    /// Squared `W2`; the sum is the Knothe–Rosenblatt cost.
    pub w2_parts: Vec<f64>,
    pub w1_parts: Vec<f64>,
}

impl Tensorisation {
    pub fn d(&self) -> f64 {
        self.d_parts.iter().sum()
    }

    pub fn i(&self) -> f64 {
        self.i_parts.iter().sum()
    }

    pub fn t(&self) -> f64 {
        self.t_parts.iter().sum()
    }

    pub fn w2_sq(&self) -> f64 {
        self.w2_parts.iter().sum()
    }

    pub fn w1(&self) -> f64 {
        self.w1_parts.iter().sum()
    }

    fn push(&mut self, p: Piece) {
        self.d_parts.push(p.d);
        self.i_parts.push(p.i);
        self.t_parts.push(p.t);
        self.w2_parts.push(p.w2);
        self.w1_parts.push(p.w1);
    }
}

/// Decompose `μ` along its coordinates in their given order.
pub fn tensorise(mu: &Density) -> Result<Tensorisation> {
    chain(mu, Parts::FULL)
}

/// Which parts of a chain to compute.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Parts {
    /// Decompose `μ̄` instead, from the centred conditionals of `μ` (which
    /// are the conditionals of `μ̄`).
    pub centered: bool,
    pub fisher: bool,
    /// `W1` of the conditional rows of a planar grid, the costliest part.
    pub row_w1: bool,
}

impl Parts {
    pub const FULL: Parts = Parts { centered: false, fisher: true, row_w1: true };
    pub const RAW: Parts = Parts { centered: false, fisher: false, row_w1: false };
    pub const CENTERED: Parts = Parts { centered: true, fisher: false, row_w1: false };
}

pub(crate) fn chain(mu: &Density, parts: Parts) -> Result<Tensorisation> {
    let mut out = Tensorisation::default();
    let prep = |d: &Density1D| if parts.centered { d.shifted(-d.mean()) } else { d.clone() };
    match mu {
        Density::Line(d) => out.push(piece(&prep(d), &gamma_for(d.settings())?, parts.fisher, true)?),
        Density::Product(p) => {
            for f in p.factors() {
                out.push(piece(&prep(f), &gamma_for(f.settings())?, parts.fisher, true)?);
            }
        }
        Density::Plane(g) => {
            let gamma = gamma_for(&Settings { grid_points: g.spec_y().n_points, ..Settings::default() })?;
            out.push(piece(&prep(&g.marginal_x()?), &gamma, parts.fisher, true)?);
            out.push(rows(g, &gamma, parts)?);
        }
    }
    Ok(out)
}

fn gamma_for(settings: &Settings) -> Result<Density1D> {
    Density1D::gaussian_with(0.0, 1.0, settings)
}

#[derive(Debug, Clone, Copy, Default)]
struct Piece {
    d: f64,
    i: f64,
    t: f64,
    w2: f64,
    w1: f64,
}

fn piece(d: &Density1D, gamma: &Density1D, fisher: bool, w1: bool) -> Result<Piece> {
    let costs: &[CostFn] = if w1 { &[CostFn::Sq, CostFn::Delta, CostFn::Abs] } else { &[CostFn::Sq, CostFn::Delta] };
    let c = transport_costs(d, gamma, costs)?;
    Ok(Piece {
        d: relative_entropy_1d(d, gamma)?.value,
        i: if fisher { fisher_1d(d, Some(gamma))?.value } else { 0.0 },
        w2: c[0].value,
        w1: c.get(2).map_or(0.0, |c| c.value),
        t: c[1].value,
    })
}

/// Average of the row pieces against the first marginal.
fn rows(g: &Grid2DDensity, gamma: &Density1D, parts: Parts) -> Result<Piece> {
    let (sx, sy) = (g.spec_x(), g.spec_y());
    let mut ws = Vec::with_capacity(sx.n_points);
    let mut pieces = Vec::with_capacity(sx.n_points);
    for i in 0..sx.n_points {
        let w = libm::exp(log_mass(g.row(i), sy.step()));
        ws.push(w);
        if w * sx.width() < NEGLIGIBLE_ROW {
            pieces.push(Piece::default());
            continue;
        }
        let mut s = Density1D::grid(sy, g.row(i).to_vec())?;
        if parts.centered {
            s = s.shifted(-s.mean());
        }
        pieces.push(piece(&s, gamma, parts.fisher, parts.row_w1)?);
    }
    let avg = |f: fn(&Piece) -> f64| {
        let v: Vec<f64> = ws.iter().zip(&pieces).map(|(w, p)| w * f(p)).collect();
        integrate_samples(&v, &sx).value
    };
    Ok(Piece { d: avg(|p| p.d), i: avg(|p| p.i), t: avg(|p| p.t), w2: avg(|p| p.w2), w1: avg(|p| p.w1) })
}
