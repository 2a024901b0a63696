//! Lazily computed functionals of one density, shared by every bound
//! evaluated on it.

use super::recenter::{chain, recenter, Parts, Tensorisation};
use crate::density::{Density, Density1D, ProductDensity};
use crate::error::{Error, Result};
use crate::functionals::{self, FunctionalValue};
use crate::settings::Settings;
use crate::transport::{monotone_plan, plan_costs, transport_cost, CostFn, TransportPlan1D};
use alloc::vec::Vec;
use core::cell::{Cell, OnceCell};

/// `W2²(μ, γ_n)`: exact for lines and products, bracketed for planar grids
/// between the sum over the marginals and the Knothe–Rosenblatt cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct W2Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Quantities of the recentered law `μ̄` for one coordinate ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Centered {
    /// `D(μ̄|γ_n)`.
    pub d: f64,
    /// Sum of the `Δ(|·|)` costs of the centred conditionals.
    pub t: f64,
    /// Sum of the `W2²` of the centred conditionals.
    pub w2_sq: f64,
    /// A lower bound on `W1(μ̄, γ_n)` (exact in one dimension).
    pub w1: f64,
}

pub(crate) struct Analysis {
    pub mu: Density,
    pub n: f64,
    gamma: Density,
    err: Cell<f64>,
    d: OnceCell<Result<FunctionalValue>>,
    i_rel: OnceCell<Result<FunctionalValue>>,
    i_plain: OnceCell<Result<FunctionalValue>>,
    tv: OnceCell<Result<FunctionalValue>>,
    power: OnceCell<Result<FunctionalValue>>,
    m2: OnceCell<f64>,
    mean: OnceCell<Vec<f64>>,
    plan: OnceCell<Result<TransportPlan1D>>,
    line_costs: OnceCell<Result<[f64; 3]>>,
    w2: OnceCell<Result<W2Bracket>>,
    raw: OnceCell<Result<Vec<Tensorisation>>>,
    centered: OnceCell<Result<Vec<Centered>>>,
}

fn cached<T: Clone>(cell: &OnceCell<Result<T>>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    cell.get_or_init(f).clone()
}

impl Analysis {
    pub fn new(mu: &Density) -> Self {
        // a one-factor product is a line
        let mu = match mu {
            Density::Product(p) if p.dim() == 1 => Density::Line(p.factors()[0].clone()),
            other => other.clone(),
        };
        let gamma = functionals::reference_gaussian(&mu);
        Analysis {
            n: mu.dim() as f64,
            mu,
            gamma,
            err: Cell::new(0.0),
            d: OnceCell::new(),
            i_rel: OnceCell::new(),
            i_plain: OnceCell::new(),
            tv: OnceCell::new(),
            power: OnceCell::new(),
            m2: OnceCell::new(),
            mean: OnceCell::new(),
            plan: OnceCell::new(),
            line_costs: OnceCell::new(),
            w2: OnceCell::new(),
            raw: OnceCell::new(),
            centered: OnceCell::new(),
        }
    }

    /// Reset the running error estimate before evaluating one bound.
    pub fn take_error(&self) -> f64 {
        self.err.replace(0.0)
    }

    fn track(&self, v: Result<FunctionalValue>) -> Result<f64> {
        let v = v?;
        self.err.set(self.err.get() + v.error_estimate);
        Ok(v.value)
    }

    pub fn gamma(&self) -> &Density {
        &self.gamma
    }

    pub fn line(&self) -> Option<&Density1D> {
        self.mu.as_line()
    }

    pub fn d(&self) -> Result<f64> {
        self.track(cached(&self.d, || functionals::relative_entropy(&self.mu, &self.gamma)))
    }

    pub fn i_rel(&self) -> Result<f64> {
        self.track(cached(&self.i_rel, || functionals::relative_fisher(&self.mu, &self.gamma)))
    }

    pub fn i_plain(&self) -> Result<f64> {
        self.track(cached(&self.i_plain, || functionals::fisher_information(&self.mu)))
    }

    pub fn deficit(&self) -> Result<f64> {
        Ok(0.5 * self.i_rel()? - self.d()?)
    }

    pub fn tv(&self) -> Result<f64> {
        self.track(cached(&self.tv, || functionals::total_variation(&self.mu, &self.gamma)))
    }

    pub fn entropy_power(&self) -> Result<f64> {
        self.track(cached(&self.power, || functionals::entropy_power(&self.mu)))
    }

    /// `E|X|²`.
    pub fn m2(&self) -> f64 {
        *self.m2.get_or_init(|| self.mu.second_moment())
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.get_or_init(|| self.mu.mean())
    }

    /// Monotone map from `N(0, 1)` onto a one-dimensional `μ`.
    pub fn plan(&self) -> Result<TransportPlan1D> {
        let mu = self.line().ok_or_else(|| Error::arg("a transport map needs a one-dimensional law"))?;
        let g = self.gamma.as_line().expect("reference of a line is a line");
        cached(&self.plan, || monotone_plan(mu, g))
    }

    /// `(W2², W1, T_Δ)` between a one-dimensional `μ` and `γ`.
    pub fn line_costs(&self) -> Result<[f64; 3]> {
        cached(&self.line_costs, || {
            let c = plan_costs(&self.plan()?, &[CostFn::Sq, CostFn::Abs, CostFn::Delta])?;
            Ok([c[0].value, c[1].value, c[2].value])
        })
    }

    /// Chain decompositions of `μ` itself, one per coordinate ordering.
    fn raw(&self) -> Result<Vec<Tensorisation>> {
        cached(&self.raw, || self.orderings().iter().map(|m| chain(m, Parts::RAW)).collect())
    }

    fn orderings(&self) -> Vec<Density> {
        match &self.mu {
            Density::Plane(g) => alloc::vec![self.mu.clone(), Density::Plane(g.transposed())],
            other => alloc::vec![other.clone()],
        }
    }

    pub fn w2_bracket(&self) -> Result<W2Bracket> {
        cached(&self.w2, || match &self.mu {
            Density::Line(_) => {
                let w = self.line_costs()?[0];
                Ok(W2Bracket { lo: w, hi: w })
            }
            Density::Product(_) => {
                let w = self.raw()?[0].w2_sq();
                Ok(W2Bracket { lo: w, hi: w })
            }
            Density::Plane(_) => {
                let r = self.raw()?;
                let lo = r[0].w2_parts[0] + r[1].w2_parts[0];
                let hi = r[0].w2_sq().min(r[1].w2_sq());
                Ok(W2Bracket { lo: lo.min(hi), hi })
            }
        })
    }

    /// Recentered quantities, one entry per coordinate ordering.
    pub fn centered(&self) -> Result<Vec<Centered>> {
        cached(&self.centered, || {
            self.orderings()
                .iter()
                .map(|m| {
                    let c = chain(m, Parts::CENTERED)?;
                    let w1 = match m {
                        Density::Line(_) => c.w1(),
                        Density::Product(_) => c.w1_parts.iter().copied().fold(0.0, f64::max),
                        Density::Plane(_) => {
                            // marginals of μ̄ bound W1(μ̄, γ₂) from below
                            let r = recenter(m)?.recentered.marginals()?;
                            let g = gamma_like(&r[1]);
                            c.w1_parts[0].max(transport_cost(&r[1], &g?, CostFn::Abs)?.value)
                        }
                    };
                    Ok(Centered { d: c.d(), t: c.t(), w2_sq: c.w2_sq(), w1 })
                })
                .collect()
        })
    }

    /// `ε` with `V'' ≥ ε I_n`, if certified.
    pub fn convexity(&self) -> Option<f64> {
        self.mu.convexity_lower_bound()
    }

    /// Law of `X + √t Z`, coordinate-wise for products.
    pub fn smoothed(&self, t: f64) -> Result<Density> {
        Ok(match &self.mu {
            Density::Line(d) => Density::Line(crate::density::heat_flow(d, t)?),
            Density::Product(p) => Density::Product(ProductDensity::new(
                p.factors().iter().map(|f| crate::density::heat_flow(f, t)).collect::<Result<Vec<_>>>()?,
            )?),
            Density::Plane(_) => return Err(Error::arg("smoothing is only available for lines and products")),
        })
    }
}

fn gamma_like(d: &Density1D) -> Result<Density1D> {
    Density1D::gaussian_with(0.0, 1.0, &Settings { grid_points: d.support().n_points, ..Settings::default() })
}
