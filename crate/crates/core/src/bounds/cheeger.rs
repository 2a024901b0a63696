//! Cheeger-type inequalities for the standard Gaussian measure, in the `L¹`
//! form and in the `Δ(|·|)` form.

use super::delta::delta;
use crate::density::Density1D;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_abs, integrate_samples, rule_weights};
use crate::special::{delta_unchecked, std_normal_inv_cdf};
use crate::transport::TransportPlan1D;
use alloc::vec::Vec;

/// `√(2/π)`, the optimal constant in `λ ∫|f − m(f)| dγ ≤ ∫|f'| dγ`.
pub const LAMBDA: f64 = 0.797_884_560_802_865_4;
/// `sup t L'(t)/L(t)` for `L = Δ(|·|)`.
pub const C_L: f64 = 2.0;

/// Test functions for the Cheeger checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CheegerFn {
    Identity,
    Square,
    Tanh,
    /// `T − id` for the monotone map `T` from `γ` onto `μ`.
    Displacement,
}

impl CheegerFn {
    pub const ALL: [CheegerFn; 4] = [CheegerFn::Identity, CheegerFn::Square, CheegerFn::Tanh, CheegerFn::Displacement];

    pub fn id(&self) -> &'static str {
        match self {
            CheegerFn::Identity => "x",
            CheegerFn::Square => "x^2",
            CheegerFn::Tanh => "tanh",
            CheegerFn::Displacement => "T-id",
        }
    }
}

/// The four integrals against `γ` entering both inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheegerTerms {
    pub f: CheegerFn,
    /// A median of `f` under `γ`.
    pub median: f64,
    /// `∫ |f − m(f)| dγ`
    pub abs_dev: f64,
    /// `∫ |f'| dγ`
    pub abs_grad: f64,
    /// `∫ Δ(|f − m(f)|) dγ`
    pub delta_dev: f64,
    /// `∫ Δ(c_L |f'| / λ) dγ`
    pub delta_grad: f64,
}

impl CheegerTerms {
    /// `∫|f'| dγ − λ ∫|f − m| dγ`
    pub fn l1_slack(&self) -> f64 {
        self.abs_grad - LAMBDA * self.abs_dev
    }

    /// `∫Δ(c_L|f'|/λ) dγ − ∫Δ(|f − m|) dγ`
    pub fn delta_slack(&self) -> f64 {
        self.delta_grad - self.delta_dev
    }
}

/// Integrals for `f` against `gamma`, which should be `N(0, 1)`. The map
/// `plan` (from `gamma` onto some `μ`) is needed for [`CheegerFn::Displacement`].
pub fn cheeger_terms(f: CheegerFn, gamma: &Density1D, plan: Option<&TransportPlan1D>) -> Result<CheegerTerms> {
    if f == CheegerFn::Displacement && plan.is_none() {
        return Err(Error::arg("the displacement test function needs a transport map"));
    }
    let value = |x: f64| match f {
        CheegerFn::Identity => x,
        CheegerFn::Square => x * x,
        CheegerFn::Tanh => libm::tanh(x),
        CheegerFn::Displacement => plan.map_or(0.0, |p| p.map(x)) - x,
    };
    let slope = |x: f64| match f {
        CheegerFn::Identity => 1.0,
        CheegerFn::Square => 2.0 * x,
        CheegerFn::Tanh => {
            let c = libm::cosh(x);
            1.0 / (c * c)
        }
        CheegerFn::Displacement => plan.map_or(0.0, |p| p.derivative(x)) - 1.0,
    };
    let spec = gamma.support();
    // where γ underflows the test functions may not be finite; those nodes carry no mass
    let weighted = |g: f64, x: f64| {
        let p = gamma.pdf(x);
        if p < 1e-250 {
            0.0
        } else {
            g * p
        }
    };
    let median = match f {
        CheegerFn::Identity | CheegerFn::Tanh => value(0.0),
        CheegerFn::Square => {
            let q = std_normal_inv_cdf(0.75);
            q * q
        }
        CheegerFn::Displacement => weighted_median(spec.nodes().map(|x| (value(x), gamma.pdf(x))).collect()),
    };
    let abs_dev = integrate_abs(|x| weighted(value(x) - median, x), &spec)?.value;
    let abs_grad = integrate_abs(|x| weighted(slope(x), x), &spec)?.value;
    let mut dd = Vec::with_capacity(spec.n_points);
    let mut dg = Vec::with_capacity(spec.n_points);
    for x in spec.nodes() {
        dd.push(weighted(delta_unchecked((value(x) - median).abs()), x));
        dg.push(weighted(delta(C_L * slope(x).abs() / LAMBDA)?, x));
    }
    Ok(CheegerTerms {
        f,
        median,
        abs_dev,
        abs_grad,
        delta_dev: integrate_samples(&dd, &spec).value,
        delta_grad: integrate_samples(&dg, &spec).value,
    })
}

/// Median of the discrete law putting Simpson weight times `p` on each value.
fn weighted_median(mut vp: Vec<(f64, f64)>) -> f64 {
    let w = rule_weights(vp.len());
    for (k, e) in vp.iter_mut().enumerate() {
        e.1 *= w[k];
    }
    vp.retain(|e| e.0.is_finite());
    vp.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = vp.iter().map(|e| e.1).sum();
    let mut acc = 0.0;
    for (v, m) in &vp {
        acc += m;
        if acc >= 0.5 * total {
            return *v;
        }
    }
    vp.last().map_or(0.0, |e| e.0)
}
