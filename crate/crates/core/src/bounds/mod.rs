//! Certified lower bounds on the log-Sobolev deficit and the auxiliary
//! inequalities around it.
//!
//! Each registered bound is an inequality `lhs ≥ rhs` evaluated numerically
//! on a density and reported as a [`BoundCertificate`]. Bounds whose
//! hypotheses fail return [`Error::Hypothesis`] naming the missing condition.

mod analysis;
pub mod battery;
pub mod cheeger;
pub mod delta;
pub mod recenter;
mod registry;

pub use delta::{delta, delta_lower_min, delta_scale};
pub use recenter::{recenter, tensorise, RecenteredDensity, ShiftFn, Tensorisation};
pub use registry::{
    bound_ids, certify_density, certify_suite, cor12_constant, cor43_constant, evaluate_bound, log_concave_constant,
    lookup, sqrt_chord_constant, w1_constant, BoundInfo, MEAN_TOL, MOMENT_SLACK, REGISTRY, TENSOR_CONSTANT,
};

use crate::density::{Density, Density1D};
use crate::error::{Error, Result};
use crate::functionals::deficit;
use crate::transport::w2;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use cheeger::CheegerFn;

/// Where a constant in a certificate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Provenance {
    /// Stated explicitly with the inequality.
    Paper,
    /// Recovered from the chain of estimates proving an inequality stated
    /// up to an absolute constant.
    DerivedFromProof,
    /// Supplied by the caller or by the density (such as `ε` or `t`).
    Input,
    /// A quantity of the density that enters the inequality as a parameter.
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

/// Outcome of checking `lhs ≥ rhs` numerically.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCertificate {
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub slack: f64,
    pub constants: BTreeMap<String, Constant>,
    /// `slack ≥ −tol`.
    pub pass: bool,
    pub tol: f64,
    /// Sum of the quadrature error estimates of the functionals used.
    pub error_estimate: f64,
    pub notes: String,
}

/// Parameters of the bounds that take any.
#[derive(Debug, Clone)]
pub struct BoundOptions {
    pub tol: f64,
    /// Smoothing time for the bounds involving `X + √t Z`.
    pub t: f64,
    /// Law of `Y` for the bounds on `X + Y`; `√t Z` (or `γ` for the reversed
    /// transport inequality) when absent.
    pub partner: Option<Density1D>,
    /// Values of `ε` for the HWI family; the balancing value is always added.
    pub eps_grid: Vec<f64>,
    /// Use the `Δ(|x − z|/√(2π))` cost with constant `1/4` in the refined
    /// transport inequality on the line.
    pub thm41_scaled: bool,
    /// Median-zero form of the same inequality, with constant 1.
    pub median_variant: bool,
    pub cheeger_fns: Vec<CheegerFn>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            tol: 1e-6,
            t: 1.0,
            partner: None,
            eps_grid: alloc::vec![0.25, 0.5, 1.0, 2.0, 4.0],
            thm41_scaled: false,
            median_variant: false,
            cheeger_fns: CheegerFn::ALL.to_vec(),
        }
    }
}

/// Result of one `(bound, density)` evaluation in a suite.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "lowercase"))]
pub enum Outcome {
    Certified(BoundCertificate),
    /// A hypothesis of the bound does not hold for this density.
    Skipped { reason: String },
    /// Numerical failure.
    Failed { error: String },
}

impl Outcome {
    pub fn from_result(r: Result<BoundCertificate>) -> Self {
        match r {
            Ok(c) => Outcome::Certified(c),
            Err(Error::Hypothesis { reason, .. }) => Outcome::Skipped { reason },
            Err(e) if e.is_hypothesis() => Outcome::Skipped { reason: e.to_string() },
            Err(e) => Outcome::Failed { error: e.to_string() },
        }
    }

    pub fn certificate(&self) -> Option<&BoundCertificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    /// Certified and passing, or skipped.
    pub fn is_ok(&self) -> bool {
        match self {
            Outcome::Certified(c) => c.pass,
            Outcome::Skipped { .. } => true,
            Outcome::Failed { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteEntry {
    pub bound_id: String,
    /// Position of the density in the battery.
    pub index: usize,
    pub outcome: Outcome,
}

/// Deficit of `μ` together with its distance to the closest translate of `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EqualityProbe {
    pub deficit: f64,
    /// `W2(μ, N(E X, I_n))`; for planar grids the Knothe–Rosenblatt cost,
    /// which bounds it from above.
    pub w2_to_best_translate: f64,
}

/// Deficit and distance to `N(mean(μ), I_n)`.
pub fn equality_probe(mu: &Density) -> Result<EqualityProbe> {
    let def = deficit(mu)?.value;
    let m = mu.mean();
    let dist = match mu {
        Density::Line(d) => w2(d, &Density1D::gaussian_with(m[0], 1.0, d.settings())?)?,
        Density::Product(p) => {
            let mut s = 0.0;
            for (f, m) in p.factors().iter().zip(&m) {
                let w = w2(f, &Density1D::gaussian_with(*m, 1.0, f.settings())?)?;
                s += w * w;
            }
            libm::sqrt(s)
        }
        Density::Plane(g) => {
            let c = g.shifted([-m[0], -m[1]]);
            let a = recenter::chain(&Density::Plane(c.clone()), recenter::Parts::RAW)?.w2_sq();
            let b = recenter::chain(&Density::Plane(c.transposed()), recenter::Parts::RAW)?.w2_sq();
            libm::sqrt(a.min(b))
        }
    };
    Ok(EqualityProbe { deficit: def, w2_to_best_translate: dist })
}

#[cfg(test)]
mod tests;
