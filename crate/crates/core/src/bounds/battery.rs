//! The standard set of test laws every bound is certified on.

use crate::density::{Component, Density, Density1D, Grid2DDensity, ProductDensity};
use crate::error::Result;
use crate::settings::Settings;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// `½ N(−gap/2, 1) + ½ N(gap/2, 1)`.
pub fn symmetric_mixture(gap: f64, settings: &Settings) -> Result<Density1D> {
    Density1D::mixture_with(
        alloc::vec![Component::new(0.5, -gap / 2.0, 1.0), Component::new(0.5, gap / 2.0, 1.0)],
        settings,
    )
}

/// `exp(−x²/4 − x⁴/20)`, so `v'' ≥ 1/2`.
pub fn tilted_quartic(settings: &Settings) -> Result<Density1D> {
    Density1D::tilted_with(alloc::vec![0.0, 0.0, 0.25, 0.0, 0.05], Some(0.5), settings)
}

/// Named members: centred Gaussians, unit-variance shifts, symmetric
/// two-component mixtures, a log-concave tilt, products of these, and
/// correlated planar Gaussians.
pub fn standard_battery(settings: &Settings) -> Result<Vec<(String, Density)>> {
    let g = |m: f64, s: f64| Density1D::gaussian_with(m, s * s, settings);
    let mut out: Vec<(String, Density)> = Vec::new();
    for s in [0.5, 0.8, 1.25, 2.0] {
        out.push((alloc::format!("gaussian-sigma-{s}"), Density::Line(g(0.0, s)?)));
    }
    for m in [-1.0, 1.0] {
        out.push((alloc::format!("gaussian-shift-{m}"), Density::Line(g(m, 1.0)?)));
    }
    for gap in [1.0, 2.0] {
        out.push((alloc::format!("mixture-gap-{gap}"), Density::Line(symmetric_mixture(gap, settings)?)));
    }
    out.push(("tilted-eps-0.5".to_string(), Density::Line(tilted_quartic(settings)?)));
    let products = [
        ("product-sigma-0.5-mixture-1", alloc::vec![g(0.0, 0.5)?, symmetric_mixture(1.0, settings)?]),
        ("product-shift-1-tilted", alloc::vec![g(1.0, 1.0)?, tilted_quartic(settings)?]),
        ("product-sigma-2-sigma-0.8", alloc::vec![g(0.0, 2.0)?, g(0.0, 0.8)?]),
    ];
    for (name, f) in products {
        out.push((name.to_string(), Density::Product(ProductDensity::new(f)?)));
    }
    for rho in [0.0, 0.5] {
        let p = Grid2DDensity::bivariate_gaussian([0.0, 0.0], [[1.0, rho], [rho, 1.0]], settings)?;
        out.push((alloc::format!("bivariate-rho-{rho}"), Density::Plane(p)));
    }
    Ok(out)
}
