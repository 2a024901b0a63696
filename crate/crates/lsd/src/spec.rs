//! Density-spec JSON.
//!
//! ```json
//! {"type": "gaussian", "mean": 0, "var": 4}
//! {"type": "mixture", "components": [{"w": 0.5, "mean": -1, "var": 1}, {"w": 0.5, "mean": 1, "var": 1}]}
//! {"type": "grid", "x_lo": -8, "x_hi": 8, "log_p": [...]}
//! {"type": "tilted", "coeffs": [0, 0, 0.25, 0, 0.05], "eps": 0.5}
//! {"type": "product", "factors": [{"type": "gaussian", "mean": 0, "var": 1}, ...]}
//! {"type": "grid2d", "x_lo": -8, "x_hi": 8, "y_lo": -8, "y_hi": 8, "log_p": [[...], ...]}
//! {"type": "bivariate_gaussian", "mean": [0, 0], "cov": [[1, 0.5], [0.5, 1]]}
//! ```
//!
//! `grid2d` rows are indexed by `x`, so `log_p[i][j]` is the value at
//! `(x_i, y_j)`.

use crate::error::{CliError, Result};
use lsd_core::{Component, Density, Density1D, Grid2DDensity, GridSpec, ProductDensity, Settings};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub w: f64,
    pub mean: f64,
    pub var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    Gaussian {
        mean: f64,
        var: f64,
    },
    Mixture {
        components: Vec<ComponentSpec>,
    },
    Grid {
        x_lo: f64,
        x_hi: f64,
        log_p: Vec<f64>,
        /// Claimed convexity bound, kept only if the grid confirms it.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
    },
    Tilted {
        coeffs: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
    },
    Product {
        factors: Vec<DensitySpec>,
    },
    Grid2d {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
        log_p: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
    },
    BivariateGaussian {
        mean: [f64; 2],
        cov: [[f64; 2]; 2],
    },
}

impl DensitySpec {
    pub fn build(&self, settings: &Settings) -> lsd_core::Result<Density> {
        Ok(match self {
            DensitySpec::Product { factors } => {
                let f = factors.iter().map(|f| f.build_line(settings)).collect::<lsd_core::Result<Vec<_>>>()?;
                Density::Product(ProductDensity::new(f)?)
            }
            DensitySpec::Grid2d { x_lo, x_hi, y_lo, y_hi, log_p, eps } => {
                let ny = log_p.first().map_or(0, Vec::len);
                if let Some(i) = log_p.iter().position(|r| r.len() != ny) {
                    return Err(lsd_core::Error::InvalidGrid(format!(
                        "row {i} has {} values, row 0 has {ny}",
                        log_p[i].len()
                    )));
                }
                let sx = GridSpec::new(*x_lo, *x_hi, log_p.len())?;
                let sy = GridSpec::new(*y_lo, *y_hi, ny)?;
                let g = Grid2DDensity::new(sx, sy, log_p.concat())?;
                Density::Plane(match eps {
                    Some(e) => g.with_convexity(*e),
                    None => g,
                })
            }
            DensitySpec::BivariateGaussian { mean, cov } => {
                Density::Plane(Grid2DDensity::bivariate_gaussian(*mean, *cov, settings)?)
            }
            line => Density::Line(line.build_line(settings)?),
        })
    }

    fn build_line(&self, settings: &Settings) -> lsd_core::Result<Density1D> {
        match self {
            DensitySpec::Gaussian { mean, var } => Density1D::gaussian_with(*mean, *var, settings),
            DensitySpec::Mixture { components } => Density1D::mixture_with(
                components.iter().map(|c| Component::new(c.w, c.mean, c.var)).collect(),
                settings,
            ),
            DensitySpec::Grid { x_lo, x_hi, log_p, eps } => {
                let d = Density1D::grid(GridSpec::new(*x_lo, *x_hi, log_p.len())?, log_p.clone())?;
                Ok(match eps {
                    Some(e) => d.with_convexity(*e),
                    None => d,
                })
            }
            DensitySpec::Tilted { coeffs, eps } => Density1D::tilted_with(coeffs.clone(), *eps, settings),
            _ => Err(lsd_core::Error::InvalidArgument("product factors must be one-dimensional".into())),
        }
    }
}

/// Read and build the density described by the file at `path`.
pub fn load(path: &Path, settings: &Settings) -> Result<Density> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    let spec: DensitySpec = serde_json::from_str(&text).map_err(|e| CliError::input(path, e))?;
    spec.build(settings).map_err(|e| CliError::input(path, e))
}
