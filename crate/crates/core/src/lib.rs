//! Relative entropy, Fisher information and optimal transport functionals of
//! densities against the standard Gaussian, plus a registry of certified
//! lower bounds on the logarithmic Sobolev deficit `I/2 - D`.
//!
//! The crate is `no_std` and only needs `alloc`. Every computation is a pure
//! function of immutable densities, so callers may evaluate independent
//! quantities concurrently. File formats, the CLI and reporting live in the
//! `lsd` companion crate.
//!
//! ```
//! use lsd_core::{Density, Density1D, functionals};
//!
//! let mu = Density::Line(Density1D::gaussian(0.0, 4.0).unwrap());
//! let gamma = Density::standard_gaussian(1);
//! let d = functionals::relative_entropy(&mu, &gamma).unwrap();
//! assert!((d.value - (3.0 - 2.0 * core::f64::consts::LN_2) / 2.0).abs() < 1e-9);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod density;
mod error;
pub mod functionals;
mod grid;
pub mod quadrature;
mod settings;
pub mod special;
pub mod transport;

pub use density::{Component, Density, Density1D, Family, Grid2DDensity, ProductDensity};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use settings::Settings;
