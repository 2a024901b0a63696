use super::{Density1D, Grid2DDensity};
use crate::error::{Error, Result};
use crate::settings::Settings;
use alloc::format;
use alloc::vec::Vec;

/// Law of independent coordinates, one factor per coordinate.
#[derive(Debug, Clone)]
pub struct ProductDensity {
    factors: Vec<Density1D>,
}

impl ProductDensity {
    pub fn new(factors: Vec<Density1D>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("a product needs at least one factor"));
        }
        Ok(ProductDensity { factors })
    }

    pub fn factors(&self) -> &[Density1D] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn log_pdf(&self, x: &[f64]) -> f64 {
        self.factors.iter().zip(x).map(|(f, x)| f.log_pdf(*x)).sum()
    }
}

/// Any density the functionals accept.
#[derive(Debug, Clone)]
pub enum Density {
    Line(Density1D),
    Product(ProductDensity),
    Plane(Grid2DDensity),
}

impl From<Density1D> for Density {
    fn from(d: Density1D) -> Self {
        Density::Line(d)
    }
}

impl From<ProductDensity> for Density {
    fn from(d: ProductDensity) -> Self {
        Density::Product(d)
    }
}

impl From<Grid2DDensity> for Density {
    fn from(d: Grid2DDensity) -> Self {
        Density::Plane(d)
    }
}

impl Density {
    /// `γ_n`: `N(0, 1)` for `n = 1`, a product of `n` copies otherwise.
    pub fn standard_gaussian(n: usize) -> Self {
        Self::standard_gaussian_with(n, &Settings::default())
    }

    pub fn standard_gaussian_with(n: usize, settings: &Settings) -> Self {
        let g = Density1D::gaussian_with(0.0, 1.0, settings).expect("N(0,1) is valid");
        if n <= 1 {
            Density::Line(g)
        } else {
            Density::Product(ProductDensity { factors: alloc::vec![g; n] })
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Density::Line(_) => 1,
            Density::Product(p) => p.dim(),
            Density::Plane(_) => 2,
        }
    }

    pub fn as_line(&self) -> Option<&Density1D> {
        match self {
            Density::Line(d) => Some(d),
            _ => None,
        }
    }

    pub fn log_pdf(&self, x: &[f64]) -> f64 {
        match self {
            Density::Line(d) => d.log_pdf(x[0]),
            Density::Product(p) => p.log_pdf(x),
            Density::Plane(g) => g.log_pdf(x[0], x[1]),
        }
    }

    pub fn mean(&self) -> Vec<f64> {
        match self {
            Density::Line(d) => alloc::vec![d.mean()],
            Density::Product(p) => p.factors.iter().map(|f| f.mean()).collect(),
            Density::Plane(g) => g.mean().to_vec(),
        }
    }

    /// `E|X|²`.
    pub fn second_moment(&self) -> f64 {
        match self {
            Density::Line(d) => d.second_moment(),
            Density::Product(p) => p.factors.iter().map(|f| f.second_moment()).sum(),
            Density::Plane(g) => g.second_moment(),
        }
    }

    /// Law of `X + c`.
    pub fn shifted(&self, c: &[f64]) -> Result<Self> {
        if c.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("shift has {} entries for dimension {}", c.len(), self.dim())));
        }
        Ok(match self {
            Density::Line(d) => Density::Line(d.shifted(c[0])),
            Density::Product(p) => Density::Product(ProductDensity {
                factors: p.factors.iter().zip(c).map(|(f, c)| f.shifted(*c)).collect(),
            }),
            Density::Plane(g) => Density::Plane(g.shifted([c[0], c[1]])),
        })
    }

    /// One-dimensional marginals, in coordinate order.
    pub fn marginals(&self) -> Result<Vec<Density1D>> {
        Ok(match self {
            Density::Line(d) => alloc::vec![d.clone()],
            Density::Product(p) => p.factors.clone(),
            Density::Plane(g) => alloc::vec![g.marginal_x()?, g.marginal_y()?],
        })
    }

    /// Settings of the first coordinate, used when building companions such
    /// as the reference Gaussian.
    pub fn settings(&self) -> Settings {
        match self {
            Density::Line(d) => *d.settings(),
            Density::Product(p) => *p.factors[0].settings(),
            Density::Plane(g) => Settings { plane_points: g.spec_x().n_points, ..Settings::default() },
        }
    }

    pub fn convexity_lower_bound(&self) -> Option<f64> {
        match self {
            Density::Line(d) => d.convexity_lower_bound(),
            Density::Product(p) => p
                .factors
                .iter()
                .map(|f| f.convexity_lower_bound())
                .try_fold(f64::INFINITY, |acc, e| e.map(|e| acc.min(e))),
            Density::Plane(g) => g.convexity_lower_bound(),
        }
    }
}
