use super::{log_mass, Density1D};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quadrature::integrate_2d;
use crate::settings::Settings;
use alloc::format;
use alloc::vec::Vec;

/// Tabulated density on a rectangle; `log_p[i * ny + j]` is the value at
/// `(x_i, y_j)` with `x` the first coordinate.
#[derive(Debug, Clone)]
pub struct Grid2DDensity {
    spec_x: GridSpec,
    spec_y: GridSpec,
    log_p: Vec<f64>,
    eps: Option<f64>,
}

impl Grid2DDensity {
    /// Normalises `log_p`, which must be finite everywhere.
    pub fn new(spec_x: GridSpec, spec_y: GridSpec, mut log_p: Vec<f64>) -> Result<Self> {
        if log_p.len() != spec_x.n_points * spec_y.n_points {
            return Err(Error::arg(format!(
                "2D grid is {}x{} but has {} values",
                spec_x.n_points,
                spec_y.n_points,
                log_p.len()
            )));
        }
        if let Some(k) = log_p.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg(format!("log_p must be finite on the grid (entry {k} is {})", log_p[k])));
        }
        let m = log_p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_p.iter().map(|v| libm::exp(v - m)).collect();
        let lm = libm::log(integrate_2d(&w, &spec_x, &spec_y).value) + m;
        for v in &mut log_p {
            *v -= lm;
        }
        Ok(Grid2DDensity { spec_x, spec_y, log_p, eps: None })
    }

    pub fn from_fn(spec_x: GridSpec, spec_y: GridSpec, log_p: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut v = Vec::with_capacity(spec_x.n_points * spec_y.n_points);
        for x in spec_x.nodes() {
            for y in spec_y.nodes() {
                v.push(log_p(x, y));
            }
        }
        Self::new(spec_x, spec_y, v)
    }

    /// `N(mean, cov)` tabulated on `mean_i ± R σ_i`. The convexity bound is
    /// the smallest eigenvalue of `cov^{-1}`.
    pub fn bivariate_gaussian(mean: [f64; 2], cov: [[f64; 2]; 2], settings: &Settings) -> Result<Self> {
        let (a, b, c) = (cov[0][0], cov[0][1], cov[1][1]);
        let det = a * c - b * b;
        if !(a > 0.0 && c > 0.0 && det > 0.0) || (cov[1][0] - b).abs() > 1e-12 || mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::arg(format!("covariance must be symmetric positive definite, got {cov:?}")));
        }
        let n = settings.plane_points.max(GridSpec::MIN_POINTS) | 1;
        let r = settings.support_radius;
        let sx = GridSpec::new(mean[0] - r * libm::sqrt(a), mean[0] + r * libm::sqrt(a), n)?;
        let sy = GridSpec::new(mean[1] - r * libm::sqrt(c), mean[1] + r * libm::sqrt(c), n)?;
        let (pa, pb, pc) = (c / det, -b / det, a / det);
        let d = Self::from_fn(sx, sy, |x, y| {
            let (u, v) = (x - mean[0], y - mean[1]);
            -0.5 * (pa * u * u + 2.0 * pb * u * v + pc * v * v)
        })?;
        let lmin = 0.5 * (pa + pc) - libm::sqrt(0.25 * (pa - pc) * (pa - pc) + pb * pb);
        Ok(Grid2DDensity { eps: Some(lmin), ..d })
    }

    /// Keep `eps` if the discrete Hessian of `-log p` has smallest eigenvalue
    /// at least `eps` at every interior node; otherwise clear it.
    pub fn with_convexity(mut self, eps: f64) -> Self {
        let ok = eps > 0.0 && self.min_curvature() >= eps - 1e-6 * eps.max(1.0);
        self.eps = ok.then_some(eps);
        self
    }

    pub fn convexity_lower_bound(&self) -> Option<f64> {
        self.eps
    }

    pub fn spec_x(&self) -> GridSpec {
        self.spec_x
    }

    pub fn spec_y(&self) -> GridSpec {
        self.spec_y
    }

    pub fn log_p(&self) -> &[f64] {
        &self.log_p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let ny = self.spec_y.n_points;
        &self.log_p[i * ny..(i + 1) * ny]
    }

    pub fn pdf_nodes(&self) -> Vec<f64> {
        self.log_p.iter().map(|v| libm::exp(*v)).collect()
    }

    pub(crate) fn min_curvature(&self) -> f64 {
        let (nx, ny) = (self.spec_x.n_points, self.spec_y.n_points);
        let (hx, hy) = (self.spec_x.step(), self.spec_y.step());
        let f = |i: usize, j: usize| self.log_p[i * ny + j];
        let mut lmin = f64::INFINITY;
        for i in 1..nx - 1 {
            for j in 1..ny - 1 {
                let vxx = -(f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (hx * hx);
                let vyy = -(f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (hy * hy);
                let vxy = -(f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * hx * hy);
                let l = 0.5 * (vxx + vyy) - libm::sqrt(0.25 * (vxx - vyy) * (vxx - vyy) + vxy * vxy);
                lmin = lmin.min(l);
            }
        }
        lmin
    }

    /// `log p(x1, ·)` on the `y` nodes, quadratic in `x1` between rows.
    pub fn row_at(&self, x1: f64) -> Result<Vec<f64>> {
        if !self.spec_x.contains(x1) {
            return Err(Error::arg(format!(
                "x1 = {x1} outside [{}, {}]",
                self.spec_x.x_lo, self.spec_x.x_hi
            )));
        }
        let (i, t) = locate(&self.spec_x, x1);
        let (a, b, c) = (self.row(i - 1), self.row(i), self.row(i + 1));
        Ok((0..self.spec_y.n_points).map(|j| quad(a[j], b[j], c[j], t)).collect())
    }

    pub fn log_pdf(&self, x1: f64, x2: f64) -> f64 {
        if !self.spec_x.contains(x1) || !self.spec_y.contains(x2) {
            return f64::NEG_INFINITY;
        }
        let (i, t) = locate(&self.spec_x, x1);
        let (j, s) = locate(&self.spec_y, x2);
        let ny = self.spec_y.n_points;
        let at = |r: usize| {
            let v = &self.log_p[r * ny..];
            quad(v[j - 1], v[j], v[j + 1], s)
        };
        quad(at(i - 1), at(i), at(i + 1), t)
    }

    /// Normalised `p(x2 | x1)`.
    pub fn conditional_slice(&self, x1: f64) -> Result<Density1D> {
        let row = self.row_at(x1)?;
        let mass = libm::exp(log_mass(&row, self.spec_y.step()));
        if !(mass >= 1e-12) {
            return Err(Error::DegenerateSlice { x1, mass });
        }
        Density1D::grid(self.spec_y, row)
    }

    /// `E(X2 | X1 = x1)`.
    pub fn conditional_mean(&self, x1: f64) -> Result<f64> {
        Ok(self.conditional_slice(x1)?.mean())
    }

    /// Law of the first coordinate.
    pub fn marginal_x(&self) -> Result<Density1D> {
        let hy = self.spec_y.step();
        let v = (0..self.spec_x.n_points).map(|i| log_mass(self.row(i), hy)).collect();
        Density1D::grid(self.spec_x, v)
    }

    /// Law of the second coordinate.
    pub fn marginal_y(&self) -> Result<Density1D> {
        self.transposed().marginal_x()
    }

    /// Same law with the coordinates swapped.
    pub fn transposed(&self) -> Self {
        let (nx, ny) = (self.spec_x.n_points, self.spec_y.n_points);
        let mut v = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                v.push(self.log_p[i * ny + j]);
            }
        }
        Grid2DDensity { spec_x: self.spec_y, spec_y: self.spec_x, log_p: v, eps: self.eps }
    }

    pub fn shifted(&self, c: [f64; 2]) -> Self {
        Grid2DDensity { spec_x: self.spec_x.shifted(c[0]), spec_y: self.spec_y.shifted(c[1]), ..self.clone() }
    }

    /// Partial derivatives of `log p` at the nodes: central differences,
    /// one-sided second order on the boundary.
    pub fn node_gradient(&self) -> (Vec<f64>, Vec<f64>) {
        let (nx, ny) = (self.spec_x.n_points, self.spec_y.n_points);
        let (hx, hy) = (self.spec_x.step(), self.spec_y.step());
        let f = |i: usize, j: usize| self.log_p[i * ny + j];
        let d = |g: &dyn Fn(usize) -> f64, k: usize, n: usize, h: f64| {
            if k == 0 {
                (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * g(n - 1) - 4.0 * g(n - 2) + g(n - 3)) / (2.0 * h)
            } else {
                (g(k + 1) - g(k - 1)) / (2.0 * h)
            }
        };
        let mut gx = Vec::with_capacity(nx * ny);
        let mut gy = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                gx.push(d(&|r| f(r, j), i, nx, hx));
                gy.push(d(&|c| f(i, c), j, ny, hy));
            }
        }
        (gx, gy)
    }

    /// `∫∫ g(x, y) p(x, y)` by the tensor Simpson rule.
    pub fn expectation(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let ny = self.spec_y.n_points;
        let mut v = Vec::with_capacity(self.log_p.len());
        for (i, x) in self.spec_x.nodes().enumerate() {
            for (j, y) in self.spec_y.nodes().enumerate() {
                v.push(g(x, y) * libm::exp(self.log_p[i * ny + j]));
            }
        }
        integrate_2d(&v, &self.spec_x, &self.spec_y).value
    }

    pub fn mean(&self) -> [f64; 2] {
        [self.expectation(|x, _| x), self.expectation(|_, y| y)]
    }

    pub fn second_moment(&self) -> f64 {
        self.expectation(|x, y| x * x + y * y)
    }
}

fn locate(s: &GridSpec, x: f64) -> (usize, f64) {
    let h = s.step();
    let r = libm::round((x - s.x_lo) / h);
    let k = (r.max(1.0) as usize).min(s.n_points - 2);
    (k, (x - s.node(k)) / h)
}

#[inline]
fn quad(a: f64, b: f64, c: f64, t: f64) -> f64 {
    b + 0.5 * t * (c - a) + 0.5 * t * t * (c - 2.0 * b + a)
}
