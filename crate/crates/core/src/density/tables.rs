//! Cumulative mass tables for densities without a closed-form CDF.

use super::{invert, Density1D};
use crate::special::CompensatedSum;
use alloc::vec::Vec;

/// Cell masses by per-cell Simpson (midpoints from the density itself),
/// accumulated from both ends so each tail keeps full relative precision.
#[derive(Debug, Clone)]
pub(crate) struct Tables {
    left: Vec<f64>,
    right: Vec<f64>,
    total: f64,
}

impl Tables {
    pub(crate) fn build(d: &Density1D) -> Self {
        let s = d.support();
        let p = d.node_pdf();
        let h = s.step();
        let cells: Vec<f64> = (0..s.n_points - 1)
            .map(|k| h / 6.0 * (p[k] + 4.0 * d.pdf(0.5 * (s.node(k) + s.node(k + 1))) + p[k + 1]))
            .collect();
        let total = cells.iter().copied().collect::<CompensatedSum>().value();
        let mut left = Vec::with_capacity(s.n_points);
        let mut acc = CompensatedSum::new();
        left.push(0.0);
        for c in &cells {
            acc.add(*c);
            left.push(acc.value() / total);
        }
        let mut right = alloc::vec![0.0; s.n_points];
        let mut acc = CompensatedSum::new();
        for k in (0..cells.len()).rev() {
            acc.add(cells[k]);
            right[k] = acc.value() / total;
        }
        *left.last_mut().unwrap() = 1.0;
        right[0] = 1.0;
        Tables { left, right, total }
    }

    fn cell(d: &Density1D, x: f64) -> usize {
        let s = d.support();
        let k = libm::floor((x - s.x_lo) / s.step());
        (k.max(0.0) as usize).min(s.n_points - 2)
    }

    fn piece(&self, d: &Density1D, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (d.pdf(a) + 4.0 * d.pdf(0.5 * (a + b)) + d.pdf(b)) / self.total
    }

    pub(crate) fn cdf(&self, d: &Density1D, x: f64) -> f64 {
        let s = d.support();
        if x <= s.x_lo {
            return 0.0;
        }
        if x >= s.x_hi {
            return 1.0;
        }
        let k = Self::cell(d, x);
        (self.left[k] + self.piece(d, s.node(k), x)).clamp(0.0, 1.0)
    }

    pub(crate) fn sf(&self, d: &Density1D, x: f64) -> f64 {
        let s = d.support();
        if x <= s.x_lo {
            return 1.0;
        }
        if x >= s.x_hi {
            return 0.0;
        }
        let k = Self::cell(d, x);
        (self.right[k + 1] + self.piece(d, x, s.node(k + 1))).clamp(0.0, 1.0)
    }

    pub(crate) fn quantile(&self, d: &Density1D, u: f64) -> f64 {
        let s = d.support();
        let k = self.left.partition_point(|&l| l <= u).saturating_sub(1).min(s.n_points - 2);
        invert(|x| self.cdf(d, x) - u, |x| d.pdf(x) / self.total, s.node(k), s.node(k + 1))
    }

    pub(crate) fn isf(&self, d: &Density1D, q: f64) -> f64 {
        let s = d.support();
        let k = self.right.partition_point(|&r| r > q).saturating_sub(1).min(s.n_points - 2);
        invert(|x| q - self.sf(d, x), |x| d.pdf(x) / self.total, s.node(k), s.node(k + 1))
    }
}
