use crate::error::{Error, Result};
use alloc::format;

/// Uniform grid `x_lo = x_0 < x_1 < ... < x_{n-1} = x_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    pub fn new(x_lo: f64, x_hi: f64, n_points: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite()) || x_lo >= x_hi {
            return Err(Error::InvalidGrid(format!("need finite x_lo < x_hi, got [{x_lo}, {x_hi}]")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        Ok(GridSpec { x_lo, x_hi, n_points })
    }

    #[inline]
    pub fn step(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.x_hi
        } else {
            self.x_lo + k as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> {
        let s = *self;
        (0..s.n_points).map(move |k| s.node(k))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi
    }

    /// Same spacing, doubled resolution (`2n - 1` points).
    pub fn refined(&self) -> Self {
        GridSpec { n_points: 2 * self.n_points - 1, ..*self }
    }

    pub fn shifted(&self, c: f64) -> Self {
        GridSpec { x_lo: self.x_lo + c, x_hi: self.x_hi + c, ..*self }
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }
}
