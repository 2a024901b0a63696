/// Discretisation settings shared by density construction and the functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Uniform grid size used for quadrature and tabulated densities.
    pub grid_points: usize,
    /// Support half-width in units of the (estimated) standard deviation.
    pub support_radius: f64,
    /// Points per axis for two-dimensional grids.
    pub plane_points: usize,
}

impl Settings {
    pub const DEFAULT_GRID_POINTS: usize = 4096;
    pub const DEFAULT_SUPPORT_RADIUS: f64 = 10.0;
    pub const DEFAULT_PLANE_POINTS: usize = 401;

    pub fn new(grid_points: usize, support_radius: f64) -> Self {
        Settings { grid_points, support_radius, ..Self::default() }
    }

    /// Node count actually used for parametric supports: rounded up to an odd
    /// number so Simpson panels tile the support and its centre is a node.
    pub fn odd_points(&self) -> usize {
        self.grid_points.max(crate::GridSpec::MIN_POINTS) | 1
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            grid_points: Self::DEFAULT_GRID_POINTS,
            support_radius: Self::DEFAULT_SUPPORT_RADIUS,
            plane_points: Self::DEFAULT_PLANE_POINTS,
        }
    }
}
