use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("integrand is not finite at node x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("density is not absolutely continuous w.r.t. the reference near x = {x}")]
    AbsoluteContinuity { x: f64 },
    #[error("Fisher information is infinite (score not finite near x = {x})")]
    InfiniteInformation { x: f64 },
    #[error("degenerate conditional slice at x1 = {x1} (row mass {mass:e})")]
    DegenerateSlice { x1: f64, mass: f64 },
    #[error("degenerate transport plan: {0}")]
    DegeneratePlan(String),
    #[error("Δ is only defined for t > -1, got {0}")]
    Domain(f64),
    #[error("masses do not match: {0}")]
    MassMismatch(String),
    #[error("monotone matching cost {monotone} disagrees with exact solver cost {exact}")]
    OracleMismatch { monotone: f64, exact: f64 },
    #[error("unknown bound id `{0}`")]
    UnknownBound(String),
    #[error("hypothesis of `{bound}` not met: {reason}")]
    Hypothesis { bound: &'static str, reason: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that describe an unmet precondition rather than a
    /// numerical breakdown.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis { .. } | Error::AbsoluteContinuity { .. } | Error::ShapeMismatch(_)
        )
    }
}
