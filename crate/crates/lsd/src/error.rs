use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// An input file could not be read or does not describe a density.
    #[error("{}: {msg}", path.display())]
    Input { path: PathBuf, msg: String },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lsd_core::Error),
    #[error("{0} of {1} evaluations failed")]
    Failures(usize, usize),
}

impl CliError {
    pub fn input(path: impl Into<PathBuf>, msg: impl ToString) -> Self {
        CliError::Input { path: path.into(), msg: msg.to_string() }
    }

    /// 2 for unreadable or malformed input, 3 for an unmet hypothesis, 4 for
    /// numerical failures and failing certificates.
    pub fn exit_code(&self) -> u8 {
        use lsd_core::Error as E;
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Output { .. } => 2,
            CliError::Core(e) if e.is_hypothesis() => 3,
            CliError::Core(E::InvalidArgument(_) | E::InvalidGrid(_) | E::UnknownBound(_)) => 2,
            CliError::Core(_) | CliError::Failures(..) => 4,
        }
    }
}
