use thiserror::Error;

/// Errors raised across the library. Variants split into precondition
/// failures (bad input) and numerical failures; see [`WhError::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WhError {
    #[error("dimension error: expected rank {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("group mismatch: operands live on different groups")]
    GroupMismatch,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("precondition error: {0}")]
    Precondition(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("unsupported window: {0}")]
    UnsupportedWindow(String),

    #[error("aliasing error: {nodes} nodes per axis, need more than {required}")]
    Aliasing { nodes: usize, required: usize },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("not factorizable: symbol has a root on the unit circle")]
    NotFactorizable,

    #[error("not Fredholm: symbol has a root on the unit circle")]
    NotFredholm,

    #[error("possible zero of the symbol near angle {angle} (modulus {modulus:e})")]
    PossibleZero { angle: f64, modulus: f64 },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("root-finding error: no convergence after {iterations} iterations")]
    RootFinding { iterations: usize },

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl WhError {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            WhError::PossibleZero { .. }
                | WhError::NumericalInconsistency(_)
                | WhError::RootFinding { .. }
                | WhError::Indeterminate(_)
        )
    }
}

pub type Result<T, E = WhError> = std::result::Result<T, E>;
