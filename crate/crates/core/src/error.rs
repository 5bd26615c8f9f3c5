use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("dimension {dim} exceeds the cap of {cap}")]
    SizeLimit { dim: usize, cap: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian: max |a - a^H| = {deviation:.3e} exceeds tolerance")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue = {min_eigenvalue:.9e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace = {trace:.12} violates the {expected} requirement")]
    Trace { trace: f64, expected: &'static str },

    #[error("pure state has squared norm {norm_sq:.12}, expected 1")]
    Norm { norm_sq: f64 },

    #[error("invalid subspace selector: {0}")]
    Selector(String),

    #[error("unknown builtin state `{0}`")]
    UnknownState(String),

    #[error("parameter `{name}` = {value} is out of range {range}")]
    Parameter {
        name: String,
        value: f64,
        range: &'static str,
    },

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerical routines rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
