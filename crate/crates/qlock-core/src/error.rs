//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An operator failed a structural invariant (Hermiticity, positivity,
    /// trace, completeness, unitarity) beyond its tolerance.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Operands live on incompatible spaces.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// Input is structurally fine but outside the supported size range.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested quantity is undefined for these inputs (e.g. a ratio with
    /// a vanishing denominator).
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// Config file could not be parsed or violates its schema.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 config, 3 invariant, 4 capability.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Capability(_) => 4,
            _ => 3,
        }
    }
}
