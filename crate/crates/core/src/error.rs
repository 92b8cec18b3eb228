use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quantum numbers or parameters that do not describe an admissible state.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Coulomb coupling at or beyond the critical value for the given angular state.
    #[error(
        "bound-state constraint (mu1+mu2+mu3+2nu+2ell+1/2) > Ze^2 violated: \
         {lhs} <= {coupling}"
    )]
    BoundConstraint { lhs: f64, coupling: f64 },

    /// A numerical procedure failed to produce a trustworthy value.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
