//! Special functions, orthogonal polynomials, Gauss quadrature and the
//! symmetric tridiagonal eigensolver shared by every other module.

mod gamma;
mod poly;
mod quadrature;
mod tridiag;

pub use gamma::{log_beta, log_gamma};
pub(crate) use gamma::{ln_factorial, ln_gamma_positive};
pub use poly::{
    jacobi, jacobi_derivative, jacobi_derivative_k, laguerre, laguerre_derivative,
    laguerre_derivative_k,
};
pub(crate) use poly::{jacobi_unchecked, laguerre_unchecked};
pub use quadrature::{
    gauss_jacobi, gauss_laguerre, jacobi_log_norm, laguerre_log_norm, QuadratureKind,
    QuadratureRule,
};
pub use tridiag::{
    lowest_eigenvalues, symmetric_tridiagonal_eigen, TridiagonalEigen, TridiagonalMatrix,
};
