//! Gauss–Laguerre and Gauss–Jacobi rules by the Golub–Welsch construction.

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma_positive;
use super::tridiag::{symmetric_tridiagonal_eigen, TridiagonalMatrix};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuadratureKind {
    /// Weight `x^α e^{-x}` on `(0, ∞)`.
    Laguerre { alpha: f64 },
    /// Weight `(1-x)^α (1+x)^β` on `(-1, 1)`.
    Jacobi { alpha: f64, beta: f64 },
}

impl QuadratureKind {
    /// `∫ w(x) dx` over the support.
    pub fn zeroth_moment(&self) -> f64 {
        match *self {
            Self::Laguerre { alpha } => ln_gamma_positive(alpha + 1.0).exp(),
            Self::Jacobi { alpha, beta } => jacobi_log_moment(alpha, beta).exp(),
        }
    }
}

fn jacobi_log_moment(alpha: f64, beta: f64) -> f64 {
    (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma_positive(alpha + 1.0)
        + ln_gamma_positive(beta + 1.0)
        - ln_gamma_positive(alpha + beta + 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`, approximating `∫ w(x) f(x) dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

fn check_npts(npts: usize) -> Result<()> {
    if npts == 0 {
        Err(domain("quadrature needs at least one node"))
    } else {
        Ok(())
    }
}

fn check_param(name: &str, v: f64) -> Result<()> {
    if v > -1.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > -1, got {v}")))
    }
}

fn golub_welsch(kind: QuadratureKind, diag: Vec<f64>, offdiag: Vec<f64>) -> Result<QuadratureRule> {
    let jacobi_matrix = TridiagonalMatrix::new(diag, offdiag)?;
    let eig = symmetric_tridiagonal_eigen(&jacobi_matrix, true)?;
    let mu0 = kind.zeroth_moment();
    let weights = eig
        .first_components
        .expect("first components requested")
        .into_iter()
        .map(|z| mu0 * z * z)
        .collect();
    Ok(QuadratureRule { kind, nodes: eig.values, weights })
}

/// Gauss rule for `x^α e^{-x}` on `(0, ∞)`; exact through degree `2·npts − 1`.
pub fn gauss_laguerre(alpha: f64, npts: usize) -> Result<QuadratureRule> {
    check_param("alpha", alpha)?;
    check_npts(npts)?;
    let diag = (0..npts).map(|k| 2.0 * k as f64 + 1.0 + alpha).collect();
    let offdiag = (1..npts).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    golub_welsch(QuadratureKind::Laguerre { alpha }, diag, offdiag)
}

/// Gauss rule for `(1-x)^α (1+x)^β` on `(-1, 1)`; exact through degree `2·npts − 1`.
pub fn gauss_jacobi(alpha: f64, beta: f64, npts: usize) -> Result<QuadratureRule> {
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    check_npts(npts)?;
    let ab = alpha + beta;
    let diag = (0..npts)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let offdiag = (1..npts)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            let b2 = if k == 1.0 {
                // the general form is 0/0 at k = 1 when α + β = -1
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    golub_welsch(QuadratureKind::Jacobi { alpha, beta }, diag, offdiag)
}

/// `ln ∫_{-1}^{1} (1-x)^α (1+x)^β [P_n^{(α,β)}(x)]² dx`.
pub fn jacobi_log_norm(n: u32, alpha: f64, beta: f64) -> f64 {
    if n == 0 {
        return jacobi_log_moment(alpha, beta);
    }
    let n = n as f64;
    (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma_positive(n + alpha + 1.0)
        + ln_gamma_positive(n + beta + 1.0)
        - ln_gamma_positive(n + 1.0)
        - (2.0 * n + alpha + beta + 1.0).ln()
        - ln_gamma_positive(n + alpha + beta + 1.0)
}

/// `ln ∫_0^∞ x^α e^{-x} [L_n^α(x)]² dx = ln(Γ(n+α+1) / n!)`.
pub fn laguerre_log_norm(n: u32, alpha: f64) -> f64 {
    ln_gamma_positive(n as f64 + alpha + 1.0) - ln_gamma_positive(n as f64 + 1.0)
}
