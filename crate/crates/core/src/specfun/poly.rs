//! Generalized Laguerre and Jacobi polynomials by three-term recurrence.

use crate::error::{domain, Result};

fn check_param(name: &str, value: f64) -> Result<()> {
    if value > -1.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > -1, got {value}")))
    }
}

/// `L_n^α(x)` from `(k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}`.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    Ok(laguerre_unchecked(n, alpha, x))
}

pub(crate) fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx L_n^α(x) = -L_{n-1}^{α+1}(x)`.
pub fn laguerre_derivative(n: u32, alpha: f64, x: f64) -> Result<f64> {
    laguerre_derivative_k(n, alpha, x, 1)
}

/// `k`-th derivative, `(-1)^k L_{n-k}^{α+k}(x)`.
pub fn laguerre_derivative_k(n: u32, alpha: f64, x: f64, k: u32) -> Result<f64> {
    check_param("alpha", alpha)?;
    if k > n {
        return Ok(0.0);
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * laguerre_unchecked(n - k, alpha + k as f64, x))
}

/// `P_n^{(α,β)}(x)` from the standard three-term recurrence.
pub fn jacobi(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx P_n^{(α,β)} = ((n+α+β+1)/2) P_{n-1}^{(α+1,β+1)}`.
pub fn jacobi_derivative(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    jacobi_derivative_k(n, alpha, beta, x, 1)
}

/// `k`-th derivative by iterating the first-derivative identity.
pub fn jacobi_derivative_k(n: u32, alpha: f64, beta: f64, x: f64, k: u32) -> Result<f64> {
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    if k > n {
        return Ok(0.0);
    }
    let mut factor = 1.0;
    for j in 0..k {
        factor *= 0.5 * (n as f64 + alpha + beta + 1.0 + j as f64);
    }
    let shift = k as f64;
    Ok(factor * jacobi_unchecked(n - k, alpha + shift, beta + shift, x))
}
