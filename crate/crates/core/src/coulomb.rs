//! Bound states of the Dunkl–Klein-Gordon equation with `V(r) = −g/r`,
//! `g = Ze²`.
//!
//! With `ς = √(m² − E²)` and `ϱ = 2ςr` the radial equation reads
//! `Ψ'' + 2(1+μΣ)/ϱ Ψ' + (Eg/ς)/ϱ Ψ + (g² − ϖ²)/ϱ² Ψ − Ψ/4 = 0`,
//! solved by `Ψ = e^{−ϱ/2} ϱ^η L_n^{1+2(η+μΣ)}(ϱ)` when `Eg/ς = n + 1 + η + μΣ`.

use serde::{Deserialize, Serialize};

use crate::dunkl::{ParitySector, WignerParams};
use crate::error::{invalid, Error, Result};
use crate::spherical::SphericalQuantum;
use crate::specfun::{gauss_laguerre, laguerre_unchecked};

pub const FINE_STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombConfig {
    pub m: f64,
    /// Coupling `Ze²`.
    pub g: f64,
}

impl CoulombConfig {
    pub fn new(m: f64, g: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(invalid(format!("mass must be finite and > 0, got {m}")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(invalid(format!("coupling must be finite and > 0, got {g}")));
        }
        Ok(Self { m, g })
    }
}

/// Labels `(n, 2ν, 2ℓ, s⃗)`; angular admissibility as for the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoulombState {
    pub n: u32,
    pub two_nu: u32,
    pub two_ell: u32,
    pub sector: ParitySector,
}

impl CoulombState {
    pub fn new(n: u32, two_nu: u32, two_ell: u32, sector: ParitySector) -> Result<Self> {
        SphericalQuantum::new(0, two_nu, two_ell, sector)?;
        Ok(Self { n, two_nu, two_ell, sector })
    }

    pub fn validate(&self) -> Result<()> {
        SphericalQuantum { n: 0, two_nu: self.two_nu, two_ell: self.two_ell, sector: self.sector }.validate()
    }
}

impl std::fmt::Display for CoulombState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n={} 2nu={} 2ell={} {}", self.n, self.two_nu, self.two_ell, self.sector.label())
    }
}

/// `μΣ + 2ν + 2ℓ + 1/2`.
fn critical_coupling(params: &WignerParams, two_nu: u32, two_ell: u32) -> f64 {
    params.sum() + (two_nu + two_ell) as f64 + 0.5
}

/// `(μ₁+μ₂+μ₃+2ν+2ℓ+1/2) > g`.
pub fn bound_constraint(params: &WignerParams, two_nu: u32, two_ell: u32, g: f64) -> bool {
    critical_coupling(params, two_nu, two_ell) > g
}

fn check_bound(params: &WignerParams, two_nu: u32, two_ell: u32, g: f64) -> Result<f64> {
    let lhs = critical_coupling(params, two_nu, two_ell);
    if lhs > g {
        Ok(lhs)
    } else {
        Err(Error::BoundConstraint { lhs, coupling: g })
    }
}

/// `η = −μΣ − 1/2 + √((μΣ + 2ν + 2ℓ + 1/2)² − g²)`.
pub fn eta(params: &WignerParams, two_nu: u32, two_ell: u32, g: f64) -> Result<f64> {
    let lhs = check_bound(params, two_nu, two_ell, g)?;
    Ok(-params.sum() - 0.5 + ((lhs - g) * (lhs + g)).sqrt())
}

/// `E = m[1 + g²/(n + 1/2 + √((μΣ+2ν+2ℓ+1/2)² − g²))²]^{−1/2}`.
pub fn coulomb_energy(state: &CoulombState, config: &CoulombConfig, params: &WignerParams) -> Result<f64> {
    state.validate()?;
    let lhs = check_bound(params, state.two_nu, state.two_ell, config.g)?;
    let g2 = config.g * config.g;
    let q = state.n as f64 + 0.5 + (lhs * lhs - g2).sqrt();
    Ok(config.m * (1.0 + g2 / (q * q)).powf(-0.5))
}

/// The three leading terms of `E` in powers of `g²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FineStructure {
    pub e_rest: f64,
    pub e_nonrel: f64,
    pub e_fine: f64,
}

impl FineStructure {
    pub fn total(&self) -> f64 {
        self.e_rest + self.e_nonrel + self.e_fine
    }
}

/// `m − (m/2) g²/D² − m g⁴/D⁴ (D/(2X+1) − 3/8)` with `X = μΣ + 2(ν+ℓ)` and
/// `D = n + X + 1`. The remainder against [`coulomb_energy`] is `O(g⁶)`.
pub fn fine_structure_expansion(
    state: &CoulombState,
    config: &CoulombConfig,
    params: &WignerParams,
) -> Result<FineStructure> {
    state.validate()?;
    check_bound(params, state.two_nu, state.two_ell, config.g)?;
    let x = params.sum() + (state.two_nu + state.two_ell) as f64;
    let d = state.n as f64 + x + 1.0;
    let g2 = config.g * config.g;
    let m = config.m;
    Ok(FineStructure {
        e_rest: m,
        e_nonrel: -0.5 * m * g2 / (d * d),
        e_fine: -m * g2 * g2 / d.powi(4) * (d / (2.0 * x + 1.0) - 0.375),
    })
}

/// `|μΣ + 2(ν+ℓ) − 5/6| < tol`.
pub fn fine_structure_vanishing(params: &WignerParams, two_nu: u32, two_ell: u32, tol: f64) -> bool {
    let x = params.sum() + (two_nu + two_ell) as f64;
    (x - 5.0 / 6.0).abs() < tol
}

/// A bound state's radial profile together with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombRadial {
    pub state: CoulombState,
    pub config: CoulombConfig,
    pub params: WignerParams,
    pub energy: f64,
    pub eta: f64,
    /// `ς = √(m² − E²)`.
    pub varsigma: f64,
}

impl CoulombRadial {
    pub fn new(state: CoulombState, config: CoulombConfig, params: WignerParams) -> Result<Self> {
        let energy = coulomb_energy(&state, &config, &params)?;
        let eta = eta(&params, state.two_nu, state.two_ell, config.g)?;
        let varsigma = ((config.m - energy) * (config.m + energy)).sqrt();
        Ok(Self { state, config, params, energy, eta, varsigma })
    }

    pub fn laguerre_order(&self) -> f64 {
        1.0 + 2.0 * (self.eta + self.params.sum())
    }

    /// `ϖ² = 4(ℓ+ν)(ℓ+ν+μΣ+1/2)`.
    pub fn varpi2(&self) -> f64 {
        let j = 0.5 * (self.state.two_nu + self.state.two_ell) as f64;
        4.0 * j * (j + self.params.sum() + 0.5)
    }

    pub fn varrho(&self, r: f64) -> f64 {
        2.0 * self.varsigma * r
    }

    /// `Ψ(ϱ)`, `Ψ'(ϱ)`, `Ψ''(ϱ)` for `ϱ > 0`.
    pub fn jet_rho(&self, rho: f64) -> [f64; 3] {
        let n = self.state.n;
        let b = self.laguerre_order();
        let l0 = laguerre_unchecked(n, b, rho);
        let l1 = if n >= 1 { -laguerre_unchecked(n - 1, b + 1.0, rho) } else { 0.0 };
        let l2 = if n >= 2 { laguerre_unchecked(n - 2, b + 2.0, rho) } else { 0.0 };
        let e = (-0.5 * rho).exp();
        let g = [e * l0, e * (l1 - 0.5 * l0), e * (l2 - l1 + 0.25 * l0)];
        let h = self.eta;
        let p = rho.powf(h);
        let pw = [p, h * p / rho, h * (h - 1.0) * p / (rho * rho)];
        [pw[0] * g[0], pw[1] * g[0] + pw[0] * g[1], pw[2] * g[0] + 2.0 * pw[1] * g[1] + pw[0] * g[2]]
    }

    pub fn value_rho(&self, rho: f64) -> f64 {
        self.jet_rho(rho)[0]
    }

    /// Unnormalized `Ψ(2ςr)`.
    pub fn value(&self, r: f64) -> f64 {
        self.value_rho(self.varrho(r))
    }

    /// `∫ Ψ² r^{2(1+μΣ)} dr`, by Gauss–Laguerre in ϱ.
    pub fn plain_norm_squared(&self) -> Result<f64> {
        let ms = self.params.sum();
        let rule = gauss_laguerre(2.0 * (self.eta + ms) + 2.0, self.state.n as usize + 4)?;
        let b = self.laguerre_order();
        let n = self.state.n;
        let sum = rule.integrate(|t| laguerre_unchecked(n, b, t).powi(2));
        Ok(sum * (2.0 * self.varsigma).powf(-3.0 - 2.0 * ms))
    }

    /// Klein-Gordon charge `∫ (2E + 2g/r) Ψ² r^{2(1+μΣ)} dr`.
    pub fn charge_norm_squared(&self) -> Result<f64> {
        charge_overlap(self, self)
    }
}

/// `∫ (E_a + E_b + 2g/r) Ψ_a Ψ_b r^{2(1+μΣ)} dr`, the conserved Klein-Gordon
/// inner product; zero for distinct bound states sharing `(ν, ℓ, s⃗)`.
pub fn charge_overlap(a: &CoulombRadial, b: &CoulombRadial) -> Result<f64> {
    if a.params != b.params || a.config != b.config {
        return Err(invalid("charge overlap needs a common coupling, mass and Wigner parameters"));
    }
    let ms = a.params.sum();
    let k = a.varsigma + b.varsigma;
    // t = k r; integrand e^{-t} t^{η_a+η_b+2μΣ+1} [(E_a+E_b) t/k + 2g] × polynomial
    let alpha = a.eta + b.eta + 2.0 * ms + 1.0;
    let npts = (a.state.n + b.state.n) as usize / 2 + 4;
    let rule = gauss_laguerre(alpha, npts)?;
    let (la, lb) = (a.laguerre_order(), b.laguerre_order());
    let (ca, cb) = (2.0 * a.varsigma / k, 2.0 * b.varsigma / k);
    let esum = a.energy + b.energy;
    let g = a.config.g;
    let sum = rule.integrate(|t| {
        let pa = ca.powf(a.eta) * laguerre_unchecked(a.state.n, la, ca * t);
        let pb = cb.powf(b.eta) * laguerre_unchecked(b.state.n, lb, cb * t);
        (esum * t / k + 2.0 * g) * pa * pb
    });
    Ok(sum * k.powf(-alpha - 1.0))
}

pub fn coulomb_radial(state: &CoulombState, config: &CoulombConfig, params: &WignerParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be > 0, got {r}")));
    }
    Ok(CoulombRadial::new(*state, *config, *params)?.value(r))
}

/// The radial profile scaled to unit norm under `r^{2(1+μΣ)} dr`.
pub fn coulomb_radial_normalized(
    state: &CoulombState,
    config: &CoulombConfig,
    params: &WignerParams,
    r: f64,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be > 0, got {r}")));
    }
    let rad = CoulombRadial::new(*state, *config, *params)?;
    Ok(rad.value(r) / rad.plain_norm_squared()?.sqrt())
}

/// Bound states with `n ≤ n_max` and `2ν + 2ℓ ≤ ang_max` in the given
/// sectors that satisfy the bound constraint, ordered by `(n, 2ν, 2ℓ)` then
/// sector.
pub fn coulomb_states(
    params: &WignerParams,
    g: f64,
    n_max: u32,
    ang_max: u32,
    sectors: &[ParitySector],
) -> Vec<CoulombState> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for two_nu in 0..=ang_max {
            for two_ell in 0..=ang_max - two_nu {
                for &sector in sectors {
                    if let Ok(s) = CoulombState::new(n, two_nu, two_ell, sector) {
                        if bound_constraint(params, two_nu, two_ell, g) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}
