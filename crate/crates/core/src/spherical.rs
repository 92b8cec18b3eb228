//! The Dunkl–Klein-Gordon oscillator separated in spherical coordinates.
//!
//! `ψ = Ϝ(r) Θ(θ) Φ(φ)` with Jacobi angular factors and a Laguerre radial
//! factor. Half-integer quantum numbers ν and ℓ are stored doubled.

use serde::{Deserialize, Serialize};

use crate::cartesian::{Branch, OscillatorConfig};
use crate::dunkl::{ParitySector, WignerParams};
use crate::error::{invalid, Result};
use crate::levels::{bracket_limit, exact_bracket, LevelCounter, LevelMultiset};
use crate::specfun::{jacobi_log_norm, jacobi_unchecked, laguerre_unchecked, ln_factorial, ln_gamma_positive};

/// Labels `(N, 2ν, 2ℓ, s⃗)` of a spherical eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SphericalQuantum {
    pub n: u32,
    pub two_nu: u32,
    pub two_ell: u32,
    pub sector: ParitySector,
}

impl SphericalQuantum {
    /// Checked constructor; fails unless both Jacobi degrees
    /// `ν − (k+p)/2` and `ℓ − σ/2` are non-negative integers.
    pub fn new(n: u32, two_nu: u32, two_ell: u32, sector: ParitySector) -> Result<Self> {
        let q = Self { n, two_nu, two_ell, sector };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let (kp, sigma) = (self.k() + self.p(), self.sigma());
        if self.two_nu < kp || !(self.two_nu - kp).is_multiple_of(2) {
            return Err(invalid(format!(
                "2nu = {} is not admissible in sector {}: need 2nu >= {kp} and 2nu = {kp} mod 2",
                self.two_nu,
                self.sector.label()
            )));
        }
        if self.two_ell < sigma || !(self.two_ell - sigma).is_multiple_of(2) {
            return Err(invalid(format!(
                "2ell = {} is not admissible in sector {}: need 2ell >= {sigma} and 2ell = {sigma} mod 2",
                self.two_ell,
                self.sector.label()
            )));
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn nu(&self) -> f64 {
        0.5 * self.two_nu as f64
    }

    pub fn ell(&self) -> f64 {
        0.5 * self.two_ell as f64
    }

    pub fn k(&self) -> u32 {
        self.sector.s1.index()
    }

    pub fn p(&self) -> u32 {
        self.sector.s2.index()
    }

    pub fn sigma(&self) -> u32 {
        self.sector.s3.index()
    }

    /// Degree of the azimuthal Jacobi polynomial, `ν − (k+p)/2`.
    pub fn phi_degree(&self) -> u32 {
        (self.two_nu - self.k() - self.p()) / 2
    }

    /// Degree of the polar Jacobi polynomial, `ℓ − σ/2`.
    pub fn theta_degree(&self) -> u32 {
        (self.two_ell - self.sector.s3.index()) / 2
    }

    /// Total polynomial degree `N + deg Φ + deg Θ`; equals `n₁+n₂+n₃` of
    /// the Cartesian states of the same level.
    pub fn total_degree(&self) -> u32 {
        self.n + self.phi_degree() + self.theta_degree()
    }
}

impl std::fmt::Display for SphericalQuantum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} 2nu={} 2ell={} {}", self.n, self.two_nu, self.two_ell, self.sector.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationConstants {
    pub omega2: f64,
    pub varpi2: f64,
}

/// `Ω² = 4ν(ν + μ₁ + μ₂)`.
pub fn separation_omega2(q: &SphericalQuantum, params: &WignerParams) -> Result<f64> {
    q.validate()?;
    let nu = q.nu();
    Ok(4.0 * nu * (nu + params.mu1 + params.mu2))
}

/// `ϖ² = 4(ℓ + ν)(ℓ + ν + μ₁ + μ₂ + μ₃ + 1/2)`.
pub fn separation_varpi2(q: &SphericalQuantum, params: &WignerParams) -> Result<f64> {
    q.validate()?;
    let j = q.nu() + q.ell();
    Ok(4.0 * j * (j + params.sum() + 0.5))
}

pub fn separation_constants(q: &SphericalQuantum, params: &WignerParams) -> Result<SeparationConstants> {
    Ok(SeparationConstants { omega2: separation_omega2(q, params)?, varpi2: separation_varpi2(q, params)? })
}

/// `±√(2mω[2(N+ν+ℓ) + Σ_j μ_j(1−s_j)] + m²)`.
pub fn spectrum_spherical(
    q: &SphericalQuantum,
    params: &WignerParams,
    config: &OscillatorConfig,
    branch: Branch,
) -> Result<f64> {
    q.validate()?;
    let bracket = (2 * q.n + q.two_nu + q.two_ell) as f64 + q.sector.dunkl_shift(params);
    Ok(branch.sign() * (2.0 * config.m_omega() * bracket + config.m * config.m).sqrt())
}

/// Recovers `N` from an energy, `(E² − m²)/(4mω) − [Σμ_j(1−s_j) + 2(ν+ℓ)]/2`.
pub fn radial_quantum_number(
    energy: f64,
    two_nu: u32,
    two_ell: u32,
    sector: &ParitySector,
    params: &WignerParams,
    config: &OscillatorConfig,
) -> f64 {
    (energy * energy - config.m * config.m) / (4.0 * config.m_omega())
        - 0.5 * (sector.dunkl_shift(params) + (two_nu + two_ell) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConstants {
    pub c_phi: f64,
    pub c_theta: f64,
    pub c_r: f64,
}

/// Constants normalizing Φ on `[0, 2π)` under `|cos φ|^{2μ₁}|sin φ|^{2μ₂}`,
/// Θ on `[0, π]` under `sin θ |sin θ|^{2(μ₁+μ₂)}|cos θ|^{2μ₃}` and Ϝ on
/// `(0, ∞)` under `r^{2(1+μ₁+μ₂+μ₃)}`.
pub fn normalization_constants(
    q: &SphericalQuantum,
    params: &WignerParams,
    config: &OscillatorConfig,
) -> Result<NormalizationConstants> {
    q.validate()?;
    let (a, b) = phi_jacobi_params(q, params);
    let ln_phi = (a + b) * std::f64::consts::LN_2 - jacobi_log_norm(q.phi_degree(), a, b);
    let (a, b) = theta_jacobi_params(q, params);
    let ln_theta = (a + b + 1.0) * std::f64::consts::LN_2 - jacobi_log_norm(q.theta_degree(), a, b);
    let alpha = radial_laguerre_order(q, params);
    let ln_r = std::f64::consts::LN_2 + (params.sum() + 1.5) * config.m_omega().ln() + ln_factorial(q.n)
        - ln_gamma_positive(q.n as f64 + alpha + 1.0);
    Ok(NormalizationConstants {
        c_phi: (0.5 * ln_phi).exp(),
        c_theta: (0.5 * ln_theta).exp(),
        c_r: (0.5 * ln_r).exp(),
    })
}

/// `(μ₂ + p − 1/2, μ₁ + k − 1/2)`.
pub fn phi_jacobi_params(q: &SphericalQuantum, params: &WignerParams) -> (f64, f64) {
    (params.mu2 + q.p() as f64 - 0.5, params.mu1 + q.k() as f64 - 0.5)
}

/// `(2ν + μ₁ + μ₂, μ₃ + σ − 1/2)`.
pub fn theta_jacobi_params(q: &SphericalQuantum, params: &WignerParams) -> (f64, f64) {
    (q.two_nu as f64 + params.mu1 + params.mu2, params.mu3 + q.sigma() as f64 - 0.5)
}

/// `2(ν + ℓ) + μ₁ + μ₂ + μ₃ + 1/2`.
pub fn radial_laguerre_order(q: &SphericalQuantum, params: &WignerParams) -> f64 {
    (q.two_nu + q.two_ell) as f64 + params.sum() + 0.5
}

/// `f = uⁿ` and two derivatives, where `u'' = −u` and `u' = v`.
fn power_jet(u: f64, v: f64, n: u32) -> [f64; 3] {
    let nf = n as f64;
    let f0 = u.powi(n as i32);
    let f1 = if n == 0 { 0.0 } else { nf * u.powi(n as i32 - 1) * v };
    let f2 = match n {
        0 => 0.0,
        1 => -u,
        _ => nf * (nf - 1.0) * u.powi(n as i32 - 2) * v * v - nf * f0,
    };
    [f0, f1, f2]
}

fn product_jet(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] * b[0], a[1] * b[0] + a[0] * b[1], a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2]]
}

/// `P(cos 2t)` and its first two t-derivatives.
fn jacobi_of_cos2(n: u32, a: f64, b: f64, t: f64) -> [f64; 3] {
    let x = (2.0 * t).cos();
    let dx = -2.0 * (2.0 * t).sin();
    let ddx = -4.0 * x;
    let p0 = jacobi_unchecked(n, a, b, x);
    let (p1, p2) = match n {
        0 => (0.0, 0.0),
        1 => (0.5 * (n as f64 + a + b + 1.0) * jacobi_unchecked(0, a + 1.0, b + 1.0, x), 0.0),
        _ => {
            let c1 = 0.5 * (n as f64 + a + b + 1.0);
            let c2 = c1 * 0.5 * (n as f64 + a + b + 2.0);
            (c1 * jacobi_unchecked(n - 1, a + 1.0, b + 1.0, x), c2 * jacobi_unchecked(n - 2, a + 2.0, b + 2.0, x))
        }
    };
    [p0, p1 * dx, p2 * dx * dx + p1 * ddx]
}

/// A spherical eigenstate with its constants precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalState {
    pub q: SphericalQuantum,
    pub params: WignerParams,
    pub config: OscillatorConfig,
    pub constants: NormalizationConstants,
}

impl SphericalState {
    pub fn new(q: SphericalQuantum, params: WignerParams, config: OscillatorConfig) -> Result<Self> {
        let constants = normalization_constants(&q, &params, &config)?;
        Ok(Self { q, params, config, constants })
    }

    pub fn energy(&self, branch: Branch) -> f64 {
        spectrum_spherical(&self.q, &self.params, &self.config, branch).expect("validated on construction")
    }

    pub fn separation(&self) -> SeparationConstants {
        separation_constants(&self.q, &self.params).expect("validated on construction")
    }

    /// `Φ(φ)`, `Φ'(φ)`, `Φ''(φ)`.
    pub fn phi_jet(&self, phi: f64) -> [f64; 3] {
        let (a, b) = phi_jacobi_params(&self.q, &self.params);
        let (c, s) = (phi.cos(), phi.sin());
        let jet = product_jet(
            product_jet(power_jet(c, -s, self.q.k()), power_jet(s, c, self.q.p())),
            jacobi_of_cos2(self.q.phi_degree(), a, b, phi),
        );
        jet.map(|v| self.constants.c_phi * v)
    }

    /// `Θ(θ)`, `Θ'(θ)`, `Θ''(θ)`.
    pub fn theta_jet(&self, theta: f64) -> [f64; 3] {
        let (a, b) = theta_jacobi_params(&self.q, &self.params);
        let (c, s) = (theta.cos(), theta.sin());
        let jet = product_jet(
            product_jet(power_jet(c, -s, self.q.sigma()), power_jet(s, c, self.q.two_nu)),
            jacobi_of_cos2(self.q.theta_degree(), a, b, theta),
        );
        jet.map(|v| self.constants.c_theta * v)
    }

    /// `Ϝ(r)`, `Ϝ'(r)`, `Ϝ''(r)` for `r > 0`.
    pub fn radial_jet(&self, r: f64) -> [f64; 3] {
        let mw = self.config.m_omega();
        let rho = mw * r * r;
        let alpha = radial_laguerre_order(&self.q, &self.params);
        let n = self.q.n;
        let l0 = laguerre_unchecked(n, alpha, rho);
        let l1 = if n >= 1 { -laguerre_unchecked(n - 1, alpha + 1.0, rho) } else { 0.0 };
        let l2 = if n >= 2 { laguerre_unchecked(n - 2, alpha + 2.0, rho) } else { 0.0 };
        let e = (-0.5 * rho).exp();
        let g = [e * l0, e * (l1 - 0.5 * l0), e * (l2 - l1 + 0.25 * l0)];
        // ρ^a with a = ν + ℓ
        let a = 0.5 * (self.q.two_nu + self.q.two_ell) as f64;
        let pw = [
            rho.powf(a),
            if a == 0.0 { 0.0 } else { a * rho.powf(a - 1.0) },
            if a == 0.0 || a == 1.0 { 0.0 } else { a * (a - 1.0) * rho.powf(a - 2.0) },
        ];
        let y = product_jet(pw, g);
        let dr = 2.0 * mw * r;
        [y[0], dr * y[1], 2.0 * mw * y[1] + dr * dr * y[2]].map(|v| self.constants.c_r * v)
    }

    pub fn phi(&self, phi: f64) -> f64 {
        self.phi_jet(phi)[0]
    }

    pub fn theta(&self, theta: f64) -> f64 {
        self.theta_jet(theta)[0]
    }

    pub fn radial(&self, r: f64) -> f64 {
        self.radial_jet(r)[0]
    }

    pub fn value(&self, r: f64, theta: f64, phi: f64) -> f64 {
        self.radial(r) * self.theta(theta) * self.phi(phi)
    }
}

pub fn angular_phi(q: &SphericalQuantum, params: &WignerParams, phi: f64) -> Result<f64> {
    let s = SphericalState::new(*q, *params, OscillatorConfig { m: 1.0, omega: 1.0 })?;
    Ok(s.phi(phi))
}

pub fn angular_theta(q: &SphericalQuantum, params: &WignerParams, theta: f64) -> Result<f64> {
    let s = SphericalState::new(*q, *params, OscillatorConfig { m: 1.0, omega: 1.0 })?;
    Ok(s.theta(theta))
}

pub fn radial_wavefunction(
    q: &SphericalQuantum,
    params: &WignerParams,
    config: &OscillatorConfig,
    r: f64,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be > 0, got {r}")));
    }
    Ok(SphericalState::new(*q, *params, *config)?.radial(r))
}

pub fn assemble_wavefunction(
    q: &SphericalQuantum,
    params: &WignerParams,
    config: &OscillatorConfig,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be > 0, got {r}")));
    }
    Ok(SphericalState::new(*q, *params, *config)?.value(r, theta, phi))
}

/// Admissible states of one sector with `N + deg Φ + deg Θ ≤ max_degree`.
pub fn sector_states(sector: ParitySector, max_degree: u32) -> Vec<SphericalQuantum> {
    let kp = sector.s1.index() + sector.s2.index();
    let sigma = sector.s3.index();
    let mut out = Vec::new();
    for n in 0..=max_degree {
        for dphi in 0..=max_degree - n {
            for dtheta in 0..=max_degree - n - dphi {
                out.push(SphericalQuantum { n, two_nu: 2 * dphi + kp, two_ell: 2 * dtheta + sigma, sector });
            }
        }
    }
    out
}

/// Admissible states in the given sectors with total degree at most
/// `max_degree`, ordered by sector then `(N, 2ν, 2ℓ)`.
pub fn spherical_states(max_degree: u32, sectors: &[ParitySector]) -> Vec<SphericalQuantum> {
    let mut out: Vec<SphericalQuantum> = Vec::new();
    for &sector in sectors {
        let mut s = sector_states(sector, max_degree);
        s.sort_by_key(|q| (q.n, q.two_nu, q.two_ell));
        out.extend(s);
    }
    out
}

/// Every admissible `(N, 2ν, 2ℓ, s⃗)` with `E² ≤ cutoff`, grouped into levels.
pub fn enumerate_spherical_levels(
    params: &WignerParams,
    config: &OscillatorConfig,
    e2_cutoff: f64,
) -> Result<LevelMultiset> {
    let two_mw = 2.0 * config.m_omega();
    let limit = bracket_limit(e2_cutoff, config.m, two_mw)?;
    let mut counter = LevelCounter::default();
    for sector in ParitySector::all() {
        let base = sector.odd_count() as u64;
        let mut degree = 0u64;
        loop {
            let bracket = exact_bracket(2 * degree + base, &sector, params);
            if bracket > limit {
                break;
            }
            for q in sector_states(sector, degree as u32) {
                if q.total_degree() as u64 == degree {
                    counter.add(bracket.clone());
                }
            }
            degree += 1;
        }
    }
    Ok(counter.finish(config.m, two_mw))
}
