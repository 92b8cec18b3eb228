//! The Dunkl–Klein-Gordon oscillator separated in Cartesian coordinates.
//!
//! Each axis carries a one-dimensional sector operator
//! `𝓗 = −D² − mω(1 + 2μR) + m²ω²x²` whose parity-`s` eigenvalues are
//! `ℰ = 2mω[2n + (1/2 + μ)(1 − s)]`, and `E² − m² = ℰ₁ + ℰ₂ + ℰ₃`.

use serde::{Deserialize, Serialize};

use crate::dunkl::{check_mu, Parity, ParitySector, Smooth1D, WignerParams};
use crate::error::{domain, invalid, Result};
use crate::levels::{bracket_limit, exact_bracket, LevelCounter, LevelMultiset};
use crate::specfun::{laguerre_unchecked, ln_factorial, ln_gamma_positive};

/// Rest mass and oscillator frequency in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    pub m: f64,
    pub omega: f64,
}

impl OscillatorConfig {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(invalid(format!("mass must be finite and > 0, got {m}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(invalid(format!("omega must be finite and > 0, got {omega}")));
        }
        Ok(Self { m, omega })
    }

    pub fn m_omega(&self) -> f64 {
        self.m * self.omega
    }
}

/// Sign of the square root taken for `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Self::Positive => 1.0,
            Self::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub n: [u32; 3],
    pub sector: ParitySector,
    pub params: WignerParams,
    pub config: OscillatorConfig,
}

impl CartesianState {
    pub fn total_n(&self) -> u32 {
        self.n.iter().sum()
    }
}

/// Sector eigenvalue `ℰ = 2mω[2n + (1/2 + μ)(1 − s)]`.
pub fn energy_1d(n: u32, parity: Parity, mu: f64, config: &OscillatorConfig) -> f64 {
    let odd = parity.index() as f64;
    2.0 * config.m_omega() * (2.0 * n as f64 + (1.0 + 2.0 * mu) * odd)
}

/// `±√(ℰ₁ + ℰ₂ + ℰ₃ + m²)`, evaluated as `2mω·B + m²` with the bracket
/// `B = Σ_j [2n_j + (1 + 2μ_j)(1 − s_j)/2]`.
pub fn total_energy_cartesian(state: &CartesianState, branch: Branch) -> f64 {
    let odd = state.sector.odd_count();
    let bracket = (2 * state.total_n() + odd) as f64 + state.sector.dunkl_shift(&state.params);
    let c = &state.config;
    branch.sign() * (2.0 * c.m_omega() * bracket + c.m * c.m).sqrt()
}

/// Normalization of the sector eigenfunction under `|x|^{2μ} dx` on the
/// whole line: `C² = (mω)^{μ+1/2} n! / Γ(n + μ − s/2 + 1)`.
pub fn normalization_1d(n: u32, parity: Parity, mu: f64, config: &OscillatorConfig) -> Result<f64> {
    let alpha = laguerre_order(parity, mu);
    if !(alpha > -1.0) {
        return Err(domain(format!("mu - s/2 must exceed -1, got {alpha}")));
    }
    let ln_c2 = (mu + 0.5) * config.m_omega().ln() + ln_factorial(n)
        - ln_gamma_positive(n as f64 + alpha + 1.0);
    Ok((0.5 * ln_c2).exp())
}

fn laguerre_order(parity: Parity, mu: f64) -> f64 {
    mu - 0.5 * parity.signf()
}

/// A normalized sector eigenfunction
/// `ψ(x) = C q(x) e^{−ξ/2} L_n^{μ−s/2}(ξ)`, `ξ = mωx²`, with `q = 1` for
/// even states and `q = √(mω)·x` for odd ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator1D {
    pub n: u32,
    pub parity: Parity,
    pub mu: f64,
    pub config: OscillatorConfig,
    norm: f64,
}

impl Oscillator1D {
    pub fn new(n: u32, parity: Parity, mu: f64, config: OscillatorConfig) -> Result<Self> {
        check_mu("mu", mu)?;
        let norm = normalization_1d(n, parity, mu, &config)?;
        Ok(Self { n, parity, mu, config, norm })
    }

    pub fn energy(&self) -> f64 {
        energy_1d(self.n, self.parity, self.mu, &self.config)
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// `e^{−ξ/2} L(ξ)` and its first two ξ-derivatives.
    fn radial_parts(&self, xi: f64) -> [f64; 3] {
        let alpha = laguerre_order(self.parity, self.mu);
        let n = self.n;
        let l0 = laguerre_unchecked(n, alpha, xi);
        let l1 = if n >= 1 { -laguerre_unchecked(n - 1, alpha + 1.0, xi) } else { 0.0 };
        let l2 = if n >= 2 { laguerre_unchecked(n - 2, alpha + 2.0, xi) } else { 0.0 };
        let e = (-0.5 * xi).exp();
        [e * l0, e * (l1 - 0.5 * l0), e * (l2 - l1 + 0.25 * l0)]
    }
}

impl Smooth1D for Oscillator1D {
    /// Orders above two are not provided and return NaN.
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let mw = self.config.m_omega();
        let xi = mw * x * x;
        let [y0, y1, y2] = self.radial_parts(xi);
        let dxi = 2.0 * mw * x;
        let (q, dq) = match self.parity {
            Parity::Even => (1.0, 0.0),
            Parity::Odd => (mw.sqrt() * x, mw.sqrt()),
        };
        let v = match order {
            0 => q * y0,
            1 => dq * y0 + q * dxi * y1,
            2 => 2.0 * dq * dxi * y1 + q * (2.0 * mw * y1 + dxi * dxi * y2),
            _ => f64::NAN,
        };
        self.norm * v
    }
}

/// Value of the normalized sector eigenfunction at `x`.
pub fn wavefunction_1d(n: u32, parity: Parity, mu: f64, config: &OscillatorConfig, x: f64) -> Result<f64> {
    Ok(Oscillator1D::new(n, parity, mu, *config)?.value(x))
}

/// Sampled `ψ`, `|ψ|²` and `|ψ|²|x|^{2μ}` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub density_bare: Vec<f64>,
    pub density_weighted: Vec<f64>,
}

impl DensityProfile {
    /// Trapezoid integral of the measure-weighted density over the grid.
    pub fn weighted_integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density_weighted.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum()
    }
}

pub fn density_profile(
    n: u32,
    parity: Parity,
    mu: f64,
    config: &OscillatorConfig,
    grid: &[f64],
) -> Result<DensityProfile> {
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(invalid("density grid must be finite"));
    }
    let state = Oscillator1D::new(n, parity, mu, *config)?;
    let psi: Vec<f64> = grid.iter().map(|&x| state.value(x)).collect();
    let density_bare: Vec<f64> = psi.iter().map(|p| p * p).collect();
    let density_weighted = grid
        .iter()
        .zip(&density_bare)
        .map(|(&x, &d)| if x == 0.0 && mu > 0.0 { 0.0 } else { d * x.abs().powf(2.0 * mu) })
        .collect();
    Ok(DensityProfile { grid: grid.to_vec(), psi, density_bare, density_weighted })
}

/// Uniform grid of `npts` points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, npts: usize) -> Vec<f64> {
    match npts {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (npts - 1) as f64;
            let step = (hi - lo) / last;
            (0..npts)
                .map(|i| (lo * (last - i as f64) + hi * i as f64) / last)
                .map(|x| if x.abs() < 1e-15 * step { 0.0 } else { x })
                .collect()
        }
    }
}

/// Every Cartesian state `(n₁,n₂,n₃,s₁,s₂,s₃)` with `E² ≤ cutoff`, grouped
/// into levels.
pub fn enumerate_cartesian_levels(
    params: &WignerParams,
    config: &OscillatorConfig,
    e2_cutoff: f64,
) -> Result<LevelMultiset> {
    let two_mw = 2.0 * config.m_omega();
    let limit = bracket_limit(e2_cutoff, config.m, two_mw)?;
    let mut counter = LevelCounter::default();
    for sector in ParitySector::all() {
        let base = sector.odd_count() as u64;
        if exact_bracket(base, &sector, params) > limit {
            continue;
        }
        let mut total = 0u64;
        loop {
            let bracket = exact_bracket(2 * total + base, &sector, params);
            if bracket > limit {
                break;
            }
            for n1 in 0..=total {
                for n2 in 0..=total - n1 {
                    let _n3 = total - n1 - n2;
                    counter.add(bracket.clone());
                }
            }
            total += 1;
        }
    }
    Ok(counter.finish(config.m, two_mw))
}

/// All Cartesian states with `n₁ + n₂ + n₃ ≤ n_max` in the given sectors,
/// ordered by `(n₁, n₂, n₃)` then sector.
pub fn cartesian_states(
    params: &WignerParams,
    config: &OscillatorConfig,
    n_max: u32,
    sectors: &[ParitySector],
) -> Vec<CartesianState> {
    let mut out = Vec::new();
    for n1 in 0..=n_max {
        for n2 in 0..=n_max - n1 {
            for n3 in 0..=n_max - n1 - n2 {
                for &sector in sectors {
                    out.push(CartesianState { n: [n1, n2, n3], sector, params: *params, config: *config });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl::{dunkl_inner_product, dunkl_square_apply, MeasureQuadrature};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cfg(m: f64, w: f64) -> OscillatorConfig {
        OscillatorConfig::new(m, w).unwrap()
    }

    #[test]
    fn sector_energies() {
        assert_eq!(energy_1d(0, Parity::Even, 0.9, &cfg(0.5, 1.0)), 0.0);
        assert_relative_eq!(energy_1d(0, Parity::Odd, 0.5, &cfg(0.5, 1.0)), 2.0);
        assert_relative_eq!(energy_1d(1, Parity::Odd, 0.0, &cfg(1.0, 1.0)), 6.0);
    }

    #[test]
    fn energy_monotonicity() {
        let c = cfg(0.7, 1.3);
        for n in 0..10 {
            for p in [Parity::Even, Parity::Odd] {
                assert!(energy_1d(n + 1, p, 0.4, &c) > energy_1d(n, p, 0.4, &c));
            }
            assert!(energy_1d(n, Parity::Odd, 0.6, &c) > energy_1d(n, Parity::Odd, 0.5, &c));
            assert_eq!(energy_1d(n, Parity::Even, 0.6, &c), energy_1d(n, Parity::Even, 0.1, &c));
        }
    }

    #[test]
    fn total_energy_examples() {
        let c = cfg(0.5, 1.0);
        let ground = CartesianState { n: [0; 3], sector: ParitySector::even(), params: WignerParams::isotropic(0.7).unwrap(), config: c };
        assert_relative_eq!(total_energy_cartesian(&ground, Branch::Positive), 0.5);
        assert_relative_eq!(total_energy_cartesian(&ground, Branch::Negative), -0.5);
        let odd = CartesianState { sector: ParitySector::parse("---").unwrap(), params: WignerParams::isotropic(0.5).unwrap(), ..ground };
        assert_relative_eq!(total_energy_cartesian(&odd, Branch::Positive), 2.5, max_relative = 1e-15);
    }

    #[test]
    fn undeformed_reduction_is_exact() {
        let c = cfg(1.3, 0.8);
        for sector in ParitySector::all() {
            for n in [[0, 0, 0], [1, 2, 0], [3, 1, 4]] {
                let st = CartesianState { n, sector, params: WignerParams::undeformed(), config: c };
                let tot: u32 = n.iter().sum();
                let odd: f64 = sector.as_array().iter().map(|p| (1 - p.sign()) as f64 / 2.0).sum();
                let want = (2.0 * c.m * c.omega * (2.0 * tot as f64 + odd) + c.m * c.m).sqrt();
                assert_eq!(total_energy_cartesian(&st, Branch::Positive), want);
            }
        }
    }

    #[test]
    fn energy_decomposition() {
        let c = cfg(0.9, 1.7);
        let p = WignerParams::new(0.2, 0.9, 1.4).unwrap();
        for sector in ParitySector::all() {
            let st = CartesianState { n: [2, 0, 5], sector, params: p, config: c };
            let e = total_energy_cartesian(&st, Branch::Positive);
            let s = sector.as_array();
            let sum = energy_1d(2, s[0], 0.2, &c) + energy_1d(0, s[1], 0.9, &c) + energy_1d(5, s[2], 1.4, &c);
            assert!((e * e - c.m * c.m - sum).abs() <= 1e-13 * sum.max(1.0));
        }
    }

    #[test]
    fn normalization_closed_form() {
        // mω = 1/2, μ = 0: ψ₀ = C e^{−x²/4} with ∫ e^{−x²/2} = √(2π)
        let c = normalization_1d(0, Parity::Even, 0.0, &cfg(0.5, 1.0)).unwrap();
        assert_relative_eq!(c, (2.0 * PI).powf(-0.25), max_relative = 1e-14);
        // odd ground state, μ = 1/2, mω = 1/2: C² ∫ mω x² e^{−mωx²} |x| dx = 1 ⇒ C² = 1/2
        let c = normalization_1d(0, Parity::Odd, 0.5, &cfg(0.5, 1.0)).unwrap();
        assert_relative_eq!(c, 0.5f64.sqrt(), max_relative = 1e-14);
        assert!(normalization_1d(0, Parity::Even, 0.4, &cfg(1.0, 1.0)).unwrap() > 0.0);
    }

    #[test]
    fn normalization_matches_quadrature() {
        for &(n, parity, mu, m, w) in &[
            (2, Parity::Odd, 0.5, 0.5, 1.0),
            (1, Parity::Even, 0.5, 0.5, 1.0),
            (0, Parity::Odd, 0.5, 0.5, 1.0),
            (4, Parity::Even, 1.5, 2.0, 0.3),
            (3, Parity::Odd, 0.25, 1.0, 1.0),
        ] {
            let st = Oscillator1D::new(n, parity, mu, cfg(m, w)).unwrap();
            let norm = dunkl_inner_product(|x| st.value(x), |x| st.value(x), mu, MeasureQuadrature::laguerre(24, m * w)).unwrap();
            assert_relative_eq!(norm, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn parity_is_exact() {
        let c = cfg(0.5, 1.0);
        for n in 0..6 {
            for p in [Parity::Even, Parity::Odd] {
                let st = Oscillator1D::new(n, p, 0.5, c).unwrap();
                for &x in &[0.1, 0.77, 2.5, 4.1] {
                    assert_eq!(st.value(-x), p.signf() * st.value(x));
                }
            }
        }
        assert_eq!(wavefunction_1d(3, Parity::Odd, 0.5, &c, 0.0).unwrap(), 0.0);
        assert!(wavefunction_1d(0, Parity::Even, 0.5, &c, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let st = Oscillator1D::new(3, Parity::Odd, 0.8, cfg(0.6, 1.5)).unwrap();
        let h = 1e-4;
        for &x in &[-1.2, 0.3, 1.9] {
            let d1 = (st.value(x + h) - st.value(x - h)) / (2.0 * h);
            let d2 = (st.value(x + h) - 2.0 * st.value(x) + st.value(x - h)) / (h * h);
            assert!((d1 - st.derivative(x, 1)).abs() < 1e-6);
            assert!((d2 - st.derivative(x, 2)).abs() < 1e-4);
        }
    }

    #[test]
    fn sector_equation_residual() {
        // −D²ψ − mω(1 + 2μR)ψ + m²ω²x²ψ = ℰψ
        let c = cfg(0.5, 1.0);
        for &mu in &[0.0, 0.25, 0.5, 1.5] {
            for p in [Parity::Even, Parity::Odd] {
                for n in 0..6 {
                    let st = Oscillator1D::new(n, p, mu, c).unwrap();
                    let mw = c.m_omega();
                    for i in 0..50 {
                        let x = 0.1 + 4.9 * i as f64 / 49.0;
                        let lhs = -dunkl_square_apply(&st, mu, x).unwrap()
                            - mw * (st.value(x) + 2.0 * mu * st.value(-x))
                            + mw * mw * x * x * st.value(x);
                        let r = lhs - st.energy() * st.value(x);
                        assert!(r.abs() < 1e-8 * (1.0 + st.energy()), "mu={mu} n={n} x={x}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn density_profiles() {
        let c = cfg(0.5, 1.0);
        let grid = uniform_grid(-5.0, 5.0, 1001);
        assert_eq!(grid[500], 0.0);
        for n in 0..3 {
            let odd = density_profile(n, Parity::Odd, 0.5, &c, &grid).unwrap();
            assert_eq!(odd.density_bare[500], 0.0);
            assert_eq!(odd.density_weighted[500], 0.0);
            let even = density_profile(n, Parity::Even, 0.5, &c, &grid).unwrap();
            assert_eq!(even.density_weighted[500], 0.0);
            assert!(even.density_bare.iter().chain(&even.density_weighted).all(|&d| d >= 0.0));
        }
        let ground = density_profile(0, Parity::Even, 0.5, &c, &grid).unwrap();
        let (imax, _) = ground.density_bare.iter().enumerate().fold((0, f64::MIN), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        assert_eq!(imax, 500);
    }

    #[test]
    fn level_enumeration() {
        let p = WignerParams::isotropic(0.5).unwrap();
        let c = cfg(0.5, 1.0);
        let just_above = enumerate_cartesian_levels(&p, &c, 0.25 + 1e-6).unwrap();
        assert_eq!(just_above.levels.len(), 1);
        assert_eq!(just_above.levels[0].degeneracy, 1);
        assert!(enumerate_cartesian_levels(&p, &c, 0.2).is_err());

        let levels = enumerate_cartesian_levels(&WignerParams::undeformed(), &cfg(1.0, 1.0), 1.0 + 2.0 * 3.0).unwrap();
        let degs: Vec<usize> = levels.levels.iter().map(|l| l.degeneracy).collect();
        assert_eq!(degs, vec![1, 3, 6, 10]);

        let levels = enumerate_cartesian_levels(&p, &c, 6.25).unwrap();
        let top = levels.levels.last().unwrap();
        assert_eq!(top.e_squared, 6.25);
        // brute force over a box of quantum numbers
        let mut want = 0;
        for sector in ParitySector::all() {
            for n1 in 0..8u32 {
                for n2 in 0..8u32 {
                    for n3 in 0..8u32 {
                        let st = CartesianState { n: [n1, n2, n3], sector, params: p, config: c };
                        let e = total_energy_cartesian(&st, Branch::Positive);
                        if (e * e - 6.25).abs() < 1e-9 {
                            want += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(top.degeneracy, want);
    }

    #[test]
    fn state_listing_order() {
        let p = WignerParams::isotropic(0.5).unwrap();
        let states = cartesian_states(&p, &cfg(0.5, 1.0), 1, &ParitySector::all());
        assert_eq!(states.len(), 32);
        assert_eq!(states[0].n, [0, 0, 0]);
        assert_eq!(states[0].sector, ParitySector::even());
        assert_relative_eq!(total_energy_cartesian(&states[0], Branch::Positive), 0.5);
    }
}
