//! The one-dimensional Dunkl derivative `D = d/dx + (μ/x)(1 − R)`, the
//! reflection `R f(x) = f(−x)`, and inner products under the Dunkl measure
//! `|x|^{2μ} dx`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::gauss_laguerre;

/// Upper sanity bound on a Wigner parameter.
pub const MU_MAX: f64 = 100.0;

/// Deformation strengths `(μ₁, μ₂, μ₃)`; zero is the undeformed limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerParams {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

impl WignerParams {
    pub fn new(mu1: f64, mu2: f64, mu3: f64) -> Result<Self> {
        for (name, mu) in [("mu1", mu1), ("mu2", mu2), ("mu3", mu3)] {
            check_mu(name, mu)?;
        }
        Ok(Self { mu1, mu2, mu3 })
    }

    pub fn isotropic(mu: f64) -> Result<Self> {
        Self::new(mu, mu, mu)
    }

    pub fn undeformed() -> Self {
        Self { mu1: 0.0, mu2: 0.0, mu3: 0.0 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.mu1, self.mu2, self.mu3]
    }

    pub fn sum(&self) -> f64 {
        self.mu1 + self.mu2 + self.mu3
    }
}

pub(crate) fn check_mu(name: &str, mu: f64) -> Result<()> {
    if mu.is_finite() && (0.0..MU_MAX).contains(&mu) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, {MU_MAX}), got {mu}")))
    }
}

/// Eigenvalue of a reflection operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Self::Even),
            -1 => Ok(Self::Odd),
            _ => Err(invalid(format!("parity must be +1 or -1, got {s}"))),
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Self::Even => 1,
            Self::Odd => -1,
        }
    }

    pub fn signf(self) -> f64 {
        self.sign() as f64
    }

    /// `(1 − s)/2`: 0 for even, 1 for odd.
    pub fn index(self) -> u32 {
        match self {
            Self::Even => 0,
            Self::Odd => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Even => '+',
            Self::Odd => '-',
        }
    }
}

/// Reflection eigenvalues `(s₁, s₂, s₃)` selecting a symmetry sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParitySector {
    pub s1: Parity,
    pub s2: Parity,
    pub s3: Parity,
}

impl ParitySector {
    pub fn new(s1: Parity, s2: Parity, s3: Parity) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn from_signs(s1: i32, s2: i32, s3: i32) -> Result<Self> {
        Ok(Self::new(Parity::from_sign(s1)?, Parity::from_sign(s2)?, Parity::from_sign(s3)?))
    }

    pub fn even() -> Self {
        Self::new(Parity::Even, Parity::Even, Parity::Even)
    }

    /// All eight sectors, `(+,+,+)` first, then lexicographic with `+ < −`.
    pub fn all() -> [Self; 8] {
        let p = [Parity::Even, Parity::Odd];
        let mut out = [Self::even(); 8];
        let mut i = 0;
        for &a in &p {
            for &b in &p {
                for &c in &p {
                    out[i] = Self::new(a, b, c);
                    i += 1;
                }
            }
        }
        out
    }

    pub fn as_array(&self) -> [Parity; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn signs(&self) -> [i32; 3] {
        [self.s1.sign(), self.s2.sign(), self.s3.sign()]
    }

    /// Three-character label such as `+-+`.
    pub fn label(&self) -> String {
        self.as_array().iter().map(|p| p.symbol()).collect()
    }

    pub fn parse(label: &str) -> Result<Self> {
        let chars: Vec<char> = label.trim().chars().collect();
        if chars.len() != 3 {
            return Err(invalid(format!("sector label must have three signs, got {label:?}")));
        }
        let mut signs = [Parity::Even; 3];
        for (slot, c) in signs.iter_mut().zip(&chars) {
            *slot = match c {
                '+' => Parity::Even,
                '-' => Parity::Odd,
                _ => return Err(invalid(format!("bad sign {c:?} in sector label {label:?}"))),
            };
        }
        Ok(Self::new(signs[0], signs[1], signs[2]))
    }

    /// `Σ_j μ_j (1 − s_j)`.
    pub fn dunkl_shift(&self, params: &WignerParams) -> f64 {
        self.as_array()
            .iter()
            .zip(params.as_array())
            .map(|(p, mu)| 2.0 * mu * p.index() as f64)
            .sum()
    }

    pub fn odd_count(&self) -> u32 {
        self.as_array().iter().map(|p| p.index()).sum()
    }
}

/// A real function of one variable with derivatives of any order available
/// on the whole line.
pub trait Smooth1D {
    fn derivative(&self, x: f64, order: u32) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
}

impl<T: Smooth1D + ?Sized> Smooth1D for &T {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        (**self).derivative(x, order)
    }
}

/// Dense polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl Smooth1D for Polynomial {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let k = order as usize;
        let mut acc = 0.0;
        for (d, &c) in self.coeffs.iter().enumerate().skip(k).rev() {
            let falling: f64 = (d + 1 - k..=d).map(|v| v as f64).product();
            acc = acc * x + c * falling;
        }
        acc
    }
}

/// `x ↦ f(−x)`.
#[derive(Debug, Clone)]
pub struct Reflected<F>(pub F);

impl<F: Smooth1D> Smooth1D for Reflected<F> {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.0.derivative(-x, order)
    }
}

/// Pointwise product `f·g`.
#[derive(Debug, Clone)]
pub struct Product<F, G>(pub F, pub G);

impl<F: Smooth1D, G: Smooth1D> Smooth1D for Product<F, G> {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for j in 0..=order {
            acc += binom * self.0.derivative(x, j) * self.1.derivative(x, order - j);
            binom = binom * (order - j) as f64 / (j + 1) as f64;
        }
        acc
    }
}

/// `x ↦ (D f)(x)` as a smooth function in its own right, so that `D` can be
/// composed with itself.
#[derive(Debug, Clone)]
pub struct DunklImage<F> {
    pub f: F,
    pub mu: f64,
}

impl<F: Smooth1D> Smooth1D for DunklImage<F> {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let f = &self.f;
        if x == 0.0 {
            // (f(x) − f(−x))/x is the odd part's divided difference; its
            // k-th derivative at 0 is 2 f^{(k+1)}(0)/(k+1) for even k, 0 otherwise
            let odd_part = if order.is_multiple_of(2) {
                2.0 * f.derivative(0.0, order + 1) / (order + 1) as f64
            } else {
                0.0
            };
            return f.derivative(0.0, order + 1) + self.mu * odd_part;
        }
        // d^k [g(x)/x] = Σ_j C(k,j) g^{(k−j)}(x) (−1)^j j! / x^{j+1}, g(x) = f(x) − f(−x)
        let mut sum = 0.0;
        let mut binom = 1.0;
        let mut fact = 1.0;
        for j in 0..=order {
            let i = order - j;
            let g_i = f.derivative(x, i) - if i.is_multiple_of(2) { 1.0 } else { -1.0 } * f.derivative(-x, i);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += binom * g_i * sign * fact / x.powi(j as i32 + 1);
            binom = binom * (order - j) as f64 / (j + 1) as f64;
            fact *= (j + 1) as f64;
        }
        f.derivative(x, order + 1) + self.mu * sum
    }
}

/// `x ↦ f(−x)` for a plain evaluator.
pub fn reflect<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> f64 {
    move |x| f(-x)
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric(format!("{what} produced a non-finite value")))
    }
}

/// `(D f)(x) = f′(x) + (μ/x)(f(x) − f(−x))`; at `x = 0` the reflection term
/// is replaced by its limit `2μ f′(0)`.
pub fn dunkl_apply<F: Smooth1D>(f: &F, mu: f64, x: f64) -> Result<f64> {
    check_mu("mu", mu)?;
    let v = if x == 0.0 {
        (1.0 + 2.0 * mu) * f.derivative(0.0, 1)
    } else {
        f.derivative(x, 1) + mu / x * (f.value(x) - f.value(-x))
    };
    finite(v, "dunkl_apply")
}

/// `(D² f)(x) = f″(x) + (2μ/x) f′(x) − (μ/x²)(f(x) − f(−x))`, with the
/// limit `(1 + 2μ) f″(0)` at the origin.
pub fn dunkl_square_apply<F: Smooth1D>(f: &F, mu: f64, x: f64) -> Result<f64> {
    check_mu("mu", mu)?;
    let v = if x == 0.0 {
        (1.0 + 2.0 * mu) * f.derivative(0.0, 2)
    } else {
        f.derivative(x, 2) + 2.0 * mu / x * f.derivative(x, 1)
            - mu / (x * x) * (f.value(x) - f.value(-x))
    };
    finite(v, "dunkl_square_apply")
}

/// How to evaluate `∫_ℝ f(x) g(x) |x|^{2μ} dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeasureQuadrature {
    /// Fold onto the half line, substitute `t = scale·x²` and apply
    /// Gauss–Laguerre with weight `t^{μ−1/2} e^{−t}`. Exact when
    /// `f g e^{scale·x²}` is a polynomial in `x²` of degree `< npts`.
    GaussLaguerre { npts: usize, scale: f64 },
    /// Trapezoid rule on `[0, x_max]`, halving the step until successive
    /// estimates change by less than `tol` (relative to `max(1, |I|)`).
    Trapezoid { x_max: f64, tol: f64 },
}

impl MeasureQuadrature {
    pub fn laguerre(npts: usize, scale: f64) -> Self {
        Self::GaussLaguerre { npts, scale }
    }
}

const MAX_TRAPEZOID_HALVINGS: u32 = 16;

/// `⟨f|g⟩ = ∫ g(x) f(x) |x|^{2μ} dx` over the real line.
pub fn dunkl_inner_product<F, G>(f: F, g: G, mu: f64, method: MeasureQuadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    check_mu("mu", mu)?;
    // parity fold onto (0, ∞)
    let folded = |x: f64| f(x) * g(x) + f(-x) * g(-x);
    match method {
        MeasureQuadrature::GaussLaguerre { npts, scale } => {
            if !(scale > 0.0) {
                return Err(domain(format!("quadrature scale must be > 0, got {scale}")));
            }
            let estimate = |n: usize| -> Result<f64> {
                let rule = gauss_laguerre(mu - 0.5, n)?;
                let sum = rule.integrate(|t| (t.exp()) * folded((t / scale).sqrt()));
                Ok(0.5 * scale.powf(-mu - 0.5) * sum)
            };
            let coarse = estimate(npts)?;
            let fine = estimate(npts + npts / 2 + 1)?;
            if !fine.is_finite() || (fine - coarse).abs() > 1e-8 * fine.abs().max(1.0) {
                return Err(Error::Numeric(format!(
                    "weighted integral not converged under node refinement ({coarse} vs {fine})"
                )));
            }
            Ok(fine)
        }
        MeasureQuadrature::Trapezoid { x_max, tol } => {
            trapezoid_half_line(|x| folded(x) * x.powf(2.0 * mu), x_max, tol)
        }
    }
}

fn trapezoid_half_line<H: Fn(f64) -> f64>(h: H, x_max: f64, tol: f64) -> Result<f64> {
    if !(x_max > 0.0) {
        return Err(domain(format!("x_max must be > 0, got {x_max}")));
    }
    let mut n = 64usize;
    let mut step = x_max / n as f64;
    let mut sum = 0.5 * (h(0.0) + h(x_max)) + (1..n).map(|i| h(i as f64 * step)).sum::<f64>();
    let mut prev = sum * step;
    for _ in 0..MAX_TRAPEZOID_HALVINGS {
        // new midpoints only
        sum += (0..n).map(|i| h((i as f64 + 0.5) * step)).sum::<f64>();
        n *= 2;
        step *= 0.5;
        let cur = sum * step;
        if !cur.is_finite() {
            break;
        }
        if (cur - prev).abs() < tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric("trapezoid estimate did not converge under step halving".into()))
}

/// `⟨ψ|O|ψ⟩ = ∫ ψ(x) (Oψ)(x) |x|^{2μ} dx`; `op(ψ, x)` returns `(Oψ)(x)`.
pub fn expectation_value<P, O>(psi: P, op: O, mu: f64, method: MeasureQuadrature) -> Result<f64>
where
    P: Fn(f64) -> f64,
    O: Fn(&dyn Fn(f64) -> f64, f64) -> f64,
{
    let applied = |x: f64| op(&psi, x);
    dunkl_inner_product(applied, &psi, mu, method)
}

/// Ready-made observables for [`expectation_value`].
pub mod observables {
    pub fn identity(psi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        psi(x)
    }

    pub fn parity(psi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        psi(-x)
    }

    pub fn position_squared(psi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        x * x * psi(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Exact action on coefficients: D x^k = (k + 2μ[k odd]) x^{k−1}.
    fn dunkl_symbolic(p: &Polynomial, mu: f64) -> Polynomial {
        let c = p.coeffs();
        if c.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            (1..c.len())
                .map(|k| c[k] * (k as f64 + if k % 2 == 1 { 2.0 * mu } else { 0.0 }))
                .collect(),
        )
    }

    fn battery() -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = (0..=8).map(Polynomial::monomial).collect();
        out.push(Polynomial::new(vec![0.3, -1.2, 0.5, 2.0, -0.7, 0.1, 0.25, -0.05, 0.01]));
        out.push(Polynomial::new(vec![0.0, 1.0, 1.0, 1.0]));
        out
    }

    const MUS: [f64; 3] = [0.0, 0.3, 1.2];
    const XS: [f64; 6] = [-2.3, -0.7, -0.1, 0.25, 1.0, 1.9];

    #[test]
    fn reflection_examples() {
        let sq = reflect(|x: f64| x * x);
        let cube = reflect(|x: f64| x.powi(3));
        for &x in &XS {
            assert_eq!(sq(x), x * x);
            assert_eq!(cube(x), -x.powi(3));
            let twice = reflect(reflect(|x: f64| x.exp()));
            assert_eq!(twice(x), x.exp());
        }
    }

    #[test]
    fn dunkl_examples() {
        let x1 = Polynomial::monomial(1);
        for &mu in &MUS {
            for &x in &XS {
                assert_relative_eq!(dunkl_apply(&x1, mu, x).unwrap(), 1.0 + 2.0 * mu, max_relative = 1e-14);
            }
        }
        let even = Polynomial::new(vec![1.0, 0.0, -2.0, 0.0, 0.5]);
        for &x in &XS {
            assert_relative_eq!(dunkl_apply(&even, 0.8, x).unwrap(), even.derivative(x, 1), max_relative = 1e-13);
        }
        let x3 = Polynomial::monomial(3);
        assert_relative_eq!(dunkl_apply(&x3, 0.5, 2.0).unwrap(), 16.0, max_relative = 1e-15);
    }

    #[test]
    fn dunkl_square_examples() {
        let x2 = Polynomial::monomial(2);
        for &mu in &MUS {
            for &x in &XS {
                assert_relative_eq!(dunkl_square_apply(&x2, mu, x).unwrap(), 2.0 + 4.0 * mu, max_relative = 1e-14);
            }
        }
        let even = Polynomial::new(vec![1.0, 0.0, -2.0, 0.0, 0.5]);
        for &x in &XS {
            let want = even.derivative(x, 2) + 1.4 / x * even.derivative(x, 1);
            assert_relative_eq!(dunkl_square_apply(&even, 0.7, x).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn square_equals_composition() {
        let f = Polynomial::new(vec![0.0, 0.0, 1.0, 1.0]);
        let mu = 0.7;
        let dd_symbolic = dunkl_symbolic(&dunkl_symbolic(&f, mu), mu);
        let image = DunklImage { f: f.clone(), mu };
        for &x in &[0.5, 1.3] {
            let square = dunkl_square_apply(&f, mu, x).unwrap();
            let composed = dunkl_apply(&image, mu, x).unwrap();
            assert!((square - dd_symbolic.value(x)).abs() < 1e-9);
            assert!((composed - dd_symbolic.value(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn pointwise_matches_symbolic() {
        for p in battery() {
            for &mu in &MUS {
                let sym = dunkl_symbolic(&p, mu);
                for &x in XS.iter().chain(&[0.0]) {
                    let got = dunkl_apply(&p, mu, x).unwrap();
                    assert!((got - sym.value(x)).abs() < 1e-9 * (1.0 + sym.value(x).abs()));
                }
                let sym2 = dunkl_symbolic(&sym, mu);
                for &x in XS.iter().chain(&[0.0]) {
                    let got = dunkl_square_apply(&p, mu, x).unwrap();
                    assert!((got - sym2.value(x)).abs() < 1e-9 * (1.0 + sym2.value(x).abs()));
                }
            }
        }
    }

    #[test]
    fn image_derivatives_match_symbolic() {
        for p in battery() {
            let sym = dunkl_symbolic(&p, 0.3);
            let image = DunklImage { f: p.clone(), mu: 0.3 };
            for &x in XS.iter().chain(&[0.0]) {
                for k in 0..3 {
                    let want = sym.derivative(x, k);
                    assert!((image.derivative(x, k) - want).abs() < 1e-8 * (1.0 + want.abs()), "k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn commutator_with_position() {
        // [D, x] f = f + 2μ R f
        for p in battery() {
            for &mu in &MUS {
                let xf = Product(Polynomial::monomial(1), p.clone());
                for &x in &XS {
                    let lhs = dunkl_apply(&xf, mu, x).unwrap() - x * dunkl_apply(&p, mu, x).unwrap();
                    let rhs = p.value(x) + 2.0 * mu * p.value(-x);
                    assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
                }
            }
        }
    }

    #[test]
    fn reflection_anticommutes() {
        for p in battery() {
            for &mu in &MUS {
                let rp = Reflected(p.clone());
                for &x in &XS {
                    let r_d = dunkl_apply(&p, mu, -x).unwrap();
                    let d_r = dunkl_apply(&rp, mu, x).unwrap();
                    assert!((r_d + d_r).abs() < 1e-9 * (1.0 + r_d.abs()));
                }
            }
        }
    }

    #[test]
    fn leibniz_rule() {
        let all = battery();
        for f in &all {
            for g in all.iter().step_by(3) {
                for &mu in &MUS {
                    let fg = Product(f.clone(), g.clone());
                    for &x in &XS {
                        let lhs = dunkl_apply(&fg, mu, x).unwrap();
                        let odd_f = f.value(x) - f.value(-x);
                        let odd_g = g.value(x) - g.value(-x);
                        let rhs = dunkl_apply(f, mu, x).unwrap() * g.value(x)
                            + f.value(x) * dunkl_apply(g, mu, x).unwrap()
                            - mu / x * odd_f * odd_g;
                        assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
                    }
                }
            }
        }
        // ordinary rule when one factor is even
        let even = Polynomial::new(vec![2.0, 0.0, -1.0, 0.0, 0.3]);
        let odd = Polynomial::new(vec![0.0, 1.0, 0.0, 0.4]);
        let prod = Product(even.clone(), odd.clone());
        for &x in &XS {
            let lhs = dunkl_apply(&prod, 0.9, x).unwrap();
            let rhs = dunkl_apply(&even, 0.9, x).unwrap() * odd.value(x)
                + even.value(x) * dunkl_apply(&odd, 0.9, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn partial_dunkl_operators_commute() {
        // p(x, y) = Σ c[a][b] x^a y^b; each partial operator acts on one slice at a time
        let c = [[0.5, -1.0, 0.2, 0.7], [1.1, 0.0, -0.3, 0.4], [0.0, 2.0, 0.6, -0.1], [0.9, -0.5, 0.0, 0.3]];
        let (mux, muy) = (0.3, 1.2);
        for &x in &[0.4, -1.1] {
            for &y in &[0.8, -0.6] {
                // D_x (D_y p): D_y p at fixed y is a polynomial in x with coefficients D_y(row a)
                let dy_rows: Vec<f64> = c
                    .iter()
                    .map(|row| dunkl_apply(&Polynomial::new(row.to_vec()), muy, y).unwrap())
                    .collect();
                let dx_dy = dunkl_apply(&Polynomial::new(dy_rows), mux, x).unwrap();
                let dx_cols: Vec<f64> = (0..4)
                    .map(|b| {
                        let col = Polynomial::new((0..4).map(|a| c[a][b]).collect());
                        dunkl_apply(&col, mux, x).unwrap()
                    })
                    .collect();
                let dy_dx = dunkl_apply(&Polynomial::new(dx_cols), muy, y).unwrap();
                assert!((dx_dy - dy_dx).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_inner_product() {
        let g = |x: f64| (-x * x / 2.0).exp();
        let got = dunkl_inner_product(g, g, 0.5, MeasureQuadrature::laguerre(20, 1.0)).unwrap();
        assert_relative_eq!(got, 1.0, max_relative = 1e-13);
        let trap = dunkl_inner_product(g, g, 0.5, MeasureQuadrature::Trapezoid { x_max: 10.0, tol: 1e-10 }).unwrap();
        assert!((trap - 1.0).abs() < 1e-7);
    }

    #[test]
    fn parity_orthogonality_is_exact() {
        let even = |x: f64| (1.0 + x * x) * (-x * x).exp();
        let odd = |x: f64| x.powi(3) * (-x * x).exp();
        let v = dunkl_inner_product(even, odd, 0.4, MeasureQuadrature::laguerre(16, 2.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn ground_state_expectations() {
        // ψ = C e^{−mω x²/2} with mω = 1/2, μ = 1/2; ⟨x²⟩ = (μ + 1/2)/(mω)
        let (mu, mw) = (0.5, 0.5);
        let norm = dunkl_inner_product(|x: f64| (-mw * x * x / 2.0).exp(), |x: f64| (-mw * x * x / 2.0).exp(), mu, MeasureQuadrature::laguerre(10, mw)).unwrap();
        let c = norm.sqrt().recip();
        let psi = move |x: f64| c * (-mw * x * x / 2.0).exp();
        let method = MeasureQuadrature::laguerre(10, mw);
        assert_relative_eq!(expectation_value(psi, observables::identity, mu, method).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(expectation_value(psi, observables::parity, mu, method).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(expectation_value(psi, observables::position_squared, mu, method).unwrap(), 2.0, max_relative = 1e-12);
        let odd = move |x: f64| x * psi(x);
        let p = expectation_value(odd, observables::parity, mu, method).unwrap();
        let n = expectation_value(odd, observables::identity, mu, method).unwrap();
        assert_relative_eq!(p / n, -1.0, max_relative = 1e-13);
    }

    #[test]
    fn divergent_integrand_is_flagged() {
        let f = |x: f64| 1.0 / (1.0 + x * x).powf(0.5);
        let r = dunkl_inner_product(f, f, 0.5, MeasureQuadrature::Trapezoid { x_max: 1e4, tol: 1e-8 });
        assert!(r.is_err());
        let r = dunkl_inner_product(f, f, 0.5, MeasureQuadrature::laguerre(30, 1.0));
        assert!(r.is_err());
    }

    #[test]
    fn sector_helpers() {
        let all = ParitySector::all();
        assert_eq!(all[0].label(), "+++");
        assert_eq!(all[7].label(), "---");
        assert_eq!(ParitySector::parse("+-+").unwrap().signs(), [1, -1, 1]);
        assert!(ParitySector::parse("+x+").is_err());
        let p = WignerParams::new(0.5, 0.25, 1.0).unwrap();
        assert_relative_eq!(ParitySector::parse("-+-").unwrap().dunkl_shift(&p), 3.0);
        assert!(WignerParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(WignerParams::new(0.0, 100.0, 0.0).is_err());
        assert!(dunkl_apply(&Polynomial::monomial(1), -0.5, 1.0).is_err());
    }
}
