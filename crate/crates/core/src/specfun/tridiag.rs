//! Symmetric tridiagonal eigenvalue problems.
//!
//! Two solvers live here: implicit-shift QL for the full spectrum (optionally
//! tracking the first component of every eigenvector, which is all that
//! Golub–Welsch needs), and Sturm-sequence bisection for the lowest few
//! eigenvalues of large discretized operators.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(domain("tridiagonal matrix must have n >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(domain(format!(
                "off-diagonal length {} does not match n - 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(domain("tridiagonal matrix entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.offdiag[i - 1] * self.offdiag[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// First component of each normalized eigenvector, aligned with `values`.
    pub first_components: Option<Vec<f64>>,
}

const MAX_QL_SWEEPS: usize = 60;

/// All eigenvalues of `t` by implicit-shift QL.
pub fn symmetric_tridiagonal_eigen(
    t: &TridiagonalMatrix,
    want_first_components: bool,
) -> Result<TridiagonalEigen> {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::Numeric(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_first_components {
                    let zf = z[i + 1];
                    z[i + 1] = s * z[i] + c * zf;
                    z[i] = c * z[i] - s * zf;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let first_components = want_first_components.then(|| order.iter().map(|&i| z[i]).collect());
    Ok(TridiagonalEigen { values, first_components })
}

/// The `k` smallest eigenvalues by Sturm bisection, ascending.
pub fn lowest_eigenvalues(t: &TridiagonalMatrix, k: usize) -> Result<Vec<f64>> {
    if k > t.len() {
        return Err(domain(format!("requested {k} eigenvalues of a {}x{} matrix", t.len(), t.len())));
    }
    let (glo, ghi) = t.gershgorin_bounds();
    let pad = (ghi - glo).abs().max(1.0) * 1e-12;
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        // smallest x with count_below(x) > j brackets λ_j
        let mut lo = out.last().copied().unwrap_or(glo).max(glo);
        let mut hi = ghi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if t.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn one_by_one() {
        let t = TridiagonalMatrix::new(vec![3.0], vec![]).unwrap();
        let eig = symmetric_tridiagonal_eigen(&t, true).unwrap();
        assert_eq!(eig.values, vec![3.0]);
        assert_eq!(eig.first_components.unwrap(), vec![1.0]);
    }

    #[test]
    fn two_by_two() {
        let t = TridiagonalMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let eig = symmetric_tridiagonal_eigen(&t, true).unwrap();
        assert_relative_eq!(eig.values[0], -1.0, max_relative = 1e-15);
        assert_relative_eq!(eig.values[1], 1.0, max_relative = 1e-15);
        for c in eig.first_components.unwrap() {
            assert_relative_eq!(c * c, 0.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn three_by_three_characteristic_polynomial() {
        // det(λ - T) = λ³ - 6λ² + 9λ - 2 = (λ - 2)(λ² - 4λ + 1)
        let t = TridiagonalMatrix::new(vec![1.0, 2.0, 3.0], vec![1.0, 1.0]).unwrap();
        let eig = symmetric_tridiagonal_eigen(&t, false).unwrap();
        let roots = [2.0 - 3f64.sqrt(), 2.0, 2.0 + 3f64.sqrt()];
        for (got, want) in eig.values.iter().zip(roots) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
            let p = got.powi(3) - 6.0 * got.powi(2) + 9.0 * got - 2.0;
            assert!(p.abs() < 1e-12);
        }
        let bis = lowest_eigenvalues(&t, 3).unwrap();
        for (a, b) in bis.iter().zip(&eig.values) {
            assert_relative_eq!(*a, *b, max_relative = 1e-13);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TridiagonalMatrix::new(vec![], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        let t = TridiagonalMatrix::new(vec![1.0], vec![]).unwrap();
        assert!(lowest_eigenvalues(&t, 2).is_err());
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // -u'' with Dirichlet ends: 2 - 2cos(kπ/(n+1))
        let n = 200;
        let t = TridiagonalMatrix::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let eig = symmetric_tridiagonal_eigen(&t, false).unwrap();
        let bis = lowest_eigenvalues(&t, 5).unwrap();
        for k in 0..n {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((eig.values[k] - want).abs() < 1e-13);
            if k < 5 {
                assert_relative_eq!(bis[k], want, max_relative = 1e-11);
            }
        }
    }

    proptest! {
        #[test]
        fn trace_and_count_consistency(
            diag in proptest::collection::vec(-5.0f64..5.0, 1..30),
            seed in proptest::collection::vec(-2.0f64..2.0, 30),
        ) {
            let n = diag.len();
            let off: Vec<f64> = seed[..n - 1].to_vec();
            let t = TridiagonalMatrix::new(diag.clone(), off.clone()).unwrap();
            let eig = symmetric_tridiagonal_eigen(&t, true).unwrap();
            let trace: f64 = diag.iter().sum();
            let sum: f64 = eig.values.iter().sum();
            prop_assert!((trace - sum).abs() < 1e-11 * (1.0 + trace.abs()));
            let frob: f64 = diag.iter().map(|d| d * d).sum::<f64>() + 2.0 * off.iter().map(|e| e * e).sum::<f64>();
            let sq: f64 = eig.values.iter().map(|v| v * v).sum();
            prop_assert!((frob - sq).abs() < 1e-10 * (1.0 + frob));
            let comps = eig.first_components.unwrap();
            let norm: f64 = comps.iter().map(|c| c * c).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            // (T)_00 = Σ λ_i z_i²
            let t00: f64 = eig.values.iter().zip(&comps).map(|(l, c)| l * c * c).sum();
            prop_assert!((t00 - diag[0]).abs() < 1e-11 * (1.0 + diag[0].abs()));
            prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let bis = lowest_eigenvalues(&t, n.min(4)).unwrap();
            for (a, b) in bis.iter().zip(&eig.values) {
                prop_assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()));
            }
        }
    }
}
