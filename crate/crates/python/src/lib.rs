//! Python bindings. Parity sectors are passed as three-sign labels such as
//! `"+-+"` and single parities as `+1` / `-1`.

use dunkl_kg::cartesian::{self, Branch, CartesianState};
use dunkl_kg::coulomb::{self, CoulombState};
use dunkl_kg::dunkl::{Parity, ParitySector};
use dunkl_kg::levels::LevelMultiset;
use dunkl_kg::oracle::{self, VerificationReport, VerifyOptions};
use dunkl_kg::spherical::{self, SphericalQuantum};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: dunkl_kg::Error) -> PyErr {
    match e {
        dunkl_kg::Error::Numeric(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for dunkl_kg::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn parity(s: i32) -> PyResult<Parity> {
    Parity::from_sign(s).py()
}

fn sector(label: &str) -> PyResult<ParitySector> {
    ParitySector::parse(label).py()
}

fn branch(negative: bool) -> Branch {
    if negative {
        Branch::Negative
    } else {
        Branch::Positive
    }
}

#[pyclass(name = "WignerParams", module = "dunkl_kg", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyWignerParams(dunkl_kg::dunkl::WignerParams);

#[pymethods]
impl PyWignerParams {
    #[new]
    #[pyo3(signature = (mu1 = 0.0, mu2 = 0.0, mu3 = 0.0))]
    fn new(mu1: f64, mu2: f64, mu3: f64) -> PyResult<Self> {
        Ok(Self(dunkl_kg::dunkl::WignerParams::new(mu1, mu2, mu3).py()?))
    }

    #[getter]
    fn mu1(&self) -> f64 {
        self.0.mu1
    }

    #[getter]
    fn mu2(&self) -> f64 {
        self.0.mu2
    }

    #[getter]
    fn mu3(&self) -> f64 {
        self.0.mu3
    }

    fn sum(&self) -> f64 {
        self.0.sum()
    }

    fn __repr__(&self) -> String {
        format!("WignerParams(mu1={}, mu2={}, mu3={})", self.0.mu1, self.0.mu2, self.0.mu3)
    }
}

#[pyclass(name = "OscillatorConfig", module = "dunkl_kg", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyOscillatorConfig(cartesian::OscillatorConfig);

#[pymethods]
impl PyOscillatorConfig {
    #[new]
    #[pyo3(signature = (m = 1.0, omega = 1.0))]
    fn new(m: f64, omega: f64) -> PyResult<Self> {
        Ok(Self(cartesian::OscillatorConfig::new(m, omega).py()?))
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    fn __repr__(&self) -> String {
        format!("OscillatorConfig(m={}, omega={})", self.0.m, self.0.omega)
    }
}

#[pyclass(name = "CoulombConfig", module = "dunkl_kg", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCoulombConfig(coulomb::CoulombConfig);

#[pymethods]
impl PyCoulombConfig {
    #[new]
    #[pyo3(signature = (m = 1.0, g = 0.1))]
    fn new(m: f64, g: f64) -> PyResult<Self> {
        Ok(Self(coulomb::CoulombConfig::new(m, g).py()?))
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g
    }

    fn __repr__(&self) -> String {
        format!("CoulombConfig(m={}, g={})", self.0.m, self.0.g)
    }
}

/// Sector eigenvalue of the one-dimensional problem.
#[pyfunction]
fn energy_1d(n: u32, s: i32, mu: f64, config: PyOscillatorConfig) -> PyResult<f64> {
    dunkl_kg::dunkl::WignerParams::isotropic(mu).py()?;
    Ok(cartesian::energy_1d(n, parity(s)?, mu, &config.0))
}

#[pyfunction]
fn normalization_1d(n: u32, s: i32, mu: f64, config: PyOscillatorConfig) -> PyResult<f64> {
    cartesian::normalization_1d(n, parity(s)?, mu, &config.0).py()
}

#[pyfunction]
fn wavefunction_1d(n: u32, s: i32, mu: f64, config: PyOscillatorConfig, x: f64) -> PyResult<f64> {
    cartesian::wavefunction_1d(n, parity(s)?, mu, &config.0, x).py()
}

/// Columns `x`, `psi`, `density_bare`, `density_weighted` as lists.
#[pyfunction]
fn density_profile<'py>(
    py: Python<'py>,
    n: u32,
    s: i32,
    mu: f64,
    config: PyOscillatorConfig,
    grid: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = cartesian::density_profile(n, parity(s)?, mu, &config.0, &grid).py()?;
    let d = PyDict::new(py);
    d.set_item("x", p.grid)?;
    d.set_item("psi", p.psi)?;
    d.set_item("density_bare", p.density_bare)?;
    d.set_item("density_weighted", p.density_weighted)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, sector_label, params, config, negative = false))]
fn total_energy_cartesian(
    n: [u32; 3],
    sector_label: &str,
    params: PyWignerParams,
    config: PyOscillatorConfig,
    negative: bool,
) -> PyResult<f64> {
    let st = CartesianState { n, sector: sector(sector_label)?, params: params.0, config: config.0 };
    Ok(cartesian::total_energy_cartesian(&st, branch(negative)))
}

#[pyfunction]
#[pyo3(signature = (n, two_nu, two_ell, sector_label, params, config, negative = false))]
fn spectrum_spherical(
    n: u32,
    two_nu: u32,
    two_ell: u32,
    sector_label: &str,
    params: PyWignerParams,
    config: PyOscillatorConfig,
    negative: bool,
) -> PyResult<f64> {
    let q = SphericalQuantum::new(n, two_nu, two_ell, sector(sector_label)?).py()?;
    spherical::spectrum_spherical(&q, &params.0, &config.0, branch(negative)).py()
}

/// `ψ(r, θ, φ)` of a normalized spherical oscillator state.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn spherical_wavefunction(
    n: u32,
    two_nu: u32,
    two_ell: u32,
    sector_label: &str,
    params: PyWignerParams,
    config: PyOscillatorConfig,
    r: f64,
    theta: f64,
    phi: f64,
) -> PyResult<f64> {
    let q = SphericalQuantum::new(n, two_nu, two_ell, sector(sector_label)?).py()?;
    spherical::assemble_wavefunction(&q, &params.0, &config.0, r, theta, phi).py()
}

/// `(Ω², ϖ²)`.
#[pyfunction]
fn separation_constants(two_nu: u32, two_ell: u32, sector_label: &str, params: PyWignerParams) -> PyResult<(f64, f64)> {
    let q = SphericalQuantum::new(0, two_nu, two_ell, sector(sector_label)?).py()?;
    let c = spherical::separation_constants(&q, &params.0).py()?;
    Ok((c.omega2, c.varpi2))
}

fn coulomb_state(n: u32, two_nu: u32, two_ell: u32, label: &str) -> PyResult<CoulombState> {
    CoulombState::new(n, two_nu, two_ell, sector(label)?).py()
}

#[pyfunction]
fn bound_constraint(params: PyWignerParams, two_nu: u32, two_ell: u32, g: f64) -> bool {
    coulomb::bound_constraint(&params.0, two_nu, two_ell, g)
}

#[pyfunction]
fn coulomb_energy(
    n: u32,
    two_nu: u32,
    two_ell: u32,
    sector_label: &str,
    params: PyWignerParams,
    config: PyCoulombConfig,
) -> PyResult<f64> {
    coulomb::coulomb_energy(&coulomb_state(n, two_nu, two_ell, sector_label)?, &config.0, &params.0).py()
}

/// `(E_rest, E_nonrel, E_fine)`.
#[pyfunction]
fn fine_structure(
    n: u32,
    two_nu: u32,
    two_ell: u32,
    sector_label: &str,
    params: PyWignerParams,
    config: PyCoulombConfig,
) -> PyResult<(f64, f64, f64)> {
    let st = coulomb_state(n, two_nu, two_ell, sector_label)?;
    let f = coulomb::fine_structure_expansion(&st, &config.0, &params.0).py()?;
    Ok((f.e_rest, f.e_nonrel, f.e_fine))
}

/// Radial Coulomb profile normalized under `r^{2(1+μΣ)} dr`.
#[pyfunction]
fn coulomb_radial(
    n: u32,
    two_nu: u32,
    two_ell: u32,
    sector_label: &str,
    params: PyWignerParams,
    config: PyCoulombConfig,
    r: f64,
) -> PyResult<f64> {
    let st = coulomb_state(n, two_nu, two_ell, sector_label)?;
    coulomb::coulomb_radial_normalized(&st, &config.0, &params.0, r).py()
}

fn levels(m: LevelMultiset) -> Vec<(f64, usize)> {
    m.levels.into_iter().map(|l| (l.e_squared, l.degeneracy)).collect()
}

/// `[(E², degeneracy)]` ascending, from the Cartesian enumeration.
#[pyfunction]
fn cartesian_levels(params: PyWignerParams, config: PyOscillatorConfig, e2_cutoff: f64) -> PyResult<Vec<(f64, usize)>> {
    Ok(levels(cartesian::enumerate_cartesian_levels(&params.0, &config.0, e2_cutoff).py()?))
}

/// `[(E², degeneracy)]` ascending, from the spherical enumeration.
#[pyfunction]
fn spherical_levels(params: PyWignerParams, config: PyOscillatorConfig, e2_cutoff: f64) -> PyResult<Vec<(f64, usize)>> {
    Ok(levels(spherical::enumerate_spherical_levels(&params.0, &config.0, e2_cutoff).py()?))
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("quantity", &r.quantity)?;
    d.set_item("closed_form", r.closed_form)?;
    d.set_item("oracle", r.oracle)?;
    d.set_item("abs", r.errors.abs)?;
    d.set_item("rel", r.errors.rel)?;
    d.set_item("tolerance", r.errors.tolerance)?;
    d.set_item("history", r.history.clone())?;
    d.set_item("pass", r.pass)?;
    d.set_item("detail", r.detail.clone())?;
    Ok(d)
}

/// Finite-difference oracle against the closed-form sector spectrum.
#[pyfunction]
#[pyo3(signature = (mu, s, config, n_max, energy_shift = 0.0))]
fn verify_spectrum_1d<'py>(
    py: Python<'py>,
    mu: f64,
    s: i32,
    config: PyOscillatorConfig,
    n_max: u32,
    energy_shift: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let opts = VerifyOptions { energy_shift, grid: None };
    let reports = py.detach(|| oracle::verify_spectrum_1d(mu, Parity::from_sign(s)?, &config.0, n_max, &opts)).py()?;
    reports.iter().map(|r| report_dict(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (params, config, e2_cutoff, energy_shift = 0.0))]
fn verify_degeneracy_match<'py>(
    py: Python<'py>,
    params: PyWignerParams,
    config: PyOscillatorConfig,
    e2_cutoff: f64,
    energy_shift: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = VerifyOptions { energy_shift, grid: None };
    report_dict(py, &oracle::verify_degeneracy_match(&params.0, &config.0, e2_cutoff, &opts).py()?)
}

#[pymodule(name = "dunkl_kg")]
fn dunkl_kg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWignerParams>()?;
    m.add_class::<PyOscillatorConfig>()?;
    m.add_class::<PyCoulombConfig>()?;
    m.add_function(wrap_pyfunction!(energy_1d, m)?)?;
    m.add_function(wrap_pyfunction!(normalization_1d, m)?)?;
    m.add_function(wrap_pyfunction!(wavefunction_1d, m)?)?;
    m.add_function(wrap_pyfunction!(density_profile, m)?)?;
    m.add_function(wrap_pyfunction!(total_energy_cartesian, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_spherical, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(separation_constants, m)?)?;
    m.add_function(wrap_pyfunction!(bound_constraint, m)?)?;
    m.add_function(wrap_pyfunction!(coulomb_energy, m)?)?;
    m.add_function(wrap_pyfunction!(fine_structure, m)?)?;
    m.add_function(wrap_pyfunction!(coulomb_radial, m)?)?;
    m.add_function(wrap_pyfunction!(cartesian_levels, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_levels, m)?)?;
    m.add_function(wrap_pyfunction!(verify_spectrum_1d, m)?)?;
    m.add_function(wrap_pyfunction!(verify_degeneracy_match, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsing() {
        assert_eq!(parity(-1).unwrap(), Parity::Odd);
        assert!(parity(0).is_err());
        assert_eq!(sector("+-+").unwrap().signs(), [1, -1, 1]);
        assert!(sector("++").is_err());
        assert!(matches!(branch(true), Branch::Negative));
    }
}
