//! Python module `lzwalk`: coins, direct evolution, path sums, generating
//! series and the edge-state analysis.

use std::f64::consts::PI;

use engine::coin::{make_boundary_coin, make_bulk_coin, Coin, Mat2, ModelParams};
use engine::edge::{self, EdgeReport as CoreReport, EdgeStatus};
use engine::genfun::{lambda_plus_series, BoundedWalkSeries};
use engine::pathsum::{self, Boundary};
use engine::walk::{self, WalkState as CoreState};
use num_complex::Complex64;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: engine::Error) -> PyErr {
    match err {
        engine::Error::Resource { .. } => PyMemoryError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn rows(m: &Mat2) -> Vec<Vec<Complex64>> {
    m.0.iter().map(|r| r.to_vec()).collect()
}

fn kind(absorbing: bool) -> Boundary {
    if absorbing {
        Boundary::Absorbing
    } else {
        Boundary::Reflecting
    }
}

/// A 2x2 unitary transfer matrix `[[a, b], [c, d]]`.
#[pyclass(name = "Coin", frozen, from_py_object, module = "lzwalk")]
#[derive(Clone)]
struct PyCoin(Coin);

#[pymethods]
impl PyCoin {
    #[new]
    fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> PyResult<Self> {
        Coin::from_entries(a, b, c, d).map(PyCoin).map_err(to_py)
    }

    /// Bulk coin for tunneling probability `p` and phases `beta`, `gamma`.
    #[staticmethod]
    #[pyo3(signature = (p, beta = 0.0, gamma = PI / 4.0))]
    fn bulk(p: f64, beta: f64, gamma: f64) -> PyResult<Self> {
        make_bulk_coin(p, beta, gamma).map(PyCoin).map_err(to_py)
    }

    /// Boundary coin `[[0, e^{i g}], [-e^{-i g}, 0]]`.
    #[staticmethod]
    #[pyo3(signature = (gamma_tilde = 0.0))]
    fn boundary(gamma_tilde: f64) -> PyResult<Self> {
        make_boundary_coin(gamma_tilde).map(PyCoin).map_err(to_py)
    }

    #[getter]
    fn a(&self) -> Complex64 {
        self.0.a
    }

    #[getter]
    fn b(&self) -> Complex64 {
        self.0.b
    }

    #[getter]
    fn c(&self) -> Complex64 {
        self.0.c
    }

    #[getter]
    fn d(&self) -> Complex64 {
        self.0.d
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&self.0.matrix())
    }

    fn unitarity_defect(&self) -> f64 {
        self.0.unitarity_defect()
    }

    /// The P, Q, R, S basis matrices built from this coin.
    fn pqrs(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.0.pqrs().as_array().iter().map(rows).collect()
    }

    fn __repr__(&self) -> String {
        let c = &self.0;
        format!("Coin(a={}, b={}, c={}, d={})", c.a, c.b, c.c, c.d)
    }
}

/// Walk amplitudes at one time step.
#[pyclass(name = "WalkState", frozen, module = "lzwalk")]
struct PyWalkState(CoreState);

#[pymethods]
impl PyWalkState {
    #[getter]
    fn tau(&self) -> usize {
        self.0.tau()
    }

    #[getter]
    fn psi_l(&self) -> Vec<Complex64> {
        self.0.psi_l().to_vec()
    }

    #[getter]
    fn psi_r(&self) -> Vec<Complex64> {
        self.0.psi_r().to_vec()
    }

    fn amplitude(&self, n: usize) -> (Complex64, Complex64) {
        let [l, r] = self.0.amplitude(n);
        (l, r)
    }

    fn return_amplitude(&self) -> Complex64 {
        self.0.return_amplitude()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn mass_within(&self, n_max: usize) -> f64 {
        self.0.mass_within(n_max)
    }

    /// `[(n, prob_L, prob_R)]` on the sites of matching parity.
    fn distribution(&self) -> Vec<(usize, f64, f64)> {
        self.0.distribution().into_iter().map(|s| (s.n, s.prob_l, s.prob_r)).collect()
    }

    fn step(&self, bulk: &PyCoin, boundary: &PyCoin) -> Self {
        PyWalkState(self.0.step(&bulk.0, &boundary.0))
    }

    fn __repr__(&self) -> String {
        format!("WalkState(tau={}, norm_sqr={})", self.0.tau(), self.0.norm_sqr())
    }
}

#[pyfunction]
fn initial_state() -> PyWalkState {
    PyWalkState(walk::initial_state())
}

#[pyfunction]
fn evolve(py: Python<'_>, bulk: PyCoin, boundary: PyCoin, steps: usize) -> PyResult<PyWalkState> {
    py.detach(|| walk::evolve(&bulk.0, &boundary.0, steps))
        .map(PyWalkState)
        .map_err(to_py)
}

/// Path words from 0 to `n` in `tau` steps, printed right to left.
#[pyfunction]
#[pyo3(signature = (n, tau, absorbing = false))]
fn enumerate_paths(n: usize, tau: usize, absorbing: bool) -> PyResult<Vec<String>> {
    Ok(pathsum::enumerate_paths(n, tau, kind(absorbing))
        .map_err(to_py)?
        .iter()
        .map(|p| p.to_string())
        .collect())
}

/// Summed path matrix `Xi(0 -> n; tau)` as a 2x2 nested list.
#[pyfunction]
#[pyo3(signature = (n, tau, bulk, boundary, absorbing = false))]
fn transition_amplitude(n: usize, tau: usize, bulk: PyCoin, boundary: PyCoin, absorbing: bool) -> PyResult<Vec<Vec<Complex64>>> {
    let t = pathsum::transition_amplitude(n, tau, &bulk.0, &boundary.0, kind(absorbing)).map_err(to_py)?;
    Ok(rows(&t.matrix))
}

/// Coefficients of `lambda_+(z)` up to `z^(order-1)`.
#[pyfunction]
fn lambda_plus(coin: PyCoin, order: usize) -> PyResult<Vec<Complex64>> {
    Ok(lambda_plus_series(&coin.0, order).map_err(to_py)?.coeffs().to_vec())
}

/// `[(psi_L coefficients, psi_R coefficients)]` for sites `0..=n_max`, each
/// with powers `z^0 .. z^order`.
#[pyfunction]
fn bounded_series(bulk: PyCoin, boundary: PyCoin, n_max: usize, order: usize) -> PyResult<Vec<(Vec<Complex64>, Vec<Complex64>)>> {
    let gf = BoundedWalkSeries::new(&bulk.0, &boundary.0, order + 1).map_err(to_py)?;
    Ok(gf
        .sites(n_max)
        .into_iter()
        .map(|(l, r)| (l.coeffs().to_vec(), r.coeffs().to_vec()))
        .collect())
}

#[pyfunction]
fn decay_ratio(p: f64, theta: f64) -> PyResult<f64> {
    edge::decay_ratio(p, theta).map_err(to_py)
}

/// `z^2` at the common pole of the bounded-walk generating functions.
#[pyfunction]
fn pole(p: f64, theta: f64) -> PyResult<Complex64> {
    edge::pole(p, theta).map_err(to_py)
}

/// `(p_c, F_c, edge_possible)`.
#[pyfunction]
#[pyo3(signature = (theta, fbar = 1.0))]
fn thresholds(theta: f64, fbar: f64) -> PyResult<(f64, f64, bool)> {
    let t = edge::thresholds(theta, fbar).map_err(to_py)?;
    Ok((t.p_c, t.f_c, t.edge_possible))
}

/// `(J_direct, J_paper_form, E_direct)`.
#[pyfunction]
#[pyo3(signature = (p, theta, j0 = 1.0, e0 = 1.0))]
fn observables(p: f64, theta: f64, j0: f64, e0: f64) -> PyResult<(f64, f64, f64)> {
    let o = edge::observables(p, theta, j0, e0).map_err(to_py)?;
    Ok((o.j_direct, o.j_paper_form, o.e_direct))
}

/// `[(n, |phi_L(n)|^2, |phi_R(n)|^2)]` on even sites up to `n_max`.
#[pyfunction]
fn floquet_profile(p: f64, theta: f64, n_max: usize) -> PyResult<Vec<(usize, f64, f64)>> {
    Ok(edge::floquet_mode(p, theta, n_max).map_err(to_py)?.weights().collect())
}

/// Edge-state summary at one parameter point.
#[pyclass(name = "EdgeReport", frozen, get_all, module = "lzwalk")]
struct PyEdgeReport {
    field: f64,
    p: f64,
    theta: f64,
    r: f64,
    status: &'static str,
    localized: bool,
    xi: Option<f64>,
    weight: f64,
    z_pole_sq: Complex64,
    quasi_energy: Option<f64>,
    p_c: f64,
    f_c: f64,
    j_direct: Option<f64>,
    j_paper_form: Option<f64>,
    e_direct: Option<f64>,
}

#[pymethods]
impl PyEdgeReport {
    fn __repr__(&self) -> String {
        format!("EdgeReport(p={}, theta={}, r={}, status={})", self.p, self.theta, self.r, self.status)
    }
}

/// Analyzes the edge state. Give exactly one of `field` or `p`.
#[pyfunction]
#[pyo3(signature = (*, field = None, p = None, fbar = 1.0, beta = 0.0, gamma = PI / 4.0, gamma_tilde = 0.0, length = 1.0, j0 = 1.0, e0 = 1.0))]
#[allow(clippy::too_many_arguments)]
fn edge_report(
    field: Option<f64>,
    p: Option<f64>,
    fbar: f64,
    beta: f64,
    gamma: f64,
    gamma_tilde: f64,
    length: f64,
    j0: f64,
    e0: f64,
) -> PyResult<PyEdgeReport> {
    let params = match (field, p) {
        (Some(f), None) => ModelParams::new(f, fbar, beta, gamma, gamma_tilde),
        (None, Some(p)) => ModelParams::from_probability(p, fbar, beta, gamma, gamma_tilde),
        _ => return Err(PyValueError::new_err("give exactly one of field or p")),
    }
    .and_then(|m| m.with_units(length, j0, e0))
    .map_err(to_py)?;
    let rep = CoreReport::analyze(&params).map_err(to_py)?;
    let obs = rep.observables;
    Ok(PyEdgeReport {
        field: params.field,
        p: rep.p,
        theta: rep.theta,
        r: rep.r,
        status: match rep.status {
            EdgeStatus::Localized => "localized",
            EdgeStatus::Critical => "critical",
            EdgeStatus::Delocalized => "delocalized",
        },
        localized: rep.localized(),
        xi: rep.xi,
        weight: rep.weight,
        z_pole_sq: rep.z_pole_sq,
        quasi_energy: rep.quasi_energy,
        p_c: rep.thresholds.p_c,
        f_c: rep.thresholds.f_c,
        j_direct: obs.map(|o| o.j_direct),
        j_paper_form: obs.map(|o| o.j_paper_form),
        e_direct: obs.map(|o| o.e_direct),
    })
}

#[pymodule]
fn lzwalk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCoin>()?;
    m.add_class::<PyWalkState>()?;
    m.add_class::<PyEdgeReport>()?;
    m.add_function(wrap_pyfunction!(initial_state, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_paths, m)?)?;
    m.add_function(wrap_pyfunction!(transition_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_plus, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_series, m)?)?;
    m.add_function(wrap_pyfunction!(decay_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(pole, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(observables, m)?)?;
    m.add_function(wrap_pyfunction!(floquet_profile, m)?)?;
    m.add_function(wrap_pyfunction!(edge_report, m)?)?;
    Ok(())
}
