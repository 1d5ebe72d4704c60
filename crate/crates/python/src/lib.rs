//! Python bindings: zonal fields, transforms, the linear and nonlinear
//! flows, Weyl sums, ball conjugation and the experiment harness.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sphere_nls::harness::{parse_config_for, run_experiment as run, Experiment};
use sphere_nls::linear;
use sphere_nls::nls::{self, BallField, SolverConfig};
use sphere_nls::spectral::{self, SphereGrid};
use sphere_nls::weyl;

type Solution = (Vec<f64>, Vec<f64>, Vec<f64>, PyZonalField);

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A zonal field on S³ given by coefficients `c_1..c_K`.
#[pyclass(name = "ZonalField", from_py_object)]
#[derive(Clone)]
pub struct PyZonalField {
    inner: spectral::ZonalField,
}

#[pymethods]
impl PyZonalField {
    #[new]
    fn new(coeffs: Vec<Complex64>) -> Self {
        Self { inner: spectral::ZonalField::from_coeffs(coeffs) }
    }

    /// The normalized eigenmode `Ẑ_k` truncated at `K`.
    #[staticmethod]
    fn mode(k: usize, truncation: usize) -> PyResult<Self> {
        Ok(Self { inner: spectral::ZonalField::mode(k, truncation).map_err(err)? })
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn eval(&self, theta: f64) -> Complex64 {
        self.inner.eval(theta)
    }

    fn __len__(&self) -> usize {
        self.inner.truncation()
    }

    fn __repr__(&self) -> String {
        format!("ZonalField(truncation={}, mass={:.6e})", self.inner.truncation(), self.inner.mass())
    }
}

/// Coefficients of grid samples on the order-`m` grid, truncated at `k`.
#[pyfunction]
fn analyze(values: Vec<Complex64>, m: usize, k: usize) -> PyResult<PyZonalField> {
    let grid = SphereGrid::new(m).map_err(err)?;
    Ok(PyZonalField { inner: spectral::analyze(&values, &grid, k).map_err(err)? })
}

/// Values of `field` at the interior nodes `θ_j = jπ/m`.
#[pyfunction]
fn synthesize(field: &PyZonalField, m: usize) -> PyResult<Vec<Complex64>> {
    let grid = SphereGrid::new(m).map_err(err)?;
    spectral::synthesize(&field.inner, &grid).map_err(err)
}

/// Interior grid nodes of order `m`.
#[pyfunction]
fn grid_nodes(m: usize) -> PyResult<Vec<f64>> {
    Ok(SphereGrid::new(m).map_err(err)?.nodes().to_vec())
}

/// `e^{itL} f`.
#[pyfunction]
fn evolve_linear(field: &PyZonalField, t: f64) -> PyZonalField {
    PyZonalField { inner: linear::evolve_linear(&field.inner, t) }
}

/// Strang trajectory of `(i∂_t + L)u = ρ|u|⁴u`: returns `(times, masses,
/// energies, final field)`.
#[pyfunction]
#[pyo3(signature = (u0, k, m, dt, rho, t_final, stride=1))]
fn solve_sphere(
    u0: &PyZonalField,
    k: usize,
    m: usize,
    dt: f64,
    rho: f64,
    t_final: f64,
    stride: usize,
) -> PyResult<Solution> {
    let cfg = SolverConfig { k, m, dt, rho, t_final, stride };
    let traj = nls::solve_sphere(&u0.inner, &cfg).map_err(err)?;
    let masses = traj.conserved.iter().map(|c| c.mass).collect();
    let energies = traj.conserved.iter().map(|c| c.energy).collect();
    let last = traj.snapshots.last().cloned().unwrap_or_else(|| u0.inner.clone());
    Ok((traj.times, masses, energies, PyZonalField { inner: last }))
}

/// The sign of `ρ` that conserves the energy.
#[pyfunction]
fn conserving_branch() -> f64 {
    nls::conserving_branch()
}

/// Dirichlet approximation `(a, q, β)` of `t/π` with `q ≤ n`.
#[pyfunction]
fn dirichlet_approx(t: f64, n: u64) -> PyResult<(i64, u64, f64)> {
    let r = weyl::dirichlet_approx(t, n).map_err(err)?;
    Ok((r.a, r.q, r.beta))
}

/// `|Σ_{p=1}^{n} e^{itp²}|`.
#[pyfunction]
fn flat_weyl_sum(n: u64, t: f64) -> f64 {
    weyl::weyl_sum(&weyl::WeylSequence::flat(n), t).norm()
}

/// L² distance between the Dirichlet ball flow and the conjugated sphere
/// flow for ball coefficients `coeffs` at time `t`.
#[pyfunction]
fn verify_ball_flow(coeffs: Vec<Complex64>, t: f64, m: usize) -> PyResult<f64> {
    nls::verify_ball_flow(&BallField::from_coeffs(coeffs), t, m).map_err(err)
}

/// Runs an experiment from configuration text and returns the CSV text.
#[pyfunction]
#[pyo3(signature = (experiment, config="", seed=None))]
fn run_experiment(experiment: &str, config: &str, seed: Option<u64>) -> PyResult<String> {
    let e = Experiment::from_name(experiment).ok_or_else(|| err(format!("unknown experiment {experiment:?}")))?;
    let mut cfg = parse_config_for(config, e).map_err(err)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    run(&cfg).and_then(|t| t.to_csv_string()).map_err(err)
}

#[pymodule]
fn sphere_nls_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyZonalField>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(grid_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_linear, m)?)?;
    m.add_function(wrap_pyfunction!(solve_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(conserving_branch, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_approx, m)?)?;
    m.add_function(wrap_pyfunction!(flat_weyl_sum, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ball_flow, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
