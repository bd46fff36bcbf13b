//! Python bindings for the fractional-diffusion Monte Carlo solver.
//!
//! Exposes the special-function kernel, the samplers, domains, the four
//! benchmark problems, the point/field estimator, and the L²-error harness.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use frackac::error::Error;
use frackac::{geometry, harness, problems, solver, specfun, stable, wos};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Domain(_) | Error::Config(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

// ---- special functions ----

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma(x).map_err(to_py_err)
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    specfun::ln_gamma(x).map_err(to_py_err)
}

#[pyfunction]
fn log_beta(a: f64, b: f64) -> PyResult<f64> {
    specfun::log_beta(a, b).map_err(to_py_err)
}

#[pyfunction]
fn reg_inc_beta(x: f64, a: f64, b: f64) -> PyResult<f64> {
    specfun::reg_inc_beta(x, a, b).map_err(to_py_err)
}

#[pyfunction]
fn inv_reg_inc_beta(p: f64, a: f64, b: f64) -> PyResult<f64> {
    specfun::inv_reg_inc_beta(p, a, b).map_err(to_py_err)
}

#[pyfunction]
fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> PyResult<f64> {
    specfun::gauss_2f1(a, b, c, z).map_err(to_py_err)
}

#[pyfunction]
fn mittag_leffler(beta: f64, z: f64) -> PyResult<f64> {
    specfun::mittag_leffler(beta, z).map_err(to_py_err)
}

// ---- samplers ----

/// Reproducible random stream keyed by (master_seed, stream_index).
#[pyclass(name = "RngStream")]
struct PyRngStream {
    inner: stable::RngStream,
}

#[pymethods]
impl PyRngStream {
    #[new]
    fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { inner: stable::RngStream::new(master_seed, stream_index) }
    }

    fn open01(&mut self) -> f64 {
        self.inner.open01()
    }

    fn std_normal(&mut self) -> f64 {
        self.inner.std_normal()
    }
}

#[pyfunction]
fn sample_one_sided_stable(beta: f64, rng: &mut PyRngStream) -> PyResult<f64> {
    stable::sample_one_sided_stable(beta, &mut rng.inner).map_err(to_py_err)
}

#[pyfunction]
fn subordinator_path(beta: f64, dt: f64, t: f64, rng: &mut PyRngStream) -> PyResult<(Vec<f64>, usize)> {
    let p = stable::subordinator_path(beta, dt, t, &mut rng.inner).map_err(to_py_err)?;
    Ok((p.values, p.stop_index))
}

#[pyfunction]
fn exit_time_constant(alpha: f64, dim: usize) -> PyResult<f64> {
    wos::exit_time_constant(alpha, dim).map_err(to_py_err)
}

#[pyfunction]
fn ball_radius(alpha: f64, dim: usize, dt: f64) -> PyResult<f64> {
    wos::ball_radius(alpha, dim, dt).map_err(to_py_err)
}

#[pyfunction]
fn sample_jump_radius(alpha: f64, radius: f64, omega: f64) -> PyResult<f64> {
    wos::sample_jump_radius(alpha, radius, omega).map_err(to_py_err)
}

// ---- geometry ----

/// Bounded domain Ω.
#[pyclass(name = "Domain")]
#[derive(Clone)]
struct PyDomain {
    inner: geometry::Domain,
}

#[pymethods]
impl PyDomain {
    #[staticmethod]
    fn unit_ball(dim: usize) -> PyResult<Self> {
        Ok(Self { inner: geometry::Domain::unit_ball(dim).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn ball(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        Ok(Self { inner: geometry::Domain::ball(center, radius).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn l_shape() -> Self {
        Self { inner: geometry::Domain::l_shape() }
    }

    #[staticmethod]
    #[pyo3(signature = (constant=1.0, sin_terms=vec![(6, 0.9)], cos_terms=vec![(10, 0.1)]))]
    fn polar_star(constant: f64, sin_terms: Vec<(u32, f64)>, cos_terms: Vec<(u32, f64)>) -> PyResult<Self> {
        let curve = geometry::PolarCurve { constant, sin_terms, cos_terms };
        Ok(Self { inner: geometry::Domain::polar_star(curve).map_err(to_py_err)? })
    }

    fn contains(&self, x: Vec<f64>) -> PyResult<bool> {
        self.inner.contains(&x).map_err(to_py_err)
    }

    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn bounding_radius(&self) -> f64 {
        self.inner.bounding_radius()
    }

    fn sample_interior_points(&self, count: usize, rng: &mut PyRngStream) -> PyResult<Vec<Vec<f64>>> {
        self.inner.sample_interior_points(count, &mut rng.inner).map_err(to_py_err)
    }
}

// ---- problems ----

/// Initial/exterior-value problem with optional exact solution.
#[pyclass(name = "Problem")]
#[derive(Clone)]
struct PyProblem {
    inner: problems::Problem,
}

#[pymethods]
impl PyProblem {
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.orders.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.orders.beta
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn domain(&self) -> PyDomain {
        PyDomain { inner: self.inner.domain.clone() }
    }

    fn u0(&self, x: Vec<f64>) -> f64 {
        self.inner.u0(&x)
    }

    fn g(&self, t: f64, x: Vec<f64>) -> f64 {
        self.inner.g(t, &x)
    }

    fn source(&self, t: f64, x: Vec<f64>) -> f64 {
        self.inner.source(t, &x)
    }

    fn has_exact(&self) -> bool {
        self.inner.has_exact()
    }

    fn exact(&self, t: f64, x: Vec<f64>) -> PyResult<f64> {
        self.inner.exact(t, &x).map_err(to_py_err)
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, dim=2, horizon=1.0))]
fn example1(alpha: f64, beta: f64, dim: usize, horizon: f64) -> PyResult<PyProblem> {
    Ok(PyProblem { inner: problems::example1(alpha, beta, dim, horizon).map_err(to_py_err)? })
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, horizon=1.0))]
fn example2(alpha: f64, beta: f64, horizon: f64) -> PyResult<PyProblem> {
    Ok(PyProblem { inner: problems::example2(alpha, beta, horizon).map_err(to_py_err)? })
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, horizon=1.0))]
fn example3(alpha: f64, beta: f64, horizon: f64) -> PyResult<PyProblem> {
    Ok(PyProblem { inner: problems::example3(alpha, beta, horizon).map_err(to_py_err)? })
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, horizon=1.0))]
fn example4(alpha: f64, beta: f64, horizon: f64) -> PyResult<PyProblem> {
    Ok(PyProblem { inner: problems::example4(alpha, beta, horizon).map_err(to_py_err)? })
}

// ---- solver ----

/// Monte Carlo run parameters.
#[pyclass(name = "SolverConfig")]
#[derive(Clone)]
struct PySolverConfig {
    inner: solver::SolverConfig,
}

#[pymethods]
impl PySolverConfig {
    #[new]
    #[pyo3(signature = (dt, num_paths, master_seed=42, max_steps=None))]
    fn new(dt: f64, num_paths: usize, master_seed: u64, max_steps: Option<usize>) -> Self {
        let mut cfg = solver::SolverConfig::new(dt, num_paths, master_seed);
        cfg.max_steps = max_steps;
        Self { inner: cfg }
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt
    }

    #[getter]
    fn num_paths(&self) -> usize {
        self.inner.num_paths
    }

    #[getter]
    fn master_seed(&self) -> u64 {
        self.inner.master_seed
    }
}

/// Monte Carlo mean with its standard error.
#[pyclass(name = "Estimate")]
#[derive(Clone)]
struct PyEstimate {
    #[pyo3(get)]
    mean: f64,
    #[pyo3(get)]
    std_error: f64,
    #[pyo3(get)]
    num_paths: usize,
    #[pyo3(get)]
    num_failed: usize,
}

impl From<solver::Estimate> for PyEstimate {
    fn from(e: solver::Estimate) -> Self {
        Self {
            mean: e.mean,
            std_error: e.std_error,
            num_paths: e.num_paths,
            num_failed: e.num_failed,
        }
    }
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!(
            "Estimate(mean={}, std_error={}, num_paths={}, num_failed={})",
            self.mean, self.std_error, self.num_paths, self.num_failed
        )
    }
}

#[pyfunction]
fn estimate_point(
    py: Python<'_>,
    problem: &PyProblem,
    t: f64,
    x: Vec<f64>,
    config: &PySolverConfig,
) -> PyResult<PyEstimate> {
    let p = problem.inner.clone();
    let cfg = config.inner.clone();
    py.detach(move || solver::estimate_point(&p, t, &x, &cfg))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
fn estimate_field(
    py: Python<'_>,
    problem: &PyProblem,
    t: f64,
    points: Vec<Vec<f64>>,
    config: &PySolverConfig,
) -> PyResult<Vec<PyEstimate>> {
    let p = problem.inner.clone();
    let cfg = config.inner.clone();
    py.detach(move || solver::estimate_field(&p, t, &points, &cfg))
        .map(|v| v.into_iter().map(Into::into).collect())
        .map_err(to_py_err)
}

// ---- harness ----

/// L² error measurement: returns (l2_error, per_point rows), where each row
/// is (point, exact, estimate, std_error).
#[pyfunction]
fn measure_l2_error(
    py: Python<'_>,
    problem: &PyProblem,
    t: f64,
    config: &PySolverConfig,
    num_eval_points: usize,
    eval_seed: u64,
) -> PyResult<(f64, Vec<(Vec<f64>, f64, f64, f64)>)> {
    let p = problem.inner.clone();
    let cfg = config.inner.clone();
    let report = py
        .detach(move || harness::measure_l2_error(&p, t, &cfg, num_eval_points, eval_seed))
        .map_err(to_py_err)?;
    let rows = report
        .per_point
        .into_iter()
        .map(|r| (r.point, r.exact, r.estimate, r.std_error))
        .collect();
    Ok((report.l2_error, rows))
}

/// Convergence sweep: returns (rows, fitted_slope, slope_stderr).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn sweep(
    py: Python<'_>,
    problem: &PyProblem,
    t: f64,
    config: &PySolverConfig,
    axis: &str,
    values: Vec<f64>,
    num_eval_points: usize,
    eval_seed: u64,
) -> PyResult<(Vec<(f64, f64)>, f64, f64)> {
    let axis = match axis {
        "num_paths" => harness::Axis::NumPaths,
        "dt" => harness::Axis::Dt,
        other => {
            return Err(PyValueError::new_err(format!(
                "axis must be 'num_paths' or 'dt', got '{other}'"
            )))
        }
    };
    let p = problem.inner.clone();
    let cfg = config.inner.clone();
    let table = py
        .detach(move || harness::sweep(&p, t, &cfg, axis, &values, num_eval_points, eval_seed))
        .map_err(to_py_err)?;
    Ok((table.rows, table.fitted_slope, table.slope_stderr))
}

#[pymodule]
fn frackac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(log_beta, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(inv_reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_2f1, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(sample_one_sided_stable, m)?)?;
    m.add_function(wrap_pyfunction!(subordinator_path, m)?)?;
    m.add_function(wrap_pyfunction!(exit_time_constant, m)?)?;
    m.add_function(wrap_pyfunction!(ball_radius, m)?)?;
    m.add_function(wrap_pyfunction!(sample_jump_radius, m)?)?;
    m.add_function(wrap_pyfunction!(example1, m)?)?;
    m.add_function(wrap_pyfunction!(example2, m)?)?;
    m.add_function(wrap_pyfunction!(example3, m)?)?;
    m.add_function(wrap_pyfunction!(example4, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_point, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_field, m)?)?;
    m.add_function(wrap_pyfunction!(measure_l2_error, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_class::<PyRngStream>()?;
    m.add_class::<PyDomain>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolverConfig>()?;
    m.add_class::<PyEstimate>()?;
    Ok(())
}
