//! Python bindings for the `dhydro` library.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dhydro::eigensolver::{solve_states_with, MIN_COLLAPSE_RUNGS};
use dhydro::{Convention, Error, Family};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CrossCheck { .. } | Error::InverseIterationFailed { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// Point-charge potential in D dimensions.
#[pyclass(module = "dhydro_py", name = "PotentialModel", frozen)]
struct PyPotential {
    inner: dhydro::PotentialModel,
}

#[pymethods]
impl PyPotential {
    #[new]
    #[pyo3(signature = (dimension, charge = 1.0, family = "consistent", convention = "gaussian-4pi", r0 = 1.0))]
    fn new(dimension: u32, charge: f64, family: &str, convention: &str, r0: f64) -> PyResult<Self> {
        let inner = dhydro::PotentialModel::new(parse::<Family>(family)?, parse::<Convention>(convention)?, dimension, charge, r0)
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.dimension()
    }

    #[getter]
    fn charge(&self) -> f64 {
        self.inner.charge()
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family().as_str()
    }

    #[getter]
    fn convention(&self) -> &'static str {
        self.inner.convention().as_str()
    }

    #[getter]
    fn r0(&self) -> f64 {
        self.inner.cutoff()
    }

    #[getter]
    fn source_strength(&self) -> f64 {
        self.inner.source_strength()
    }

    /// Electrostatic potential φ(r).
    fn phi(&self, r: f64) -> PyResult<f64> {
        self.inner.electrostatic_potential(r).map_err(py_err)
    }

    /// Electron potential energy V(r) = -φ(r).
    fn energy(&self, r: f64) -> PyResult<f64> {
        self.inner.potential_energy(r).map_err(py_err)
    }

    /// dV/dr.
    fn force_gradient(&self, r: f64) -> PyResult<f64> {
        self.inner.force_gradient(r).map_err(py_err)
    }

    fn enclosed_flux(&self, r: f64) -> PyResult<f64> {
        self.inner.enclosed_flux(r).map_err(py_err)
    }

    #[pyo3(signature = (samples, step = 1e-4))]
    fn poisson_residual(&self, samples: Vec<f64>, step: f64) -> PyResult<f64> {
        self.inner.poisson_residual(&samples, step).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PotentialModel(dimension={}, charge={}, family='{}', convention='{}', r0={})",
            self.inner.dimension(),
            self.inner.charge(),
            self.inner.family().as_str(),
            self.inner.convention().as_str(),
            self.inner.cutoff()
        )
    }
}

/// Reduced radial problem for one (D, l) channel.
#[pyclass(module = "dhydro_py", name = "RadialProblem", frozen)]
struct PyProblem {
    inner: dhydro::RadialProblem,
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (potential, l = 0))]
    fn new(potential: PyRef<'_, PyPotential>, l: u32) -> PyResult<Self> {
        let inner = dhydro::RadialProblem::with_potential(potential.inner, l).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.dimension()
    }

    #[getter]
    fn l(&self) -> u32 {
        self.inner.angular_momentum()
    }

    #[getter]
    fn centrifugal(&self) -> f64 {
        self.inner.centrifugal()
    }

    fn effective_potential(&self, r: f64) -> PyResult<f64> {
        self.inner.effective_potential(r).map_err(py_err)
    }

    /// Small-r classification: kind, net inverse-square coefficient and
    /// whether the channel can hold bound states at all.
    fn stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.classify_stability();
        let d = PyDict::new(py);
        d.set_item("kind", format!("{:?}", s.kind))?;
        d.set_item("net_inverse_square_coefficient", s.net_inverse_square_coefficient)?;
        d.set_item("no_intrinsic_bound_states", s.no_intrinsic_bound_states)?;
        Ok(d)
    }
}

/// Uniform grid with Dirichlet walls at r_min and r_max.
#[pyclass(module = "dhydro_py", name = "GridSpec", frozen)]
struct PyGrid {
    inner: dhydro::GridSpec,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(r_min: f64, r_max: f64, interior_points: usize) -> PyResult<Self> {
        Ok(Self { inner: dhydro::GridSpec::new(r_min, r_max, interior_points).map_err(py_err)? })
    }

    /// Default coarsest rung for `n_states` levels of `problem`.
    #[staticmethod]
    #[pyo3(signature = (problem, n_states = 1))]
    fn default_for(problem: PyRef<'_, PyProblem>, n_states: usize) -> PyResult<Self> {
        Ok(Self { inner: dhydro::GridSpec::default_for(&problem.inner, n_states).map_err(py_err)? })
    }

    #[getter]
    fn r_min(&self) -> f64 {
        self.inner.r_min()
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.inner.r_max()
    }

    #[getter]
    fn interior_points(&self) -> usize {
        self.inner.interior_points()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.inner.spacing()
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().collect()
    }
}

/// One bound state on the finest rung of the grid ladder.
#[pyclass(module = "dhydro_py", name = "BoundState", frozen)]
struct PyState {
    inner: dhydro::BoundState,
}

#[pymethods]
impl PyState {
    #[getter]
    fn index(&self) -> usize {
        self.inner.index
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count
    }

    #[getter]
    fn wavefunction(&self) -> Vec<f64> {
        self.inner.wavefunction.clone()
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.grid.nodes().collect()
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid }
    }

    #[getter]
    fn extrapolated(&self) -> bool {
        self.inner.extrapolated
    }

    #[getter]
    fn estimated_order(&self) -> Option<f64> {
        self.inner.estimated_order
    }

    #[getter]
    fn rung_energies(&self) -> Vec<f64> {
        self.inner.rung_energies.clone()
    }

    #[getter]
    fn numerov_energy(&self) -> Option<f64> {
        self.inner.numerov_energy
    }

    /// ⟨T⟩, ⟨V⟩, ⟨r dV/dr⟩ and the relative virial residual.
    fn virial<'py>(&self, py: Python<'py>, problem: PyRef<'_, PyProblem>) -> PyResult<Bound<'py, PyDict>> {
        let v = dhydro::virial_report(&self.inner, &problem.inner).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("kinetic", v.kinetic)?;
        d.set_item("potential_mean", v.potential_mean)?;
        d.set_item("r_dv_dr_mean", v.r_dv_dr_mean)?;
        d.set_item("residual", v.residual)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("BoundState(index={}, energy={}, node_count={})", self.inner.index, self.inner.energy, self.inner.node_count)
    }
}

/// Lowest bound states, Richardson-extrapolated over a grid ladder.
#[pyfunction]
#[pyo3(signature = (problem, n_states = 1, grid = None, rungs = None, dual_method = false))]
fn solve_states(
    py: Python<'_>,
    problem: PyRef<'_, PyProblem>,
    n_states: usize,
    grid: Option<PyRef<'_, PyGrid>>,
    rungs: Option<usize>,
    dual_method: bool,
) -> PyResult<Vec<PyState>> {
    let problem = problem.inner;
    let grid = match grid {
        Some(g) => g.inner,
        None => dhydro::GridSpec::default_for(&problem, n_states).map_err(py_err)?,
    };
    let options = dhydro::SolveOptions { rungs, dual_method, ..Default::default() };
    let spectrum = py.detach(|| solve_states_with(&problem, &grid, n_states, &options)).map_err(py_err)?;
    Ok(spectrum.states.into_iter().map(|inner| PyState { inner }).collect())
}

/// Ground energy on a ladder that pulls the inner wall toward the origin.
#[pyfunction]
#[pyo3(signature = (problem, grid = None, rungs = MIN_COLLAPSE_RUNGS))]
fn collapse_diagnostic<'py>(
    py: Python<'py>,
    problem: PyRef<'_, PyProblem>,
    grid: Option<PyRef<'_, PyGrid>>,
    rungs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let problem = problem.inner;
    let grid = match grid {
        Some(g) => g.inner,
        None => dhydro::GridSpec::default_for(&problem, 1).map_err(py_err)?,
    };
    let report = py.detach(|| dhydro::collapse_diagnostic(&problem, &grid, rungs)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("classification", report.classification.as_str())?;
    d.set_item("ground_energies", report.ground_energies())?;
    d.set_item("r_min", report.ladder.iter().map(|(g, _)| g.r_min()).collect::<Vec<_>>())?;
    d.set_item("extrapolated", report.extrapolated)?;
    Ok(d)
}

/// Numeric ground state against the classical effective-potential minimum
/// for each dimension in `dims`.
#[pyfunction]
#[pyo3(signature = (dims, l = 0, family = "newtonian", convention = "gaussian-4pi", charge = 1.0))]
fn classical_limit_scan<'py>(
    py: Python<'py>,
    dims: Vec<u32>,
    l: u32,
    family: &str,
    convention: &str,
    charge: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (family, convention) = (parse::<Family>(family)?, parse::<Convention>(convention)?);
    let rows = py
        .detach(|| dhydro::classical_limit_scan(family, convention, charge, l, &dims))
        .map_err(py_err)?;
    rows.into_iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("D", row.dimension)?;
            d.set_item("classification", row.classification.as_str())?;
            d.set_item("numeric_ground", row.numeric_ground)?;
            d.set_item("classical_minimum", row.classical_minimum)?;
            d.set_item("harmonic_estimate", row.harmonic_estimate)?;
            d.set_item("ratio", row.ratio)?;
            d.set_item("predicted_ratio", row.predicted_ratio)?;
            d.set_item("message", row.message)?;
            Ok(d)
        })
        .collect()
}

/// -Z² / (2 n_eff²) with n_eff = n_r + l + (D-1)/2.
#[pyfunction]
#[pyo3(signature = (dimension, l, n_r, charge = 1.0))]
fn analytic_energy_newtonian(dimension: i64, l: i64, n_r: i64, charge: f64) -> PyResult<f64> {
    dhydro::analytic_energy_newtonian(dimension, l, n_r, charge).map_err(py_err)
}

/// n-th level (1-based) of the half-line linear potential.
#[pyfunction]
#[pyo3(signature = (n, charge = 1.0, convention = "gaussian-4pi"))]
fn analytic_energy_airy_1d(n: usize, charge: f64, convention: &str) -> PyResult<f64> {
    dhydro::analytic_energy_airy_1d(parse::<Convention>(convention)?, charge, n).map_err(py_err)
}

/// Area of the unit sphere in R^D.
#[pyfunction]
fn sphere_surface_area(dimension: i64) -> PyResult<f64> {
    dhydro::sphere_surface_area(dimension).map_err(py_err)
}

/// K(l, D) multiplying 1/r² in the reduced radial equation.
#[pyfunction]
fn centrifugal_coefficient(l: i64, dimension: i64) -> PyResult<f64> {
    dhydro::centrifugal_coefficient(l, dimension).map_err(py_err)
}

/// n-th negative zero of Ai (1-based).
#[pyfunction]
fn airy_negative_zero(n: usize) -> PyResult<f64> {
    dhydro::airy_negative_zero(n).map_err(py_err)
}

#[pymodule]
fn dhydro_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(solve_states, m)?)?;
    m.add_function(wrap_pyfunction!(collapse_diagnostic, m)?)?;
    m.add_function(wrap_pyfunction!(classical_limit_scan, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_energy_newtonian, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_energy_airy_1d, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_surface_area, m)?)?;
    m.add_function(wrap_pyfunction!(centrifugal_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(airy_negative_zero, m)?)?;
    Ok(())
}
