//! Python module `qbrion`.
//!
//! Axes are 0-based here. Exact weights come back as `(numerator, denominator)`
//! pairs of Python ints; reports that have a JSON form are returned as dicts.

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use qbrion_core::jackson::{self, Convention, FirstOrthantDivisor};
use qbrion_core::lattice::{self, Polytope};
use qbrion_core::{brion, measures, QBrionError};

create_exception!(qbrion, PreconditionError, PyValueError, "Input is valid but outside what the operation supports.");

fn to_py(e: QBrionError) -> PyErr {
    match e {
        QBrionError::InvalidInput(_) | QBrionError::Json(_) => PyValueError::new_err(e.to_string()),
        QBrionError::Io(_) => PyOSError::new_err(e.to_string()),
        QBrionError::Precondition(_) | QBrionError::Pole(_) => PreconditionError::new_err(e.to_string()),
        QBrionError::ResampleLimit { .. } | QBrionError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Smooth lattice polytope `{u : <u, v_i> >= -a_i}`.
#[pyclass(name = "Polytope", module = "qbrion", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: Polytope,
}

#[pymethods]
impl PyPolytope {
    #[new]
    fn new(normals: Vec<Vec<i64>>, offsets: Vec<i64>) -> PyResult<Self> {
        let rows: Vec<&[i64]> = normals.iter().map(Vec::as_slice).collect();
        Polytope::from_normals(&rows, &offsets).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Polytope::from_json_str(text).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Polytope::from_path(path).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn segment(m: i64) -> Self {
        Self { inner: Polytope::segment(m) }
    }

    #[staticmethod]
    fn projective_simplex(n: usize, k: i64) -> Self {
        Self { inner: Polytope::projective_simplex(n, k) }
    }

    #[staticmethod]
    fn product_of_segments(lengths: Vec<i64>) -> Self {
        Self { inner: Polytope::product_of_segments(&lengths) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn normals(&self) -> Vec<Vec<i64>> {
        (0..self.inner.num_facets()).map(|i| self.inner.normal(i).to_vec()).collect()
    }

    #[getter]
    fn offsets(&self) -> Vec<i64> {
        self.inner.offsets()
    }

    fn is_radially_symmetric(&self) -> bool {
        self.inner.is_radially_symmetric()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn canonical_hash(&self) -> String {
        self.inner.canonical_hash()
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = lattice::validate(&self.inner).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("smooth", r.smooth)?;
        d.set_item("radially_symmetric", r.radially_symmetric)?;
        d.set_item("all_facets_touch", r.all_facets_touch)?;
        d.set_item("full_dimensional", r.full_dimensional)?;
        d.set_item("lattice", r.lattice)?;
        Ok(d)
    }

    /// Lattice points in lexicographic order.
    fn lattice_points(&self) -> PyResult<Vec<Vec<i64>>> {
        Ok(lattice::lattice_points(&self.inner).map_err(to_py)?.into_iter().map(|lp| lp.u).collect())
    }

    fn slacks(&self, u: Vec<i64>) -> PyResult<Vec<i64>> {
        if u.len() != self.inner.dim() {
            return Err(PyValueError::new_err("point has the wrong dimension"));
        }
        Ok(self.inner.slacks(&u))
    }

    fn dilate(&self, k: i64) -> PyResult<Self> {
        lattice::dilate(&self.inner, k).map(|inner| Self { inner }).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Polytope(normals={:?}, offsets={:?})", self.normals(), self.offsets())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Compare both sides of the q-weighted Brion identity at random rational points.
#[pyfunction]
#[pyo3(signature = (polytope, order=12, trials=3, seed=0, theorem1=false))]
fn verify<'py>(
    py: Python<'py>,
    polytope: &PyPolytope,
    order: usize,
    trials: usize,
    seed: u64,
    theorem1: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = py
        .detach(|| brion::verify_identity(&polytope.inner, order, trials, seed, theorem1))
        .map_err(to_py)?;
    json_loads(py, &rep.to_json())
}

/// Rogers-Szegő polynomial as `{exponent tuple: [c_0, c_1, ...]}`.
#[pyfunction]
fn rs_polynomial<'py>(py: Python<'py>, polytope: &PyPolytope) -> PyResult<Bound<'py, PyDict>> {
    let rs = brion::rs_polynomial(&polytope.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    for (u, c) in rs.iter() {
        d.set_item(PyTuple::new(py, u)?, c.coeffs().to_vec())?;
    }
    Ok(d)
}

/// Lattice-point side up to `q^order`, coefficients as `(num, den)` pairs.
#[pyfunction]
#[pyo3(signature = (polytope, order=12))]
fn lhs_series<'py>(py: Python<'py>, polytope: &PyPolytope, order: usize) -> PyResult<Bound<'py, PyDict>> {
    let lhs = brion::lhs_series(&polytope.inner, order).map_err(to_py)?;
    let d = PyDict::new(py);
    for (u, s) in lhs.iter() {
        let cs: Vec<_> = s.coeffs().iter().map(|c| (c.numer().clone(), c.denom().clone())).collect();
        d.set_item(PyTuple::new(py, u)?, cs)?;
    }
    Ok(d)
}

/// Exact limit measure `mu_D` as `{point tuple: (num, den)}`.
#[pyfunction]
fn mu_measure<'py>(py: Python<'py>, polytope: &PyPolytope) -> PyResult<Bound<'py, PyDict>> {
    let mu = py.detach(|| measures::mu_measure(&polytope.inner)).map_err(to_py)?;
    let d = PyDict::new(py);
    for (u, w) in mu.weights() {
        d.set_item(PyTuple::new(py, &u)?, (w.numer().clone(), w.denom().clone()))?;
    }
    Ok(d)
}

/// Minimizer of `sum_i t_i log t_i` over the polytope.
#[pyfunction]
#[pyo3(signature = (polytope, tol=measures::DEFAULT_TOL))]
fn minimize_potential(polytope: &PyPolytope, tol: f64) -> PyResult<Vec<f64>> {
    measures::minimize_potential(&polytope.inner, tol).map_err(to_py)
}

/// Gaussian limit model: `mean`, `covariance`, `precision`, `active_set`.
#[pyfunction]
#[pyo3(signature = (polytope, tol=measures::DEFAULT_TOL))]
fn gaussian_model<'py>(py: Python<'py>, polytope: &PyPolytope, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let g = measures::gaussian_model(&polytope.inner, tol).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("mean", &g.mean)?;
    d.set_item("covariance", g.covariance())?;
    d.set_item("precision", &g.precision)?;
    d.set_item("active_set", &g.active_set)?;
    Ok(d)
}

/// Exact `(mean, covariance)` of `mu_D` as floats.
#[pyfunction]
fn moments(py: Python<'_>, polytope: &PyPolytope) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = py.detach(|| measures::mu_moments(&polytope.inner)).map_err(to_py)?;
    Ok((m.mean_f64(), m.covariance_f64()))
}

/// Normalized weights at numeric `q`, as `[(point, weight), ...]`.
#[pyfunction]
fn heatmap_weights(py: Python<'_>, polytope: &PyPolytope, q: f64) -> PyResult<Vec<(Vec<i64>, f64)>> {
    py.detach(|| measures::heatmap_weights(&polytope.inner, q)).map_err(to_py)
}

/// Derivative recursion along `axis` for a first-orthant polytope.
#[pyfunction]
fn verify_derivative_recursion(polytope: &PyPolytope, axis: usize) -> PyResult<bool> {
    let d = FirstOrthantDivisor::new(polytope.inner.clone()).map_err(to_py)?;
    if axis >= d.dim() {
        return Err(PyValueError::new_err(format!("axis {axis} out of range")));
    }
    jackson::verify_derivative_recursion(&d, axis).map_err(to_py)
}

/// Iterated derivative at the coordinate-sum maximizer, with the
/// Rogers-Szegő coefficient there; polynomials as coefficient lists.
#[pyfunction]
fn leading_term<'py>(py: Python<'py>, polytope: &PyPolytope) -> PyResult<Bound<'py, PyDict>> {
    let d = FirstOrthantDivisor::new(polytope.inner.clone()).map_err(to_py)?;
    let lt = jackson::leading_term_check(&d).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("maximizer", &lt.maximizer)?;
    out.set_item("derivative", lt.derivative.coeffs().to_vec())?;
    out.set_item("rs_coefficient", lt.rs_coefficient.coeffs().to_vec())?;
    out.set_item("expected", lt.expected().coeffs().to_vec())?;
    Ok(out)
}

/// Ladder identities for `RS_{k,n}` along `axis`; convention is
/// `"vars_with_one"` or `"vars_without_one"`.
#[pyfunction]
#[pyo3(signature = (n, k, axis, convention="vars_with_one"))]
fn ladder<'py>(py: Python<'py>, n: usize, k: i64, axis: usize, convention: &str) -> PyResult<Bound<'py, PyDict>> {
    let conv = match convention {
        "vars_with_one" => Convention::VarsWithOne,
        "vars_without_one" => Convention::VarsWithoutOne,
        other => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
    };
    let r = jackson::verify_ladder(n, k, axis, conv).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("raising", r.raising)?;
    d.set_item("lowering", r.lowering)?;
    d.set_item("commutator", r.commutator)?;
    d.set_item("all_hold", r.all_hold())?;
    Ok(d)
}

#[pymodule]
pub fn qbrion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(rs_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(lhs_series, m)?)?;
    m.add_function(wrap_pyfunction!(mu_measure, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_potential, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_model, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(heatmap_weights, m)?)?;
    m.add_function(wrap_pyfunction!(verify_derivative_recursion, m)?)?;
    m.add_function(wrap_pyfunction!(leading_term, m)?)?;
    m.add_function(wrap_pyfunction!(ladder, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_python_exceptions() {
        Python::initialize();
        Python::attach(|py| {
            assert!(to_py(QBrionError::InvalidInput("x".into())).is_instance_of::<PyValueError>(py));
            assert!(to_py(QBrionError::Precondition("x".into())).is_instance_of::<PreconditionError>(py));
            assert!(to_py(QBrionError::NonConvergence { iterations: 1, residual: 1.0 }).is_instance_of::<PyRuntimeError>(py));
        });
    }
}
