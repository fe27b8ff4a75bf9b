//! Python bindings for `hardy-core`.
//!
//! Symbols cross the boundary as `Symbol` objects; reports come back as plain dicts
//! decoded from the same JSON the CLI writes.

use hardy_core::hayashi::{self, G0Formula, HayashiConfig};
use hardy_core::linalg::CMat;
use hardy_core::symbol::MatrixSymbol;
use hardy_core::toeplitz::{build_toeplitz, kernel_basis};
use hardy_core::{fixtures, nearly_inv, HardyError, SampleGrid, ToleranceConfig};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: HardyError) -> PyErr {
    match e {
        HardyError::Singular(_) | HardyError::OutOfRange(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn matrix_rows(m: &CMat) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<CMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("coefficients must be non-empty rectangular matrices"));
    }
    Ok(CMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// Laurent polynomial with matrix coefficients.
#[pyclass(name = "Symbol", module = "hardy_kernels", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySymbol {
    inner: MatrixSymbol,
}

impl From<MatrixSymbol> for PySymbol {
    fn from(inner: MatrixSymbol) -> Self {
        PySymbol { inner }
    }
}

#[pymethods]
impl PySymbol {
    /// `coeffs[k]` is the coefficient of `z^(min_deg + k)` as a list of rows.
    #[new]
    #[pyo3(signature = (min_deg, coeffs))]
    fn new(min_deg: i64, coeffs: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let mats = coeffs.iter().map(|m| matrix_from_rows(m)).collect::<PyResult<Vec<_>>>()?;
        let (r, c) = mats.first().map(|m| m.shape()).ok_or_else(|| PyValueError::new_err("no coefficients"))?;
        Ok(MatrixSymbol::new(r, c, min_deg, mats).map_err(err)?.into())
    }

    #[staticmethod]
    fn scalar(min_deg: i64, coeffs: Vec<Complex64>) -> Self {
        MatrixSymbol::scalar(min_deg, &coeffs).into()
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        MatrixSymbol::identity(n).into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(MatrixSymbol::from_json(text).map_err(err)?.into())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    #[getter]
    fn min_deg(&self) -> i64 {
        self.inner.min_deg()
    }

    #[getter]
    fn max_deg(&self) -> i64 {
        self.inner.max_deg()
    }

    fn coeff(&self, k: i64) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.inner.coeff(k))
    }

    fn eval(&self, z: Complex64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_rows(&self.inner.eval(z).map_err(err)?))
    }

    /// `S*(z) = S(1/conj z)^H`, the boundary adjoint.
    fn adjoint(&self) -> Self {
        self.inner.adjoint_flip().into()
    }

    fn shift(&self, k: i64) -> Self {
        self.inner.shift(k).into()
    }

    fn max_coeff_diff(&self, other: &PySymbol) -> f64 {
        self.inner.max_coeff_diff(&other.inner)
    }

    fn __mul__(&self, other: &PySymbol) -> PyResult<Self> {
        Ok(self.inner.mul(&other.inner).map_err(err)?.into())
    }

    fn __add__(&self, other: &PySymbol) -> PyResult<Self> {
        Ok(self.inner.try_add(&other.inner).map_err(err)?.into())
    }

    fn __sub__(&self, other: &PySymbol) -> PyResult<Self> {
        Ok(self.inner.try_sub(&other.inner).map_err(err)?.into())
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.inner.shape();
        format!("Symbol({r}x{c}, degrees {}..={})", self.inner.min_deg(), self.inner.max_deg())
    }
}

fn config(degree: usize, grid: Option<usize>, rank_tol: f64, residual_tol: f64, ladder: Vec<usize>, g0_formula: &str) -> PyResult<HayashiConfig> {
    let grid = grid.unwrap_or_else(|| (4 * (degree + 1)).next_power_of_two().max(512));
    let g0_formula = match g0_formula {
        "inverse" => G0Formula::Inverse,
        "as-printed" => G0Formula::AsPrinted,
        other => return Err(PyValueError::new_err(format!("unknown g0_formula {other:?}"))),
    };
    let cfg = HayashiConfig {
        tol: ToleranceConfig::new(degree, grid, rank_tol, residual_tol).map_err(err)?,
        ladder,
        angle_tol: 1e-5,
        g0_formula,
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Runs the full decision procedure for `G K_U` and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (g, u, degree=64, grid=None, rank_tol=1e-8, residual_tol=1e-8, ladder=vec![16, 32, 64], g0_formula="inverse"))]
#[allow(clippy::too_many_arguments)]
fn classify<'py>(
    py: Python<'py>,
    g: &PySymbol,
    u: &PySymbol,
    degree: usize,
    grid: Option<usize>,
    rank_tol: f64,
    residual_tol: f64,
    ladder: Vec<usize>,
    g0_formula: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(degree, grid, rank_tol, residual_tol, ladder, g0_formula)?;
    let rep = hayashi::classify_kernel(&g.inner, &u.inner, &cfg).map_err(err)?;
    let out = json_to_py(py, &rep.to_json())?;
    if let Some(phi) = rep.phi {
        out.set_item("phi", PySymbol::from(phi))?;
    }
    Ok(out)
}

/// Builds `G`, `phi` and the kernel from `G0'` and `U`.
#[pyfunction]
#[pyo3(signature = (g0, u, degree=64, grid=None, rank_tol=1e-8, residual_tol=1e-8, ladder=vec![16, 32, 64]))]
fn construct<'py>(
    py: Python<'py>,
    g0: &PySymbol,
    u: &PySymbol,
    degree: usize,
    grid: Option<usize>,
    rank_tol: f64,
    residual_tol: f64,
    ladder: Vec<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(degree, grid, rank_tol, residual_tol, ladder, "inverse")?;
    let con = hayashi::construct_kernel(&g0.inner, &u.inner, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("g", PySymbol::from(con.g))?;
    d.set_item("phi", PySymbol::from(con.phi))?;
    d.set_item("b", PySymbol::from(con.b))?;
    d.set_item("f_dim", con.f.len())?;
    d.set_item("normalization", matrix_rows(&con.normalization))?;
    let checks = PyList::empty(py);
    for c in &con.checks {
        let row = PyDict::new(py);
        row.set_item("N", c.n)?;
        row.set_item("angle", c.angle)?;
        row.set_item("kernel_dim", c.kernel_dim)?;
        row.set_item("subspace_dim", c.subspace_dim)?;
        checks.append(row)?;
    }
    d.set_item("cross_check", checks)?;
    Ok(d)
}

/// Rigidity of `F` over a ladder of truncation degrees.
#[pyfunction]
#[pyo3(signature = (f, ladder=vec![16, 32, 64], grid=1024, rank_tol=1e-8))]
fn rigidity<'py>(py: Python<'py>, f: &PySymbol, ladder: Vec<usize>, grid: usize, rank_tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let grid = SampleGrid::new(grid).map_err(err)?;
    let rep = hayashi::rigidity_test(&f.inner, &ladder, &grid, rank_tol).map_err(err)?;
    let d = PyDict::new(py);
    let verdict = match rep.verdict {
        hayashi::RigidityVerdict::Rigid => "rigid",
        hayashi::RigidityVerdict::NonRigid => "non-rigid",
        hayashi::RigidityVerdict::Indeterminate => "indeterminate",
    };
    d.set_item("verdict", verdict)?;
    d.set_item("sigma_min", rep.ladder)?;
    if let Some(w) = rep.witness {
        d.set_item("witness_residual", w.residual)?;
        d.set_item("witness", w.vector.to_stacked().iter().copied().collect::<Vec<_>>())?;
    }
    Ok(d)
}

/// Orthonormal basis of `ker T_phi` on degree `<= n`, as stacked coefficient vectors.
#[pyfunction]
#[pyo3(signature = (phi, n, rank_tol=1e-8))]
fn toeplitz_kernel(phi: &PySymbol, n: usize, rank_tol: f64) -> Vec<Vec<Complex64>> {
    let kb = kernel_basis(&build_toeplitz(&phi.inner, n), rank_tol);
    kb.basis.elements.iter().map(|e| e.to_stacked().iter().copied().collect()).collect()
}

/// Sarason function `B` of `G` truncated at degree `n`.
#[pyfunction]
#[pyo3(signature = (g, n=64, residual_tol=1e-8))]
fn sarason_b(g: &PySymbol, n: usize, residual_tol: f64) -> PyResult<PySymbol> {
    Ok(nearly_inv::sarason_b(&g.inner, n, residual_tol).map_err(err)?.1.into())
}

/// Completes a contraction `B` to a pair `(B, A)`; returns `(A, boundary_defect, mass_gap)`.
#[pyfunction]
#[pyo3(signature = (b, n=64, grid=2048, residual_tol=1e-8))]
fn pair_from_b(b: &PySymbol, n: usize, grid: usize, residual_tol: f64) -> PyResult<(PySymbol, f64, f64)> {
    let grid = SampleGrid::new(grid).map_err(err)?;
    let pair = hayashi::pair_from_b(&b.inner, n, &grid, residual_tol).map_err(err)?;
    Ok((pair.a.into(), pair.boundary_defect, pair.mass_gap))
}

/// Embeds a rectangular `G` (m > r) and classifies it; returns `(phi, report)`.
#[pyfunction]
fn embed_rect<'py>(py: Python<'py>, g: &PySymbol, u: &PySymbol) -> PyResult<(PySymbol, Bound<'py, PyAny>)> {
    let rep = hayashi::embed_rect(&g.inner, &u.inner, &HayashiConfig::default()).map_err(err)?;
    Ok((rep.phi.into(), json_to_py(py, &rep.classification.to_json())?))
}

/// Built-in fixture symbols by name.
#[pyfunction]
#[pyo3(signature = (name, n=64))]
fn fixture(name: &str, n: usize) -> PyResult<PySymbol> {
    let s = match name {
        "z" => fixtures::z(),
        "one-plus-z" => fixtures::g_one_plus_z(),
        "flagship-g" => fixtures::g_flagship(n),
        "flagship-g0" => fixtures::g0_flagship(n),
        "diagonal-g" => fixtures::diagonal_g(),
        "column-g" => fixtures::column_g(),
        "recipe-g0" => fixtures::recipe_g0(),
        other => return Err(PyValueError::new_err(format!("unknown fixture {other:?}"))),
    };
    Ok(s.into())
}

#[pymodule]
fn hardy_kernels(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(rigidity, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(sarason_b, m)?)?;
    m.add_function(wrap_pyfunction!(pair_from_b, m)?)?;
    m.add_function(wrap_pyfunction!(embed_rect, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
