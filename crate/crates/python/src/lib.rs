//! Python bindings. Tensors cross the boundary as nested `m x n x p`
//! lists indexed `[i][j][k]`, so `numpy.array(t.to_list())` has shape
//! `(m, n, p)`.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ttensor::scalar::{NamedFn, ScalarFn};
use ttensor::structure::{self, StructClass};
use ttensor::{algebra, genfun, io, solve, spectral, Error, Tensor3, C64};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) | Error::Parse(_) => PyIOError::new_err(e.to_string()),
        Error::DimMismatch { .. }
        | Error::UnsupportedClass(_)
        | Error::BadPermutation(_)
        | Error::HypothesisViolation(_)
        | Error::NoComplexExtension(_)
        | Error::NoTaylorCoefficients { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn scalar_fn(name: &str) -> PyResult<ScalarFn> {
    Ok(NamedFn::parse(name).map_err(to_py)?.to_fn())
}

/// A third-order tensor.
#[pyclass(name = "Tensor", module = "ttensor", from_py_object)]
#[derive(Clone)]
pub struct PyTensor {
    inner: Tensor3,
}

impl From<Tensor3> for PyTensor {
    fn from(inner: Tensor3) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyTensor {
    /// Builds a tensor from a nested `m x n x p` list of numbers.
    #[new]
    fn new(data: Vec<Vec<Vec<C64>>>) -> PyResult<Self> {
        let m = data.len();
        let n = data.first().map_or(0, Vec::len);
        let p = data.first().and_then(|r| r.first()).map_or(0, Vec::len);
        if m == 0 || n == 0 || p == 0 {
            return Err(PyValueError::new_err("tensor dimensions must be positive"));
        }
        if data.iter().any(|r| r.len() != n || r.iter().any(|t| t.len() != p)) {
            return Err(PyValueError::new_err("ragged nested list"));
        }
        Ok(Tensor3::from_fn(m, n, p, |i, j, k| data[i][j][k]).into())
    }

    #[staticmethod]
    fn zeros(m: usize, n: usize, p: usize) -> Self {
        Tensor3::zeros(m, n, p).into()
    }

    #[staticmethod]
    fn identity(n: usize, p: usize) -> Self {
        Tensor3::identity(n, p).into()
    }

    /// Gaussian entries from a seeded generator.
    #[staticmethod]
    #[pyo3(signature = (m, n, p, seed=0, complex=false))]
    fn random(m: usize, n: usize, p: usize, seed: u64, complex: bool) -> Self {
        ttensor::random::TensorRng::new(seed).gaussian(m, n, p, complex).into()
    }

    #[getter]
    fn shape(&self) -> (usize, usize, usize) {
        self.inner.dims()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real(0.0)
    }

    fn to_list(&self) -> Vec<Vec<Vec<C64>>> {
        let (m, n, p) = self.inner.dims();
        (0..m).map(|i| (0..n).map(|j| (0..p).map(|k| self.inner[(i, j, k)]).collect()).collect()).collect()
    }

    fn __getitem__(&self, idx: (usize, usize, usize)) -> PyResult<C64> {
        let (m, n, p) = self.inner.dims();
        if idx.0 >= m || idx.1 >= n || idx.2 >= p {
            return Err(pyo3::exceptions::PyIndexError::new_err(format!("{idx:?} out of range for {m}x{n}x{p}")));
        }
        Ok(self.inner[idx])
    }

    fn transpose(&self) -> Self {
        self.inner.transpose().into()
    }

    fn conj_transpose(&self) -> Self {
        self.inner.conj_transpose().into()
    }

    fn fnorm(&self) -> f64 {
        self.inner.fnorm()
    }

    fn specnorm(&self) -> f64 {
        self.inner.specnorm()
    }

    /// `||self - other|| / max(||self||, ||other||)`.
    fn rel_diff(&self, other: &PyTensor) -> PyResult<f64> {
        if self.inner.dims() != other.inner.dims() {
            return Err(PyValueError::new_err("shapes differ"));
        }
        Ok(self.inner.rel_diff(&other.inner))
    }

    fn __matmul__(&self, other: &PyTensor) -> PyResult<Self> {
        Ok(algebra::tprod(&self.inner, &other.inner).map_err(to_py)?.into())
    }

    fn __add__(&self, other: &PyTensor) -> PyResult<Self> {
        if self.inner.dims() != other.inner.dims() {
            return Err(PyValueError::new_err("shapes differ"));
        }
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &PyTensor) -> PyResult<Self> {
        if self.inner.dims() != other.inner.dims() {
            return Err(PyValueError::new_err("shapes differ"));
        }
        Ok((&self.inner - &other.inner).into())
    }

    fn __repr__(&self) -> String {
        let (m, n, p) = self.inner.dims();
        format!("Tensor({m}x{n}x{p}, {})", if self.inner.is_real(0.0) { "real" } else { "complex" })
    }
}

/// Compact T-SVD factors and ranks.
#[pyclass(name = "CompactSvd", module = "ttensor", get_all)]
pub struct PyCompactSvd {
    u: PyTensor,
    s: PyTensor,
    v: PyTensor,
    tubal_rank: usize,
    face_ranks: Vec<usize>,
    /// `values[i][j]`: the `j`-th window value of face `i`.
    values: Vec<Vec<f64>>,
}

#[pyfunction]
fn tprod(a: &PyTensor, b: &PyTensor) -> PyResult<PyTensor> {
    a.__matmul__(b)
}

#[pyfunction]
fn inverse(a: &PyTensor) -> PyResult<PyTensor> {
    Ok(algebra::inverse(&a.inner).map_err(to_py)?.into())
}

#[pyfunction]
#[pyo3(signature = (a, tol=None))]
fn tcsvd(a: &PyTensor, tol: Option<f64>) -> PyResult<PyCompactSvd> {
    let c = spectral::tcsvd(&a.inner, tol).map_err(to_py)?;
    Ok(PyCompactSvd {
        values: c.faces().iter().map(|f| f.c.clone()).collect(),
        u: c.ur.into(),
        s: c.sr.into(),
        v: c.vr.into(),
        tubal_rank: c.r,
        face_ranks: c.face_ranks,
    })
}

/// Generalized function of a named scalar function, e.g. `"sin"`.
#[pyfunction]
fn gfun(a: &PyTensor, f: &str) -> PyResult<PyTensor> {
    let name = NamedFn::parse(f).map_err(to_py)?;
    Ok(genfun::named_gfun(&a.inner, name).map_err(to_py)?.into())
}

/// Generalized function of the polynomial `c0 + c1 x + ...`.
#[pyfunction]
fn gfun_poly(a: &PyTensor, coeffs: Vec<f64>) -> PyResult<PyTensor> {
    Ok(genfun::gfun(&a.inner, &ScalarFn::polynomial(&coeffs)).map_err(to_py)?.into())
}

#[pyfunction]
fn standard_tfn(a: &PyTensor, f: &str) -> PyResult<PyTensor> {
    Ok(genfun::standard_tfn(&a.inner, &scalar_fn(f)?).map_err(to_py)?.into())
}

#[pyfunction]
#[pyo3(signature = (a, f, nodes=128))]
fn gfun_contour(a: &PyTensor, f: &str, nodes: usize) -> PyResult<PyTensor> {
    Ok(solve::gfun_contour(&a.inner, &scalar_fn(f)?, nodes).map_err(to_py)?.into())
}

#[pyfunction]
fn pinv(a: &PyTensor) -> PyResult<PyTensor> {
    Ok(solve::pinv(&a.inner).map_err(to_py)?.into())
}

/// The four Penrose residuals of `x` as a pseudoinverse of `a`.
#[pyfunction]
fn penrose_residuals(a: &PyTensor, x: &PyTensor) -> PyResult<[f64; 4]> {
    solve::penrose_residuals(&a.inner, &x.inner).map_err(to_py)
}

#[pyfunction]
fn lstsq(a: &PyTensor, b: &PyTensor) -> PyResult<PyTensor> {
    Ok(solve::lstsq(&a.inner, &b.inner).map_err(to_py)?.into())
}

/// Least-squares solution of `A * X * B = D`; returns `(X, residual)`.
#[pyfunction]
fn solve_axb(a: &PyTensor, b: &PyTensor, d: &PyTensor) -> PyResult<(PyTensor, f64)> {
    let s = solve::solve_axb(&a.inner, &b.inner, &d.inner).map_err(to_py)?;
    Ok((s.x.into(), s.residual))
}

/// `(member, residual)` for a structure class name such as `"hamiltonian"`.
#[pyfunction]
#[pyo3(signature = (a, class_name, tol=1e-8))]
fn is_member(a: &PyTensor, class_name: &str, tol: f64) -> PyResult<(bool, f64)> {
    let c = StructClass::parse(class_name, a.inner.n()).map_err(to_py)?;
    let m = structure::is_member(&a.inner, c, tol).map_err(to_py)?;
    Ok((m.member, m.residual))
}

#[pyfunction]
#[pyo3(signature = (class_name, m, n, p, seed=0))]
fn random_member(class_name: &str, m: usize, n: usize, p: usize, seed: u64) -> PyResult<PyTensor> {
    let c = StructClass::parse(class_name, n).map_err(to_py)?;
    Ok(c.random_member(m, n, p, seed).map_err(to_py)?.into())
}

/// Runs the preservation harness; `f=None` uses the class's default function.
#[pyfunction]
#[pyo3(signature = (class_name, f=None, trials=5, dims=(4, 4, 3), seed=0))]
fn preservation_check<'py>(
    py: Python<'py>,
    class_name: &str,
    f: Option<&str>,
    trials: usize,
    dims: (usize, usize, usize),
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = StructClass::parse(class_name, dims.1).map_err(to_py)?;
    let f = match f {
        Some(name) => scalar_fn(name)?,
        None => structure::default_fn(c),
    };
    let r = structure::preservation_check(c, &f, trials, dims, seed).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("class", r.class.to_string())?;
    d.set_item("function", r.function)?;
    d.set_item("trials", r.trials)?;
    d.set_item("max_input_residual", r.max_input_residual)?;
    d.set_item("max_residual", r.max_residual)?;
    d.set_item("passed", r.passed)?;
    Ok(d)
}

/// Reads a TT3A binary or text tensor file.
#[pyfunction]
fn load(path: &str) -> PyResult<PyTensor> {
    Ok(io::load(path).map_err(to_py)?.into())
}

/// Writes text for a `.txt` path and TT3A binary otherwise.
#[pyfunction]
fn save(path: &str, t: &PyTensor) -> PyResult<()> {
    io::save(path, &t.inner).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "ttensor")]
fn ttensor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor>()?;
    m.add_class::<PyCompactSvd>()?;
    for f in [
        wrap_pyfunction!(tprod, m)?,
        wrap_pyfunction!(inverse, m)?,
        wrap_pyfunction!(tcsvd, m)?,
        wrap_pyfunction!(gfun, m)?,
        wrap_pyfunction!(gfun_poly, m)?,
        wrap_pyfunction!(standard_tfn, m)?,
        wrap_pyfunction!(gfun_contour, m)?,
        wrap_pyfunction!(pinv, m)?,
        wrap_pyfunction!(penrose_residuals, m)?,
        wrap_pyfunction!(lstsq, m)?,
        wrap_pyfunction!(solve_axb, m)?,
        wrap_pyfunction!(is_member, m)?,
        wrap_pyfunction!(random_member, m)?,
        wrap_pyfunction!(preservation_check, m)?,
        wrap_pyfunction!(load, m)?,
        wrap_pyfunction!(save, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
