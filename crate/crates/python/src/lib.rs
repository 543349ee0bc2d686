//! Python bindings. Sequences cross the boundary as lists of floats, modes
//! as the strings `"exists"` / `"forall"`; library errors become
//! `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use seqconvex_core::classify::{self, CertificateKind, Witness};
use seqconvex_core::decompose;
use seqconvex_core::extend::{self, SamplePlan};
use seqconvex_core::{Epsilon, QuantifierMode, Sequence, Tolerance};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn seq(u: Vec<f64>) -> PyResult<Sequence> {
    Sequence::new(u).map_err(value_error)
}

fn mode(s: &str) -> PyResult<QuantifierMode> {
    s.parse().map_err(value_error)
}

fn tol(t: f64) -> PyResult<Tolerance> {
    Tolerance::new(t).map_err(value_error)
}

fn eps(e: f64) -> PyResult<Epsilon> {
    Epsilon::new(e).map_err(value_error)
}

/// A witness or violation of one inequality at specific indices.
#[pyclass(frozen, skip_from_py_object, module = "seqconvex")]
#[derive(Clone)]
pub struct Certificate {
    /// `"witness"` or `"violation"`.
    #[pyo3(get)]
    kind: String,
    /// `second_difference`, `eps_convex`, `eps_affine` or `wright`.
    #[pyo3(get)]
    inequality: String,
    /// `(n,)`, `(i, j, n)` or `(p, q, r, s)`.
    #[pyo3(get)]
    indices: Vec<usize>,
    #[pyo3(get)]
    eps: Option<f64>,
    /// `rhs - lhs`; negative for violations.
    #[pyo3(get)]
    margin: f64,
    inner: classify::Certificate,
}

#[pymethods]
impl Certificate {
    /// Recomputes the margin against `u`.
    fn replay(&self, u: Vec<f64>) -> PyResult<f64> {
        self.inner.replay(&seq(u)?).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(kind={:?}, inequality={:?}, indices={:?}, margin={})",
            self.kind, self.inequality, self.indices, self.margin
        )
    }
}

impl From<classify::Certificate> for Certificate {
    fn from(c: classify::Certificate) -> Self {
        let (inequality, indices, eps) = match c.witness {
            Witness::SecondDifference { n } => ("second_difference", vec![n], None),
            Witness::EpsConvex { i, j, n, eps } => ("eps_convex", vec![i, j, n], Some(eps)),
            Witness::EpsAffine { i, j, n, eps } => ("eps_affine", vec![i, j, n], Some(eps)),
            Witness::Wright { p, q, r, s } => ("wright", vec![p, q, r, s], None),
        };
        Self {
            kind: match c.kind {
                CertificateKind::Witness => "witness",
                CertificateKind::Violation => "violation",
            }
            .into(),
            inequality: inequality.into(),
            indices,
            eps,
            margin: c.margin,
            inner: c,
        }
    }
}

#[pyclass(frozen, get_all, module = "seqconvex")]
pub struct Verdict {
    holds: bool,
    certificate: Option<Certificate>,
}

#[pymethods]
impl Verdict {
    fn __bool__(&self) -> bool {
        self.holds
    }

    fn __repr__(&self) -> String {
        match &self.certificate {
            None => format!("Verdict(holds={})", py_bool(self.holds)),
            Some(c) => format!(
                "Verdict(holds={}, certificate={})",
                py_bool(self.holds),
                c.__repr__()
            ),
        }
    }
}

fn py_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

impl From<classify::Verdict> for Verdict {
    fn from(v: classify::Verdict) -> Self {
        Self {
            holds: v.holds,
            certificate: v.certificate.map(Certificate::from),
        }
    }
}

#[pyclass(frozen, get_all, module = "seqconvex")]
pub struct EpsMin {
    eps: f64,
    tight: Option<Certificate>,
}

impl From<classify::EpsMin> for EpsMin {
    fn from(e: classify::EpsMin) -> Self {
        Self {
            eps: e.eps,
            tight: e.tight.map(Certificate::from),
        }
    }
}

/// `a_n = slope·n + intercept`.
#[pyclass(frozen, get_all, skip_from_py_object, module = "seqconvex")]
#[derive(Clone, Copy)]
pub struct Line {
    slope: f64,
    intercept: f64,
}

#[pymethods]
impl Line {
    #[new]
    fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    fn __call__(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    fn __repr__(&self) -> String {
        format!("Line(slope={}, intercept={})", self.slope, self.intercept)
    }
}

impl From<decompose::Line> for Line {
    fn from(l: decompose::Line) -> Self {
        Self {
            slope: l.slope,
            intercept: l.intercept,
        }
    }
}

/// `u = structured + residual` with `bound = max |residual|`.
#[pyclass(frozen, get_all, module = "seqconvex")]
pub struct Decomposition {
    structured: Vec<f64>,
    residual: Vec<f64>,
    bound: f64,
    line: Option<Line>,
    eps: Option<f64>,
}

#[pymethods]
impl Decomposition {
    fn __repr__(&self) -> String {
        format!(
            "Decomposition(bound={}, eps={:?}, len={})",
            self.bound,
            self.eps,
            self.structured.len()
        )
    }
}

impl From<decompose::Decomposition> for Decomposition {
    fn from(d: decompose::Decomposition) -> Self {
        Self {
            structured: d.structured.into_vec(),
            residual: d.residual.into_vec(),
            bound: d.bound,
            line: d.line.map(Line::from),
            eps: d.eps,
        }
    }
}

/// Chord interpolant of a sequence on `[0, m-1]`.
#[pyclass(frozen, module = "seqconvex")]
pub struct PiecewiseLinear {
    inner: extend::PiecewiseLinear,
}

#[pymethods]
impl PiecewiseLinear {
    #[new]
    fn new(u: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: extend::PiecewiseLinear::new(seq(u)?),
        })
    }

    #[getter]
    fn upper(&self) -> f64 {
        self.inner.upper()
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(value_error)
    }

    /// Sampled three-point ε-convexity check. Returns `(holds, checked,
    /// worst_margin)`; `worst_margin` is `None` when nothing was checked.
    #[pyo3(signature = (eps, samples=10_000, seed=0, tol=1e-9))]
    fn check_eps_convex(
        &self,
        eps: f64,
        samples: usize,
        seed: u64,
        tol: f64,
    ) -> PyResult<(bool, usize, Option<f64>)> {
        let plan = SamplePlan {
            knot_triples: true,
            random_triples: samples,
            seed,
        };
        let v = extend::check_eps_convex_function(&self.inner, self::eps(eps)?, plan, self::tol(tol)?);
        Ok((v.holds, v.checked, v.worst.map(|w| w.margin)))
    }
}

#[pyfunction]
#[pyo3(signature = (u, tol=1e-9))]
fn is_convex(u: Vec<f64>, tol: f64) -> PyResult<Verdict> {
    Ok(classify::is_convex(&seq(u)?, self::tol(tol)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, tol=1e-9))]
fn is_wright_convex(u: Vec<f64>, tol: f64) -> PyResult<Verdict> {
    Ok(classify::is_wright_convex(&seq(u)?, self::tol(tol)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, eps, mode="exists", tol=1e-9))]
fn is_eps_convex(u: Vec<f64>, eps: f64, mode: &str, tol: f64) -> PyResult<Verdict> {
    Ok(classify::is_eps_convex(&seq(u)?, self::eps(eps)?, self::mode(mode)?, self::tol(tol)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, eps, mode="exists", tol=1e-9))]
fn is_eps_affine(u: Vec<f64>, eps: f64, mode: &str, tol: f64) -> PyResult<Verdict> {
    Ok(classify::is_eps_affine(&seq(u)?, self::eps(eps)?, self::mode(mode)?, self::tol(tol)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, mode="exists"))]
fn min_eps_convex(u: Vec<f64>, mode: &str) -> PyResult<EpsMin> {
    Ok(classify::min_eps_convex(&seq(u)?, self::mode(mode)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, mode="exists"))]
fn min_eps_affine(u: Vec<f64>, mode: &str) -> PyResult<EpsMin> {
    Ok(classify::min_eps_affine(&seq(u)?, self::mode(mode)?).into())
}

#[pyfunction]
fn deltas(u: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(seqconvex_core::deltas(&seq(u)?)
        .map_err(value_error)?
        .values()
        .to_vec())
}

#[pyfunction]
fn mediant_bounds(a: Vec<f64>, b: Vec<f64>) -> PyResult<(f64, f64)> {
    seqconvex_core::mediant_bounds(&a, &b).map_err(value_error)
}

#[pyfunction]
fn gcm(u: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(decompose::gcm(&seq(u)?).into_vec())
}

#[pyfunction]
fn lcm(u: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(decompose::lcm(&seq(u)?).into_vec())
}

#[pyfunction]
#[pyo3(signature = (u, mode="exists", tol=1e-9))]
fn convex_approx_hyers(u: Vec<f64>, mode: &str, tol: f64) -> PyResult<Decomposition> {
    decompose::convex_approx_hyers(&seq(u)?, self::mode(mode)?, self::tol(tol)?)
        .map(Decomposition::from)
        .map_err(value_error)
}

#[pyfunction]
fn convex_approx_optimal(u: Vec<f64>) -> PyResult<Decomposition> {
    Ok(decompose::convex_approx_optimal(&seq(u)?).into())
}

#[pyfunction]
fn affine_approx(u: Vec<f64>) -> PyResult<Decomposition> {
    Ok(decompose::affine_approx(&seq(u)?).into())
}

#[pyfunction]
#[pyo3(signature = (u, mode="forall", tol=1e-9))]
fn affine_approx_by_separation(u: Vec<f64>, mode: &str, tol: f64) -> PyResult<Decomposition> {
    decompose::affine_approx_by_separation(&seq(u)?, self::mode(mode)?, self::tol(tol)?)
        .map(|s| s.decomposition.into())
        .map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (lower, upper, tol=1e-9))]
fn separating_line(lower: Vec<f64>, upper: Vec<f64>, tol: f64) -> PyResult<Line> {
    decompose::separating_line(&seq(lower)?, &seq(upper)?, self::tol(tol)?)
        .map(Line::from)
        .map_err(value_error)
}

#[pymodule]
fn seqconvex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Certificate>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<EpsMin>()?;
    m.add_class::<Line>()?;
    m.add_class::<Decomposition>()?;
    m.add_class::<PiecewiseLinear>()?;
    m.add_function(wrap_pyfunction!(is_convex, m)?)?;
    m.add_function(wrap_pyfunction!(is_wright_convex, m)?)?;
    m.add_function(wrap_pyfunction!(is_eps_convex, m)?)?;
    m.add_function(wrap_pyfunction!(is_eps_affine, m)?)?;
    m.add_function(wrap_pyfunction!(min_eps_convex, m)?)?;
    m.add_function(wrap_pyfunction!(min_eps_affine, m)?)?;
    m.add_function(wrap_pyfunction!(deltas, m)?)?;
    m.add_function(wrap_pyfunction!(mediant_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(gcm, m)?)?;
    m.add_function(wrap_pyfunction!(lcm, m)?)?;
    m.add_function(wrap_pyfunction!(convex_approx_hyers, m)?)?;
    m.add_function(wrap_pyfunction!(convex_approx_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(affine_approx, m)?)?;
    m.add_function(wrap_pyfunction!(affine_approx_by_separation, m)?)?;
    m.add_function(wrap_pyfunction!(separating_line, m)?)?;
    Ok(())
}
