//! Python bindings: exact parameter algebra, bump profiles, the quotient
//! and the scaling scans. Rationals travel as `"num/den"` strings and
//! structured results as plain dicts and lists.

use gnrad::exactparams::{
    self, derive, epsilon_window, fmt_rational, identity_suite, int, parse_rational, rat,
    theorem_verdicts, ParamError, ParamTuple, Preset,
};
use gnrad::experiments::{half_decades, run_scan, summary_json, write_csv, ExperimentError, ScanKind, ScanSpec};
use gnrad::functionals::{quotient, FunctionalError};
use gnrad::profiles::{BumpSpec, ProfileError, RadialProfile};
use gnrad::quadrature::QuadConfig;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn param_err(e: ParamError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile_err(e: ProfileError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn functional_err(e: FunctionalError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn experiment_err(e: ExperimentError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// serde_json value to the matching Python object.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Parameter tuple `(d, s, p, q, alpha, gamma)` with exact rational entries.
#[pyclass(name = "Params", module = "pygnrad", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyParams {
    inner: ParamTuple,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(d: u32, s: &str, p: &str, q: &str, alpha: &str, gamma: &str) -> PyResult<Self> {
        let inner = ParamTuple::parse(&d.to_string(), s, p, q, alpha, gamma).map_err(param_err)?;
        Ok(Self { inner })
    }

    /// lions, case1, case2, thm15, rangeb or rangec.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Preset::from_name(name)
            .map(|p| Self { inner: p.params() })
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))
    }

    /// `n` seeded random admissible tuples.
    #[staticmethod]
    fn random(seed: u64, n: usize) -> Vec<Self> {
        exactparams::random_admissible_tuple(seed, n).into_iter().map(|inner| Self { inner }).collect()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn s(&self) -> String {
        fmt_rational(&self.inner.s)
    }

    #[getter]
    fn p(&self) -> String {
        fmt_rational(&self.inner.p)
    }

    #[getter]
    fn q(&self) -> String {
        fmt_rational(&self.inner.q)
    }

    #[getter]
    fn alpha(&self) -> String {
        fmt_rational(&self.inner.alpha)
    }

    #[getter]
    fn gamma(&self) -> String {
        fmt_rational(&self.inner.gamma)
    }

    fn with_gamma(&self, gamma: &str) -> PyResult<Self> {
        let g = parse_rational(gamma).map_err(param_err)?;
        Ok(Self { inner: self.inner.with_gamma(g).map_err(param_err)? })
    }

    /// D, beta1, beta2, gamma_rad, gamma_cs and beta_sum_gamma as exact strings.
    fn derived<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let dp = derive(&self.inner).map_err(param_err)?;
        let mut v = serde_json::to_value(&dp).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        v["beta_sum_gamma"] = Value::String(fmt_rational(&dp.beta_sum_gamma(&self.inner)));
        to_py(py, &v)
    }

    /// Range class name, e.g. `"RangeA"`.
    fn classify(&self) -> PyResult<String> {
        let range = exactparams::classify(&self.inner).map_err(param_err)?;
        Ok(format!("{range:?}"))
    }

    fn verdicts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &theorem_verdicts(&self.inner).map_err(param_err)?)
    }

    /// Exact identity suite at `eps` (default: half the shift window).
    #[pyo3(signature = (eps=None))]
    fn identities<'py>(&self, py: Python<'py>, eps: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let eps = match eps {
            Some(e) => parse_rational(e).map_err(param_err)?,
            None => epsilon_window(&self.inner).map(|(_, b)| b / int(2)).unwrap_or_else(|_| rat(1, 100)),
        };
        let report = identity_suite(&self.inner, &eps);
        let mut v = serde_json::to_value(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        v["all_pass"] = Value::Bool(report.all_pass());
        to_py(py, &v)
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(d={}, s={}, p={}, q={}, alpha={}, gamma={})",
            self.inner.d,
            self.s(),
            self.p(),
            self.q(),
            self.alpha(),
            self.gamma()
        )
    }
}

/// Sum of disjoint bumps `lambda * eta((r - R) / S)`.
#[pyclass(name = "Profile", module = "pygnrad", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyProfile {
    inner: RadialProfile,
}

#[pymethods]
impl PyProfile {
    /// `bumps` is a list of `(lambda, R, S)` triples.
    #[new]
    fn new(bumps: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let specs = bumps.into_iter().map(|(l, c, w)| BumpSpec::new(l, c, w)).collect();
        Ok(Self { inner: RadialProfile::new(specs).map_err(profile_err)? })
    }

    #[staticmethod]
    fn single(lambda: f64, center: f64, width: f64) -> PyResult<Self> {
        Ok(Self { inner: RadialProfile::single(lambda, center, width).map_err(profile_err)? })
    }

    fn bumps(&self) -> Vec<(f64, f64, f64)> {
        self.inner.bumps().iter().map(|b| (b.lambda, b.center, b.width)).collect()
    }

    fn __call__(&self, r: f64) -> f64 {
        self.inner.eval(r)
    }

    fn derivative(&self, r: f64) -> f64 {
        self.inner.eval_derivative(r)
    }

    fn dilate(&self, c: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.dilate(c).map_err(profile_err)? })
    }

    fn scale_amplitude(&self, c: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.scale_amplitude(c).map_err(profile_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Quadrature settings from keyword arguments; `None` keeps the default.
fn quad_config(gauss_order: Option<usize>, target_rel_tol: Option<f64>) -> QuadConfig {
    let mut cfg = QuadConfig::default();
    if let Some(n) = gauss_order {
        cfg.gauss_order = n;
    }
    if let Some(t) = target_rel_tol {
        cfg.target_rel_tol = t;
    }
    cfg
}

/// Lgamma norm, seminorm, Coulomb energy, quotient and quadrature diagnostics.
#[pyfunction]
#[pyo3(signature = (profile, params, gauss_order=None, target_rel_tol=None))]
fn evaluate<'py>(
    py: Python<'py>,
    profile: &PyProfile,
    params: &PyParams,
    gauss_order: Option<usize>,
    target_rel_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = quad_config(gauss_order, target_rel_tol);
    let (g, t) = (profile.inner.clone(), params.inner.clone());
    let report = py.detach(move || quotient(&g, &t, &cfg)).map_err(functional_err)?;
    let mut v = serde_json::to_value(report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    v["converged"] = Value::Bool(report.converged());
    to_py(py, &v)
}

fn scan_kind(name: &str) -> PyResult<ScanKind> {
    Ok(match name {
        "single-bump" => ScanKind::SingleBumpR,
        "multi-bump" => ScanKind::MultiBumpM,
        "strauss" => ScanKind::StraussRatio,
        "ruiz" => ScanKind::RuizRatio,
        "bounded" => ScanKind::Boundedness,
        other => return Err(PyValueError::new_err(format!("unknown scan kind {other:?}"))),
    })
}

/// Runs a scan and returns its summary with the CSV text under `"csv"`.
///
/// `kind` is one of single-bump, multi-bump, strauss, ruiz, bounded. The
/// default grid is `10^2 ..= 10^5` in half decades (`m = 2..=10` for
/// multi-bump scans).
#[pyfunction]
#[pyo3(signature = (kind, params, grid=None, base=None, eps=None, r0=None))]
fn scan<'py>(
    py: Python<'py>,
    kind: &str,
    params: &PyParams,
    grid: Option<Vec<f64>>,
    base: Option<f64>,
    eps: Option<&str>,
    r0: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let kind = scan_kind(kind)?;
    let grid = grid.unwrap_or_else(|| match kind {
        ScanKind::MultiBumpM => (2..=10).map(f64::from).collect(),
        _ => half_decades(2, 5),
    });
    let mut spec = ScanSpec::new(kind, params.inner.clone(), grid);
    spec.base.multibump_base = base;
    if let Some(e) = eps {
        spec.base.eps = parse_rational(e).map_err(param_err)?;
    }
    if let Some(r) = r0 {
        spec.base.r0 = r;
    }
    let result = py.detach(move || run_scan(&spec)).map_err(experiment_err)?;
    let mut csv = Vec::new();
    write_csv(&result, &mut csv).map_err(experiment_err)?;
    let mut v = summary_json(&result);
    v["csv"] = Value::String(String::from_utf8_lossy(&csv).into_owned());
    to_py(py, &v)
}

#[pymodule]
fn pygnrad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add("PRESETS", Preset::ALL.iter().map(|p| p.name()).collect::<Vec<_>>())?;
    Ok(())
}
