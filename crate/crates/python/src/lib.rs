//! Python bindings: exact expansions, enumeration and the Monte Carlo experiments.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rosen::cf::{check_denominator_bounds, expand as expand_exact, theta_series, Family};
use rosen::enumerate::{compute_t0, count_solutions, enumerate_points, EnumConfig};
use rosen::error::Error;
use rosen::lab::cdf::{lenstra_breakpoint, theta_cdf as theta_cdf_exact, uniform_grid, BREAK_TOL};
use rosen::lab::constants::ConstantsTarget;
use rosen::lab::entropy::entropy_estimate;
use rosen::lab::legendre::{legendre_scan as legendre_scan_exact, SeedMode};
use rosen::ring::{make_ring, HeckeIndex, LambdaRational, LambdaRing};
use rosen::run::{run as run_config, to_json, Command, OutputFormat, RunArgs, SeedKind};
use serde::Serialize;
use serde_json::Value;

fn err(e: Error) -> PyErr {
    match e {
        Error::PrecisionCap { .. } | Error::Budget(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let items = a.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    json_to_py(py, &serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
}

fn family(k: u32, alpha: Option<&str>) -> PyResult<Family> {
    match alpha {
        Some(a) => Family::alpha_from_str(a).map_err(err),
        None => Family::rosen(k).map_err(err),
    }
}

fn ring(k: u32) -> PyResult<LambdaRing> {
    Ok(make_ring(HeckeIndex::new(k).map_err(err)?))
}

fn parse(r: &LambdaRing, s: &str) -> PyResult<LambdaRational> {
    LambdaRational::parse(r, s).map_err(err)
}

/// The ring Z[λₖ] with λₖ = 2cos(π/k).
#[pyclass(frozen)]
struct Ring {
    inner: LambdaRing,
}

#[pymethods]
impl Ring {
    #[new]
    fn new(k: u32) -> PyResult<Self> {
        Ok(Ring { inner: ring(k)? })
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k().value()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn lambda_value(&self) -> f64 {
        self.inner.lambda_f64()
    }

    /// Coefficients of the minimal polynomial of λ, constant term first.
    #[getter]
    fn min_poly(&self) -> Vec<String> {
        self.inner.min_poly().iter().map(|c| c.to_string()).collect()
    }

    /// Exact sign of x − y for two exact decimals or fractions.
    fn compare(&self, x: &str, y: &str) -> PyResult<i32> {
        let (a, b) = (parse(&self.inner, x)?, parse(&self.inner, y)?);
        Ok(a.compare(&b).map_err(err)? as i32)
    }

    fn __repr__(&self) -> String {
        format!("Ring(k={})", self.k())
    }
}

/// Digits, exact convergents and approximation coefficients of one point.
#[pyclass(frozen)]
struct Expansion {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    x: String,
    /// (ε, b) pairs; the digit value is b·λ for Rosen maps and b for α-maps.
    #[pyo3(get)]
    digits: Vec<(i8, u64)>,
    /// (p_n, q_n) as exact strings, n = 0..len.
    #[pyo3(get)]
    convergents: Vec<(String, String)>,
    #[pyo3(get)]
    thetas: Vec<f64>,
    #[pyo3(get)]
    terminated: bool,
    #[pyo3(get)]
    truncated: bool,
    exact: rosen::cf::Expansion,
}

#[pymethods]
impl Expansion {
    fn __len__(&self) -> usize {
        self.digits.len()
    }

    /// Check the two-sided denominator bounds and the denominator ratio bound (Rosen maps).
    fn check_bounds(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &check_denominator_bounds(&self.exact).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Expansion({}, x={}, {} digits)", self.family, self.x, self.digits.len())
    }
}

/// Expand an exact decimal or fraction x for up to n digits.
#[pyfunction]
#[pyo3(signature = (x, k=3, n=30, alpha=None))]
fn expand(py: Python<'_>, x: &str, k: u32, n: usize, alpha: Option<&str>) -> PyResult<Expansion> {
    let f = family(k, alpha)?;
    let x0 = parse(f.ring(), x)?;
    let e = py.detach(|| expand_exact(&f, &x0, n)).map_err(err)?;
    let thetas = theta_series(&e).map_err(err)?.thetas;
    Ok(Expansion {
        family: f.tag(),
        x: x0.to_string(),
        digits: e.digits.iter().map(|d| (d.epsilon, d.b)).collect(),
        convergents: e.convergents.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        thetas,
        terminated: e.terminated,
        truncated: e.truncated,
        exact: e,
    })
}

/// Closed-form targets for a Rosen map.
#[pyfunction]
fn constants(py: Python<'_>, k: u32) -> PyResult<Py<PyAny>> {
    HeckeIndex::new(k).map_err(err)?;
    to_py(py, &ConstantsTarget::rosen(k))
}

/// Entropy estimate from 2·ln(q_n)/n over sampled seeds.
#[pyfunction]
#[pyo3(signature = (k=3, samples=200, iters=20000, seed=7, alpha=None))]
fn entropy(py: Python<'_>, k: u32, samples: u64, iters: usize, seed: u64, alpha: Option<&str>) -> PyResult<Py<PyAny>> {
    let f = family(k, alpha)?;
    let e = py.detach(|| entropy_estimate(&f, samples, iters, seed)).map_err(err)?;
    to_py(py, &e)
}

/// Pooled empirical distribution of Θ_1..Θ_iters on the grid step, 2·step, ..., t_max.
#[pyfunction]
#[pyo3(signature = (k=3, samples=10000, iters=100, seed=7, step=0.001, t_max=1.0, alpha=None))]
#[allow(clippy::too_many_arguments)]
fn theta_cdf(
    py: Python<'_>,
    k: u32,
    samples: u64,
    iters: usize,
    seed: u64,
    step: f64,
    t_max: f64,
    alpha: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let f = family(k, alpha)?;
    let c = py.detach(|| theta_cdf_exact(&f, samples, iters, seed, &uniform_grid(step, t_max))).map_err(err)?;
    to_py(py, &c)
}

/// End of the linear part of the Θ distribution: (t*, fitted slope).
#[pyfunction]
#[pyo3(signature = (k=3, samples=10000, iters=100, seed=7, step=0.001, tol=BREAK_TOL))]
fn lenstra(py: Python<'_>, k: u32, samples: u64, iters: usize, seed: u64, step: f64, tol: f64) -> PyResult<(f64, f64)> {
    let f = family(k, None)?;
    let b = py
        .detach(|| {
            theta_cdf_exact(&f, samples, iters, seed, &uniform_grid(step, 1.0))
                .and_then(|c| lenstra_breakpoint(&c, tol))
        })
        .map_err(err)?;
    Ok((b.t_star, b.slope))
}

/// Count P = g(∞) with |x − P| < t/c² and |c| ≤ N for every (t, N).
#[pyfunction]
#[pyo3(signature = (x, t_grid, n_grid, k=3))]
fn count(py: Python<'_>, x: &str, t_grid: Vec<String>, n_grid: Vec<u64>, k: u32) -> PyResult<Py<PyAny>> {
    let r = ring(k)?;
    let x0 = parse(&r, x)?;
    let ts = t_grid.iter().map(|t| parse(&r, t)).collect::<PyResult<Vec<_>>>()?;
    let rep = py.detach(|| count_solutions(k, &x0, &ts, &n_grid)).map_err(err)?;
    to_py(py, &rep)
}

/// Distinct cusps g(∞) with 0 < |c| ≤ c_bound in [lo, hi), as (p, q, value) triples.
#[pyfunction]
#[pyo3(signature = (c_bound, lo, hi, k=3))]
fn cusps(py: Python<'_>, c_bound: &str, lo: &str, hi: &str, k: u32) -> PyResult<Vec<(String, String, f64)>> {
    let r = ring(k)?;
    let cfg = EnumConfig::new(k, parse(&r, c_bound)?, parse(&r, lo)?, parse(&r, hi)?).map_err(err)?;
    let en = py.detach(|| enumerate_points(&cfg)).map_err(err)?;
    if !en.complete {
        return Err(PyRuntimeError::new_err("enumeration exceeded its node budget"));
    }
    Ok(en.points.iter().map(|e| (e.p().to_string(), e.c_abs.to_string(), e.value_f64())).collect())
}

/// Smallest nonzero |c| over the group, probed up to an entry bound.
#[pyfunction]
#[pyo3(signature = (k=3, probe_bound=20))]
fn t0(py: Python<'_>, k: u32, probe_bound: u64) -> PyResult<Py<PyAny>> {
    let rep = py.detach(|| compute_t0(k, probe_bound)).map_err(err)?;
    to_py(py, &rep)
}

/// Non-convergent solutions of |x − p/q| < c/q² with q ≤ q_bound at each c.
#[pyfunction]
#[pyo3(signature = (c_grid, k=3, q_bound=200, samples=1000, seed=7, max_digit=None))]
fn legendre_scan(
    py: Python<'_>,
    c_grid: Vec<f64>,
    k: u32,
    q_bound: u64,
    samples: u64,
    seed: u64,
    max_digit: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let f = family(k, None)?;
    let cs =
        c_grid.iter().map(|&c| LambdaRational::from_f64(f.ring(), c).map_err(err)).collect::<PyResult<Vec<_>>>()?;
    let mode = max_digit.map_or(SeedMode::Uniform, |m| SeedMode::LeadingDigit { max_digit: m });
    let rep = py.detach(|| legendre_scan_exact(&f, &cs, q_bound, samples, seed, mode)).map_err(err)?;
    to_py(py, &rep)
}

/// Run a command-line experiment and return {"manifest": ..., "rows": [...]}.
#[pyfunction]
#[pyo3(signature = (command, **options))]
fn run(py: Python<'_>, command: &str, options: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let command = <Command as clap::ValueEnum>::from_str(command, true).map_err(PyValueError::new_err)?;
    let mut args = RunArgs {
        seed: 7,
        precision_bits: rosen::ring::DEFAULT_PRECISION_CAP,
        format: OutputFormat::Json,
        ..Default::default()
    };
    if let Some(opts) = options {
        for (key, value) in opts.iter() {
            let key: String = key.extract()?;
            match key.as_str() {
                "k" => args.k = Some(value.extract()?),
                "alpha" => args.alpha = Some(value.str()?.to_string()),
                "x" => args.x = Some(value.str()?.to_string()),
                "samples" => args.samples = Some(value.extract()?),
                "iters" => args.iters = Some(value.extract()?),
                "seed" => args.seed = value.extract()?,
                "precision_bits" => args.precision_bits = value.extract()?,
                "t_grid" => args.t_grid = Some(value.extract()?),
                "c_grid" => args.c_grid = Some(value.extract()?),
                "n_grid" => args.n_grid = Some(value.extract()?),
                "tol" => args.tol = Some(value.extract()?),
                "q_bound" => args.q_bound = Some(value.extract()?),
                "max_digit" => args.max_digit = Some(value.extract()?),
                "probe_bound" => args.probe_bound = Some(value.extract()?),
                "seed_mode" => {
                    let s: String = value.extract()?;
                    args.seed_mode =
                        Some(<SeedKind as clap::ValueEnum>::from_str(&s, true).map_err(PyValueError::new_err)?);
                }
                other => return Err(PyValueError::new_err(format!("unknown option {other:?}"))),
            }
        }
    }
    let cfg = args.resolve(command).map_err(err)?;
    let res = py.detach(|| run_config(&cfg));
    let Some(out) = &res.output else {
        return Err(PyValueError::new_err(res.manifest.error.clone().unwrap_or_default()));
    };
    let body: Value =
        serde_json::from_str(&to_json(out, &res.manifest)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &body)
}

#[pymodule]
fn pyrosen(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Expansion>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(theta_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(lenstra, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(cusps, m)?)?;
    m.add_function(wrap_pyfunction!(t0, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
