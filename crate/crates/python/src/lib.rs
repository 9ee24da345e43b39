//! Python bindings. Rationals cross the boundary as strings (`"p/q"`),
//! dimension vectors as lists of ints, reports as dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use quiver_expanders::stability::{self, Which};
use quiver_expanders::{
    coxeter, kronecker, rational, sampler, spectral, subrep, Budget, DimVector, EmbedCache, Error,
    Rational, SlopeFunction,
};

create_exception!(pyquiver, QuiverError, PyValueError);
create_exception!(pyquiver, BudgetError, QuiverError);

fn err(e: Error) -> PyErr {
    if e.is_budget() {
        BudgetError::new_err(e.to_string())
    } else {
        QuiverError::new_err(e.to_string())
    }
}

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
    let v = serde_json::to_value(x).map_err(|e| QuiverError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn parse_rational(s: &str) -> PyResult<Rational> {
    rational::parse(s).map_err(err)
}

/// A finite acyclic quiver, with a memo table for subrepresentation queries.
#[pyclass(name = "Quiver", module = "pyquiver", frozen)]
struct PyQuiver {
    cache: EmbedCache,
}

impl PyQuiver {
    fn q(&self) -> &quiver_expanders::Quiver {
        self.cache.quiver()
    }

    fn dim(&self, v: Vec<i64>) -> PyResult<DimVector> {
        self.q().dim(v).map_err(err)
    }

    fn slope(
        &self,
        d: &DimVector,
        theta: Option<Vec<String>>,
        kappa: Option<Vec<String>>,
    ) -> PyResult<SlopeFunction> {
        match (theta, kappa) {
            (None, None) => stability::slope_from_d(self.q(), d).map_err(err),
            (Some(t), Some(k)) => {
                let t = t
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<PyResult<Vec<_>>>()?;
                let k = k
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<PyResult<Vec<_>>>()?;
                if t.len() != self.q().vertex_count() || k.len() != self.q().vertex_count() {
                    return Err(err(Error::IndexMismatch {
                        expected: self.q().vertex_count(),
                        got: t.len().min(k.len()),
                    }));
                }
                SlopeFunction::new(t, k).map_err(err)
            }
            _ => Err(QuiverError::new_err(
                "theta and kappa must be given together",
            )),
        }
    }
}

#[pymethods]
impl PyQuiver {
    /// Parses the text (`vertices:` / `arrow:` lines) or JSON format.
    #[new]
    #[pyo3(signature = (source, lattice_budget = None, subspace_budget = None))]
    fn new(
        source: &str,
        lattice_budget: Option<u64>,
        subspace_budget: Option<u64>,
    ) -> PyResult<Self> {
        let q = quiver_expanders::Quiver::parse(source).map_err(err)?;
        let mut budget = Budget::default();
        if let Some(b) = lattice_budget {
            budget.lattice_points = b;
        }
        if let Some(b) = subspace_budget {
            budget.subspace_tuples = b;
        }
        Ok(PyQuiver {
            cache: EmbedCache::with_budget(&q, budget),
        })
    }

    /// The generalized Kronecker quiver with `m` arrows `1 → 2`.
    #[staticmethod]
    fn kronecker(m: u32) -> Self {
        PyQuiver {
            cache: EmbedCache::new(&quiver_expanders::Quiver::kronecker(m)),
        }
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.q().vertex_names().to_vec()
    }

    fn euler_form(&self, d: Vec<i64>, e: Vec<i64>) -> PyResult<i64> {
        self.q().euler_form(&d, &e).map_err(err)
    }

    fn sym_form(&self, d: Vec<i64>, e: Vec<i64>) -> PyResult<i64> {
        self.q().sym_form(&d, &e).map_err(err)
    }

    fn antisym_form(&self, d: Vec<i64>, e: Vec<i64>) -> PyResult<i64> {
        self.q().antisym_form(&d, &e).map_err(err)
    }

    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.q().cartan_matrix()
    }

    /// `"Dynkin"`, `"ExtendedDynkin"` or `"Wild"`.
    fn classify(&self) -> PyResult<String> {
        Ok(self.q().connected_class().map_err(err)?.to_string())
    }

    fn cartan_spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(spectral::cartan_spectrum(self.q())
            .map_err(err)?
            .eigenvalues)
    }

    fn embeds(&self, e: Vec<i64>, d: Vec<i64>) -> PyResult<bool> {
        let (e, d) = (self.dim(e)?, self.dim(d)?);
        subrep::embeds(self.q(), &e, &d, &self.cache).map_err(err)
    }

    fn general_subreps(&self, d: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
        let d = self.dim(d)?;
        let subs = subrep::general_subreps(self.q(), &d, &self.cache).map_err(err)?;
        Ok(subs.into_iter().map(DimVector::into_inner).collect())
    }

    /// Returns `(value, witness)`; `value` is `"p/q"` or `"Unconstrained"`.
    /// Without `theta`/`kappa` the slope `Θ = {d,_}, κ = −(d,_)` is used.
    #[pyo3(signature = (d, delta, which = "eff", theta = None, kappa = None))]
    fn epsilon(
        &self,
        d: Vec<i64>,
        delta: &str,
        which: &str,
        theta: Option<Vec<String>>,
        kappa: Option<Vec<String>>,
    ) -> PyResult<(String, Option<Vec<i64>>)> {
        let d = self.dim(d)?;
        let mu = self.slope(&d, theta, kappa)?;
        let which: Which = which.parse().map_err(err)?;
        let delta = parse_rational(delta)?;
        let res = stability::epsilon(self.q(), &mu, &d, &delta, which, &self.cache).map_err(err)?;
        Ok((
            res.value.to_string(),
            res.witness.map(DimVector::into_inner),
        ))
    }

    /// Returns `(exists, violating)`.
    #[pyo3(signature = (d, delta, eps, theta = None, kappa = None))]
    fn expander_exists(
        &self,
        d: Vec<i64>,
        delta: &str,
        eps: &str,
        theta: Option<Vec<String>>,
        kappa: Option<Vec<String>>,
    ) -> PyResult<(bool, Option<Vec<i64>>)> {
        let d = self.dim(d)?;
        let mu = self.slope(&d, theta, kappa)?;
        let v = stability::expander_exists(
            self.q(),
            &mu,
            &d,
            &parse_rational(delta)?,
            &parse_rational(eps)?,
            &self.cache,
        )
        .map_err(err)?;
        Ok((v.exists, v.violating.map(DimVector::into_inner)))
    }

    /// The spectral certificate as a dict; raises unless it is valid.
    fn certificate<'py>(&self, py: Python<'py>, d: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.dim(d)?;
        serialize(py, &spectral::certificate(self.q(), &d).map_err(err)?)
    }

    fn coxeter<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &coxeter::coxeter(self.q()).map_err(err)?)
    }

    /// `Φ⁻ᵏ(dim P_i)` for `k = 0..=n_max` (truncated at the first invalid term).
    fn tau_orbit(&self, vertex: &str, n_max: usize) -> PyResult<Vec<Vec<i64>>> {
        let i = self
            .q()
            .vertex_index(vertex)
            .ok_or_else(|| QuiverError::new_err(format!("unknown vertex {vertex:?}")))?;
        let orbit = coxeter::tau_orbit(self.q(), i, n_max).map_err(err)?;
        Ok(orbit.into_iter().map(DimVector::into_inner).collect())
    }

    /// Searches `n_samples` seeded random representations over `F_p` for a
    /// subrepresentation of dimension vector `e`; returns one bool per seed.
    #[pyo3(signature = (d, e, p = 101, seed = 0, n_samples = 1))]
    fn sample_has_subrep(
        &self,
        d: Vec<i64>,
        e: Vec<i64>,
        p: u64,
        seed: u64,
        n_samples: u64,
    ) -> PyResult<Vec<bool>> {
        let (d, e) = (self.dim(d)?, self.dim(e)?);
        let budget = self.cache.budget();
        (seed..seed + n_samples)
            .map(|s| {
                let v = sampler::sample_rep(self.q(), &d, p, s).map_err(err)?;
                Ok(sampler::has_subrep(&v, &e, &budget).map_err(err)?.is_some())
            })
            .collect()
    }

    fn __str__(&self) -> String {
        self.q().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Quiver(vertices={:?}, arrows={})",
            self.q().vertex_names(),
            self.q().arrows().len()
        )
    }
}

/// `ζ_α(t)` for the `m`-Kronecker quiver.
#[pyfunction]
fn kronecker_zeta(m: u32, alpha: f64, t: f64) -> PyResult<f64> {
    kronecker::zeta(m, alpha, t).map_err(err)
}

/// `ε_d(δ)` for the `m`-Kronecker quiver with `κ = (kappa1, kappa2)`.
#[pyfunction]
#[pyo3(signature = (m, d1, d2, delta, kappa1 = "1", kappa2 = "1"))]
fn kronecker_epsilon_bound(
    m: u32,
    d1: i64,
    d2: i64,
    delta: f64,
    kappa1: &str,
    kappa2: &str,
) -> PyResult<f64> {
    let inst = kronecker::KroneckerInstance::new(
        m,
        d1,
        d2,
        parse_rational(kappa1)?,
        parse_rational(kappa2)?,
    )
    .map_err(err)?;
    kronecker::epsilon_bound(&inst, delta).map_err(err)
}

/// Summary of the random-instance hyperplane eigenvalue check.
#[pyfunction]
fn verify_appendix_lemma<'py>(
    py: Python<'py>,
    n: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = spectral::verify_appendix_lemma(n, trials, seed).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("n", rep.n)?;
    dict.set_item("seed", rep.seed)?;
    dict.set_item("trials", rep.trials)?;
    dict.set_item("passed", rep.passed)?;
    dict.set_item("worst_margin", rep.worst_margin)?;
    Ok(dict.into_any())
}

#[pymodule]
fn pyquiver(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuiver>()?;
    m.add_function(wrap_pyfunction!(kronecker_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker_epsilon_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_appendix_lemma, m)?)?;
    m.add("QuiverError", m.py().get_type::<QuiverError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    Ok(())
}
