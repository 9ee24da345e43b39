//! Slope functions, expansion coefficients and the expander existence test.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{check_box, LatticeBox};
use crate::quiver::{DimVector, Quiver};
use crate::rational::{self, Rational};
use crate::subrep::{embeds, Budget, EmbedCache};

/// Slope `μ = Θ/κ` with `κ` positive on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFunction {
    theta: Vec<Rational>,
    kappa: Vec<Rational>,
}

impl SlopeFunction {
    pub fn new(theta: Vec<Rational>, kappa: Vec<Rational>) -> Result<SlopeFunction> {
        if theta.len() != kappa.len() {
            return Err(Error::IndexMismatch {
                expected: theta.len(),
                got: kappa.len(),
            });
        }
        if let Some(k) = kappa.iter().find(|k| **k <= Rational::from_integer(0)) {
            return Err(Error::OutOfRange(format!(
                "kappa must be positive, found {k}"
            )));
        }
        Ok(SlopeFunction { theta, kappa })
    }

    pub fn from_integers(theta: &[i64], kappa: &[i64]) -> Result<SlopeFunction> {
        Self::new(
            theta.iter().map(|&x| rational::int(x)).collect(),
            kappa.iter().map(|&x| rational::int(x)).collect(),
        )
    }

    /// `Θ = {d, _}`, `κ = −(d, _)`. Requires `(d, i) < 0` at every vertex.
    pub fn from_dim(q: &Quiver, d: &DimVector) -> Result<SlopeFunction> {
        let row = q.sym_row(d)?;
        if let Some(i) = row.iter().position(|&x| x >= 0) {
            return Err(Error::KappaNotPositive {
                vertex: q.vertex_names()[i].clone(),
                value: row[i],
            });
        }
        let theta = (0..q.vertex_count())
            .map(|i| q.antisym_form(d, &q.unit(i)).map(rational::int))
            .collect::<Result<Vec<_>>>()?;
        let kappa = row.iter().map(|&x| rational::int(-x)).collect();
        Self::new(theta, kappa)
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    pub fn kappa(&self) -> &[Rational] {
        &self.kappa
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    fn check_len(&self, d: &[i64]) -> Result<()> {
        if d.len() != self.len() {
            return Err(Error::IndexMismatch {
                expected: self.len(),
                got: d.len(),
            });
        }
        Ok(())
    }

    pub fn theta_of(&self, d: &[i64]) -> Rational {
        apply(&self.theta, d)
    }

    pub fn kappa_of(&self, d: &[i64]) -> Rational {
        apply(&self.kappa, d)
    }

    /// `μ(d) = Θ(d)/κ(d)` for `d ≠ 0`.
    pub fn slope(&self, d: &[i64]) -> Result<Rational> {
        self.check_len(d)?;
        if d.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        Ok(self.theta_of(d) / self.kappa_of(d))
    }

    /// `(aΘ + bκ, aκ)`.
    pub fn transform(&self, a: Rational, b: Rational) -> Result<SlopeFunction> {
        Self::new(
            self.theta
                .iter()
                .zip(&self.kappa)
                .map(|(t, k)| a * t + b * k)
                .collect(),
            self.kappa.iter().map(|k| a * k).collect(),
        )
    }
}

fn apply(f: &[Rational], d: &[i64]) -> Rational {
    f.iter()
        .zip(d)
        .fold(Rational::from_integer(0), |acc, (c, &x)| {
            acc + c * x as i128
        })
}

/// `μ(d)`; free function form of [`SlopeFunction::slope`].
pub fn slope(mu: &SlopeFunction, d: &DimVector) -> Result<Rational> {
    mu.slope(d)
}

/// `Θ = {d,_}`, `κ = −(d,_)`; see [`SlopeFunction::from_dim`].
pub fn slope_from_d(q: &Quiver, d: &DimVector) -> Result<SlopeFunction> {
    SlopeFunction::from_dim(q, d)
}

/// A minimum over a possibly empty set: `Unconstrained` stands for `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsilonValue {
    Finite(Rational),
    Unconstrained,
}

impl EpsilonValue {
    pub fn finite(&self) -> Option<Rational> {
        match self {
            EpsilonValue::Finite(r) => Some(*r),
            EpsilonValue::Unconstrained => None,
        }
    }
}

impl PartialOrd for EpsilonValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsilonValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use EpsilonValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Unconstrained) => Ordering::Less,
            (Unconstrained, Finite(_)) => Ordering::Greater,
            (Unconstrained, Unconstrained) => Ordering::Equal,
        }
    }
}

impl fmt::Display for EpsilonValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonValue::Finite(r) => write!(f, "{r}"),
            EpsilonValue::Unconstrained => f.write_str("Unconstrained"),
        }
    }
}

impl Serialize for EpsilonValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Value of `ε_eff` or `ε_opt` with the lexicographically smallest minimizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonResult {
    pub value: EpsilonValue,
    pub witness: Option<DimVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Eff,
    Opt,
}

impl std::str::FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Which> {
        match s {
            "eff" => Ok(Which::Eff),
            "opt" => Ok(Which::Opt),
            _ => Err(Error::MalformedInput(format!(
                "expected eff|opt, got {s:?}"
            ))),
        }
    }
}

fn check_delta(delta: &Rational) -> Result<()> {
    if *delta <= Rational::from_integer(0) || *delta >= Rational::from_integer(1) {
        return Err(Error::OutOfRange(format!(
            "delta = {delta} must lie in (0,1)"
        )));
    }
    Ok(())
}

fn check_inputs(q: &Quiver, mu: &SlopeFunction, d: &DimVector, delta: &Rational) -> Result<()> {
    q.euler_form(d, d)?;
    mu.check_len(d)?;
    if d.is_zero() {
        return Err(Error::ZeroVector);
    }
    check_delta(delta)
}

/// Minimum of `μ(d) − μ(e)` over `0 ≠ e ≤ d` with `κ(e) ≤ δ κ(d)` and
/// `feasible(e)`.
fn minimize(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    budget: &Budget,
    mut feasible: impl FnMut(&[i64]) -> Result<bool>,
) -> Result<EpsilonResult> {
    check_inputs(q, mu, d, delta)?;
    check_box(d, budget)?;
    let mu_d = mu.slope(d)?;
    let cap = *delta * mu.kappa_of(d);
    let mut best: Option<(Rational, Vec<i64>)> = None;
    for e in LatticeBox::new(d) {
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let kappa_e = mu.kappa_of(&e);
        if kappa_e > cap {
            continue;
        }
        let gap = mu_d - mu.theta_of(&e) / kappa_e;
        if best.as_ref().is_some_and(|(b, _)| gap >= *b) {
            continue;
        }
        if feasible(&e)? {
            best = Some((gap, e));
        }
    }
    Ok(match best {
        Some((value, e)) => EpsilonResult {
            value: EpsilonValue::Finite(value),
            witness: Some(DimVector::from_unchecked(e)),
        },
        None => EpsilonResult {
            value: EpsilonValue::Unconstrained,
            witness: None,
        },
    })
}

/// `ε_eff(δ)`: feasibility is the numerical condition `⟨e, d − e⟩ ≥ 0`.
pub fn epsilon_eff(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    budget: &Budget,
) -> Result<EpsilonResult> {
    minimize(q, mu, d, delta, budget, |e| {
        let rest: Vec<i64> = d.iter().zip(e).map(|(a, b)| a - b).collect();
        Ok(q.euler_unchecked(e, &rest) >= 0)
    })
}

/// `ε_opt(δ)`: feasibility is `e ↪ d`.
pub fn epsilon_opt(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    cache: &EmbedCache,
) -> Result<EpsilonResult> {
    let budget = cache.budget();
    minimize(q, mu, d, delta, &budget, |e| {
        embeds(q, &DimVector::from_unchecked(e.to_vec()), d, cache)
    })
}

pub fn epsilon(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    which: Which,
    cache: &EmbedCache,
) -> Result<EpsilonResult> {
    match which {
        Which::Eff => epsilon_eff(q, mu, d, delta, &cache.budget()),
        Which::Opt => epsilon_opt(q, mu, d, delta, cache),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpanderVerdict {
    pub exists: bool,
    pub violating: Option<DimVector>,
}

/// A `(δ,ε)`-expander of dimension vector `d` exists iff every
/// `0 ≠ e ↪ d` with `κ(e) ≤ δ κ(d)` has `μ(e) ≤ μ(d) − ε`. On failure the
/// lexicographically first violating `e` is returned.
pub fn expander_exists(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    eps: &Rational,
    cache: &EmbedCache,
) -> Result<ExpanderVerdict> {
    check_inputs(q, mu, d, delta)?;
    if *eps <= Rational::from_integer(0) {
        return Err(Error::OutOfRange(format!(
            "epsilon = {eps} must be positive"
        )));
    }
    check_box(d, &cache.budget())?;
    let bound = mu.slope(d)? - eps;
    let cap = *delta * mu.kappa_of(d);
    for e in LatticeBox::new(d) {
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let kappa_e = mu.kappa_of(&e);
        if kappa_e > cap || mu.theta_of(&e) / kappa_e <= bound {
            continue;
        }
        let e = DimVector::from_unchecked(e);
        if embeds(q, &e, d, cache)? {
            return Ok(ExpanderVerdict {
                exists: false,
                violating: Some(e),
            });
        }
    }
    Ok(ExpanderVerdict {
        exists: true,
        violating: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub k: u64,
    pub result: EpsilonResult,
    pub running_min: EpsilonValue,
}

/// `(ε_{k·d}(δ))_{k = 1..k_max}` with the running minimum.
pub fn uniform_scan(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    delta: &Rational,
    k_max: u64,
    which: Which,
    cache: &EmbedCache,
) -> Result<Vec<ScanRow>> {
    check_inputs(q, mu, d, delta)?;
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut running = EpsilonValue::Unconstrained;
    for k in 1..=k_max {
        let kd = d.scale(k as i64);
        let result = epsilon(q, mu, &kd, delta, which, cache)?;
        running = running.min(result.value);
        rows.push(ScanRow {
            k,
            result,
            running_min: running,
        });
    }
    Ok(rows)
}

/// CSV with columns `k,delta,epsilon,witness,running_min`.
pub fn scan_csv(rows: &[(Rational, Vec<ScanRow>)]) -> String {
    let mut out = String::from("k,delta,epsilon,witness,running_min\n");
    for (delta, scan) in rows {
        for r in scan {
            let w = r
                .result
                .witness
                .as_ref()
                .map(|w| format!("\"{w}\""))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.k, delta, r.result.value, w, r.running_min
            ));
        }
    }
    out
}
