//! Empirical oracle over prime fields.
//!
//! Representations are sampled with uniformly random matrices over `F_p`
//! and their subrepresentations are searched exhaustively. A search visits
//! the vertices in canonical (topological) order; at vertex `j` only
//! subspaces containing the images of the already chosen subspaces at
//! predecessors are enumerated, as superspaces of that image. Verdicts are
//! heuristic: a sample over a finite field stands in for a generic
//! representation over an algebraically closed field.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff;
use crate::lattice::{check_box, LatticeBox};
use crate::quiver::{DimVector, Quiver};
use crate::rational::Rational;
use crate::stability::SlopeFunction;
use crate::subrep::Budget;

/// Label attached to every verdict from this module.
pub const EMPIRICAL: &str = "empirical";

/// A representation over `F_p`. `maps[a]` is the `d_target × d_source`
/// matrix of arrow `arrows[a]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteFieldRep {
    pub p: u64,
    pub dims: DimVector,
    pub arrows: Vec<(usize, usize)>,
    pub maps: Vec<Vec<Vec<u64>>>,
}

/// RREF bases (rows) of the chosen subspace at each vertex.
pub type SubspaceTuple = Vec<Vec<Vec<u64>>>;

impl FiniteFieldRep {
    pub fn new(
        p: u64,
        dims: DimVector,
        arrows: Vec<(usize, usize)>,
        maps: Vec<Vec<Vec<u64>>>,
    ) -> Result<FiniteFieldRep> {
        if !ff::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if maps.len() != arrows.len() {
            return Err(Error::MalformedInput(format!(
                "{} matrices for {} arrows",
                maps.len(),
                arrows.len()
            )));
        }
        for (&(s, t), m) in arrows.iter().zip(&maps) {
            if s >= dims.len() || t >= dims.len() {
                return Err(Error::MalformedInput(format!(
                    "arrow ({s},{t}) out of range"
                )));
            }
            let shape_ok =
                m.len() == dims[t] as usize && m.iter().all(|row| row.len() == dims[s] as usize);
            if !shape_ok {
                return Err(Error::MalformedInput(format!(
                    "matrix for arrow ({s},{t}) must be {}x{}",
                    dims[t], dims[s]
                )));
            }
            if m.iter().flatten().any(|&x| x >= p) {
                return Err(Error::MalformedInput(format!(
                    "entries must be reduced mod {p}"
                )));
            }
        }
        Ok(FiniteFieldRep {
            p,
            dims,
            arrows,
            maps,
        })
    }

    /// The zero representation of dimension vector `d`.
    pub fn zero(q: &Quiver, d: &DimVector, p: u64) -> Result<FiniteFieldRep> {
        q.euler_form(d, d)?;
        let maps = q
            .arrows()
            .iter()
            .map(|&(s, t)| vec![vec![0; d[s] as usize]; d[t] as usize])
            .collect();
        Self::new(p, d.clone(), q.arrows().to_vec(), maps)
    }

    /// Checks `V_α(U_i) ⊆ U_j` for every arrow and the subspace dimensions.
    pub fn is_subrep(&self, tuple: &SubspaceTuple, e: &[i64]) -> bool {
        if tuple.len() != self.dims.len() {
            return false;
        }
        for (i, basis) in tuple.iter().enumerate() {
            let n = self.dims[i] as usize;
            if basis.iter().any(|r| r.len() != n) || ff::rank(basis, n, self.p) != e[i] as usize {
                return false;
            }
        }
        self.arrows.iter().zip(&self.maps).all(|(&(s, t), m)| {
            let n = self.dims[t] as usize;
            let mut rows = tuple[t].clone();
            rows.extend(tuple[s].iter().map(|b| ff::apply(m, b, self.p)));
            ff::rank(&rows, n, self.p) == tuple[t].len()
        })
    }
}

/// Uniformly random matrices from a seeded ChaCha generator.
pub fn sample_rep(q: &Quiver, d: &DimVector, p: u64, seed: u64) -> Result<FiniteFieldRep> {
    q.euler_form(d, d)?;
    if !ff::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps = q
        .arrows()
        .iter()
        .map(|&(s, t)| {
            (0..d[t])
                .map(|_| (0..d[s]).map(|_| rng.random_range(0..p)).collect())
                .collect()
        })
        .collect();
    FiniteFieldRep::new(p, d.clone(), q.arrows().to_vec(), maps)
}

fn tuple_count(v: &FiniteFieldRep, e: &[i64]) -> u128 {
    v.dims
        .iter()
        .zip(e)
        .map(|(&n, &k)| ff::gaussian_binomial(n as u64, k as u64, v.p))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

struct Search<'a> {
    v: &'a FiniteFieldRep,
    e: &'a [i64],
    cap: u64,
    visited: u64,
    chosen: SubspaceTuple,
}

impl Search<'_> {
    fn run(&mut self, vertex: usize) -> Result<bool> {
        if vertex == self.v.dims.len() {
            return Ok(true);
        }
        let p = self.v.p;
        let n = self.v.dims[vertex] as usize;
        let k = self.e[vertex] as usize;
        let images: Vec<Vec<u64>> = self
            .v
            .arrows
            .iter()
            .zip(&self.v.maps)
            .filter(|(&(_, t), _)| t == vertex)
            .flat_map(|(&(s, _), m)| {
                self.chosen[s]
                    .iter()
                    .map(|b| ff::apply(m, b, p))
                    .collect::<Vec<_>>()
            })
            .collect();
        let (forced, pivots) = ff::rref(&images, n, p);
        if forced.len() > k {
            return Ok(false);
        }
        let complement: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let flow = ff::for_each_subspace(complement.len(), k - forced.len(), p, &mut |extra| {
            self.visited += 1;
            if self.visited > self.cap {
                return ControlFlow::Break(Err(Error::BudgetExceeded {
                    what: "subspace tuples",
                    needed: tuple_count(self.v, self.e),
                    cap: self.cap,
                }));
            }
            let mut rows = forced.clone();
            rows.extend(extra.iter().map(|r| {
                let mut full = vec![0u64; n];
                for (&c, &x) in complement.iter().zip(r) {
                    full[c] = x;
                }
                full
            }));
            self.chosen[vertex] = ff::rref(&rows, n, p).0;
            match self.run(vertex + 1) {
                Ok(true) => ControlFlow::Break(Ok(())),
                Ok(false) => ControlFlow::Continue(()),
                Err(err) => ControlFlow::Break(Err(err)),
            }
        });
        match flow {
            ControlFlow::Break(Ok(())) => Ok(true),
            ControlFlow::Break(Err(err)) => Err(err),
            ControlFlow::Continue(()) => {
                self.chosen[vertex].clear();
                Ok(false)
            }
        }
    }
}

/// Searches for subspaces `U_i` of dimensions `e_i` with `V_α(U_i) ⊆ U_j`.
/// Returns a witness tuple if one exists.
pub fn has_subrep(
    v: &FiniteFieldRep,
    e: &DimVector,
    budget: &Budget,
) -> Result<Option<SubspaceTuple>> {
    if e.len() != v.dims.len() {
        return Err(Error::IndexMismatch {
            expected: v.dims.len(),
            got: e.len(),
        });
    }
    if !e.le(&v.dims) {
        return Err(Error::NotBelow(e.to_string(), v.dims.to_string()));
    }
    let mut search = Search {
        v,
        e,
        cap: budget.subspace_tuples,
        visited: 0,
        chosen: vec![Vec::new(); v.dims.len()],
    };
    if search.run(0)? {
        debug_assert!(v.is_subrep(&search.chosen, e));
        Ok(Some(search.chosen))
    } else {
        Ok(None)
    }
}

/// Dimension vectors of all subrepresentations, in lexicographic order.
pub fn all_subrep_dims(v: &FiniteFieldRep, budget: &Budget) -> Result<Vec<DimVector>> {
    check_box(&v.dims, budget)?;
    let mut out = Vec::new();
    for e in LatticeBox::new(&v.dims) {
        let e = DimVector::from_unchecked(e);
        if has_subrep(v, &e, budget)?.is_some() {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalVerdict {
    pub pass: bool,
    pub violating: Option<DimVector>,
    pub witness: Option<SubspaceTuple>,
    pub label: &'static str,
}

/// Fails iff some subrepresentation of dimension vector `e ≠ 0` has
/// `κ(e) ≤ δ κ(d)` and `μ(e) > μ(d) − ε`.
pub fn empirical_expander_check(
    v: &FiniteFieldRep,
    mu: &SlopeFunction,
    delta: &Rational,
    eps: &Rational,
    budget: &Budget,
) -> Result<EmpiricalVerdict> {
    let zero = Rational::from_integer(0);
    if *eps <= zero {
        return Err(Error::OutOfRange(format!(
            "epsilon = {eps} must be positive"
        )));
    }
    if *delta <= zero || *delta >= Rational::from_integer(1) {
        return Err(Error::OutOfRange(format!(
            "delta = {delta} must lie in (0,1)"
        )));
    }
    let d = &v.dims;
    let bound = mu.slope(d)? - eps;
    let cap = *delta * mu.kappa_of(d);
    check_box(d, budget)?;
    for e in LatticeBox::new(d) {
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let kappa_e = mu.kappa_of(&e);
        if kappa_e > cap || mu.theta_of(&e) / kappa_e <= bound {
            continue;
        }
        let e = DimVector::from_unchecked(e);
        if let Some(w) = has_subrep(v, &e, budget)? {
            return Ok(EmpiricalVerdict {
                pass: false,
                violating: Some(e),
                witness: Some(w),
                label: EMPIRICAL,
            });
        }
    }
    Ok(EmpiricalVerdict {
        pass: true,
        violating: None,
        witness: None,
        label: EMPIRICAL,
    })
}
