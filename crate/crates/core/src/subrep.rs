//! General subrepresentations: the relation `e ↪ d`.
//!
//! `e ↪ d` holds iff `⟨e′, d − e⟩ ≥ 0` for every `e′ ↪ e`. The sets
//! `Sub(e) = { e′ ≤ e : e′ ↪ e }` only depend on `e`, so they are memoized
//! per quiver in an [`EmbedCache`] shared by all queries.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::lattice::{check_box, LatticeBox};
use crate::quiver::{DimVector, Quiver};

/// Work limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest lattice box `∏(e_i + 1)` that may be enumerated.
    pub lattice_points: u64,
    /// Largest number of partial subspace tuples visited by the
    /// finite-field subrepresentation search.
    pub subspace_tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            lattice_points: 10_000_000,
            subspace_tuples: 1_000_000,
        }
    }
}

/// Memo table `e ↦ Sub(e)` for one quiver.
#[derive(Debug)]
pub struct EmbedCache {
    quiver: Quiver,
    budget: Budget,
    table: RwLock<HashMap<Vec<i64>, Arc<[DimVector]>>>,
}

impl EmbedCache {
    pub fn new(quiver: &Quiver) -> Self {
        Self::with_budget(quiver, Budget::default())
    }

    pub fn with_budget(quiver: &Quiver, budget: Budget) -> Self {
        EmbedCache {
            quiver: quiver.clone(),
            budget,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, q: &Quiver) -> Result<()> {
        if &self.quiver != q {
            return Err(Error::CacheMismatch);
        }
        Ok(())
    }

    fn lookup(&self, e: &[i64]) -> Option<Arc<[DimVector]>> {
        self.table.read().unwrap().get(e).cloned()
    }

    /// `Sub(e)`, in lexicographic order. The box for `e` must already have
    /// passed the budget check; boxes of smaller vectors are contained in it.
    fn sub(&self, e: &[i64]) -> Arc<[DimVector]> {
        if let Some(hit) = self.lookup(e) {
            return hit;
        }
        let mut members = Vec::new();
        for e1 in LatticeBox::new(e) {
            if self.embeds_within(&e1, e) {
                members.push(DimVector::from_unchecked(e1));
            }
        }
        let members: Arc<[DimVector]> = members.into();
        // A concurrent writer may have inserted the same entry; both are equal.
        self.table
            .write()
            .unwrap()
            .entry(e.to_vec())
            .or_insert(members)
            .clone()
    }

    /// `e1 ↪ e` for `e1 <= e`.
    fn embeds_within(&self, e1: &[i64], e: &[i64]) -> bool {
        if e1.iter().all(|&x| x == 0) || e1 == e {
            return true;
        }
        let rest: Vec<i64> = e.iter().zip(e1).map(|(a, b)| a - b).collect();
        let sub = self.sub(e1);
        // Early exit at the first violating e′.
        sub.iter()
            .all(|e2| self.quiver.euler_unchecked(e2, &rest) >= 0)
    }
}

/// Decides `e ↪ d`: every representation of dimension vector `d` has a
/// subrepresentation of dimension vector `e`.
pub fn embeds(q: &Quiver, e: &DimVector, d: &DimVector, cache: &EmbedCache) -> Result<bool> {
    cache.check(q)?;
    q.euler_form(e, d)?;
    if !e.le(d) {
        return Err(Error::NotBelow(e.to_string(), d.to_string()));
    }
    if e.is_zero() || e == d {
        return Ok(true);
    }
    check_box(e, &cache.budget)?;
    Ok(cache.embeds_within(e, d))
}

/// `Sub(d) = { e : 0 <= e <= d, e ↪ d }` in lexicographic order.
pub fn general_subreps(q: &Quiver, d: &DimVector, cache: &EmbedCache) -> Result<Vec<DimVector>> {
    cache.check(q)?;
    q.euler_form(d, d)?;
    check_box(d, &cache.budget)?;
    Ok(cache.sub(d).to_vec())
}
