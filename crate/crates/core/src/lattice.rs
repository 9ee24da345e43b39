//! Enumeration of lattice boxes `[0, e]`.

use crate::error::{Error, Result};
use crate::subrep::Budget;

/// Number of lattice points in the box `[0, e]`, saturating.
pub fn box_size(e: &[i64]) -> u128 {
    e.iter()
        .map(|&x| (x.max(0) as u128) + 1)
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

pub fn check_box(e: &[i64], budget: &Budget) -> Result<()> {
    let needed = box_size(e);
    if needed > budget.lattice_points as u128 {
        return Err(Error::BudgetExceeded {
            what: "lattice box",
            needed,
            cap: budget.lattice_points,
        });
    }
    Ok(())
}

/// Iterator over all integer vectors `0 <= x <= upper`, lexicographic with
/// the first coordinate most significant.
pub struct LatticeBox {
    upper: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl LatticeBox {
    pub fn new(upper: &[i64]) -> Self {
        let current = if upper.iter().all(|&u| u >= 0) {
            Some(vec![0; upper.len()])
        } else {
            None
        };
        LatticeBox {
            upper: upper.to_vec(),
            current,
        }
    }
}

impl Iterator for LatticeBox {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            if cur[pos] < self.upper[pos] {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 0;
                }
                break;
            }
        }
        Some(out)
    }
}
