//! Coxeter transformation on dimension vectors and preprojective orbits.
//!
//! `Φ⁻¹` is the product of the simple reflections `s_i(d) = d − (d,i)·i`
//! applied in canonical order, sources first. It moves `dim P_i` to
//! `dim τ⁻¹P_i` for non-Dynkin quivers.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly;
use crate::quiver::{Classification, DimVector, Quiver};
use crate::rational::{self, Rational};
use crate::stability::SlopeFunction;

pub type IntMatrix = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn checked_mat_vec(a: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(0i64, |acc, (&x, &y)| {
                x.checked_mul(y).and_then(|p| acc.checked_add(p))
            })
        })
        .collect()
}

/// Reflection `s_i` as a matrix acting on column vectors.
pub fn reflection(q: &Quiver, i: usize) -> IntMatrix {
    let c = q.cartan_matrix();
    let mut s = identity(q.vertex_count());
    for (l, cil) in c[i].iter().enumerate() {
        s[i][l] -= cil;
    }
    s
}

/// Number of paths `i ⇝ j`, the trivial path included.
pub fn path_counts(q: &Quiver) -> IntMatrix {
    let n = q.vertex_count();
    let mut paths = identity(n);
    // Canonical order is topological: successors have larger indices.
    for i in (0..n).rev() {
        for k in i + 1..n {
            let a = q.arrow_count(i, k);
            if a == 0 {
                continue;
            }
            for j in 0..n {
                paths[i][j] += a * paths[k][j];
            }
        }
    }
    paths
}

/// `dim P_i` for every vertex: `(dim P_i)_j` = number of paths `i ⇝ j`.
pub fn proj_dims(q: &Quiver) -> Vec<DimVector> {
    path_counts(q)
        .into_iter()
        .map(DimVector::from_unchecked)
        .collect()
}

/// `dim I_i` for every vertex: `(dim I_i)_j` = number of paths `j ⇝ i`.
pub fn inj_dims(q: &Quiver) -> Vec<DimVector> {
    let p = path_counts(q);
    let n = q.vertex_count();
    (0..n)
        .map(|i| DimVector::from_unchecked((0..n).map(|j| p[j][i]).collect()))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoxeterData {
    pub class: Classification,
    pub phi: IntMatrix,
    pub phi_inv: IntMatrix,
    pub rho: f64,
    /// Positive eigenvector of `Φ⁻¹` for `ρ` (limit direction of `τ⁻ⁿ P_i`),
    /// unit length.
    pub y_minus: Vec<f64>,
    /// Positive eigenvector of `Φ` for `ρ` (limit direction of `τⁿ I_i`).
    pub y_plus: Vec<f64>,
}

/// Unit null vector of `m − λ I` (smallest singular direction), oriented to
/// a positive coordinate sum.
fn eigenvector(m: &IntMatrix, lambda: f64) -> Vec<f64> {
    let n = m.len();
    let shifted = DMatrix::from_fn(n, n, |i, j| {
        m[i][j] as f64 - if i == j { lambda } else { 0.0 }
    });
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let k = (0..n)
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap();
    let mut v: Vec<f64> = v_t.row(k).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

pub fn coxeter(q: &Quiver) -> Result<CoxeterData> {
    let class = q.connected_class()?;
    if class == Classification::Dynkin {
        return Err(Error::DynkinInput);
    }
    let n = q.vertex_count();
    let mut phi_inv = identity(n);
    let mut phi = identity(n);
    for i in 0..n {
        let s = reflection(q, i);
        phi_inv = mat_mul(&s, &phi_inv);
        phi = mat_mul(&phi, &s);
    }
    let rho = poly::spectral_radius(&phi_inv);
    let (y_minus, y_plus) = if class == Classification::ExtendedDynkin {
        let y = eigenvector(&phi_inv, 1.0);
        (y.clone(), y)
    } else {
        (eigenvector(&phi_inv, rho), eigenvector(&phi, rho))
    };
    Ok(CoxeterData {
        class,
        phi,
        phi_inv,
        rho,
        y_minus,
        y_plus,
    })
}

impl CoxeterData {
    pub fn determinant(&self) -> i64 {
        let c = poly::charpoly(&self.phi);
        let constant = c.0.first().cloned().unwrap_or_else(BigRational::zero);
        let sign = if self.phi.len().is_multiple_of(2) {
            1
        } else {
            -1
        };
        (constant.to_integer() * BigInt::from(sign))
            .to_i64()
            .unwrap_or(0)
    }
}

/// `Φ⁻ᵏ(dim P_i)` for `k = 0..=n_max`, truncated before the first vector
/// that is zero or has a negative entry.
pub fn tau_orbit(q: &Quiver, i: usize, n_max: usize) -> Result<Vec<DimVector>> {
    let cox = coxeter(q)?;
    orbit_with(&cox, &proj_dims(q), i, n_max)
}

fn orbit_with(
    cox: &CoxeterData,
    proj: &[DimVector],
    i: usize,
    n_max: usize,
) -> Result<Vec<DimVector>> {
    let start = proj
        .get(i)
        .ok_or_else(|| Error::OutOfRange(format!("vertex index {i}")))?
        .to_vec();
    let mut out = vec![DimVector::from_unchecked(start.clone())];
    let mut x = start;
    for k in 1..=n_max {
        x = checked_mat_vec(&cox.phi_inv, &x)
            .ok_or_else(|| Error::Overflow(format!("orbit entry at k = {k} exceeds 64 bits")))?;
        if x.iter().any(|&c| c < 0) || x.iter().all(|&c| c == 0) {
            break;
        }
        out.push(DimVector::from_unchecked(x.clone()));
    }
    Ok(out)
}

/// `Φ⁻ᵏ(dim P_i)/ρᵏ` (wild) or `Φ⁻ᵏ(dim P_i)/k` (extended Dynkin, `k ≥ 1`),
/// in floating point.
pub fn normalized_orbit(q: &Quiver, i: usize, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let cox = coxeter(q)?;
    let proj = proj_dims(q);
    let mut x: Vec<f64> = proj
        .get(i)
        .ok_or_else(|| Error::OutOfRange(format!("vertex index {i}")))?
        .iter()
        .map(|&c| c as f64)
        .collect();
    let wild = cox.class == Classification::Wild;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(x.clone());
    for k in 1..=n_max {
        let mut next: Vec<f64> = cox
            .phi_inv
            .iter()
            .map(|row| row.iter().zip(&x).map(|(&a, b)| a as f64 * b).sum())
            .collect();
        if wild {
            next.iter_mut().for_each(|c| *c /= cox.rho);
            x = next.clone();
            out.push(next);
        } else {
            x = next.clone();
            out.push(next.iter().map(|c| c / k as f64).collect());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeRow {
    pub k: usize,
    pub dim: DimVector,
    /// Exact slope, as `p/q`.
    pub slope: String,
    pub slope_f64: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeReport {
    pub vertex: String,
    pub rho: f64,
    pub y_minus: Vec<f64>,
    /// `μ(y⁻)` from the eigenvector.
    pub limit_slope: f64,
    /// Exact slope of `Φ⁻ᴷ(dim P_i)` for the reference index `K` used for the
    /// gaps; agrees with `limit_slope` up to rounding for wild quivers.
    pub reference_slope: f64,
    pub reference_k: usize,
    /// Fitted `λ⁻` with `Φ⁻ⁿ(dim P_i)/ρⁿ → λ⁻ y⁻` (wild) or `/n` (extended
    /// Dynkin).
    pub lambda_fit: f64,
    pub rows: Vec<SlopeRow>,
}

fn big_slope(mu: &SlopeFunction, x: &[BigInt]) -> BigRational {
    let conv = |r: &Rational| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let mut theta = BigRational::zero();
    let mut kappa = BigRational::zero();
    for ((t, k), c) in mu.theta().iter().zip(mu.kappa()).zip(x) {
        let c = BigRational::from_integer(c.clone());
        theta += conv(t) * &c;
        kappa += conv(k) * &c;
    }
    theta / kappa
}

fn big_to_f64(x: &BigRational) -> f64 {
    // Scale to keep tiny differences representable.
    x.to_f64().unwrap_or_else(|| {
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        sign * f64::MIN_POSITIVE
    })
}

/// Slopes along the preprojective orbit of `P_i` and their distance to the
/// slope of the limit direction `y⁻`.
///
/// For wild quivers the gaps `|μ(Φ⁻ᵏ dim P_i) − μ(y⁻)|` decay geometrically
/// below double precision, so they are evaluated exactly against
/// `μ(Φ⁻ᴷ dim P_i)` with `K = 3·n_max + 30`, whose distance to `μ(y⁻)` is
/// negligible at that scale. For extended Dynkin quivers the gaps decay like
/// `1/k` and are measured against `μ(y⁻)` directly.
pub fn slope_convergence_report(
    q: &Quiver,
    mu: &SlopeFunction,
    i: usize,
    n_max: usize,
) -> Result<SlopeReport> {
    let cox = coxeter(q)?;
    if mu.len() != q.vertex_count() {
        return Err(Error::IndexMismatch {
            expected: q.vertex_count(),
            got: mu.len(),
        });
    }
    let proj = proj_dims(q);
    let orbit = orbit_with(&cox, &proj, i, n_max)?;
    let y = &cox.y_minus;
    let theta_y: f64 = mu
        .theta()
        .iter()
        .zip(y)
        .map(|(t, c)| rational::to_f64(t) * c)
        .sum();
    let kappa_y: f64 = mu
        .kappa()
        .iter()
        .zip(y)
        .map(|(k, c)| rational::to_f64(k) * c)
        .sum();
    let limit_slope = theta_y / kappa_y;
    let wild = cox.class == Classification::Wild;

    let reference_k = 3 * n_max + 30;
    let phi_inv: Vec<Vec<BigInt>> = cox
        .phi_inv
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut big_orbit: Vec<Vec<BigInt>> = vec![proj[i].iter().map(|&x| BigInt::from(x)).collect()];
    let horizon = if wild { reference_k } else { n_max };
    for _ in 0..horizon {
        let x = big_orbit.last().unwrap();
        let next = phi_inv
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        big_orbit.push(next);
    }
    let reference = big_slope(mu, &big_orbit[horizon]);
    let reference_slope = big_to_f64(&reference);

    let rows = orbit
        .iter()
        .enumerate()
        .map(|(k, dim)| {
            let exact = mu.slope(dim)?;
            let slope_f64 = rational::to_f64(&exact);
            let gap = if wild {
                big_to_f64(&(big_slope(mu, &big_orbit[k]) - &reference).abs())
            } else {
                (slope_f64 - limit_slope).abs()
            };
            Ok(SlopeRow {
                k,
                dim: dim.clone(),
                slope: exact.to_string(),
                slope_f64,
                gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let last = &big_orbit[horizon];
    let scale = if wild {
        cox.rho.powi(horizon as i32)
    } else {
        horizon.max(1) as f64
    };
    let lambda_fit = last
        .iter()
        .zip(y)
        .map(|(c, yi)| c.to_f64().unwrap_or(f64::INFINITY) / scale * yi)
        .sum::<f64>();

    Ok(SlopeReport {
        vertex: q.vertex_names()[i].clone(),
        rho: cox.rho,
        y_minus: y.clone(),
        limit_slope,
        reference_slope,
        reference_k: horizon,
        lambda_fit,
        rows,
    })
}

/// CSV with columns `k,dim,slope,gap`.
pub fn slopes_csv(report: &SlopeReport) -> String {
    let mut out = String::from("k,dim,slope,gap\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},\"{}\",{},{}\n",
            r.k,
            r.dim,
            r.slope,
            rational::fmt_float(r.gap)
        ));
    }
    out
}
