//! Spectral uniform-expansion certificates for wild quivers.
//!
//! For a connected wild quiver and `d` in the interior of the fundamental
//! domain, the slope `μ = {d,_} / −(d,_)` satisfies
//! `ε_eff_{k·d}(δ) ≥ C·(1−δ)` for every `k`, where `C` is derived from the
//! smallest Cartan eigenvalue `λ₁`, the defect `γ = (d,d)/(d·d) − λ₁` and the
//! smallest eigenvalue `λ_H` of the form restricted to `H = Ker (d,_)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{Classification, DimVector, Quiver};
use crate::rational::Rational;

/// Tolerance for eigenvalue comparisons and validity margins.
pub const TOL: f64 = 1e-9;

pub fn cartan_f64(q: &Quiver) -> DMatrix<f64> {
    let c = q.cartan_matrix();
    let n = q.vertex_count();
    DMatrix::from_fn(n, n, |i, j| c[i][j] as f64)
}

/// Ascending eigenvalues with orthonormal eigenvectors (as columns).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn of_symmetric(m: &DMatrix<f64>) -> Spectrum {
        let eig = SymmetricEigen::new(m.clone());
        let n = m.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (k, &i) in order.iter().enumerate() {
            let mut col = eig.eigenvectors.column(i).into_owned();
            if col.sum() < 0.0 {
                col = -col;
            }
            eigenvectors.set_column(k, &col);
        }
        Spectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }
}

/// Eigen-decomposition of the Cartan matrix of a connected quiver. Each
/// eigenvector is oriented to have positive coordinate sum, so the
/// eigenvector for `λ₁` is positive when the quiver is wild.
pub fn cartan_spectrum(q: &Quiver) -> Result<Spectrum> {
    let comps = q.components().len();
    if comps != 1 {
        return Err(Error::Disconnected(comps));
    }
    Ok(Spectrum::of_symmetric(&cartan_f64(q)))
}

/// All `(d, i) ≤ 0` (or `< 0` together with `d > 0` when `strict`).
pub fn in_fundamental_domain(q: &Quiver, d: &DimVector, strict: bool) -> Result<bool> {
    let row = q.sym_row(d)?;
    Ok(if strict {
        d.iter().all(|&x| x > 0) && row.iter().all(|&x| x < 0)
    } else {
        !d.is_zero() && row.iter().all(|&x| x <= 0)
    })
}

/// Largest admissible `γ`: `−λ₁` if `λ₂ ≥ 0`, else `λ₁(λ₂−λ₁)/(λ₁+λ₂)`.
pub fn gamma_threshold(lambda1: f64, lambda2: f64) -> f64 {
    if lambda2 >= 0.0 {
        -lambda1
    } else {
        lambda1 * (lambda2 - lambda1) / (lambda1 + lambda2)
    }
}

/// Smallest eigenvalue of the form `C` restricted to `H = {x : xᵀ C v = 0}`,
/// using an orthonormal basis of the Euclidean complement of `C v`.
/// Returns `None` when `H = {0}` (one dimension).
pub fn restricted_min_eigenvalue(c: &DMatrix<f64>, v: &[f64]) -> Result<Option<f64>> {
    let n = c.nrows();
    if v.len() != n {
        return Err(Error::IndexMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    let normal = c * DVector::from_column_slice(v);
    let norm = normal.norm();
    if norm <= 1e-14 * c.norm().max(1.0) {
        // (v,_) vanishes identically: H is everything.
        return Ok(Some(Spectrum::of_symmetric(c).eigenvalues[0]));
    }
    if n == 1 {
        return Ok(None);
    }
    let basis = complement_basis(&(normal / norm));
    let restricted = basis.transpose() * c * &basis;
    Ok(Some(Spectrum::of_symmetric(&restricted).eigenvalues[0]))
}

/// Columns `2..n` of the Householder reflection sending the unit vector `u`
/// to a multiple of the first axis: an orthonormal basis of `u⊥`.
fn complement_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let s = if u[0] >= 0.0 { -1.0 } else { 1.0 };
    let mut z = u.clone();
    z[0] -= s;
    let z = z.normalize();
    let reflector = DMatrix::identity(n, n) - 2.0 * &z * z.transpose();
    reflector.columns(1, n - 1).into_owned()
}

/// The uniform-expansion certificate for `(Q, d)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCertificate {
    pub d: DimVector,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Eigenvector for `λ₁`, scaled so that its smallest entry is 1.
    pub v1: Vec<f64>,
    /// `(d,d)/(d·d)`, computed exactly and rounded once.
    pub rayleigh: f64,
    pub gamma: f64,
    pub gamma_threshold: f64,
    /// `None` when `H = {0}`.
    pub lambda_h: Option<f64>,
    pub c_constant: f64,
    pub connected: bool,
    pub wild: bool,
    pub interior: bool,
    pub gamma_below_threshold: bool,
    pub valid: bool,
}

impl SpectralCertificate {
    /// Lower bound `C·(1−δ)` for `ε_eff(δ)`.
    pub fn bound(&self, delta: f64) -> f64 {
        self.c_constant * (1.0 - delta)
    }

    pub fn bound_table(&self, deltas: &[Rational]) -> Vec<(Rational, f64)> {
        deltas
            .iter()
            .map(|d| (*d, self.bound(crate::rational::to_f64(d))))
            .collect()
    }
}

/// Computes every field of the certificate and the validity flags, without
/// rejecting invalid inputs (only a disconnected quiver is an error).
pub fn evaluate_certificate(q: &Quiver, d: &DimVector) -> Result<SpectralCertificate> {
    let dd = q.sym_form(d, d)?;
    if d.is_zero() {
        return Err(Error::ZeroVector);
    }
    let spectrum = cartan_spectrum(q)?;
    let wild = q.connected_class()? == Classification::Wild;
    let interior = in_fundamental_domain(q, d, true)?;
    let lambda1 = spectrum.eigenvalues[0];
    let lambda2 = spectrum
        .eigenvalues
        .get(1)
        .copied()
        .unwrap_or(f64::INFINITY);
    let mut v1 = spectrum.vector(0);
    let min = v1.iter().copied().fold(f64::INFINITY, f64::min);
    if min.abs() > TOL {
        v1.iter_mut().for_each(|x| *x /= min);
    }
    let norm2: i64 = d.iter().map(|x| x * x).sum();
    let rayleigh = crate::rational::to_f64(&Rational::new(dd as i128, norm2 as i128));
    let gamma = rayleigh - lambda1;
    let gamma_threshold = gamma_threshold(lambda1, lambda2);
    let gamma_below_threshold = gamma >= -TOL && gamma < gamma_threshold - TOL;
    let dv: Vec<f64> = d.iter().map(|&x| x as f64).collect();
    let lambda_h = restricted_min_eigenvalue(&cartan_f64(q), &dv)?;
    let c_constant = match lambda_h {
        Some(l) if l < 0.0 => 1.0 - l / (lambda1 + gamma),
        _ => 1.0,
    };
    let valid = wild && interior && gamma_below_threshold && c_constant > 0.0;
    Ok(SpectralCertificate {
        d: d.clone(),
        lambda1,
        lambda2,
        v1,
        rayleigh,
        gamma,
        gamma_threshold,
        lambda_h,
        c_constant,
        connected: true,
        wild,
        interior,
        gamma_below_threshold,
        valid,
    })
}

/// A valid certificate for `(Q, d)`, or the first failed hypothesis.
pub fn certificate(q: &Quiver, d: &DimVector) -> Result<SpectralCertificate> {
    q.sym_form(d, d)?;
    let class = q.connected_class()?;
    if class != Classification::Wild {
        return Err(Error::NotWild(class.to_string()));
    }
    if !in_fundamental_domain(q, d, true)? {
        return Err(Error::NotInterior(d.to_string()));
    }
    let cert = evaluate_certificate(q, d)?;
    if !cert.gamma_below_threshold {
        return Err(Error::GammaTooLarge {
            gamma: cert.gamma,
            threshold: cert.gamma_threshold,
        });
    }
    debug_assert!(cert.valid);
    Ok(cert)
}

pub const DEFAULT_SEARCH_CAP: u64 = 1000;

/// Searches `d = round(t · v₁ / min v₁)` for `t = 1, 2, …, cap` and returns
/// the first `d` with a valid certificate.
pub fn find_expander_dimvector(q: &Quiver, cap: u64) -> Result<(DimVector, SpectralCertificate)> {
    let class = q.connected_class()?;
    if class != Classification::Wild {
        return Err(Error::NotWild(class.to_string()));
    }
    let spectrum = cartan_spectrum(q)?;
    let v1 = spectrum.vector(0);
    let min = v1.iter().copied().fold(f64::INFINITY, f64::min);
    for t in 1..=cap {
        let coords: Vec<i64> = v1
            .iter()
            .map(|x| (t as f64 * x / min).round() as i64)
            .collect();
        let d = DimVector::new(coords)?;
        match certificate(q, &d) {
            Ok(cert) => return Ok((d, cert)),
            Err(Error::NotInterior(_)) | Err(Error::GammaTooLarge { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted(cap))
}

/// One random instance of the hyperplane eigenvalue estimate.
#[derive(Debug, Clone, Serialize)]
pub struct AppendixTrial {
    pub trial: usize,
    pub eigenvalues: Vec<f64>,
    pub gamma: f64,
    pub threshold: f64,
    pub lambda_h: f64,
    /// `λ_H − (λ₁ + γ)`.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub worst_margin: f64,
    pub per_trial: Vec<AppendixTrial>,
}

/// Random symmetric form with the given spectrum, obtained by conjugating
/// `diag(λ)` with the orthogonal factor of a Gaussian matrix.
fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    q
}

/// Unit vector (in eigen-coordinates of `diag(lambdas)`) with Rayleigh
/// quotient `lambdas[0] + gamma`. Requires `0 ≤ γ < λ₂ − λ₁`.
fn unit_vector_with_rayleigh(lambdas: &[f64], gamma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = lambdas.len();
    let mut w: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                rng.sample::<f64, _>(StandardNormal)
            }
        })
        .collect();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.iter_mut().for_each(|x| *x /= norm);
    let rw: f64 = w.iter().zip(lambdas).map(|(x, l)| l * x * x).sum();
    let sin2 = (gamma / (rw - lambdas[0])).clamp(0.0, 1.0);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut v: Vec<f64> = w.iter().map(|x| x * sin2.sqrt()).collect();
    v[0] = sign * (1.0 - sin2).sqrt();
    v
}

fn random_spectrum(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let lambda1 = -rng.random_range(0.5..5.0);
    // λ₂ lands on either side of zero so both threshold branches occur.
    let lambda2 = lambda1 + rng.random_range(0.05..(2.0 * -lambda1));
    let mut rest: Vec<f64> = (2..n)
        .map(|_| lambda2 + rng.random_range(0.0..8.0))
        .collect();
    rest.sort_by(f64::total_cmp);
    let mut out = vec![lambda1, lambda2];
    out.extend(rest);
    out
}

/// Checks on `trials` random instances that the smallest eigenvalue of a
/// symmetric form restricted to `Ker (v,_)` exceeds `λ₁ + γ`, where `v` is
/// a unit vector with `(v,v) = λ₁ + γ` and `γ` is below the threshold.
pub fn verify_appendix_lemma(n: usize, trials: usize, seed: u64) -> Result<AppendixReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "dimension n = {n} must be at least 2"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_trial = Vec::with_capacity(trials);
    for trial in 0..trials {
        let lambdas = random_spectrum(n, &mut rng);
        let threshold = gamma_threshold(lambdas[0], lambdas[1]);
        let gamma = rng.random_range(0.0..1.0) * threshold;
        let v = unit_vector_with_rayleigh(&lambdas, gamma, &mut rng);
        let rot = random_orthogonal(n, &mut rng);
        let form =
            &rot * DMatrix::from_diagonal(&DVector::from_vec(lambdas.clone())) * rot.transpose();
        let form = (&form + form.transpose()) * 0.5;
        let v_rot = &rot * DVector::from_vec(v);
        let lambda_h = restricted_min_eigenvalue(&form, v_rot.as_slice())?
            .expect("n >= 2 leaves a nonzero hyperplane");
        let margin = lambda_h - (lambdas[0] + gamma);
        per_trial.push(AppendixTrial {
            trial,
            eigenvalues: lambdas,
            gamma,
            threshold,
            lambda_h,
            margin,
            pass: margin > -TOL,
        });
    }
    let passed = per_trial.iter().filter(|t| t.pass).count();
    let worst_margin = per_trial
        .iter()
        .map(|t| t.margin)
        .fold(f64::INFINITY, f64::min);
    Ok(AppendixReport {
        n,
        seed,
        trials,
        passed,
        worst_margin,
        per_trial,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbePoint {
    pub fraction: f64,
    pub gamma: f64,
    pub lambda_h: f64,
    pub margin: f64,
}

/// Two-dimensional probe with spectrum `(λ₁, λ₂)`: for each fraction `f`,
/// `γ = f · threshold` and `v = (cos θ, sin θ)` with Rayleigh quotient
/// `λ₁ + γ`. The margin `λ_H − (λ₁+γ)` tends to 0 as `f → 1`.
pub fn tightness_probe(lambda1: f64, lambda2: f64, fractions: &[f64]) -> Result<Vec<ProbePoint>> {
    let threshold = gamma_threshold(lambda1, lambda2);
    let form = DMatrix::from_diagonal(&DVector::from_vec(vec![lambda1, lambda2]));
    fractions
        .iter()
        .map(|&fraction| {
            let gamma = fraction * threshold;
            let sin2 = gamma / (lambda2 - lambda1);
            let v = [(1.0 - sin2).sqrt(), sin2.sqrt()];
            let lambda_h = restricted_min_eigenvalue(&form, &v)?.expect("n = 2");
            Ok(ProbePoint {
                fraction,
                gamma,
                lambda_h,
                margin: lambda_h - (lambda1 + gamma),
            })
        })
        .collect()
}

/// `R(x) = Σ λ_i² v_i² / (λ_i − x)`, with `v` in eigen-coordinates. Its zero
/// in `(λ₁, λ₂)` is the restricted minimal eigenvalue.
pub fn secular_function(lambdas: &[f64], v: &[f64], x: f64) -> f64 {
    lambdas
        .iter()
        .zip(v)
        .map(|(l, vi)| l * l * vi * vi / (l - x))
        .sum()
}
