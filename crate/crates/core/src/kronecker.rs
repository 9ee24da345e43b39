//! Closed forms for the generalized Kronecker quiver with `m ≥ 3` arrows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::DimVector;
use crate::rational::{self, Rational};
use crate::stability::SlopeFunction;

/// Numerical data of a Kronecker dimension vector with a positive `κ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KroneckerInstance {
    pub m: u32,
    pub d1: i64,
    pub d2: i64,
    pub kappa1: Rational,
    pub kappa2: Rational,
}

fn check_m(m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::OutOfRange(format!(
            "m = {m}: at least 3 arrows are required"
        )));
    }
    Ok(())
}

impl KroneckerInstance {
    /// Requires `m ≥ 3`, `d₁, d₂ > 0`, `κ > 0` and `⟨d,d⟩ < 0`.
    pub fn new(m: u32, d1: i64, d2: i64, kappa1: Rational, kappa2: Rational) -> Result<Self> {
        check_m(m)?;
        if d1 <= 0 || d2 <= 0 {
            return Err(Error::OutOfRange(format!(
                "d = ({d1},{d2}) must be positive"
            )));
        }
        let zero = Rational::from_integer(0);
        if kappa1 <= zero || kappa2 <= zero {
            return Err(Error::OutOfRange("kappa must be positive".into()));
        }
        let form = d1 * d1 - m as i64 * d1 * d2 + d2 * d2;
        if form >= 0 {
            return Err(Error::OutOfRange(format!(
                "<d,d> = {form} must be negative for d = ({d1},{d2}), m = {m}"
            )));
        }
        Ok(KroneckerInstance {
            m,
            d1,
            d2,
            kappa1,
            kappa2,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.d2 as f64 / self.d1 as f64
    }

    /// `κ(d) = κ₁d₁ + κ₂d₂`.
    pub fn kappa_d(&self) -> Rational {
        self.kappa1 * self.d1 as i128 + self.kappa2 * self.d2 as i128
    }

    /// Slope normalized so that `μ(d) = 0`.
    pub fn slope(&self) -> SlopeFunction {
        let theta = normalized_theta(self.d1, self.d2);
        SlopeFunction::new(
            theta.iter().map(|&t| rational::int(t)).collect(),
            vec![self.kappa1, self.kappa2],
        )
        .expect("kappa validated")
    }
}

/// `c_d(x) = ½(mx + d₂ − √((mx − d₂)² + 4x(d₁ − x)))` for `0 ≤ x ≤ d₁`.
pub fn c_d(m: u32, d1: i64, d2: i64, x: f64) -> Result<f64> {
    if !(0.0..=d1 as f64).contains(&x) {
        return Err(Error::OutOfRange(format!("x = {x} outside [0, {d1}]")));
    }
    Ok(c_unchecked(m as f64, d1 as f64, d2 as f64, x))
}

fn c_unchecked(m: f64, d1: f64, d2: f64, x: f64) -> f64 {
    let a = m * x - d2;
    0.5 * (m * x + d2 - (a * a + 4.0 * x * (d1 - x)).sqrt())
}

/// Exact test `⟨e, d − e⟩ ≥ 0` on the `m`-Kronecker quiver.
pub fn embeds_closed_form(m: u32, e: &DimVector, d: &DimVector) -> Result<bool> {
    if e.len() != 2 || d.len() != 2 {
        return Err(Error::IndexMismatch {
            expected: 2,
            got: if e.len() != 2 { e.len() } else { d.len() },
        });
    }
    let f = d.minus(e)?;
    Ok(e[0] * f[0] + e[1] * f[1] - m as i64 * e[0] * f[1] >= 0)
}

/// `ζ_α(t) = c(t)/(α t) − 1` with `c` the `d₁ = 1` normalization of `c_d`,
/// for `0 < t < 1`.
pub fn zeta(m: u32, alpha: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::OutOfRange(format!("t = {t} outside (0,1)")));
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "alpha = {alpha} must be positive"
        )));
    }
    Ok(c_unchecked(m as f64, 1.0, alpha, t) / (alpha * t) - 1.0)
}

/// `ε_d(δ) = d₁d₂ ζ_α(δ) / (κ(d) + κ₂d₂ ζ_α(δ))`.
pub fn epsilon_bound(inst: &KroneckerInstance, delta: f64) -> Result<f64> {
    let z = zeta(inst.m, inst.alpha(), delta)?;
    let (d1, d2) = (inst.d1 as f64, inst.d2 as f64);
    let kd = rational::to_f64(&inst.kappa_d());
    let k2 = rational::to_f64(&inst.kappa2);
    Ok(d1 * d2 * z / (kd + k2 * d2 * z))
}

/// Translation `(δ, ε) ↦ (δ′, ε′)` from the Kronecker-module expander
/// convention to slope expanders for the normalized slope.
pub fn translate_delta_eps(
    inst: &KroneckerInstance,
    delta: &Rational,
    eps: &Rational,
) -> Result<(Rational, Rational)> {
    let zero = Rational::from_integer(0);
    if *delta <= zero || *delta >= Rational::from_integer(1) {
        return Err(Error::OutOfRange(format!(
            "delta = {delta} must lie in (0,1)"
        )));
    }
    if *eps <= zero {
        return Err(Error::OutOfRange(format!(
            "epsilon = {eps} must be positive"
        )));
    }
    let a = inst.kappa1 * inst.d1 as i128;
    let b = inst.kappa2 * inst.d2 as i128;
    let kd = a + b;
    let delta_p = (*delta * a + b) / kd;
    let eps_p = *eps * (inst.d1 * inst.d2) as i128 / (kd + b * eps);
    Ok((delta_p, eps_p))
}

/// `Θ = (d₂, −d₁)`, so that `Θ(d) = 0`.
pub fn normalized_theta(d1: i64, d2: i64) -> [i64; 2] {
    [d2, -d1]
}

/// CSV rows `delta,zeta,epsilon_bound` on an open grid.
pub fn curve_csv(inst: &KroneckerInstance, deltas: &[Rational]) -> Result<String> {
    let mut out = String::from("delta,zeta,epsilon_bound\n");
    for delta in deltas {
        let x = rational::to_f64(delta);
        let z = zeta(inst.m, inst.alpha(), x)?;
        let b = epsilon_bound(inst, x)?;
        out.push_str(&format!(
            "{},{},{}\n",
            delta,
            rational::fmt_float(z),
            rational::fmt_float(b)
        ));
    }
    Ok(out)
}
