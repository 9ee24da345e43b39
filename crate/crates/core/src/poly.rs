//! Exact characteristic polynomials of integer matrices and their roots.
//!
//! Roots are computed from the square-free part of the characteristic
//! polynomial, so repeated eigenvalues (e.g. the Jordan block of a Coxeter
//! transformation of an extended Dynkin quiver) come out at full precision.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with rational coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
        .trim()
    }

    fn monic(self) -> Poly {
        match self.0.last().cloned() {
            Some(lead) => Poly(self.0.into_iter().map(|c| c / &lead).collect()),
            None => self,
        }
    }

    /// Euclidean division.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (i, c) in divisor.0.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly(quot).trim(), Poly(rem).trim())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p′)`, monic.
    pub fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn coeffs_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs_f64()
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Complex roots of a square-free polynomial: eigenvalues of the
    /// companion matrix, polished by Newton steps.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        let p = self.clone().monic();
        let Some(n) = p.degree() else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let c = p.coeffs_f64();
        let companion = DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let dp = p.derivative();
        companion
            .complex_eigenvalues()
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..8 {
                    let d = dp.eval_complex(z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = p.eval_complex(z) / d;
                    z -= step;
                    if step.norm() <= 1e-17 * z.norm().max(1.0) {
                        break;
                    }
                }
                z
            })
            .collect()
    }
}

/// Characteristic polynomial `det(tI − A)` by Faddeev–LeVerrier, exact.
pub fn charpoly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{n−k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut trace = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -(trace / BigInt::from(k));
    }
    Poly(coeffs.into_iter().map(BigRational::from_integer).collect()).trim()
}

/// Largest modulus among the eigenvalues of an integer matrix.
pub fn spectral_radius(a: &[Vec<i64>]) -> f64 {
    charpoly(a)
        .square_free()
        .roots()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Real eigenvalues (deduplicated) in ascending order.
pub fn real_eigenvalues(a: &[Vec<i64>]) -> Vec<f64> {
    let mut out: Vec<f64> = charpoly(a)
        .square_free()
        .roots()
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * z.re.abs().max(1.0))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

pub fn is_positive(x: &BigRational) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Poly {
        Poly(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    #[test]
    fn characteristic_polynomials() {
        // t² − 7t + 1
        assert_eq!(charpoly(&[vec![-1, 3], vec![-3, 8]]), ints(&[1, -7, 1]));
        // (t − 1)²
        assert_eq!(charpoly(&[vec![-1, 2], vec![-2, 3]]), ints(&[1, -2, 1]));
        assert_eq!(
            charpoly(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]),
            ints(&[-30, 31, -10, 1])
        );
    }

    #[test]
    fn square_free_part() {
        assert_eq!(ints(&[1, -2, 1]).square_free(), ints(&[-1, 1]));
        // (t−1)²(t+2) → (t−1)(t+2)
        assert_eq!(ints(&[2, -3, 0, 1]).square_free(), ints(&[-2, 1, 1]));
    }

    #[test]
    fn radii() {
        let rho = spectral_radius(&[vec![-1, 3], vec![-3, 8]]);
        assert!((rho - (7.0 + 45f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((spectral_radius(&[vec![-1, 2], vec![-2, 3]]) - 1.0).abs() < 1e-15);
        // rotation by 90°: eigenvalues ±i
        assert!((spectral_radius(&[vec![0, -1], vec![1, 0]]) - 1.0).abs() < 1e-15);
        assert_eq!(
            real_eigenvalues(&[vec![0, -1], vec![1, 0]]),
            Vec::<f64>::new()
        );
    }
}
