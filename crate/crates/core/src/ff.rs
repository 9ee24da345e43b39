//! Linear algebra over a prime field `F_p`, with vectors stored as rows of
//! `u64` residues.

use std::ops::ControlFlow;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small enough that products fit in u128.
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduced row echelon form of the given rows (zero rows dropped), with the
/// pivot columns.
pub fn rref(rows: &[Vec<u64>], ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(src) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, src);
        let inv = inverse(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul(*x, inv, p);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    let sub = mul(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    rref(rows, ncols, p).1.len()
}

/// `matrix · x` for a `rows × cols` matrix and a column vector `x`.
pub fn apply(matrix: &[Vec<u64>], x: &[u64], p: u64) -> Vec<u64> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (&a, &b)| (acc + mul(a, b, p)) % p)
        })
        .collect()
}

/// Gaussian binomial `[n choose k]_p`, saturating.
pub fn gaussian_binomial(n: u64, k: u64, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = p.saturating_pow((n - i) as u32).saturating_sub(1);
        let b = p.saturating_pow((i + 1) as u32).saturating_sub(1);
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX {
            return u128::MAX;
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Calls `visit` with the RREF basis of every `k`-dimensional subspace of
/// `F_p^n`, pivot sets in lexicographic order. Stops early on `Break`.
pub fn for_each_subspace<B>(
    n: usize,
    k: usize,
    p: u64,
    visit: &mut impl FnMut(&[Vec<u64>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k > n {
        return ControlFlow::Continue(());
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                ((pivots[r] + 1)..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut basis = vec![vec![0u64; n]; k];
        for (r, &c) in pivots.iter().enumerate() {
            basis[r][c] = 1;
        }
        let mut digits = vec![0u64; free.len()];
        loop {
            for (&(r, c), &x) in free.iter().zip(&digits) {
                basis[r][c] = x;
            }
            visit(&basis)?;
            let mut pos = digits.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                if digits[pos] + 1 < p {
                    digits[pos] += 1;
                    done = false;
                    break;
                }
                digits[pos] = 0;
            }
            if done {
                break;
            }
        }
        // Next pivot combination.
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}
