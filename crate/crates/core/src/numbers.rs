//! Classical counting sequences computed from their own recurrences.
//!
//! These are deliberately independent of the generating-function engine so
//! they can serve as oracles for it.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Catalan numbers `C_0..=C_n_max` from the convolution recurrence
/// `C_{n+1} = Σ_{i=0}^{n} C_i C_{n-i}`.
pub fn catalan_by_convolution(n_max: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    c.push(BigUint::one());
    for n in 0..n_max {
        let mut next = BigUint::zero();
        for i in 0..=n {
            next += &c[i] * &c[n - i];
        }
        c.push(next);
    }
    c
}

/// Catalan numbers via the first-order ratio `C_{n+1} = C_n · 2(2n+1)/(n+2)`.
///
/// Linear cost; used for the series kernels, while
/// [`catalan_by_convolution`] stays the oracle.
pub fn catalan_numbers(n_max: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    c.push(BigUint::one());
    for n in 0..n_max {
        let next = &c[n] * BigUint::from(2 * (2 * n as u64 + 1)) / BigUint::from(n as u64 + 2);
        c.push(next);
    }
    c
}

/// `C_j / 4^{j+1}` for `j = 0..len` as doubles, via the same ratio.
pub fn catalan_over_four_pow(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut t = 0.25;
    for j in 0..len {
        out.push(t);
        t *= (2.0 * (2 * j + 1) as f64) / ((j + 2) as f64) / 4.0;
    }
    out
}

/// Derangement numbers `D_0..=D_n_max` from `D_n = (n-1)(D_{n-1} + D_{n-2})`.
pub fn derangements(n_max: usize) -> Vec<BigUint> {
    let mut d: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    d.push(BigUint::one());
    if n_max >= 1 {
        d.push(BigUint::zero());
    }
    for n in 2..=n_max {
        let next = BigUint::from(n as u64 - 1) * (&d[n - 1] + &d[n - 2]);
        d.push(next);
    }
    d
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigUint::from((n - k) as u64) / BigUint::from(k as u64 + 1);
        row.push(c.clone());
    }
    row
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// Falling factorial `(x)_m = x (x-1) ⋯ (x-m+1)`; zero when `m > x`.
pub fn falling_factorial(x: u64, m: u32) -> u64 {
    if m as u64 > x {
        return 0;
    }
    (0..m as u64).map(|i| x - i).product()
}
