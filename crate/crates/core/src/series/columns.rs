//! Column extraction `a_{k,n} = [z^n] A_k(z)`.
//!
//! With `α(z) = 1 + 2z + √(1−4z)` the fixed-point generating function splits
//! as `(α − 2zq) Σ_k A_k(z) q^k = 2`, so `α A_0 = 2` and `α A_k = 2z A_{k−1}`.
//! Since `α_0 = 2`, `α_1 = 0` and `α_j = −2 C_{j−1}` for `j ≥ 2`, reading off
//! coefficients gives
//!
//! ```text
//! a_{k,n} = a_{k−1,n−1} + Σ_{j=2}^{n−k} C_{j−1} a_{k,n−j},    a_{0,0} = 1.
//! ```
//!
//! Every term is non-negative, so the floating-point version loses no
//! precision to cancellation.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::exec::Exec;
use crate::numbers::{catalan_numbers, catalan_over_four_pow};

/// Exact counts `a_{k,n}` for `k ≤ k_max`, `n ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactColumns {
    n_max: usize,
    // cols[k][n - k]
    cols: Vec<Vec<BigUint>>,
}

impl ExactColumns {
    pub(crate) fn build(k_max: usize, n_max: usize, exec: Exec) -> Self {
        let k_max = k_max.min(n_max);
        let catalan = catalan_numbers(n_max);
        let mut cols: Vec<Vec<BigUint>> = vec![Vec::with_capacity(n_max + 1); k_max + 1];
        for n in 0..=n_max {
            let top = k_max.min(n);
            let fresh = exec.map(top + 1, |k| {
                let col = &cols[k];
                let mut acc = if k == 0 {
                    BigUint::from((n == 0) as u32)
                } else {
                    cols[k - 1].get(n - k).cloned().unwrap_or_default()
                };
                // Σ_{j=2}^{n-k} C_{j-1} a_{k,n-j}
                for j in 2..=n - k {
                    let a = &col[n - j - k];
                    if !a.is_zero() {
                        acc += &catalan[j - 1] * a;
                    }
                }
                acc
            });
            for (k, v) in fresh.into_iter().enumerate() {
                cols[k].push(v);
            }
        }
        ExactColumns { n_max, cols }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.cols.len() - 1
    }

    /// `a_{k,n}`; zero for `n < k`.
    pub fn get(&self, k: usize, n: usize) -> BigUint {
        assert!(
            k <= self.k_max() && n <= self.n_max,
            "({k}, {n}) outside table"
        );
        if n < k {
            BigUint::zero()
        } else {
            self.cols[k][n - k].clone()
        }
    }

    /// `a_{0,n}, …, a_{min(n, k_max), n}`.
    pub fn row(&self, n: usize) -> Vec<BigUint> {
        (0..=self.k_max().min(n)).map(|k| self.get(k, n)).collect()
    }

    pub fn column(&self, k: usize) -> &[BigUint] {
        &self.cols[k]
    }
}

/// Entries smaller than this are flushed to zero. Each entry feeds later
/// entries with non-negative weights bounded polynomially in `n`, so the
/// total effect on any normalised quantity stays below `1e-270`, while
/// subnormal arithmetic is avoided entirely.
const FLUSH: f64 = 1e-290;

/// Scaled columns `b_{k,n} = a_{k,n} · t^k / ρ^n` in double precision.
///
/// With tilt `t = 1` and base `ρ = 4` these are the normalised counts
/// `a_{k,n}/4^n`. With `t = q` and `ρ` the exponential growth rate of
/// `Z_n(q)`, row `n` is proportional to the fixed-point law under the biased
/// measure and stays inside the double range for any `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledColumns {
    n_max: usize,
    tilt: f64,
    base: f64,
    cols: Vec<Vec<f64>>,
}

impl ScaledColumns {
    pub(crate) fn build(k_max: usize, n_max: usize, tilt: f64, base: f64, exec: Exec) -> Self {
        assert!(tilt > 0.0 && base > 0.0, "tilt and base must be positive");
        let k_max = k_max.min(n_max);
        // w_j = C_{j-1} / ρ^j for j = 0..=n_max (w_0 = w_1 = 0 are never used)
        let scaled = catalan_over_four_pow(n_max + 1);
        let ratio = 4.0 / base;
        let mut weights = vec![0.0; n_max + 1];
        let mut power = 1.0;
        for j in 1..=n_max {
            power *= ratio;
            if power < FLUSH {
                power = 0.0;
            }
            // C_{j-1}/4^j · (4/ρ)^j
            weights[j] = scaled[j - 1] * power;
            if weights[j] < FLUSH {
                weights[j] = 0.0;
            }
        }
        // reversed so that the convolution reads both operands forwards
        let reversed: Vec<f64> = weights.iter().rev().copied().collect();
        let step = tilt / base;

        let mut cols: Vec<Vec<f64>> = (0..=k_max)
            .map(|k| Vec::with_capacity(n_max + 1 - k))
            .collect();
        for n in 0..=n_max {
            let top = k_max.min(n);
            let fresh = exec.map(top + 1, |k| {
                let head = if k == 0 {
                    if n == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    step * cols[k - 1].get(n - k).copied().unwrap_or(0.0)
                };
                // Σ_{j=2}^{n-k} w_j b_{k,n-j}: column entries i = 0..n-k-1
                // pair with w_{n-k-i} = reversed[n_max - n + k + i]
                let len = (n - k).saturating_sub(1);
                let col = &cols[k][..len];
                let off = n_max - n + k;
                let v = head + dot(col, &reversed[off..off + len]);
                if v < FLUSH {
                    0.0
                } else {
                    v
                }
            });
            for (k, v) in fresh.into_iter().enumerate() {
                cols[k].push(v);
            }
        }
        ScaledColumns {
            n_max,
            tilt,
            base,
            cols,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.cols.len() - 1
    }

    pub fn tilt(&self) -> f64 {
        self.tilt
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// `a_{k,n} t^k / ρ^n`.
    pub fn get(&self, k: usize, n: usize) -> f64 {
        assert!(
            k <= self.k_max() && n <= self.n_max,
            "({k}, {n}) outside table"
        );
        if n < k {
            0.0
        } else {
            self.cols[k][n - k]
        }
    }

    pub fn row(&self, n: usize) -> Vec<f64> {
        (0..=self.k_max().min(n)).map(|k| self.get(k, n)).collect()
    }

    /// `ln Σ_k a_{k,n} t^k` (the log partition function when `k_max ≥ n`).
    pub fn ln_row_sum(&self, n: usize) -> f64 {
        let s: f64 = self.row(n).iter().sum();
        s.ln() + n as f64 * self.base.ln()
    }
}

/// Dot product with four independent accumulators; the summation order is
/// fixed so results are reproducible.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in chunks_a.zip(chunks_b) {
        for l in 0..4 {
            acc[l] += x[l] * y[l];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, rational_to_f64};

    #[test]
    fn small_exact_columns() {
        let t = ExactColumns::build(4, 4, Exec::Sequential);
        let col0: Vec<u64> = (0..=4).map(|n| t.get(0, n).try_into().unwrap()).collect();
        assert_eq!(col0, vec![1, 0, 1, 2, 6]);
        let row4: Vec<u64> = t
            .row(4)
            .into_iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(row4, vec![6, 4, 3, 0, 1]);
        for n in 0..=4 {
            assert_eq!(t.get(n, n), BigUint::from(1u32));
        }
    }

    #[test]
    fn truncated_columns_match_full() {
        let full = ExactColumns::build(40, 40, Exec::Sequential);
        let part = ExactColumns::build(5, 40, Exec::Parallel);
        for k in 0..=5 {
            assert_eq!(full.column(k), part.column(k));
        }
    }

    #[test]
    fn scaled_matches_exact_over_four_pow() {
        let exact = ExactColumns::build(120, 120, Exec::Sequential);
        let scaled = ScaledColumns::build(120, 120, 1.0, 4.0, Exec::Sequential);
        for n in 0..=120 {
            for k in 0..=n {
                let want =
                    rational_to_f64(&ratio(exact.get(k, n), BigUint::from(4u32).pow(n as u32)));
                let got = scaled.get(k, n);
                assert!(
                    (got - want).abs() <= 1e-13 * want.max(1e-300),
                    "({k},{n}) {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn strategies_give_identical_floats() {
        let a = ScaledColumns::build(300, 300, 3.0, 4.0, Exec::Sequential);
        let b = ScaledColumns::build(300, 300, 3.0, 4.0, Exec::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn dot_handles_tails() {
        let a: Vec<f64> = (0..7).map(|i| i as f64).collect();
        let b = vec![1.0; 7];
        assert_eq!(dot(&a, &b), 21.0);
        assert_eq!(dot(&[], &[]), 0.0);
    }
}
