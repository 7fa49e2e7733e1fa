//! Exact coefficient extraction for the fixed-point generating function of
//! 132-, 321- and 213-avoiding permutations,
//!
//! ```text
//! G(z, q) = Σ_n Z_n(q, τ) z^n = 2 / (1 + 2(1−q)z + √(1−4z)),
//! ```
//!
//! together with the unrestricted partition function `Z_n(q)` and the
//! factorial-moment series `G_m(z, q) = m! q^m z^m G(z, q)^{m+1}`.
//!
//! Clearing the denominator and comparing coefficients, with
//! `√(1−4z) = Σ s_j z^j`, `s_0 = 1`, `s_j = −2 C_{j−1}`:
//!
//! ```text
//! 2 g_n = −2(1−q) g_{n−1} − Σ_{j=1}^{n} s_j g_{n−j}
//!       = 2q g_{n−1} + 2 Σ_{j=2}^{n} C_{j−1} g_{n−j}.
//! ```
//!
//! The second form has non-negative terms only and is what the engine runs,
//! both over `Z[q]` and at fixed rational `q = a/b`, where `h_n = b^n g_n(a/b)`
//! is an integer satisfying `h_n = a h_{n−1} + Σ_{j≥2} C_{j−1} b^j h_{n−j}`.

mod columns;
mod poly;
mod table;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numbers::{
    binomial_row, catalan_numbers, catalan_over_four_pow, derangements, factorial,
};
use crate::rational::{ratio, split_nonneg};

pub use columns::{ExactColumns, ScaledColumns};
pub use poly::QPolynomial;
pub use table::{fmt_f64, SeriesKind, SeriesTable, SeriesValues};

/// Size limits for the exact routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest `n` for full polynomials `g_n(q)`.
    pub poly: usize,
    /// Largest `n` for evaluation at a fixed `q` (exact or scaled).
    pub eval: usize,
    /// Largest column index `k` for exact column tables.
    pub columns: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            poly: 1500,
            eval: 10_000,
            columns: 400,
        }
    }
}

impl Budget {
    pub const ENV_VAR: &'static str = "FPBL_BUDGET";

    /// Parses `poly=2000,eval=20000,columns=500`; omitted keys keep their
    /// defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut budget = Budget::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let err = || Error::Parse {
                what: "budget",
                input: item.to_string(),
            };
            let (key, value) = item.split_once('=').ok_or_else(err)?;
            let value: usize = value.trim().parse().map_err(|_| err())?;
            match key.trim() {
                "poly" => budget.poly = value,
                "eval" => budget.eval = value,
                "columns" => budget.columns = value,
                _ => return Err(err()),
            }
        }
        Ok(budget)
    }

    /// Defaults overridden by `FPBL_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(v) => Budget::parse(&v),
            Err(_) => Ok(Budget::default()),
        }
    }

    fn check(
        &self,
        what: &'static str,
        requested: usize,
        limit: usize,
        hint: &'static str,
    ) -> Result<()> {
        if requested > limit {
            Err(Error::Budget {
                what,
                requested,
                limit,
                hint,
            })
        } else {
            Ok(())
        }
    }
}

/// Exponential growth rate of `Z_n(q, τ)`: `4` up to the critical point
/// `q = 3`, and the reciprocal pole `(q−1)²/(q−2)` beyond it.
pub fn growth_base(q: f64) -> f64 {
    if q > 3.0 {
        (q - 1.0) * (q - 1.0) / (q - 2.0)
    } else {
        4.0
    }
}

/// Entry point for the series computations; carries the budgets and the
/// execution strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeriesEngine {
    pub budget: Budget,
    pub exec: Exec,
}

impl SeriesEngine {
    pub fn new(budget: Budget, exec: Exec) -> Self {
        SeriesEngine { budget, exec }
    }

    pub fn from_env() -> Result<Self> {
        Ok(SeriesEngine {
            budget: Budget::from_env()?,
            exec: Exec::default(),
        })
    }

    /// Coefficients of `√(1 − 4z)`: `s_0 = 1`, `s_n = −2 C_{n−1}`.
    pub fn sqrt_series(&self, n_max: usize) -> SeriesTable {
        let catalan = catalan_numbers(n_max);
        let values = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    BigRational::one()
                } else {
                    BigRational::from_integer(-BigInt::from(catalan[n - 1].clone()) * 2)
                }
            })
            .collect();
        SeriesTable {
            kind: SeriesKind::Sqrt,
            q: None,
            values: SeriesValues::Exact(values),
        }
    }

    /// `g_0, …, g_{n_max}` as polynomials in `q`, where `g_n(q) = Z_n(q, τ)`
    /// for every τ in {132, 321, 213}.
    pub fn g_series_poly(&self, n_max: usize) -> Result<SeriesTable> {
        self.budget.check(
            "exact polynomial",
            n_max,
            self.budget.poly,
            "use g_series_eval at a fixed q or column_series",
        )?;
        // C_{j-1} = -s_j / 2
        let kernel: Vec<BigInt> = match self.sqrt_series(n_max).values {
            SeriesValues::Exact(s) => s
                .into_iter()
                .map(|x| -x.to_integer() / BigInt::from(2))
                .collect(),
            _ => unreachable!(),
        };
        let mut g: Vec<QPolynomial> = Vec::with_capacity(n_max + 1);
        g.push(QPolynomial::one());
        for n in 1..=n_max {
            // coefficient k of q g_{n-1} + Σ_{j≥2} C_{j-1} g_{n-j}
            let coeffs = self.exec.map(n + 1, |k| {
                let mut acc = if k == 0 {
                    BigInt::zero()
                } else {
                    g[n - 1].coeff(k - 1)
                };
                for j in 2..=n {
                    let c = g[n - j].coeffs().get(k);
                    if let Some(c) = c {
                        if !c.is_zero() {
                            acc += &kernel[j] * c;
                        }
                    }
                }
                acc
            });
            g.push(QPolynomial::new(coeffs));
        }
        Ok(SeriesTable {
            kind: SeriesKind::FixedPoints,
            q: None,
            values: SeriesValues::Poly(g),
        })
    }

    /// `Z_n(q, τ)` for `n ≤ n_max` as exact rationals.
    pub fn g_series_eval(&self, q: &BigRational, n_max: usize) -> Result<SeriesTable> {
        let (h, den) = self.g_series_scaled_integers(q, n_max)?;
        let mut values = Vec::with_capacity(n_max + 1);
        let mut den_pow = BigUint::one();
        for h_n in h {
            values.push(ratio(h_n, den_pow.clone()));
            den_pow *= &den;
        }
        Ok(SeriesTable {
            kind: SeriesKind::FixedPoints,
            q: Some(q.to_string()),
            values: SeriesValues::Exact(values),
        })
    }

    /// Integers `h_n = b^n Z_n(a/b, τ)` and the denominator `b`.
    pub fn g_series_scaled_integers(
        &self,
        q: &BigRational,
        n_max: usize,
    ) -> Result<(Vec<BigUint>, BigUint)> {
        self.budget.check(
            "exact evaluation",
            n_max,
            self.budget.eval,
            "use the scaled-float mode",
        )?;
        if q < &BigRational::zero() {
            return Err(Error::InvalidParameter(format!(
                "q must be non-negative, got {q}"
            )));
        }
        let (a, b) = split_nonneg(q);
        let catalan = catalan_numbers(n_max);
        // kernel[j] = C_{j-1} b^j
        let mut kernel = vec![BigUint::zero(); n_max + 1];
        let mut b_pow = b.clone();
        for j in 1..=n_max {
            kernel[j] = &catalan[j - 1] * &b_pow;
            b_pow *= &b;
        }
        let mut h: Vec<BigUint> = Vec::with_capacity(n_max + 1);
        h.push(BigUint::one());
        for n in 1..=n_max {
            let lead = &a * &h[n - 1];
            let conv = self.exec.map_reduce(
                n.saturating_sub(1),
                |i| {
                    let j = i + 2;
                    &kernel[j] * &h[n - j]
                },
                BigUint::zero,
                |x, y| x + y,
            );
            h.push(lead + conv);
        }
        Ok((h, b))
    }

    /// `Z_n(q, τ) / ρ^n` in double precision, `ρ = growth_base(q)`. Works for
    /// any `q > 0` and `n` up to the evaluation budget.
    pub fn g_series_scaled(&self, q: f64, n_max: usize) -> Result<SeriesTable> {
        self.budget.check(
            "scaled evaluation",
            n_max,
            self.budget.eval,
            "raise FPBL_BUDGET",
        )?;
        let values = scaled_g_coefficients(q, n_max);
        Ok(SeriesTable {
            kind: SeriesKind::FixedPoints,
            q: Some(fmt_f64(q)),
            values: SeriesValues::Scaled {
                values,
                log_base: growth_base(q).ln(),
            },
        })
    }

    /// Exact column table `a_{k,n}` for `k ≤ k_max`, `n ≤ n_max`.
    pub fn column_series_exact(&self, k_max: usize, n_max: usize) -> Result<ExactColumns> {
        self.budget.check(
            "exact column",
            k_max.min(n_max),
            self.budget.columns,
            "use the scaled-float mode",
        )?;
        self.budget.check(
            "exact column length",
            n_max,
            self.budget.eval,
            "raise FPBL_BUDGET",
        )?;
        Ok(ExactColumns::build(k_max, n_max, self.exec))
    }

    /// Scaled column table `a_{k,n} / 4^n` in double precision.
    pub fn column_series_scaled(&self, k_max: usize, n_max: usize) -> Result<ScaledColumns> {
        self.tilted_columns(1.0, n_max, k_max)
    }

    /// Scaled column table `a_{k,n} q^k / ρ(q)^n`: row `n` is proportional to
    /// the fixed-point law under the biased measure with parameter `q`.
    pub fn tilted_columns(&self, q: f64, n_max: usize, k_max: usize) -> Result<ScaledColumns> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "q must be positive, got {q}"
            )));
        }
        self.budget.check(
            "scaled column length",
            n_max,
            self.budget.eval,
            "raise FPBL_BUDGET",
        )?;
        let base = if q == 1.0 { 4.0 } else { growth_base(q) };
        Ok(ScaledColumns::build(k_max, n_max, q, base, self.exec))
    }

    /// Column `k` as a series table (exact or scaled by `4^n`).
    pub fn column_series(&self, k: usize, n_max: usize, scaled: bool) -> Result<SeriesTable> {
        let values = if scaled {
            let t = self.column_series_scaled(k, n_max)?;
            SeriesValues::Scaled {
                values: (0..=n_max).map(|n| t.get(k, n)).collect(),
                log_base: 4f64.ln(),
            }
        } else {
            let t = self.column_series_exact(k, n_max)?;
            SeriesValues::Exact(
                (0..=n_max)
                    .map(|n| BigRational::from_integer(BigInt::from(t.get(k, n))))
                    .collect(),
            )
        };
        Ok(SeriesTable {
            kind: SeriesKind::Column { k },
            q: None,
            values,
        })
    }

    /// `[z^n] G_m(z, q)` for `n ≤ n_max`, exactly, via
    /// `G_m = m! q^m z^m G^{m+1}`.
    pub fn factorial_moment_series(
        &self,
        m: u32,
        q: &BigRational,
        n_max: usize,
    ) -> Result<SeriesTable> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "moment order must be at least 1".into(),
            ));
        }
        let (h, b) = self.g_series_scaled_integers(q, n_max)?;
        let (a, _) = split_nonneg(q);
        // P_t = b^t [z^t] G^{m+1}, by repeated integer convolution
        let mut power = h.clone();
        for _ in 0..m {
            power = self.convolve(&power, &h);
        }
        let m_fact = factorial(m as usize);
        let a_pow = num_traits::pow(a, m as usize);
        let mut values = Vec::with_capacity(n_max + 1);
        let mut b_pow = BigUint::one();
        for n in 0..=n_max {
            let v = if n < m as usize {
                BigRational::zero()
            } else {
                ratio(&m_fact * &a_pow * &power[n - m as usize], b_pow.clone())
            };
            values.push(v);
            b_pow *= &b;
        }
        Ok(SeriesTable {
            kind: SeriesKind::FactorialMoment { order: m },
            q: Some(q.to_string()),
            values: SeriesValues::Exact(values),
        })
    }

    /// `[z^n] G_m(z, q) / ρ^n` in double precision.
    pub fn factorial_moment_series_scaled(
        &self,
        m: u32,
        q: f64,
        n_max: usize,
    ) -> Result<SeriesTable> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "moment order must be at least 1".into(),
            ));
        }
        let g = match self.g_series_scaled(q, n_max)?.values {
            SeriesValues::Scaled { values, .. } => values,
            _ => unreachable!(),
        };
        let base = growth_base(q);
        let mut power = g.clone();
        for _ in 0..m {
            power = (0..=n_max)
                .map(|t| (0..=t).map(|i| power[i] * g[t - i]).sum())
                .collect();
        }
        // m! q^m z^m: shifting by m multiplies the scale by ρ^{-m}
        let factor = (1..=m).map(f64::from).product::<f64>() * (q / base).powi(m as i32);
        let values = (0..=n_max)
            .map(|n| {
                if n < m as usize {
                    0.0
                } else {
                    factor * power[n - m as usize]
                }
            })
            .collect();
        Ok(SeriesTable {
            kind: SeriesKind::FactorialMoment { order: m },
            q: Some(fmt_f64(q)),
            values: SeriesValues::Scaled {
                values,
                log_base: base.ln(),
            },
        })
    }

    /// Unrestricted `Z_n(q) = Σ_k C(n,k) D_{n−k} q^k`.
    pub fn unrestricted_z(&self, q: &BigRational, n: usize) -> Result<BigRational> {
        let (weights, den) = self.unrestricted_weights(q, n)?;
        let total: BigUint = weights.iter().sum();
        Ok(ratio(total, num_traits::pow(den, n)))
    }

    /// Integer weights `C(n,k) D_{n−k} a^k b^{n−k}` for `q = a/b`, and `b`.
    /// They are proportional to the fixed-point law under the biased measure
    /// on all of `S_n`.
    pub fn unrestricted_weights(
        &self,
        q: &BigRational,
        n: usize,
    ) -> Result<(Vec<BigUint>, BigUint)> {
        self.budget.check(
            "unrestricted evaluation",
            n,
            self.budget.eval,
            "raise FPBL_BUDGET",
        )?;
        if q < &BigRational::zero() {
            return Err(Error::InvalidParameter(format!(
                "q must be non-negative, got {q}"
            )));
        }
        let (a, b) = split_nonneg(q);
        let binom = binomial_row(n);
        let d = derangements(n);
        let mut a_pow = vec![BigUint::one(); n + 1];
        let mut b_pow = vec![BigUint::one(); n + 1];
        for k in 1..=n {
            a_pow[k] = &a_pow[k - 1] * &a;
            b_pow[k] = &b_pow[k - 1] * &b;
        }
        let weights = self
            .exec
            .map(n + 1, |k| &binom[k] * &d[n - k] * &a_pow[k] * &b_pow[n - k]);
        Ok((weights, b))
    }

    fn convolve(&self, x: &[BigUint], y: &[BigUint]) -> Vec<BigUint> {
        let len = x.len().min(y.len());
        self.exec.map(len, |t| {
            let mut acc = BigUint::zero();
            for i in 0..=t {
                acc += &x[i] * &y[t - i];
            }
            acc
        })
    }
}

/// `g_n(q) / ρ^n` from `g̃_n = (q/ρ) g̃_{n−1} + Σ_{j≥2} (C_{j−1}/ρ^j) g̃_{n−j}`.
fn scaled_g_coefficients(q: f64, n_max: usize) -> Vec<f64> {
    let base = growth_base(q);
    let c4 = catalan_over_four_pow(n_max + 1);
    let ratio = 4.0 / base;
    let mut w = vec![0.0; n_max + 1];
    let mut power = 1.0;
    for j in 1..=n_max {
        power *= ratio;
        w[j] = c4[j - 1] * power;
    }
    let mut g = Vec::with_capacity(n_max + 1);
    g.push(1.0);
    for n in 1..=n_max {
        let mut acc = q / base * g[n - 1];
        for j in 2..=n {
            acc += w[j] * g[n - j];
        }
        g.push(acc);
    }
    g
}
