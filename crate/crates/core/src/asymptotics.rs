//! Closed-form asymptotic predictions and convergence tables.
//!
//! The partition function of 132/321/213-avoiders has three regimes:
//!
//! ```text
//! q < 3:  Z_n ~ 4/((3−q)² √π) · n^{−3/2} · 4^n
//! q = 3:  Z_n ~ 2/√π · n^{−1/2} · 4^n
//! q > 3:  Z_n ~ (q−1)(q−3)/(q−2)² · ((q−1)²/(q−2))^n
//! ```
//!
//! and the fixed-point count has the limit laws returned by [`limit_law`].
//! Large magnitudes are handled as natural logarithms throughout.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist::{
    fp_pmf_grid, kolmogorov_distance, log10_tv_distance_poisson, tv_distance, FixedPointPmf,
    PmfMode, ReferenceLaw,
};
use crate::error::{Error, Result};
use crate::perm::Pattern3;
use crate::rational::{ln_biguint, rational_from_u64, rational_to_f64};
use crate::series::{fmt_f64, SeriesEngine, SeriesValues};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    /// Exact comparison of `q` with 3.
    pub fn of(q: &BigRational) -> Regime {
        match q.cmp(&BigRational::from_integer(3.into())) {
            std::cmp::Ordering::Less => Regime::Subcritical,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Supercritical,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Leading-order form `prefactor · n^{power} · growth_base^n` of `Z_n(q, τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    /// Dominant singularity `ζ = 1/growth_base`.
    pub zeta: BigRational,
    pub prefactor: f64,
    pub polynomial_power: BigRational,
    pub growth_base: f64,
    pub formula_id: &'static str,
}

impl RegimePrediction {
    pub fn new(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "q must be positive, got {q}"
            )));
        }
        let regime = Regime::of(q);
        let qf = rational_to_f64(q);
        let quarter = rational_from_u64(1, 4);
        Ok(match regime {
            Regime::Subcritical => RegimePrediction {
                regime,
                zeta: quarter,
                prefactor: 4.0 / ((3.0 - qf).powi(2) * PI.sqrt()),
                polynomial_power: BigRational::new((-3).into(), 2.into()),
                growth_base: 4.0,
                formula_id: "lemma1-subcritical",
            },
            Regime::Critical => RegimePrediction {
                regime,
                zeta: quarter,
                prefactor: 2.0 / PI.sqrt(),
                polynomial_power: BigRational::new((-1).into(), 2.into()),
                growth_base: 4.0,
                formula_id: "lemma1-critical",
            },
            Regime::Supercritical => {
                let one = BigRational::one();
                let two = BigRational::from_integer(2.into());
                let zeta = (q - &two) / ((q - &one) * (q - &one));
                RegimePrediction {
                    regime,
                    growth_base: rational_to_f64(&(BigRational::one() / &zeta)),
                    zeta,
                    prefactor: (qf - 1.0) * (qf - 3.0) / (qf - 2.0).powi(2),
                    polynomial_power: BigRational::zero(),
                    formula_id: "lemma1-supercritical",
                }
            }
        })
    }

    /// `ln(prefactor · n^{power} · growth_base^n)`.
    pub fn ln_value(&self, n: usize) -> f64 {
        let nf = n as f64;
        self.prefactor.ln()
            + rational_to_f64(&self.polynomial_power) * nf.ln()
            + nf * self.growth_base.ln()
    }
}

/// Output scale of [`lemma1_predict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PredictMode {
    /// The value itself (may overflow to infinity).
    Linear,
    /// Its natural logarithm.
    #[default]
    Log,
}

/// Leading-order prediction for `Z_n(q, τ)`, `τ ∈ {132, 321, 213}`.
pub fn lemma1_predict(q: &BigRational, n: usize, mode: PredictMode) -> Result<f64> {
    let ln = RegimePrediction::new(q)?.ln_value(n);
    Ok(match mode {
        PredictMode::Linear => ln.exp(),
        PredictMode::Log => ln,
    })
}

/// Leading-order prediction for `E[(X_n)_m]` under the biased measure on
/// `S_n(τ)`: the NegBin(2, 1−q/3) factorial moment `(m+1)! (q/(3−q))^m` below
/// 3, `3^m Γ(m/2+1) n^{m/2}` at 3, and `(μ n)^m` above.
pub fn factorial_moment_predict(q: &BigRational, m: u32, n: usize) -> Result<f64> {
    let qf = rational_to_f64(q);
    let mf = m as f64;
    Ok(match RegimePrediction::new(q)?.regime {
        Regime::Subcritical => gamma(mf + 2.0) * (qf / (3.0 - qf)).powi(m as i32),
        Regime::Critical => 3f64.powi(m as i32) * gamma(mf / 2.0 + 1.0) * (n as f64).powf(mf / 2.0),
        Regime::Supercritical => (thm5_mean_rate(qf) * n as f64).powi(m as i32),
    })
}

fn thm5_mean_rate(q: f64) -> f64 {
    q * (q - 3.0) / ((q - 1.0) * (q - 2.0))
}

fn thm5_variance_rate(q: f64) -> f64 {
    2.0 * q * (2.0 * q - 3.0) / ((q - 1.0).powi(2) * (q - 2.0).powi(2))
}

/// Gamma function. Positive integers and half-integers are computed exactly
/// as `(k−1)!` and `√π · (1/2)(3/2)⋯(k−1/2)`; other arguments use the Lanczos
/// approximation with `g = 7` and nine coefficients (relative error about
/// `1e-15`), with reflection below `1/2`. Poles give NaN.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::NAN;
    }
    let twice = 2.0 * x;
    if x > 0.0 && twice.fract() == 0.0 && twice <= 340.0 {
        let mut acc = if x.fract() == 0.0 { 1.0 } else { PI.sqrt() };
        let mut t = if x.fract() == 0.0 { 1.0 } else { 0.5 };
        while t < x {
            acc *= t;
            t += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `E[R^m] = (σ√2)^m Γ(m/2 + 1)` for `R ~ Rayleigh(σ)`, `m > −2`.
pub fn rayleigh_moment(m: f64, sigma: f64) -> Result<f64> {
    if m.is_nan() || m <= -2.0 {
        return Err(Error::InvalidParameter(format!(
            "Rayleigh moments need m > -2, got {m}"
        )));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Rayleigh scale must be positive, got {sigma}"
        )));
    }
    Ok((sigma * 2f64.sqrt()).powf(m) * gamma(m / 2.0 + 1.0))
}

/// Centering and scaling under which the limit law applies.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalisation {
    /// The count itself.
    Identity,
    /// `X_n / √n`.
    SqrtN,
    /// `(X_n − μ n) / √(σ² n)`.
    Linear {
        mean_rate: BigRational,
        variance_rate: BigRational,
    },
}

/// A limit theorem instantiated at a given `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitLawSpec {
    pub theorem: u8,
    pub q: BigRational,
    /// The measure the theorem is about: `None` for all of `S_n`.
    pub tau: Option<Pattern3>,
    pub law: ReferenceLaw,
    pub normalisation: Normalisation,
}

impl LimitLawSpec {
    pub fn center(&self, n: usize) -> f64 {
        match &self.normalisation {
            Normalisation::Linear { mean_rate, .. } => rational_to_f64(mean_rate) * n as f64,
            _ => 0.0,
        }
    }

    pub fn scale(&self, n: usize) -> f64 {
        match &self.normalisation {
            Normalisation::Identity => 1.0,
            Normalisation::SqrtN => (n as f64).sqrt(),
            Normalisation::Linear { variance_rate, .. } => {
                (rational_to_f64(variance_rate) * n as f64).sqrt()
            }
        }
    }

    /// Total variation for discrete laws, Kolmogorov distance after
    /// normalisation for continuous ones. Against Poisson an exact pmf is
    /// compared exactly, since the distance falls below `f64` resolution
    /// already for moderate `n`.
    pub fn distance(&self, pmf: &FixedPointPmf) -> Result<f64> {
        if matches!(self.law, ReferenceLaw::Poisson { .. }) && pmf.is_exact() {
            Ok(10f64.powf(log10_tv_distance_poisson(pmf, &self.q)?))
        } else if self.law.is_discrete() {
            tv_distance(pmf, &self.law)
        } else {
            kolmogorov_distance(pmf, &self.law, self.center(pmf.n()), self.scale(pmf.n()))
        }
    }

    pub fn metric(&self) -> &'static str {
        if self.law.is_discrete() {
            "tv"
        } else {
            "kolmogorov"
        }
    }
}

/// The limit law of theorem `1..=5` at bias `q`:
///
/// 1. all of `S_n`: Poisson(q);
/// 2. 123-avoiders: sum of two Bernoulli(q/(3+q));
/// 3. 321-avoiders, `0 < q < 3`: NegBin(2, 1 − q/3);
/// 4. 321-avoiders, `q = 3`: `X_n/√n` → Rayleigh(3/√2);
/// 5. 321-avoiders, `q > 3`: `(X_n − μn)/√(σ²n)` → Normal(0, 1) with
///    `μ = q(q−3)/((q−1)(q−2))`, `σ² = 2q(2q−3)/((q−1)²(q−2)²)`.
pub fn limit_law(theorem: u8, q: &BigRational) -> Result<LimitLawSpec> {
    if !q.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "q must be positive, got {q}"
        )));
    }
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let regime = Regime::of(q);
    let refuse = |hyp: &str| {
        Err(Error::Unsupported(format!(
            "theorem {theorem} requires {hyp}; got q = {q}"
        )))
    };
    let (tau, law, normalisation) = match theorem {
        1 => (
            None,
            ReferenceLaw::poisson(rational_to_f64(q))?,
            Normalisation::Identity,
        ),
        2 => (
            Some(Pattern3::P123),
            ReferenceLaw::bernoulli_sum(q / (int(3) + q))?,
            Normalisation::Identity,
        ),
        3 if regime == Regime::Subcritical => (
            Some(Pattern3::P321),
            ReferenceLaw::neg_bin(2, int(1) - q / int(3))?,
            Normalisation::Identity,
        ),
        3 => return refuse("0 < q < 3"),
        4 if regime == Regime::Critical => (
            Some(Pattern3::P321),
            ReferenceLaw::rayleigh(3.0 / 2f64.sqrt())?,
            Normalisation::SqrtN,
        ),
        4 => return refuse("q = 3"),
        5 if regime == Regime::Supercritical => {
            let (one, two, three) = (int(1), int(2), int(3));
            let mean_rate = q * (q - &three) / ((q - &one) * (q - &two));
            let variance_rate = &two * q * (&two * q - &three)
                / ((q - &one) * (q - &one) * (q - &two) * (q - &two));
            (
                Some(Pattern3::P321),
                ReferenceLaw::standard_normal(),
                Normalisation::Linear {
                    mean_rate,
                    variance_rate,
                },
            )
        }
        5 => return refuse("q > 3"),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "theorems are numbered 1 to 5, got {theorem}"
            )))
        }
    };
    Ok(LimitLawSpec {
        theorem,
        q: q.clone(),
        tau,
        law,
        normalisation,
    })
}

/// What a convergence table compares.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvergenceKind {
    /// `Z_n(q, τ)` against [`lemma1_predict`].
    Lemma1 { q: BigRational },
    /// `E[(X_n)_m]` against [`factorial_moment_predict`].
    Moments { q: BigRational, m: u32 },
    /// Distance of the fixed-point law to the limit law of `theorem`.
    Distance {
        theorem: u8,
        q: BigRational,
        mode: PmfMode,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Log of the exact value, or the distance for distance tables.
    pub exact: f64,
    /// Log of the prediction, or 0 (the limiting distance).
    pub predicted: f64,
    /// `exp(exact − predicted)`, or the distance itself.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub kind: ConvergenceKind,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Whether `|ratio − 1|` (or the distance) is non-increasing along the
    /// grid. Reported, never asserted.
    pub fn monotone(&self) -> bool {
        let err = |r: &ConvergenceRow| match self.kind {
            ConvergenceKind::Distance { .. } => r.ratio,
            _ => (r.ratio - 1.0).abs(),
        };
        self.rows.windows(2).all(|w| err(&w[1]) <= err(&w[0]))
    }

    /// CSV `n,exact,predicted,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,exact,predicted,ratio\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.n,
                fmt_f64(r.exact),
                fmt_f64(r.predicted),
                fmt_f64(r.ratio)
            );
        }
        out
    }
}

/// `ln Z_n(q, τ)` for every `n ≤ n_max`, exactly (through the integer
/// recurrence) and converted via bit length and leading mantissa.
pub fn ln_partition_exact(
    engine: &SeriesEngine,
    q: &BigRational,
    n_max: usize,
) -> Result<Vec<f64>> {
    let (h, b) = engine.g_series_scaled_integers(q, n_max)?;
    let ln_b = ln_biguint(&b);
    Ok(h.iter()
        .enumerate()
        .map(|(n, x)| ln_biguint(x) - n as f64 * ln_b)
        .collect())
}

/// `E[(X_n)_m]` for every `n ≤ n_max`, exactly, as `[z^n]G_m / Z_n`.
pub fn factorial_moments_exact(
    engine: &SeriesEngine,
    q: &BigRational,
    m: u32,
    n_max: usize,
) -> Result<Vec<BigRational>> {
    let g = engine.g_series_eval(q, n_max)?;
    let gm = engine.factorial_moment_series(m, q, n_max)?;
    let (Some(z), Some(num)) = (g.exact(), gm.exact()) else {
        unreachable!("exact tables")
    };
    Ok(num.iter().zip(z).map(|(a, b)| a / b).collect())
}

/// `E[(X_n)_m]` for every `n ≤ n_max` from the scaled-float series.
pub fn factorial_moments_scaled(
    engine: &SeriesEngine,
    q: f64,
    m: u32,
    n_max: usize,
) -> Result<Vec<f64>> {
    let g = engine.g_series_scaled(q, n_max)?;
    let gm = engine.factorial_moment_series_scaled(m, q, n_max)?;
    match (&g.values, &gm.values) {
        (SeriesValues::Scaled { values: z, .. }, SeriesValues::Scaled { values: num, .. }) => {
            Ok(num.iter().zip(z).map(|(a, b)| a / b).collect())
        }
        _ => unreachable!("scaled tables"),
    }
}

/// Builds a convergence table over `n_grid`.
pub fn convergence_table(
    engine: &SeriesEngine,
    kind: ConvergenceKind,
    n_grid: &[usize],
) -> Result<ConvergenceTable> {
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    let rows = match &kind {
        ConvergenceKind::Lemma1 { q } => {
            let exact = ln_partition_exact(engine, q, n_max)?;
            n_grid
                .iter()
                .map(|&n| {
                    let predicted = lemma1_predict(q, n, PredictMode::Log)?;
                    Ok(ConvergenceRow {
                        n,
                        exact: exact[n],
                        predicted,
                        ratio: (exact[n] - predicted).exp(),
                    })
                })
                .collect::<Result<_>>()?
        }
        ConvergenceKind::Moments { q, m } => {
            let exact = factorial_moments_exact(engine, q, *m, n_max)?;
            n_grid
                .iter()
                .map(|&n| {
                    let value = crate::rational::ln_rational(&exact[n]);
                    let predicted = factorial_moment_predict(q, *m, n)?.ln();
                    Ok(ConvergenceRow {
                        n,
                        exact: value,
                        predicted,
                        ratio: (value - predicted).exp(),
                    })
                })
                .collect::<Result<_>>()?
        }
        ConvergenceKind::Distance { theorem, q, mode } => {
            let spec = limit_law(*theorem, q)?;
            let pmfs = fp_pmf_grid(engine, q, spec.tau, n_grid, *mode)?;
            pmfs.iter()
                .map(|pmf| {
                    let d = spec.distance(pmf)?;
                    Ok(ConvergenceRow {
                        n: pmf.n(),
                        exact: d,
                        predicted: 0.0,
                        ratio: d,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(ConvergenceTable { kind, rows })
}

/// Mean and variance of a pmf as floats.
pub fn mean_and_variance(pmf: &FixedPointPmf) -> (f64, f64) {
    (pmf.mean().to_f64(), pmf.variance().to_f64())
}

/// `μ(q)` and `σ²(q)` of the central limit theorem above the critical point,
/// as floats.
pub fn clt_rates(q: f64) -> (f64, f64) {
    (thm5_mean_rate(q), thm5_variance_rate(q))
}
