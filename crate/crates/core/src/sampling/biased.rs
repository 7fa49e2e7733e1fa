use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::avoider::UniformAvoiderSampler;
use super::rng::RandomSource;
use crate::dist::{enumeration_counts, FixedPointPmf, Weights};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numbers::catalan_numbers;
use crate::perm::{enumerate_avoiders, EnumerationCaps, Pattern3, Permutation};
use crate::rational::{ratio, split_nonneg};
use crate::series::{Budget, SeriesEngine};

/// Index `k` with `cum[k−1] ≤ u < cum[k]`.
fn inverse_cdf(cumulative: &[BigUint], u: &BigUint) -> usize {
    cumulative.partition_point(|c| c <= u)
}

fn check_q(q: &BigRational) -> Result<()> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "q must be positive, got {q}"
        )))
    }
}

/// Bernoulli(`a/b`) with a fast path for word-sized parameters.
#[derive(Clone, Debug)]
struct Coin {
    small: Option<(u64, u64)>,
    a: BigUint,
    b: BigUint,
}

impl Coin {
    fn new(p: &BigRational) -> Self {
        let (a, b) = split_nonneg(p);
        Coin {
            small: a.to_u64().zip(b.to_u64()),
            a,
            b,
        }
    }

    fn flip(&self, rng: &mut RandomSource) -> bool {
        match self.small {
            Some((a, b)) => rng.below(b) < a,
            None => rng.bernoulli_ratio(&self.a, &self.b),
        }
    }
}

/// Exact sampler for the biased measure on all of `S_n`.
///
/// The fixed-point count `K` is drawn by inverse CDF over the exact integer
/// weights `C(n,k) D_{n−k} a^k b^{n−k}` (`q = a/b`); the fixed points are a
/// uniform `K`-subset, and the other positions carry a uniform derangement,
/// obtained by reshuffling until no point is fixed (about `e` tries).
#[derive(Clone, Debug)]
pub struct BiasedUnrestrictedSampler {
    n: usize,
    q: BigRational,
    cumulative: Vec<BigUint>,
    positions: Vec<u32>,
    values: Vec<u32>,
}

impl BiasedUnrestrictedSampler {
    pub fn new(n: usize, q: &BigRational) -> Result<Self> {
        check_q(q)?;
        let engine = SeriesEngine::new(
            Budget {
                eval: usize::MAX,
                ..Budget::default()
            },
            Exec::Sequential,
        );
        let (weights, _) = engine.unrestricted_weights(q, n)?;
        let mut acc = BigUint::zero();
        let cumulative = weights
            .into_iter()
            .map(|w| {
                acc += w;
                acc.clone()
            })
            .collect();
        Ok(BiasedUnrestrictedSampler {
            n,
            q: q.clone(),
            cumulative,
            positions: Vec::with_capacity(n),
            values: Vec::with_capacity(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// Draws only the fixed-point count.
    pub fn sample_fixed_points(&self, rng: &mut RandomSource) -> usize {
        let total = self.cumulative.last().expect("n + 1 weights");
        inverse_cdf(&self.cumulative, &rng.below_big(total))
    }

    pub fn sample(&mut self, rng: &mut RandomSource) -> Permutation {
        let n = self.n;
        let k = self.sample_fixed_points(rng);
        let positions = &mut self.positions;
        positions.clear();
        positions.extend(0..n as u32);
        // partial Fisher–Yates: the first k entries are a uniform k-subset
        for i in 0..k {
            let j = i + rng.below((n - i) as u64) as usize;
            positions.swap(i, j);
        }
        let rest = &positions[k..];
        let m = rest.len();
        debug_assert!(m != 1, "a single non-fixed point has zero weight");
        let values = &mut self.values;
        values.clear();
        values.extend(0..m as u32);
        loop {
            rng.shuffle(values);
            if values.iter().enumerate().all(|(i, &v)| v as usize != i) {
                break;
            }
        }
        let mut entries = vec![0u32; n];
        for &p in &positions[..k] {
            entries[p as usize] = p + 1;
        }
        for (i, &v) in values.iter().enumerate() {
            entries[rest[i] as usize] = rest[v as usize] + 1;
        }
        Permutation::from_entries_unchecked(entries)
    }
}

/// One draw from the biased measure on `S_n`.
pub fn sample_biased_unrestricted(
    n: usize,
    q: &BigRational,
    rng: &mut RandomSource,
) -> Result<Permutation> {
    Ok(BiasedUnrestrictedSampler::new(n, q)?.sample(rng))
}

/// Draws fixed-point counts from a given law: exactly (integer inverse CDF)
/// when the pmf is exact, to double precision otherwise.
#[derive(Clone, Debug)]
pub struct FpCountSampler {
    table: CountTable,
}

#[derive(Clone, Debug)]
enum CountTable {
    Exact(Vec<BigUint>),
    Float(Vec<f64>),
}

impl FpCountSampler {
    pub fn new(pmf: &FixedPointPmf) -> Self {
        let table = match pmf.weights() {
            Weights::Exact(probs) => {
                let lcm = probs
                    .iter()
                    .fold(BigUint::one(), |l, p| l.lcm(p.denom().magnitude()));
                let mut acc = BigUint::zero();
                CountTable::Exact(
                    probs
                        .iter()
                        .map(|p| {
                            acc += p.numer().magnitude() * (&lcm / p.denom().magnitude());
                            acc.clone()
                        })
                        .collect(),
                )
            }
            Weights::Float(probs) => {
                let mut acc = 0.0;
                CountTable::Float(
                    probs
                        .iter()
                        .map(|p| {
                            acc += p;
                            acc
                        })
                        .collect(),
                )
            }
        };
        FpCountSampler { table }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> usize {
        match &self.table {
            CountTable::Exact(cum) => {
                inverse_cdf(cum, &rng.below_big(cum.last().expect("non-empty")))
            }
            CountTable::Float(cum) => {
                let u = rng.unit() * cum.last().expect("non-empty");
                cum.partition_point(|c| *c <= u).min(cum.len() - 1)
            }
        }
    }
}

/// One fixed-point count under the biased measure on `S_n(τ)` for
/// `τ ∈ {132, 321, 213}`: exact law within the column budget, scaled-float
/// beyond it.
pub fn sample_fp_count(
    engine: &SeriesEngine,
    n: usize,
    q: &BigRational,
    tau: Pattern3,
    rng: &mut RandomSource,
) -> Result<usize> {
    Ok(FpCountSampler::new(&fp_count_pmf(engine, n, q, tau)?).sample(rng))
}

/// The law used by [`sample_fp_count`].
pub fn fp_count_pmf(
    engine: &SeriesEngine,
    n: usize,
    q: &BigRational,
    tau: Pattern3,
) -> Result<FixedPointPmf> {
    use crate::dist::{fp_pmf, MeasureSpec, PmfMode};
    if !tau.has_series() {
        return Err(Error::Unsupported(format!(
            "fixed-point count sampling needs the series law, available for 132, 321 and 213, not {tau}"
        )));
    }
    let spec = MeasureSpec::new(n, q.clone(), Some(tau))?;
    let mode = if n <= engine.budget.columns {
        PmfMode::Exact
    } else {
        PmfMode::ScaledFloat
    };
    fp_pmf(engine, &spec, mode)
}

/// How [`BiasedAvoiderSampler`] produces its draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiasedRoute {
    /// Uniform avoider accepted with probability `q^{fp}`; needs `q ≤ 1`.
    Rejection,
    /// Inverse CDF over all of `S_n(τ)`; needs `n ≤ 12`.
    Enumeration,
}

#[derive(Clone, Debug)]
enum RouteState {
    Rejection {
        uniform: Box<UniformAvoiderSampler>,
        coin: Coin,
    },
    Enumeration {
        perms: Vec<Permutation>,
        cumulative: Vec<BigUint>,
    },
}

/// A permutation together with the number of uniform proposals it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasedDraw {
    pub permutation: Permutation,
    pub attempts: u64,
}

/// Whole-permutation sampler for the biased measure on `S_n(τ)`.
#[derive(Clone, Debug)]
pub struct BiasedAvoiderSampler {
    n: usize,
    q: BigRational,
    tau: Option<Pattern3>,
    state: RouteState,
}

impl BiasedAvoiderSampler {
    /// Rejection when `q ≤ 1` and a uniform sampler exists, otherwise
    /// enumeration when `n ≤ 12`; anything else is refused.
    pub fn new(n: usize, q: &BigRational, tau: Option<Pattern3>) -> Result<Self> {
        let rejection_ok = q <= &BigRational::one() && tau.is_some_and(Pattern3::has_sampler);
        let route = if rejection_ok {
            BiasedRoute::Rejection
        } else {
            BiasedRoute::Enumeration
        };
        Self::with_route(n, q, tau, route)
    }

    pub fn with_route(
        n: usize,
        q: &BigRational,
        tau: Option<Pattern3>,
        route: BiasedRoute,
    ) -> Result<Self> {
        check_q(q)?;
        let state = match route {
            BiasedRoute::Rejection => {
                let Some(t) = tau.filter(|t| t.has_sampler()) else {
                    return Err(Error::Unsupported(
                        "the rejection route needs a pattern in {321, 132, 213, 123}".into(),
                    ));
                };
                if q > &BigRational::one() {
                    return Err(Error::Unsupported(format!(
                        "rejection needs q <= 1, got {q}; for q > 1 use enumeration (n <= 12) or fixed-point count sampling"
                    )));
                }
                RouteState::Rejection {
                    uniform: Box::new(UniformAvoiderSampler::new(n, t)?),
                    coin: Coin::new(q),
                }
            }
            BiasedRoute::Enumeration => {
                let cap = EnumerationCaps::default().avoiders;
                if n > cap {
                    return Err(Error::Unsupported(format!(
                        "whole-permutation sampling at n = {n} with q = {q} is not supported: enumeration stops at n = {cap} \
                         and rejection needs q <= 1; only fixed-point count sampling covers this case"
                    )));
                }
                let perms: Vec<Permutation> = enumerate_avoiders(n, tau)?.collect();
                let (a, b) = split_nonneg(q);
                let mut acc = BigUint::zero();
                let cumulative = perms
                    .iter()
                    .map(|p| {
                        let k = p.fixed_points();
                        acc += num_traits::pow(a.clone(), k) * num_traits::pow(b.clone(), n - k);
                        acc.clone()
                    })
                    .collect();
                RouteState::Enumeration { perms, cumulative }
            }
        };
        Ok(BiasedAvoiderSampler {
            n,
            q: q.clone(),
            tau,
            state,
        })
    }

    pub fn route(&self) -> BiasedRoute {
        match self.state {
            RouteState::Rejection { .. } => BiasedRoute::Rejection,
            RouteState::Enumeration { .. } => BiasedRoute::Enumeration,
        }
    }

    pub fn draw(&mut self, rng: &mut RandomSource) -> BiasedDraw {
        match &mut self.state {
            RouteState::Rejection { uniform, coin } => {
                let mut attempts = 0;
                loop {
                    attempts += 1;
                    let fp = uniform.sample_fixed_points(rng);
                    if (0..fp).all(|_| coin.flip(rng)) {
                        return BiasedDraw {
                            permutation: Permutation::from_entries_unchecked(
                                uniform.last_entries().to_vec(),
                            ),
                            attempts,
                        };
                    }
                }
            }
            RouteState::Enumeration { perms, cumulative } => {
                let u = rng.below_big(cumulative.last().expect("S_n(τ) is non-empty"));
                BiasedDraw {
                    permutation: perms[inverse_cdf(cumulative, &u)].clone(),
                    attempts: 1,
                }
            }
        }
    }

    pub fn sample(&mut self, rng: &mut RandomSource) -> Permutation {
        self.draw(rng).permutation
    }

    /// Mean number of proposals per accepted draw, `|S_n(τ)| / Z_n(q, τ)`,
    /// when that ratio is computable (series class or `n ≤ 12`).
    pub fn expected_attempts(&self) -> Option<BigRational> {
        if self.route() == BiasedRoute::Enumeration {
            return Some(BigRational::one());
        }
        let tau = self.tau?;
        let counts = if tau.has_series() {
            let cols = crate::series::ExactColumns::build(self.n, self.n, Exec::Sequential);
            cols.row(self.n)
        } else if self.n <= EnumerationCaps::default().avoiders {
            enumeration_counts(self.n, Some(tau)).ok()?
        } else {
            return None;
        };
        let size = &catalan_numbers(self.n)[self.n];
        let mut z = BigRational::zero();
        let mut power = BigRational::one();
        for c in counts {
            z += BigRational::from_integer(c.into()) * &power;
            power *= &self.q;
        }
        Some(ratio(size.clone(), BigUint::one()) / z)
    }
}
