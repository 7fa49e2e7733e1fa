use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use num_rational::BigRational;

use super::avoider::UniformAvoiderSampler;
use super::biased::BiasedUnrestrictedSampler;
use super::rng::RandomSource;
use crate::dist::{FixedPointPmf, MeasureSpec, Provenance};
use crate::error::Result;
use crate::exec::Exec;
use crate::perm::{Pattern3, Permutation};

/// Draws per block. Block `i` always uses segment `i` of the stream, so the
/// result is the same for any number of worker threads.
pub const BLOCK_SIZE: u64 = 1 << 14;

fn blocks(samples: u64) -> usize {
    samples.div_ceil(BLOCK_SIZE) as usize
}

fn block_len(samples: u64, index: usize) -> u64 {
    BLOCK_SIZE.min(samples - index as u64 * BLOCK_SIZE)
}

/// Histogram of `draw` over `samples` draws, `len` cells.
///
/// Each block owns a fresh sampler state from `make` and its own stream
/// segment; block histograms are added in block order.
pub fn histogram<S, M, D>(
    len: usize,
    samples: u64,
    source: &RandomSource,
    exec: Exec,
    make: M,
    draw: D,
) -> Vec<u64>
where
    M: Fn() -> S + Sync + Send,
    D: Fn(&mut S, &mut RandomSource) -> usize + Sync + Send,
{
    let parts = exec.map(blocks(samples), |b| {
        let mut rng = source.block(b as u64);
        let mut state = make();
        let mut h = vec![0u64; len];
        for _ in 0..block_len(samples, b) {
            h[draw(&mut state, &mut rng)] += 1;
        }
        h
    });
    let mut total = vec![0u64; len];
    for h in parts {
        for (t, x) in total.iter_mut().zip(h) {
            *t += x;
        }
    }
    total
}

/// Frequencies of arbitrary outcomes, with the same blocking as
/// [`histogram`].
pub fn tally<K, S, M, D>(
    samples: u64,
    source: &RandomSource,
    exec: Exec,
    make: M,
    draw: D,
) -> HashMap<K, u64>
where
    K: Hash + Eq + Send,
    M: Fn() -> S + Sync + Send,
    D: Fn(&mut S, &mut RandomSource) -> K + Sync + Send,
{
    let parts = exec.map(blocks(samples), |b| {
        let mut rng = source.block(b as u64);
        let mut state = make();
        let mut h: HashMap<K, u64> = HashMap::new();
        for _ in 0..block_len(samples, b) {
            *h.entry(draw(&mut state, &mut rng)).or_default() += 1;
        }
        h
    });
    let mut total = HashMap::new();
    for h in parts {
        for (k, c) in h {
            *total.entry(k).or_default() += c;
        }
    }
    total
}

fn histogram_pmf(
    spec: MeasureSpec,
    counts: Vec<u64>,
    source: &RandomSource,
    samples: u64,
) -> Result<FixedPointPmf> {
    FixedPointPmf::from_float_weights(
        spec,
        counts.into_iter().map(|c| c as f64).collect(),
        Provenance::MonteCarlo {
            seed: source.seed(),
            stream_id: source.stream_id(),
            samples,
        },
    )
}

/// Empirical fixed-point law of `samples` uniform elements of `S_n(τ)`.
pub fn monte_carlo_fp_pmf(
    n: usize,
    tau: Pattern3,
    samples: u64,
    source: &RandomSource,
    exec: Exec,
) -> Result<FixedPointPmf> {
    let proto = UniformAvoiderSampler::new(n, tau)?;
    let counts = histogram(
        n + 1,
        samples,
        source,
        exec,
        || proto.clone(),
        |s, rng| s.sample_fixed_points(rng),
    );
    histogram_pmf(MeasureSpec::uniform(n, Some(tau)), counts, source, samples)
}

/// Empirical fixed-point law under the biased measure on `S_n`.
pub fn monte_carlo_unrestricted_fp_pmf(
    n: usize,
    q: &BigRational,
    samples: u64,
    source: &RandomSource,
    exec: Exec,
) -> Result<FixedPointPmf> {
    let proto = BiasedUnrestrictedSampler::new(n, q)?;
    let counts = histogram(
        n + 1,
        samples,
        source,
        exec,
        || proto.clone(),
        |s, rng| s.sample_fixed_points(rng),
    );
    histogram_pmf(
        MeasureSpec::new(n, q.clone(), None)?,
        counts,
        source,
        samples,
    )
}

/// One row of a sample dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub index: u64,
    pub fixed_points: usize,
    pub permutation: Option<Permutation>,
}

/// Sample dump CSV. The first line is a `#` comment recording
/// `seed`, `stream_id`, `n`, `q` and `tau`; the header row is
/// `sample_index,fp` plus `permutation` when any record carries one.
pub fn sample_dump_csv(
    source: &RandomSource,
    spec: &MeasureSpec,
    records: &[SampleRecord],
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# seed={} stream_id={} n={} q={} tau={}",
        source.seed(),
        source.stream_id(),
        spec.n,
        spec.q,
        spec.tau_name().unwrap_or("none")
    );
    let with_perm = records.iter().any(|r| r.permutation.is_some());
    out.push_str(if with_perm {
        "sample_index,fp,permutation\n"
    } else {
        "sample_index,fp\n"
    });
    for r in records {
        let _ = write!(out, "{},{}", r.index, r.fixed_points);
        if with_perm {
            let _ = write!(
                out,
                ",{}",
                r.permutation
                    .as_ref()
                    .map(|p| p.to_string())
                    .unwrap_or_default()
            );
        }
        out.push('\n');
    }
    out
}
