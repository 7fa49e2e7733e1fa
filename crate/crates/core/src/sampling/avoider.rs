use super::dyck::{dyck_to_132, dyck_to_321, uniform_dyck_into, Scratch132};
use super::rng::RandomSource;
use crate::error::{Error, Result};
use crate::perm::{fixed_points, Pattern3, Permutation};

/// Uniform sampler for `S_n(τ)`, `τ ∈ {321, 132, 213, 123}`, with reusable
/// buffers.
///
/// 321 and 132 come straight from a uniform Dyck path; 213 is the
/// reverse-complement of a uniform 132-avoider and 123 the reverse of a
/// uniform 321-avoider (both symmetries are bijections between the classes).
#[derive(Clone, Debug)]
pub struct UniformAvoiderSampler {
    n: usize,
    tau: Pattern3,
    steps: Vec<i8>,
    arrangement: Vec<i8>,
    perm: Vec<u32>,
    used: Vec<bool>,
    scratch: Scratch132,
}

impl UniformAvoiderSampler {
    pub fn new(n: usize, tau: Pattern3) -> Result<Self> {
        if !tau.has_sampler() {
            return Err(Error::Unsupported(format!(
                "no uniform sampler for {tau}-avoiders; only enumeration (n <= 12) covers 231 and 312"
            )));
        }
        Ok(UniformAvoiderSampler {
            n,
            tau,
            steps: Vec::with_capacity(2 * n),
            arrangement: Vec::with_capacity(2 * n + 1),
            perm: Vec::with_capacity(n),
            used: Vec::with_capacity(n + 1),
            scratch: Scratch132::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pattern(&self) -> Pattern3 {
        self.tau
    }

    /// Draws one avoider; the one-line notation stays valid until the next
    /// call.
    pub fn sample_entries(&mut self, rng: &mut RandomSource) -> &[u32] {
        uniform_dyck_into(self.n, rng, &mut self.steps, &mut self.arrangement);
        match self.tau {
            Pattern3::P321 => dyck_to_321(&self.steps, &mut self.perm, &mut self.used),
            Pattern3::P123 => {
                dyck_to_321(&self.steps, &mut self.perm, &mut self.used);
                self.perm.reverse();
            }
            Pattern3::P132 => dyck_to_132(&self.steps, &mut self.perm, &mut self.scratch),
            Pattern3::P213 => {
                dyck_to_132(&self.steps, &mut self.perm, &mut self.scratch);
                self.perm.reverse();
                let top = self.n as u32 + 1;
                for v in self.perm.iter_mut() {
                    *v = top - *v;
                }
            }
            Pattern3::P231 | Pattern3::P312 => unreachable!("rejected in new"),
        }
        &self.perm
    }

    /// The most recent draw.
    pub fn last_entries(&self) -> &[u32] {
        &self.perm
    }

    pub fn sample(&mut self, rng: &mut RandomSource) -> Permutation {
        Permutation::from_entries_unchecked(self.sample_entries(rng).to_vec())
    }

    pub fn sample_fixed_points(&mut self, rng: &mut RandomSource) -> usize {
        fixed_points(self.sample_entries(rng))
    }
}

/// One uniform element of `S_n(τ)`.
pub fn uniform_avoider(n: usize, tau: Pattern3, rng: &mut RandomSource) -> Result<Permutation> {
    Ok(UniformAvoiderSampler::new(n, tau)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn outputs_avoid_and_are_roughly_uniform() {
        let mut rng = RandomSource::new(5, 0);
        for tau in [
            Pattern3::P321,
            Pattern3::P132,
            Pattern3::P213,
            Pattern3::P123,
        ] {
            let mut s = UniformAvoiderSampler::new(3, tau).unwrap();
            let mut counts: HashMap<Permutation, u32> = HashMap::new();
            for _ in 0..50_000 {
                let p = s.sample(&mut rng);
                assert!(p.avoids(tau));
                *counts.entry(p).or_default() += 1;
            }
            assert_eq!(counts.len(), 5);
            let sd = (50_000.0f64 * 0.2 * 0.8).sqrt();
            for c in counts.values() {
                assert!((*c as f64 - 10_000.0).abs() < 4.0 * sd, "{tau}: {counts:?}");
            }
            let mut big = UniformAvoiderSampler::new(60, tau).unwrap();
            for _ in 0..50 {
                assert!(big.sample(&mut rng).avoids(tau));
            }
        }
    }

    #[test]
    fn refuses_unsampled_patterns() {
        let mut rng = RandomSource::new(5, 0);
        assert!(uniform_avoider(4, Pattern3::P231, &mut rng).is_err());
        assert!(uniform_avoider(4, Pattern3::P312, &mut rng).is_err());
    }
}
