use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded, counter-based random stream.
///
/// `(seed, stream_id)` selects a ChaCha8 key and stream; [`block`] carves the
/// stream into disjoint, independently addressable segments so parallel
/// workers reproduce exactly what a single thread would draw. All derived
/// draws (`below`, `unit`, …) are defined on 32/64-bit words only, so output
/// does not depend on the platform's pointer width.
///
/// [`block`]: RandomSource::block
#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

/// Words reserved for each block (2^36 words = 256 GiB of output).
const BLOCK_SHIFT: u32 = 36;

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomSource {
            rng,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Independent segment `index` of this stream, positioned at its start.
    pub fn block(&self, index: u64) -> RandomSource {
        let mut out = RandomSource::new(self.seed, self.stream_id);
        out.rng.set_word_pos((index as u128) << BLOCK_SHIFT);
        out
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-and-reject).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = (self.rng.next_u64() as u128) * (bound as u128);
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = (self.rng.next_u64() as u128) * (bound as u128);
            }
        }
        (m >> 64) as u64
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform big integer in `0..bound` by masked rejection.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(bound.bits() > 0, "empty range");
        if bound.bits() <= 64 {
            let b = bound.iter_u64_digits().next().unwrap_or(0);
            return BigUint::from(self.below(b));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(32) as usize;
        let top_bits = bits - 32 * (words as u64 - 1);
        let mask = if top_bits == 32 {
            u32::MAX
        } else {
            (1u32 << top_bits) - 1
        };
        loop {
            let mut digits: Vec<u32> = (0..words).map(|_| self.rng.next_u32()).collect();
            digits[words - 1] &= mask;
            let x = BigUint::new(digits);
            if &x < bound {
                return x;
            }
        }
    }

    /// `true` with probability exactly `num / den`.
    pub fn bernoulli_ratio(&mut self, num: &BigUint, den: &BigUint) -> bool {
        &self.below_big(den) < num
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
