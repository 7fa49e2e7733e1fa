//! Seeded exact samplers.
//!
//! Every sampler draws from a [`RandomSource`]; identical `(seed, stream_id)`
//! and parameters reproduce identical output on every platform and for any
//! number of threads.

mod avoider;
mod biased;
mod dyck;
mod monte_carlo;
mod rng;

pub use avoider::{uniform_avoider, UniformAvoiderSampler};
pub use biased::{
    fp_count_pmf, sample_biased_unrestricted, sample_fp_count, BiasedAvoiderSampler, BiasedDraw,
    BiasedRoute, BiasedUnrestrictedSampler, FpCountSampler,
};
pub use dyck::{uniform_dyck, DyckPath};
pub use monte_carlo::{
    histogram, monte_carlo_fp_pmf, monte_carlo_unrestricted_fp_pmf, sample_dump_csv, tally,
    SampleRecord, BLOCK_SIZE,
};
pub use rng::RandomSource;
