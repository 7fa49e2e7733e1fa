//! Exact computation, sampling and verification of the number of fixed points
//! in fixed-point-biased random permutations, with and without avoidance of a
//! single length-3 pattern.
//!
//! The crate is organised by role:
//!
//! * [`perm`]: permutations, pattern containment, symmetries and exhaustive
//!   enumeration (the brute-force oracle for everything else).
//! * [`series`]: exact big-integer coefficient extraction for the bivariate
//!   generating function of fixed points in 132/321/213-avoiders, plus a
//!   scaled floating-point column engine for large lengths.
//! * [`dist`]: fixed-point laws under the biased measures, reference limit
//!   laws, distances and moments.
//! * [`sampling`]: seeded exact samplers.
//! * [`asymptotics`]: closed-form asymptotic predictions and convergence tables.
//!
//! Heavy loops go through [`exec::Exec`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise. Results do
//! not depend on which path runs.

pub mod asymptotics;
pub mod dist;
pub mod error;
pub mod exec;
pub mod numbers;
pub mod perm;
pub mod rational;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
pub use exec::Exec;
pub use perm::{Pattern3, Permutation};
