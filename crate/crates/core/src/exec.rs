//! Execution strategy for data-parallel inner loops.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether independent work items run on the rayon pool or in order on the
/// calling thread.
///
/// Every routine taking an `Exec` produces bit-identical output under both
/// variants. Without the `parallel` feature `Parallel` degrades to
/// `Sequential`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Evaluates `f(0), …, f(len - 1)` and collects the results in index order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }

    /// Maps each index and folds the results with an associative `reduce`.
    ///
    /// Only use this with exactly associative operations (integer sums,
    /// histogram merges); the grouping differs between the two strategies.
    pub fn map_reduce<T, F, R, I>(self, len: usize, f: F, identity: I, reduce: R) -> T
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
        I: Fn() -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).reduce(identity, reduce),
            _ => (0..len).map(f).fold(identity(), reduce),
        }
    }

    /// Runs `f` on every element of `items` in place.
    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, item)| f(i, item)),
            _ => items
                .iter_mut()
                .enumerate()
                .for_each(|(i, item)| f(i, item)),
        }
    }
}
