//! Execution policy for the embarrassingly parallel ensemble loops.
//!
//! Results never depend on the policy: each sample owns an independent RNG
//! stream (see [`crate::rng`]) and reductions happen in a fixed order, so a
//! run is bit-identical whether it executes on one thread or many. Without
//! the `parallel` feature everything runs sequentially.

use std::num::NonZeroUsize;

/// Worker-count hint for ensemble evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Use the global thread pool (or run sequentially when the `parallel`
    /// feature is disabled).
    #[default]
    Auto,
    /// Use exactly this many worker threads; `1` forces the sequential path.
    Workers(NonZeroUsize),
}

impl Parallelism {
    /// Maps a CLI-style hint to a policy: `None` or `Some(0)` mean [`Parallelism::Auto`].
    pub fn from_worker_hint(hint: Option<usize>) -> Self {
        match hint.and_then(NonZeroUsize::new) {
            Some(k) => Parallelism::Workers(k),
            None => Parallelism::Auto,
        }
    }
}

/// Evaluates `f` for every index in `0..count`, returning results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(count: u64, parallelism: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;

    match parallelism {
        Parallelism::Auto => (0..count).into_par_iter().map(f).collect(),
        Parallelism::Workers(k) if k.get() == 1 => (0..count).map(f).collect(),
        Parallelism::Workers(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.get())
                .build()
                .expect("failed to build worker pool");
            pool.install(|| (0..count).into_par_iter().map(f).collect())
        }
    }
}

/// Evaluates `f` for every index in `0..count`, returning results in index order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(count: u64, _parallelism: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
