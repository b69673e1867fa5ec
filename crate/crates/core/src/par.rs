//! Execution strategy for the sampling loops.
//!
//! Every parallel reduction in the crate splits its index range into fixed
//! chunks, reduces each chunk sequentially and then folds the chunk results in
//! index order. The floating-point summation order is therefore the same for
//! both strategies and results are bit-identical.

use serde::{Deserialize, Serialize};

/// Chunk length used by [`Execution::chunked_fold`].
pub const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is disabled.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..n).map(f).collect()`, order preserved.
    pub fn map<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Folds `f(i)` over `0..n` with `combine`, chunk by chunk.
    pub fn chunked_fold<A, F, C>(self, n: usize, init: impl Fn() -> A + Sync + Send, f: F, combine: C) -> A
    where
        A: Send,
        F: Fn(&mut A, usize) + Sync + Send,
        C: Fn(A, A) -> A,
    {
        let chunks = n.div_ceil(CHUNK);
        let partials = self.map(chunks, |c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                f(&mut acc, i);
            }
            acc
        });
        partials.into_iter().fold(init(), combine)
    }
}
