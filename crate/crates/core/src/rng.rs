//! Reproducible random streams.
//!
//! Every stochastic routine takes either an explicit `&mut R: Rng` or a
//! [`StreamPlan`]. A plan fixes the seed and the number of streams; work is
//! split across streams by a rule that depends only on the plan, so results
//! do not change with the number of threads rayon happens to use.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

pub const DEFAULT_STREAMS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamPlan {
    pub seed: u64,
    pub streams: u64,
}

impl StreamPlan {
    pub fn new(seed: u64) -> Self {
        Self { seed, streams: DEFAULT_STREAMS }
    }

    pub fn with_streams(seed: u64, streams: u64) -> Self {
        Self { seed, streams: streams.max(1) }
    }

    /// Generator for stream `i`.
    pub fn rng(&self, i: u64) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i);
        rng
    }

    /// A plan whose streams do not overlap with this one's; used to give
    /// independent sub-tasks their own randomness.
    pub fn child(&self, tag: u64) -> Self {
        let seed = self.seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Self { seed, streams: self.streams }
    }

    /// Number of items stream `i` is responsible for out of `total`.
    pub fn share(&self, total: usize, i: u64) -> usize {
        let s = self.streams as usize;
        total / s + usize::from((i as usize) < total % s)
    }

    /// Run `f(rng, count)` on every stream in parallel and concatenate the
    /// results in stream order.
    pub fn collect<T, E, F>(&self, total: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(&mut StreamRng, usize) -> Result<Vec<T>, E> + Sync,
    {
        let parts: Vec<Result<Vec<T>, E>> = (0..self.streams)
            .into_par_iter()
            .map(|i| f(&mut self.rng(i), self.share(total, i)))
            .collect();
        let mut out = Vec::with_capacity(total);
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }
}
