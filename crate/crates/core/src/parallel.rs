//! Deterministic data-parallel reductions.
//!
//! Work is cut into fixed-size chunks independent of the worker count; chunk
//! partials are combined sequentially, so results are bit-identical for any
//! number of workers.

use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone)]
pub struct Workers {
    pool: Option<Arc<ThreadPool>>,
    count: usize,
}

impl std::fmt::Debug for Workers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Workers").field("count", &self.count).finish()
    }
}

impl Default for Workers {
    fn default() -> Self {
        let n = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self::new(n).unwrap_or_else(|_| Self::serial())
    }
}

impl Workers {
    pub fn serial() -> Self {
        Self { pool: None, count: 1 }
    }

    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parameter("worker count must be at least 1".into()));
        }
        if count == 1 {
            return Ok(Self::serial());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
        Ok(Self {
            pool: Some(Arc::new(pool)),
            count,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `f(0), ..., f(len - 1)` in index order.
    pub fn map<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match &self.pool {
            None => (0..len).map(f).collect(),
            Some(pool) => pool.install(|| (0..len).into_par_iter().map(f).collect()),
        }
    }

    /// Sum of `f(range)` over consecutive ranges of length `chunk`, combined in order.
    pub fn chunked_sum<T, F>(&self, len: usize, chunk: usize, f: F) -> T
    where
        T: Real,
        F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
    {
        let chunk = chunk.max(1);
        let blocks = len.div_ceil(chunk);
        let parts = self.map(blocks, |b| f(b * chunk..((b + 1) * chunk).min(len)));
        parts.into_iter().fold(T::zero(), |a, b| a + b)
    }

    /// Like `map`, but propagates the first error in index order.
    pub fn try_map<R, F>(&self, len: usize, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(usize) -> Result<R> + Sync + Send,
    {
        self.map(len, f).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_are_worker_independent() {
        let f = |r: std::ops::Range<usize>| r.map(|i| (i as f64 * 0.37).sin() / (1.0 + i as f64)).sum::<f64>();
        let a = Workers::serial().chunked_sum(100_003, 1024, f);
        let b = Workers::new(4).unwrap().chunked_sum(100_003, 1024, f);
        let c = Workers::new(3).unwrap().chunked_sum(100_003, 1024, f);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn map_preserves_order() {
        let v = Workers::new(4).unwrap().map(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        assert!(Workers::new(0).is_err());
    }
}
