//! Data-parallel helpers with a sequential fallback.
//!
//! Batch loops in this crate (resistance pairs, hitting-time targets, subset
//! enumeration, walk columns, seeded trials) go through [`Parallelism`]. With
//! the `parallel` feature the default is rayon; without it every loop runs on
//! the calling thread. Results are returned in index order either way, so
//! output is identical across modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Rayon,
}

impl Parallelism {
    /// Evaluates `f` on `0..n` and collects in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Parallelism::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Parallelism::Rayon => (0..n).into_par_iter().map(f).collect(),
        }
    }

    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            Parallelism::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Parallelism::Rayon => items.par_iter().map(f).collect(),
        }
    }

    /// Runs both closures, concurrently under rayon.
    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        match self {
            Parallelism::Sequential => (a(), b()),
            #[cfg(feature = "parallel")]
            Parallelism::Rayon => rayon::join(a, b),
        }
    }

    /// Applies `f` to each chunk of `len` consecutive elements of `data`.
    pub fn for_each_chunk_mut<T, F>(self, data: &mut [T], len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            Parallelism::Sequential => data
                .chunks_mut(len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
            #[cfg(feature = "parallel")]
            Parallelism::Rayon => data
                .par_chunks_mut(len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
        }
    }
}
