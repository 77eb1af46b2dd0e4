//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the helpers run on the rayon
//! thread pool; without it they run sequentially. Reductions are only used
//! with associative and commutative exact operations, so results do not
//! depend on the schedule.

/// Maps `f` over `0..n` and folds the images with the associative `combine`.
#[cfg(feature = "parallel")]
pub fn map_reduce<T, F, C>(n: usize, identity: impl Fn() -> T + Sync + Send, f: F, combine: C) -> T
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).reduce(identity, combine)
}

/// Maps `f` over `0..n` and folds the images with the associative `combine`.
#[cfg(not(feature = "parallel"))]
pub fn map_reduce<T, F, C>(n: usize, identity: impl Fn() -> T + Sync + Send, f: F, combine: C) -> T
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    (0..n).map(f).fold(identity(), combine)
}

/// Maps `f` over `0..n`, keeping the order of the results.
#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, keeping the order of the results.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Splits `0..n` into contiguous chunks of at most `chunk` indices.
pub fn chunks(n: usize, chunk: usize) -> Vec<(usize, usize)> {
    let chunk = chunk.max(1);
    (0..n.div_ceil(chunk)).map(|c| (c * chunk, ((c + 1) * chunk).min(n))).collect()
}

/// Whether the parallel backend is compiled in.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// Sets the size of the global thread pool; later calls have no effect.
#[cfg(feature = "parallel")]
pub fn set_threads(n: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

/// Sets the size of the global thread pool; sequential builds ignore it.
#[cfg(not(feature = "parallel"))]
pub fn set_threads(_n: usize) {}
