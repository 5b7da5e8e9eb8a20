//! Indexed-map executor: the single point where the `parallel` feature
//! switches between rayon and a plain sequential loop.
//!
//! Every data-parallel operation in the crate (Monte Carlo chunk batches,
//! ratio sweeps, dependence-condition meshes) reduces to "evaluate a pure
//! function at indices 0..n and collect the results in order".  Results are
//! collected by index, so the feature flag — and the shape of the rayon
//! thread pool — can never change a computed value.

/// Maps `f` over `0..n`, collecting results in index order.  Runs on the
/// rayon pool when the `parallel` feature is enabled, on the calling thread
/// otherwise.
#[cfg(feature = "parallel")]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, collecting results in index order.  Runs on the
/// rayon pool when the `parallel` feature is enabled, on the calling thread
/// otherwise.
#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Always-sequential twin of [`indexed_map`] with the same bounds, used by
/// the `*_sequential` API variants and the benchmark suite's baseline.
pub fn indexed_map_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
