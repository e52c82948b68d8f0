//! Data-parallel map helpers with a sequential fallback.
//!
//! Only order-preserving element-wise maps go through rayon; floating-point
//! reductions are always sequential over the collected buffer so results stay
//! bit-identical whether or not the `parallel` feature is enabled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Like [`map_collect`] but for cheap per-element work (an exp, a couple of
/// flops): splitting is bounded below so task overhead cannot swamp the map.
#[cfg(feature = "parallel")]
pub(crate) fn map_collect_fine<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().with_min_len(4096).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect_fine<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices_fine<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().with_min_len(4096).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices_fine<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Map over fixed-size chunks, preserving chunk order. Summing the per-chunk
/// results sequentially gives the same bits whichever backend ran the map.
#[cfg(feature = "parallel")]
pub(crate) fn map_chunks<T, U, F>(items: &[T], chunk: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&[T]) -> U + Sync + Send,
{
    items.par_chunks(chunk).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_chunks<T, U, F>(items: &[T], chunk: usize, f: F) -> Vec<U>
where
    F: Fn(&[T]) -> U,
{
    items.chunks(chunk).map(f).collect()
}
