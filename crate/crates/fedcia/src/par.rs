//! Data-parallel loop helpers.
//!
//! With the `parallel` feature (default) these fan out over the rayon
//! pool; without it they run sequentially. Callers only use patterns
//! whose result is independent of scheduling: indexed maps into
//! per-slot outputs and disjoint row chunks. Reductions that would be
//! order-sensitive are always performed sequentially by the caller.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `0..n` to a vector, one slot per index.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Visit each `cols`-wide row of a row-major buffer with its row index.
#[cfg(feature = "parallel")]
pub(crate) fn for_each_row<F>(values: &mut [f64], cols: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    values
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(i, row)| f(i, row));
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_row<F>(values: &mut [f64], cols: usize, f: F)
where
    F: Fn(usize, &mut [f64]),
{
    for (i, row) in values.chunks_mut(cols).enumerate() {
        f(i, row);
    }
}

/// Chunk width used when uploads are computed in parallel but folded in
/// client order; bounds transient memory to a few uploads at a time.
pub(crate) fn upload_chunk_len() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1) * 2
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
