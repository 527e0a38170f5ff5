//! Data-parallel execution helpers.
//!
//! Every angular operation is independent per radius, so work is split into
//! contiguous per-radius chunks. With the `parallel` feature the chunks run on
//! the rayon pool; without it they run in order on the calling thread.

/// Below this many elements the overhead of task dispatch outweighs the work.
const PAR_MIN_LEN: usize = 1 << 12;

/// Calls `f(index, chunk)` for each `chunk_len`-sized piece of `data`.
pub(crate) fn for_each_chunk_mut<T, F>(data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    if chunk_len == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    {
        if data.len() >= PAR_MIN_LEN && data.len() > chunk_len {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c));
            return;
        }
    }
    let _ = PAR_MIN_LEN;
    data.chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c));
}

/// Maps `f` over `0..n`, collecting the results in index order.
pub(crate) fn map_indices<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Runs `f` with data parallelism disabled.
///
/// Used by benchmarks that measure algorithmic scaling rather than speedup.
pub fn run_sequential<R: Send, F: FnOnce() -> R + Send>(f: F) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

/// Whether the crate was built with rayon support.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
