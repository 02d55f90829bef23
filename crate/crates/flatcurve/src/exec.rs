//! Trial-level data parallelism. With the default `parallel` feature the
//! mapped closures run on the rayon pool; without it everything is
//! sequential. Both entry points exist unconditionally so benchmarks can
//! compare them; results are identical because each trial is a pure function
//! of its index.

pub fn seq_map<T, U>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U>
where
    T: Send,
    U: Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn par_map<T, U>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U>
where
    T: Send,
    U: Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U>
where
    T: Send,
    U: Send,
{
    seq_map(items, f)
}

/// Maps trial indices 0..n, in parallel when enabled. Output order follows
/// the index order regardless of scheduling.
pub fn map_trials<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    par_map((0..n).collect(), f)
}
