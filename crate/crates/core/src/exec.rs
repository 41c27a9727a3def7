//! Data-parallel fan-out over index ranges.
//!
//! Every kernel in the crate that fills a table entry-by-entry goes through
//! [`map_range`]. Each entry is computed by the same sequential code in both
//! modes and results are collected in index order, so the output is
//! bit-identical whether or not the `parallel` feature is enabled.

/// Execution strategy for table-filling kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses the ambient rayon pool. Falls back to sequential when the crate
    /// is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    pub fn from_jobs(jobs: usize) -> Self {
        if jobs <= 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// `(0..n).map(f).collect()`, possibly spread across worker threads.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel => (0..n).map(f).collect(),
    }
}

/// Map over a slice of work items, preserving order.
pub fn map_items<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_range(exec, items.len(), |i| f(&items[i]))
}

/// Run `body` inside a pool with `jobs` workers (or inline when `jobs <= 1`).
pub fn with_jobs<R: Send>(jobs: usize, body: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(body);
            }
        }
    }
    let _ = jobs;
    body()
}
