//! The worker pool and its deterministic parallel map.
//!
//! Library crates stay serial and reentrant; this is the only place
//! threads are created.  Results come back in input order no matter how
//! the scheduler interleaves, which is what makes byte-identical output
//! at different worker counts possible.

use rayon::prelude::*;

use crate::CliError;

/// The environment variable consulted when no `--workers` flag is given.
pub const WORKERS_ENV: &str = "FZETA_WORKERS";

const MAX_WORKERS: usize = 256;

/// Worker count, from the flag, else the environment, else the machine.
pub fn resolve_workers(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(text) => text.trim().parse::<usize>().map_err(|_| {
                CliError::usage(format!("{WORKERS_ENV}={text:?} is not a worker count"))
            })?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    if n == 0 || n > MAX_WORKERS {
        return Err(CliError::usage(format!("worker count {n} outside 1..={MAX_WORKERS}")));
    }
    Ok(n)
}

/// A pool with exactly `workers` threads.
pub fn build(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::failed(format!("worker pool: {e}")))
}

/// Applies `f` to every item on the pool and returns results in input
/// order.  Errors surface as the first failing index's error.
pub fn map_ordered<T, U, F>(
    pool: &rayon::ThreadPool,
    items: Vec<T>,
    f: F,
) -> Result<Vec<U>, CliError>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Result<U, CliError> + Sync + Send,
{
    pool.install(|| items.into_par_iter().map(f).collect())
}
