//! Temporal non-contextuality inequalities for complete-graph states.
//!
//! The crate builds the inequality families, evaluates them on arbitrary
//! finite-dimensional realizations (a state plus a set of ±1-valued
//! observables), computes classical and quantum bounds, and runs a
//! self-testing pipeline that recovers the graph state and the canonical
//! Pauli observables up to a projection and a unitary.

pub mod certify;
pub mod correlators;
pub mod error;
pub mod fixtures;
pub mod inequalities;
pub mod model;
pub mod numerics;
pub mod pauli;

pub use error::{Error, Result};

/// Environment variable overriding [`DEFAULT_DENSE_LIMIT`].
pub const DENSE_LIMIT_ENV: &str = "TEMPCERT_DENSE_LIMIT";

/// Largest qubit count for which dense 2ⁿ×2ⁿ matrices are materialised.
pub const DEFAULT_DENSE_LIMIT: usize = 12;

/// The active dense limit, honouring `TEMPCERT_DENSE_LIMIT` when it parses.
pub fn dense_limit() -> usize {
    std::env::var(DENSE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is 0. Results never depend on the worker count.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(f))
}
