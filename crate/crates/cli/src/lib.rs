//! Library half of the `qes` command line tool: spectra by any route,
//! coupling sweeps with level tracking, PT-breaking threshold search, the
//! reality-conjecture scan, and the self-verification suite.

pub mod conjecture;
pub mod emit;
pub mod psi_dump;
pub mod spectrum;
pub mod sweep;
pub mod threshold;
pub mod verify;

use std::fmt;

pub use qes_core::model::TOL_REAL;

/// Errors split by the process exit code they map to.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1: the invocation itself is invalid.
    Usage(String),
    /// Exit code 3: an internal numerical failure.
    Numerical(qes_core::Error),
    /// Exit code 3: I/O.
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qes_core::Error> for CliError {
    fn from(e: qes_core::Error) -> Self {
        match e {
            qes_core::Error::UnsupportedM(_) | qes_core::Error::InvalidSpec(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Thread cap from `QES_THREADS` (0 or unset: library default).
pub fn thread_cap_from_env() -> usize {
    std::env::var("QES_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}

/// Map `f` over the items, in parallel when `threads != 1`, preserving input
/// order. Results are bit-identical to the serial run because every item is
/// computed independently.
pub fn ordered_map<T, U, F>(items: Vec<T>, threads: usize, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    if threads == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
    match pool {
        Ok(pool) => pool.install(|| {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }),
        Err(_) => items.into_iter().map(f).collect(),
    }
}
