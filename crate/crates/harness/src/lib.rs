//! Experiment harness: configuration files, seeded replication, CSV
//! statistics, bitmap rendering and the exact-distribution oracle suite.

pub mod config;
pub mod experiments;
pub mod oracle;
pub mod render;
pub mod seeds;
pub mod stats;

use std::io;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config key '{key}': {msg}")]
    Config { key: String, msg: String },
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error(transparent)]
    Core(#[from] planeperc_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}
