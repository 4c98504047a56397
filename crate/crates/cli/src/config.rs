use std::path::PathBuf;

use clap::ValueEnum;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Exact,
    Float,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Resolved per-run settings: flag values merged with the ZEITLIN_THREADS
/// and ZEITLIN_CACHE environment overrides.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub engine: EngineChoice,
    pub exact_threshold: u32,
    pub float_target_error: f64,
    pub threads: Option<usize>,
    pub cache: Option<CacheSource>,
    pub format: Format,
    pub digits: usize,
    pub progress: bool,
}

/// Where the cache path came from decides how corruption is handled: an
/// explicitly requested cache aborts, an environment default degrades to
/// a warning plus recomputation.
#[derive(Debug, Clone)]
pub struct CacheSource {
    pub path: PathBuf,
    pub explicit: bool,
}

impl RunConfig {
    /// Engine actually used for a given truncation size. Assertion-style
    /// commands ignore this and force exact arithmetic.
    pub fn engine_for(&self, n: u32) -> Engine {
        match self.engine {
            EngineChoice::Exact => Engine::Exact,
            EngineChoice::Float => Engine::Float,
            EngineChoice::Auto => {
                if n <= self.exact_threshold {
                    Engine::Exact
                } else {
                    Engine::Float
                }
            }
        }
    }

    /// Installs the rayon pool size once per process; 0 means all cores.
    pub fn install_thread_pool(&self) -> Result<(), CliError> {
        let Some(threads) = self.threads else { return Ok(()) };
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool setup failed: {e}")))
    }
}

pub fn env_threads() -> Result<Option<usize>, CliError> {
    match std::env::var("ZEITLIN_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::usage(format!("ZEITLIN_THREADS=`{v}` is not a thread count"))),
        Err(_) => Ok(None),
    }
}

pub fn env_cache() -> Option<PathBuf> {
    std::env::var_os("ZEITLIN_CACHE").map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_splits_at_the_threshold() {
        let config = RunConfig {
            engine: EngineChoice::Auto,
            exact_threshold: 256,
            float_target_error: 1e-12,
            threads: None,
            cache: None,
            format: Format::Csv,
            digits: 15,
            progress: false,
        };
        assert_eq!(config.engine_for(256), Engine::Exact);
        assert_eq!(config.engine_for(257), Engine::Float);
        let forced = RunConfig { engine: EngineChoice::Float, ..config };
        assert_eq!(forced.engine_for(2), Engine::Float);
    }
}
