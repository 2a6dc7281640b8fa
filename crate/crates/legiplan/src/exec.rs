//! Thread-pool executor for candidate scoring.

use legiplan_core::Executor;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LEGIPLAN_THREADS";

/// Scores candidates on a dedicated rayon pool. Results come back in index
/// order, so planner output does not depend on the worker count.
pub struct PoolExecutor {
    pool: rayon::ThreadPool,
}

impl PoolExecutor {
    pub fn new(threads: usize) -> Result<Self, String> {
        if threads == 0 {
            return Err("worker count must be at least 1".into());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        Ok(Self { pool })
    }

    /// Worker count from `LEGIPLAN_THREADS`, else the available parallelism.
    pub fn from_env() -> Result<Self, String> {
        Self::new(threads_from(std::env::var(THREADS_ENV).ok().as_deref())?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

fn threads_from(value: Option<&str>) -> Result<usize, String> {
    match value.map(str::trim) {
        None | Some("") => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
    }
}

impl Executor for PoolExecutor {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..len).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use legiplan_core::Sequential;

    #[test]
    fn env_parsing() {
        assert_eq!(threads_from(Some("4")), Ok(4));
        assert_eq!(threads_from(Some(" 1 ")), Ok(1));
        assert!(threads_from(None).unwrap() >= 1);
        assert!(threads_from(Some("0")).is_err());
        assert!(threads_from(Some("many")).is_err());
    }

    #[test]
    fn order_matches_sequential() {
        let f = |i: usize| (i as f64).sqrt() * 3.0;
        let pool = PoolExecutor::new(4).unwrap();
        assert_eq!(pool.threads(), 4);
        assert_eq!(pool.map_indexed(1000, f), Sequential.map_indexed(1000, f));
    }
}
