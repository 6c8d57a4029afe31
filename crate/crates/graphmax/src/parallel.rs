//! Restart-parallel search. Each restart owns its random stream, and
//! outcomes are merged by restart index, so the thread count never changes
//! the result.

use graphmax_core::search::{merge_restarts, run_restart};
use graphmax_core::{Graph, SearchConfig, SearchError, SearchReport};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};

pub const THREADS_VAR: &str = "GRAPHMAX_THREADS";

/// Thread cap from `GRAPHMAX_THREADS`; `None` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(Error::usage(format!(
                "{THREADS_VAR} must be a positive integer, got {s:?}"
            ))),
            Ok(k) => Ok(Some(k)),
        },
    }
}

pub struct Runner {
    pool: ThreadPool,
}

impl Runner {
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::usage(format!("cannot start thread pool: {e}")))?;
        Ok(Runner { pool })
    }

    /// Runner honouring `GRAPHMAX_THREADS`.
    pub fn from_env() -> Result<Self> {
        Runner::new(thread_cap()?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Same result as [`graphmax_core::estimate_ratio`], restarts spread over
    /// the pool.
    pub fn estimate(&self, g: &Graph, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
        cfg.validate()?;
        if cfg.target == graphmax_core::Target::VariationRatio && g.edges().is_empty() {
            return Err(SearchError::NoEdges);
        }
        let outcomes = self.pool.install(|| {
            (0..cfg.restarts)
                .into_par_iter()
                .map(|i| run_restart(g, cfg, i))
                .collect::<Result<Vec<_>, _>>()
        })?;
        merge_restarts(g, cfg, outcomes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphmax_core::{estimate_ratio, PExponent, Target};

    #[test]
    fn parallel_matches_serial() {
        let g = Graph::star(5).unwrap();
        let cfg = SearchConfig {
            restarts: 6,
            ..SearchConfig::new(Target::NormRatio, PExponent::new(2.0).unwrap())
        };
        let serial = estimate_ratio(&g, &cfg).unwrap();
        for threads in [1, 3] {
            let par = Runner::new(Some(threads))
                .unwrap()
                .estimate(&g, &cfg)
                .unwrap();
            assert_eq!(par, serial);
        }
    }

    #[test]
    fn edgeless_variation_is_rejected() {
        let g = Graph::new(2, &[]).unwrap();
        let cfg = SearchConfig::default();
        let r = Runner::new(Some(1)).unwrap().estimate(&g, &cfg);
        assert_eq!(r, Err(SearchError::NoEdges));
    }
}
