//! Thread-pool executor and wall clocks for the estimation framework.

use std::time::Instant;

use rayon::prelude::*;
use tempograph_core::estimation::{Clock, Executor, NoClock};

/// Runs sample batches on a dedicated rayon pool. Results come back in
/// index order whatever the worker count.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `workers == 0` uses every available core.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(RayonExecutor { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&f).collect())
    }
}

/// Seconds since construction.
pub struct SystemClock {
    start: Instant,
}

impl SystemClock {
    pub fn start() -> Self {
        SystemClock { start: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// A wall clock when a time budget applies, otherwise a stopped one so that
/// reports carry no timing noise.
pub enum RunClock {
    Wall(SystemClock),
    Stopped(NoClock),
}

impl RunClock {
    pub fn for_budget(budget: Option<f64>) -> Self {
        match budget {
            Some(_) => RunClock::Wall(SystemClock::start()),
            None => RunClock::Stopped(NoClock),
        }
    }
}

impl Clock for RunClock {
    fn now_secs(&self) -> f64 {
        match self {
            RunClock::Wall(c) => c.now_secs(),
            RunClock::Stopped(c) => c.now_secs(),
        }
    }
}
