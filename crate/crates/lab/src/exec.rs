use rayon::prelude::*;
use rdlab_core::threshold::{Executor, SweepRecord};

use crate::error::{LabError, Result};

/// Runs independent sweep probes on a dedicated thread pool.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| LabError::Usage(format!("cannot start {workers} workers: {e}")))?;
        Ok(Self { pool })
    }
}

impl Executor for RayonExecutor {
    fn map(
        &self,
        lambdas: &[f64],
        job: &(dyn Fn(f64) -> rdlab_core::Result<SweepRecord> + Sync),
    ) -> Vec<rdlab_core::Result<SweepRecord>> {
        // par_iter keeps input order in the collected output
        self.pool.install(|| lambdas.par_iter().map(|&l| job(l)).collect())
    }
}
