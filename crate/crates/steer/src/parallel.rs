//! Thread-pool backed grid construction and neighbour evaluation.
//!
//! Both map pure per-item work over an indexed range and collect in index
//! order, so results do not depend on the worker count.

use elastica_core::grid::{lump_to_grid, sample_at, EndpointGrid, GridParams};
use elastica_core::planner::{MaskEvaluator, PlanContext};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Result, SteerError};

pub fn pool(workers: usize) -> Result<ThreadPool> {
    ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SteerError::Semantic(format!("thread pool: {e}")))
}

pub fn build_grid(p: &GridParams, workers: usize) -> Result<EndpointGrid> {
    p.validate()?;
    let samples = pool(workers)?.install(|| {
        (0..p.sample_count()).into_par_iter().map(|i| sample_at(p, i)).collect::<std::result::Result<Vec<_>, _>>()
    })?;
    Ok(lump_to_grid(&samples, p)?)
}

/// Evaluates neighbour masks on a dedicated pool.
pub struct PoolEvaluator {
    pool: ThreadPool,
}

impl PoolEvaluator {
    pub fn new(workers: usize) -> Result<Self> {
        Ok(PoolEvaluator { pool: pool(workers)? })
    }
}

impl MaskEvaluator for PoolEvaluator {
    fn evaluate(&self, ctx: &PlanContext<'_>, nodes: &[u32], out: &mut [u8]) {
        if nodes.len() < 4 || self.pool.current_num_threads() == 1 {
            for (o, &v) in out.iter_mut().zip(nodes) {
                *o = ctx.mask(ctx.dims.unpack(v));
            }
            return;
        }
        self.pool.install(|| {
            out.par_iter_mut().zip(nodes.par_iter()).for_each(|(o, &v)| *o = ctx.mask(ctx.dims.unpack(v)));
        });
    }
}
