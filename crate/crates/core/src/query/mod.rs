//! Partition-local closest-pairs search, the two-child merge and bounded
//! cross-edge expansion.

mod engine;
mod heap;
mod routes;

use crate::error::{Error, Result};
use crate::graph::{QuerySets, RoadNetwork};
use crate::partition::PartitionHierarchy;
use crate::sched::{closest_pairs_parallel, SchedulerConfig};

pub use engine::{JoinContext, PartialResult};
pub use heap::{MatchPair, ResultHeap};
pub use routes::InsideRoutes;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    ClosestPairs,
    DistanceJoin,
}

/// `k` closest pairs within `theta`, or, with `k` unbounded and a finite
/// `theta`, the full distance join.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryParams {
    k: Option<usize>,
    theta: f64,
}

impl QueryParams {
    /// Pass `f64::INFINITY` for an unbounded `theta`.
    pub fn closest_pairs(k: usize, theta: f64) -> Result<Self> {
        Self::new(Some(k), theta)
    }

    pub fn distance_join(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!(
                "distance join needs a finite positive theta, got {theta}"
            )));
        }
        Self::new(None, theta)
    }

    pub fn new(k: Option<usize>, theta: f64) -> Result<Self> {
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::domain(format!("theta must be non-negative, got {theta}")));
        }
        Ok(QueryParams { k, theta })
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mode(&self) -> QueryMode {
        if self.k.is_none() && self.theta.is_finite() {
            QueryMode::DistanceJoin
        } else {
            QueryMode::ClosestPairs
        }
    }
}

/// Every `(r, s)` with network distance `<= theta`, sorted by `(dist, r, s)`.
pub fn distance_join(
    net: &RoadNetwork,
    hierarchy: &PartitionHierarchy,
    sets: &QuerySets,
    theta: f64,
    cfg: &SchedulerConfig,
) -> Result<Vec<MatchPair>> {
    let params = QueryParams::distance_join(theta)?;
    Ok(closest_pairs_parallel(net, hierarchy, sets, params, cfg)?.pairs)
}
