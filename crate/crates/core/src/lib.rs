//! Parallel `k` closest pairs and distance joins over road networks.
//!
//! The network is recursively bisected into a hierarchy of partitions.
//! Queries are answered bottom-up: every leaf-level partition is searched
//! locally, then sibling results are combined by expanding the cross-edges
//! between them, cheapest first, until no remaining edge can improve the
//! answer. A shared threshold lets concurrent tasks prune each other.
//!
//! ```
//! use roadjoin::{build_hierarchy, closest_pairs_parallel, synthetic, QueryParams, QuerySets,
//!     SchedulerConfig, SmoothingConfig, VertexId};
//!
//! let net = synthetic::path(&[1.0, 2.0, 3.0]);
//! let h = build_hierarchy(&net, 2, SmoothingConfig::default()).unwrap();
//! let sets = QuerySets::new([VertexId(0)], [VertexId(2), VertexId(3)]).unwrap();
//! let params = QueryParams::closest_pairs(1, f64::INFINITY).unwrap();
//! let out = closest_pairs_parallel(&net, &h, &sets, params, &SchedulerConfig::default()).unwrap();
//! assert_eq!(out.pairs[0].dist, 3.0);
//! ```

pub mod bench;
mod error;
pub mod graph;
mod output;
pub mod partition;
pub mod query;
pub mod sched;

pub use error::{Error, Result};
pub use graph::{
    bounded_dijkstra, load_network, oracle_closest_pairs, sample_sets, synthetic, Arc, Dijkstra, Edge, EdgeId,
    Membership, QuerySets, RoadNetwork, VertexId,
};
pub use output::{format_distance, format_pairs, write_pairs};
pub use partition::*;
pub use query::{
    distance_join, InsideRoutes, JoinContext, MatchPair, PartialResult, QueryMode, QueryParams, ResultHeap,
};
pub use sched::{
    choose_granularity, closest_pairs_parallel, closest_pairs_sequential, GlobalThreshold, QueryOutcome,
    SchedulerConfig, Stats, StatsSnapshot, ThresholdMode, Trace, TraceEvent,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/network.md")]
    mod network {}
    #[doc = include_str!("../../../book/src/partitioning.md")]
    mod partitioning {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/scheduling.md")]
    mod scheduling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
}
