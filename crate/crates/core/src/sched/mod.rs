mod executor;
mod granularity;
mod instrument;
mod threshold;

pub use executor::{closest_pairs_parallel, closest_pairs_sequential, QueryOutcome};
pub use granularity::choose_granularity;
pub use instrument::{Stats, StatsSnapshot, Trace, TraceEvent};
pub use threshold::GlobalThreshold;

/// Whether tasks share one pruning threshold or each keep their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    #[default]
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulerConfig {
    /// Worker threads, at most this many tasks run at once.
    pub parallelism: usize,
    /// Leaf-work units per worker.
    pub granularity_factor: usize,
    pub threshold_mode: ThresholdMode,
    /// Record task events and the threshold history.
    pub trace: bool,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            parallelism: 8,
            granularity_factor: 2,
            threshold_mode: ThresholdMode::Global,
            trace: false,
        }
    }
}
