use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::graph::EdgeId;
use crate::partition::PartitionId;

/// Counters shared by every task of one query.
#[derive(Debug, Default)]
pub struct Stats {
    pub(crate) expanded_cross_edges: AtomicU64,
    pub(crate) early_breaks: AtomicU64,
    pub(crate) settled_vertices: AtomicU64,
    pub(crate) threshold_updates: AtomicU64,
    running: AtomicUsize,
    peak_concurrency: AtomicUsize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatsSnapshot {
    pub expanded_cross_edges: u64,
    pub early_breaks: u64,
    pub settled_vertices: u64,
    pub threshold_updates: u64,
    pub peak_concurrency: usize,
}

impl Stats {
    pub(crate) fn add(counter: &AtomicU64, n: u64) {
        counter.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn enter(&self) {
        let now = self.running.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak_concurrency.fetch_max(now, Ordering::SeqCst);
    }

    pub(crate) fn exit(&self) {
        self.running.fetch_sub(1, Ordering::SeqCst);
    }

    pub fn snapshot(&self) -> StatsSnapshot {
        StatsSnapshot {
            expanded_cross_edges: self.expanded_cross_edges.load(Ordering::Relaxed),
            early_breaks: self.early_breaks.load(Ordering::Relaxed),
            settled_vertices: self.settled_vertices.load(Ordering::Relaxed),
            threshold_updates: self.threshold_updates.load(Ordering::Relaxed),
            peak_concurrency: self.peak_concurrency.load(Ordering::SeqCst),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceEvent {
    TaskStart {
        node: PartitionId,
    },
    TaskEnd {
        node: PartitionId,
    },
    /// A sibling cross-edge handed to expansion. `bound` is the merged
    /// result's admission bound at that moment.
    Expanded {
        parent: PartitionId,
        child: PartitionId,
        edge: EdgeId,
        weight: f64,
        bound: f64,
    },
    /// The early break: this edge and all heavier ones were skipped.
    EarlyBreak {
        parent: PartitionId,
        child: PartitionId,
        edge: EdgeId,
        weight: f64,
        bound: f64,
    },
    /// A task read the pruning threshold.
    ThresholdRead {
        task: PartitionId,
        value: f64,
    },
}

/// Ordered event log, enabled only on request.
#[derive(Debug, Default)]
pub struct Trace {
    events: Mutex<Vec<TraceEvent>>,
}

impl Trace {
    pub(crate) fn record(&self, event: TraceEvent) {
        self.events.lock().unwrap().push(event);
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events.into_inner().unwrap()
    }
}
