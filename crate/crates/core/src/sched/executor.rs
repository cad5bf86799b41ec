use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::{Condvar, Mutex};
use std::thread;

use super::{choose_granularity, GlobalThreshold, SchedulerConfig, StatsSnapshot, ThresholdMode, TraceEvent};
use crate::error::{Error, Result};
use crate::graph::{Dijkstra, QuerySets, RoadNetwork};
use crate::partition::{PartitionHierarchy, PartitionId};
use crate::query::{JoinContext, MatchPair, PartialResult, QueryParams};

/// Final answer of one query plus its instrumentation.
#[derive(Debug, Clone)]
pub struct QueryOutcome {
    /// Sorted by `(dist, r, s)`.
    pub pairs: Vec<MatchPair>,
    pub stats: StatsSnapshot,
    /// Present when tracing was requested.
    pub trace: Option<Vec<TraceEvent>>,
    /// Successive values of the shared threshold (global mode with tracing).
    pub threshold_history: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TaskKind {
    Leaf,
    Merge,
}

#[derive(Debug)]
struct Task {
    node: PartitionId,
    kind: TaskKind,
    parent: Option<usize>,
    children: Option<(usize, usize)>,
    height: usize,
}

/// Builds the task tree top-down with an explicit stack: frontier nodes
/// become leaf-work, everything above them merge-work.
fn plan(h: &PartitionHierarchy, frontier: &[PartitionId]) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    let mut stack = vec![(h.root().id(), None::<usize>)];
    while let Some((node, parent)) = stack.pop() {
        let idx = tasks.len();
        let leaf = frontier.binary_search(&node).is_ok();
        tasks.push(Task {
            node,
            kind: if leaf { TaskKind::Leaf } else { TaskKind::Merge },
            parent,
            children: None,
            height: 0,
        });
        if let Some(p) = parent {
            let c = &mut tasks[p].children;
            *c = Some(match *c {
                None => (idx, usize::MAX),
                Some((l, _)) => (l, idx),
            });
        }
        if !leaf {
            let (l, r) = h.node(node).children().expect("frontier covers every leaf");
            // pushed right first so the left child gets the lower task index
            stack.push((r, Some(idx)));
            stack.push((l, Some(idx)));
        }
    }
    // children always have larger indices than their parent
    for i in (0..tasks.len()).rev() {
        if let Some((l, r)) = tasks[i].children {
            tasks[i].height = 1 + tasks[l].height.min(tasks[r].height);
        }
    }
    tasks
}

/// Height, then larger population first, then node id; the last field is
/// the task index.
type ReadyKey = Reverse<(usize, Reverse<usize>, PartitionId, usize)>;

struct ExecState {
    ready: BinaryHeap<ReadyKey>,
    slots: Vec<Option<PartialResult>>,
    pending: Vec<u8>,
    result: Option<PartialResult>,
    error: Option<Error>,
}

impl ExecState {
    fn make_ready(&mut self, tasks: &[Task], h: &PartitionHierarchy, i: usize) {
        let t = &tasks[i];
        self.ready
            .push(Reverse((t.height, Reverse(h.node(t.node).population()), t.node, i)));
    }
}

/// Runs a `k`-closest-pairs (or, with `k` unbounded, distance-join) query
/// over the hierarchy with at most `cfg.parallelism` tasks in flight.
///
/// Leaf-work runs on the granularity frontier, merge-work bottom-up. Ready
/// tasks are taken lowest-height first so finished subtrees are combined
/// and released before new leaf work starts higher up.
pub fn closest_pairs_parallel(
    net: &RoadNetwork,
    h: &PartitionHierarchy,
    sets: &QuerySets,
    params: QueryParams,
    cfg: &SchedulerConfig,
) -> Result<QueryOutcome> {
    if cfg.parallelism == 0 {
        return Err(Error::domain("parallelism must be at least 1"));
    }
    let mut ctx = JoinContext::new(net, h, sets, params)?;
    if cfg.trace {
        ctx = ctx.with_trace();
    }
    if params.k() == Some(0) {
        return Ok(finish(ctx, Vec::new(), None));
    }

    let frontier = choose_granularity(h, cfg);
    let tasks = plan(h, &frontier);
    let shared = match cfg.threshold_mode {
        ThresholdMode::Global if cfg.trace => Some(GlobalThreshold::with_history(params.theta())),
        ThresholdMode::Global => Some(GlobalThreshold::new(params.theta())),
        ThresholdMode::Local => None,
    };

    let mut state = ExecState {
        ready: BinaryHeap::new(),
        slots: (0..tasks.len()).map(|_| None).collect(),
        pending: tasks
            .iter()
            .map(|t| if t.kind == TaskKind::Merge { 2 } else { 0 })
            .collect(),
        result: None,
        error: None,
    };
    for i in 0..tasks.len() {
        if tasks[i].kind == TaskKind::Leaf {
            state.make_ready(&tasks, h, i);
        }
    }
    let state = Mutex::new(state);
    let wake = Condvar::new();

    let workers = cfg.parallelism.min(tasks.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| worker(&ctx, h, &tasks, &state, &wake, shared.as_ref()));
        }
    });

    let state = state.into_inner().unwrap();
    if let Some(e) = state.error {
        return Err(e);
    }
    let result = state
        .result
        .ok_or_else(|| Error::Internal("scheduler finished without a root result".into()))?;
    let history = shared.as_ref().and_then(GlobalThreshold::history);
    Ok(finish(ctx, result.heap.into_sorted_vec(), history))
}

fn finish(ctx: JoinContext<'_>, pairs: Vec<MatchPair>, threshold_history: Option<Vec<f64>>) -> QueryOutcome {
    let stats = ctx.stats.snapshot();
    QueryOutcome {
        pairs,
        stats,
        trace: ctx.trace.map(|t| t.into_events()),
        threshold_history,
    }
}

fn worker(
    ctx: &JoinContext<'_>,
    h: &PartitionHierarchy,
    tasks: &[Task],
    state: &Mutex<ExecState>,
    wake: &Condvar,
    shared: Option<&GlobalThreshold>,
) {
    let mut ws: Option<Dijkstra> = None;
    loop {
        let (i, inputs) = {
            let mut st = state.lock().unwrap();
            loop {
                if st.error.is_some() || st.result.is_some() {
                    return;
                }
                if let Some(Reverse((.., i))) = st.ready.pop() {
                    let inputs = tasks[i].children.map(|(l, r)| {
                        let take = |st: &mut ExecState, c: usize| st.slots[c].take().expect("child published");
                        (take(&mut st, l), take(&mut st, r))
                    });
                    break (i, inputs);
                }
                st = wake.wait(st).unwrap();
            }
        };

        let task = &tasks[i];
        let ws = ws.get_or_insert_with(|| ctx.workspace());
        let local;
        let threshold = match shared {
            Some(t) => t,
            None => {
                local = GlobalThreshold::new(ctx.params().theta());
                &local
            }
        };

        ctx.stats.enter();
        ctx.record(TraceEvent::TaskStart { node: task.node });
        let out = match inputs {
            None => Ok(ctx.local_pairs(task.node, ws, threshold)),
            Some((left, right)) => ctx.combine_pairs(task.node, left, right, ws, threshold),
        };
        ctx.record(TraceEvent::TaskEnd { node: task.node });
        ctx.stats.exit();

        let mut st = state.lock().unwrap();
        match out {
            Ok(res) => match task.parent {
                Some(p) => {
                    st.slots[i] = Some(res);
                    st.pending[p] -= 1;
                    if st.pending[p] == 0 {
                        st.make_ready(tasks, h, p);
                    }
                }
                None => st.result = Some(res),
            },
            Err(e) => {
                if st.error.is_none() {
                    st.error = Some(e);
                }
            }
        }
        drop(st);
        wake.notify_all();
    }
}

/// Single-threaded post-order evaluation over the same frontier; the
/// reference the parallel scheduler must agree with.
pub fn closest_pairs_sequential(
    net: &RoadNetwork,
    h: &PartitionHierarchy,
    sets: &QuerySets,
    params: QueryParams,
    cfg: &SchedulerConfig,
) -> Result<Vec<MatchPair>> {
    let ctx = JoinContext::new(net, h, sets, params)?;
    if params.k() == Some(0) {
        return Ok(Vec::new());
    }
    let frontier = choose_granularity(h, cfg);
    let threshold = GlobalThreshold::new(params.theta());
    let mut ws = ctx.workspace();

    fn eval(
        ctx: &JoinContext<'_>,
        h: &PartitionHierarchy,
        frontier: &[PartitionId],
        node: PartitionId,
        ws: &mut Dijkstra,
        th: &GlobalThreshold,
        local: bool,
    ) -> Result<PartialResult> {
        let own;
        let th = if local {
            own = GlobalThreshold::new(ctx.params().theta());
            &own
        } else {
            th
        };
        if frontier.binary_search(&node).is_ok() {
            return Ok(ctx.local_pairs(node, ws, th));
        }
        let (l, r) = h.node(node).children().expect("frontier covers every leaf");
        let left = eval(ctx, h, frontier, l, ws, th, local)?;
        let right = eval(ctx, h, frontier, r, ws, th, local)?;
        ctx.combine_pairs(node, left, right, ws, th)
    }

    let local = cfg.threshold_mode == ThresholdMode::Local;
    let root = eval(&ctx, h, &frontier, h.root().id(), &mut ws, &threshold, local)?;
    Ok(root.heap.into_sorted_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{synthetic, VertexId};
    use crate::partition::{build_hierarchy, SmoothingConfig};

    #[test]
    fn plan_links_parents_and_heights() {
        let net = synthetic::path(&[1.0; 7]);
        let h = build_hierarchy(&net, 2, SmoothingConfig::new(1.0).unwrap()).unwrap();
        let frontier: Vec<PartitionId> = h.leaves().map(|l| l.id()).collect();
        let tasks = plan(&h, &frontier);
        assert_eq!(tasks.len(), 7);
        assert_eq!(tasks[0].height, 2);
        assert_eq!(tasks.iter().filter(|t| t.kind == TaskKind::Leaf).count(), 4);
        for (i, t) in tasks.iter().enumerate() {
            if let Some((l, r)) = t.children {
                assert_eq!(tasks[l].parent, Some(i));
                assert_eq!(tasks[r].parent, Some(i));
            }
        }
    }

    #[test]
    fn parallel_equals_sequential_on_grid() {
        let net = synthetic::grid(6, 6, |x, y, _, _| 1.0 + ((x * 7 + y * 3) % 5) as f64);
        let h = build_hierarchy(&net, 4, SmoothingConfig::default()).unwrap();
        let q = QuerySets::new((0..6).map(|i| VertexId(i * 6)), (0..6).map(|i| VertexId(i * 6 + 5))).unwrap();
        let params = QueryParams::closest_pairs(5, f64::INFINITY).unwrap();
        let seq = closest_pairs_sequential(&net, &h, &q, params, &SchedulerConfig::default()).unwrap();
        for p in [1, 2, 4, 8] {
            let cfg = SchedulerConfig {
                parallelism: p,
                ..SchedulerConfig::default()
            };
            let par = closest_pairs_parallel(&net, &h, &q, params, &cfg).unwrap();
            assert_eq!(par.pairs, seq);
            assert!(par.stats.peak_concurrency <= p);
        }
    }

    #[test]
    fn zero_parallelism_rejected() {
        let net = synthetic::path(&[1.0]);
        let h = build_hierarchy(&net, 1, SmoothingConfig::default()).unwrap();
        let q = QuerySets::new([VertexId(0)], [VertexId(1)]).unwrap();
        let cfg = SchedulerConfig {
            parallelism: 0,
            ..SchedulerConfig::default()
        };
        let params = QueryParams::closest_pairs(1, f64::INFINITY).unwrap();
        assert!(closest_pairs_parallel(&net, &h, &q, params, &cfg).is_err());
    }
}
