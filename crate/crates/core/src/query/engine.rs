use std::collections::HashSet;

use super::{InsideRoutes, MatchPair, QueryParams, ResultHeap};
use crate::error::{Error, Result};
use crate::graph::{Dijkstra, Membership, QuerySets, RoadNetwork, VertexId};
use crate::partition::{CrossEdge, PartitionHierarchy, PartitionId};
use crate::sched::{GlobalThreshold, Stats, Trace, TraceEvent};

/// Output of one task: the best pairs confined to a partition and the
/// inside routes to its border.
#[derive(Debug, Clone)]
pub struct PartialResult {
    pub heap: ResultHeap,
    pub routes: InsideRoutes,
}

/// Everything a task needs that is shared, read-only, across one query.
pub struct JoinContext<'a> {
    net: &'a RoadNetwork,
    hierarchy: &'a PartitionHierarchy,
    member: Membership,
    params: QueryParams,
    pub(crate) stats: Stats,
    pub(crate) trace: Option<Trace>,
}

impl<'a> JoinContext<'a> {
    pub fn new(
        net: &'a RoadNetwork,
        hierarchy: &'a PartitionHierarchy,
        sets: &QuerySets,
        params: QueryParams,
    ) -> Result<Self> {
        hierarchy.check_network(net)?;
        sets.check_within(net)?;
        Ok(JoinContext {
            net,
            hierarchy,
            member: Membership::new(net, sets),
            params,
            stats: Stats::default(),
            trace: None,
        })
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Trace::default());
        self
    }

    pub fn params(&self) -> QueryParams {
        self.params
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn workspace(&self) -> Dijkstra {
        Dijkstra::new(self.net.vertex_count())
    }

    pub(crate) fn record(&self, event: TraceEvent) {
        if let Some(t) = &self.trace {
            t.record(event);
        }
    }

    fn new_heap(&self) -> ResultHeap {
        ResultHeap::new(self.params.k(), self.params.theta())
    }

    /// `min(theta, Θ, k-th best of heap)`.
    fn bound(&self, task: PartitionId, heap: &ResultHeap, threshold: &GlobalThreshold) -> f64 {
        let shared = threshold.read();
        self.record(TraceEvent::ThresholdRead { task, value: shared });
        heap.bound().min(shared)
    }

    /// Pushes a full heap's `k`-th distance into the shared threshold.
    fn publish(&self, heap: &ResultHeap, threshold: &GlobalThreshold) {
        if heap.is_full() {
            if let Some(w) = heap.worst() {
                if threshold.lower(w.dist) {
                    Stats::add(&self.stats.threshold_updates, 1);
                }
            }
        }
    }

    /// One best-first search per `r` in the partition, confined to it.
    /// Every reached `s` is offered to the result; every reached border
    /// vertex gets an inside route.
    pub fn local_pairs(&self, leaf: PartitionId, ws: &mut Dijkstra, threshold: &GlobalThreshold) -> PartialResult {
        let h = self.hierarchy;
        let mut heap = self.new_heap();
        let mut routes = InsideRoutes::new();
        let border: HashSet<VertexId> = h.node(leaf).border_nodes().into_iter().collect();

        for &r in h.vertices(leaf).iter().filter(|&&v| self.member.is_r(v)) {
            let radius = self.bound(leaf, &heap, threshold);
            if radius < 0.0 {
                break;
            }
            let settled = ws.run(
                self.net,
                &[(r, 0.0)],
                radius,
                |_, arc| h.contains(leaf, arc.to),
                |v, d| {
                    if self.member.is_s(v) {
                        heap.insert(MatchPair { r, s: v, dist: d });
                    }
                    if border.contains(&v) {
                        routes.push(v, r, d);
                    }
                    heap.bound()
                },
            );
            Stats::add(&self.stats.settled_vertices, settled as u64);
            self.publish(&heap, threshold);
        }
        routes.finish();
        PartialResult { heap, routes }
    }

    /// Merges the results of `parent`'s two children, expands the sibling
    /// cross-edges of each child in ascending weight order until the
    /// merged result can no longer improve, then recomputes inside routes
    /// for `parent`'s own border by searching back from each border vertex.
    pub fn combine_pairs(
        &self,
        parent: PartitionId,
        left: PartialResult,
        right: PartialResult,
        ws: &mut Dijkstra,
        threshold: &GlobalThreshold,
    ) -> Result<PartialResult> {
        let h = self.hierarchy;
        let (lc, rc) = h
            .node(parent)
            .children()
            .ok_or_else(|| Error::Internal(format!("partition {} has no children to combine", parent.0)))?;

        let mut merged = left.heap;
        merged.merge(right.heap);
        self.publish(&merged, threshold);

        for (child, routes) in [(lc, &left.routes), (rc, &right.routes)] {
            for edge in h.sibling_edges(child) {
                let admission = merged.bound();
                if edge.weight > admission {
                    Stats::add(&self.stats.early_breaks, 1);
                    self.record(TraceEvent::EarlyBreak {
                        parent,
                        child,
                        edge: edge.edge,
                        weight: edge.weight,
                        bound: admission,
                    });
                    break;
                }
                Stats::add(&self.stats.expanded_cross_edges, 1);
                self.record(TraceEvent::Expanded {
                    parent,
                    child,
                    edge: edge.edge,
                    weight: edge.weight,
                    bound: admission,
                });
                let starts = routes.get(edge.back);
                if starts.is_empty() {
                    continue;
                }
                let local_theta = self.bound(parent, &merged, threshold);
                for m in self.expand_cross_edge(parent, &edge, starts, self.params.k(), local_theta, ws) {
                    merged.insert(m);
                }
                self.publish(&merged, threshold);
            }
        }

        let mut routes = InsideRoutes::new();
        let mut reached = Vec::new();
        let mut weights = Vec::new();
        for beta in h.node(parent).border_nodes() {
            let radius = self.bound(parent, &merged, threshold);
            reached.clear();
            let settled = ws.run(
                self.net,
                &[(beta, 0.0)],
                loosen(radius),
                |_, arc| h.contains(parent, arc.to),
                |v, _| {
                    if self.member.is_r(v) {
                        reached.push(v);
                    }
                    f64::INFINITY
                },
            );
            Stats::add(&self.stats.settled_vertices, settled as u64);
            // summed from r towards beta
            for &r in &reached {
                ws.path_weights(r, &mut weights);
                routes.push(beta, r, weights.iter().fold(0.0, |acc, w| acc + w));
            }
        }
        routes.finish();
        Ok(PartialResult { heap: merged, routes })
    }

    /// Best-first search from the front end of `edge`, starting at cost
    /// `edge.weight` and confined to `scope`. Every `s` reached at cost `c`
    /// pairs with each inside route `(r, d)` at the back end for a total of
    /// `d + c`, kept when within `local_theta`. Returns at most `k` pairs.
    ///
    /// Totals are summed edge by edge from `r` towards `s`, the order in
    /// which a plain search from `r` accumulates them.
    pub fn expand_cross_edge(
        &self,
        scope: PartitionId,
        edge: &CrossEdge,
        starts: &[(VertexId, f64)],
        k: Option<usize>,
        local_theta: f64,
        ws: &mut Dijkstra,
    ) -> Vec<MatchPair> {
        let Some(nearest) = starts.iter().map(|s| s.1).min_by(f64::total_cmp) else {
            return Vec::new();
        };
        let h = self.hierarchy;
        let mut rough = ResultHeap::new(k, local_theta);
        let mut reached = Vec::new();
        let settled = ws.run(
            self.net,
            &[(edge.front, edge.weight)],
            loosen(local_theta) - nearest,
            |_, arc| h.contains(scope, arc.to),
            |v, c| {
                if self.member.is_s(v) {
                    reached.push((v, c));
                    for &(r, d) in starts {
                        if !rough.insert(MatchPair { r, s: v, dist: d + c }) && d + c > rough.bound() {
                            break;
                        }
                    }
                }
                loosen(rough.bound()) - nearest
            },
        );
        Stats::add(&self.stats.settled_vertices, settled as u64);

        let mut found = ResultHeap::new(k, local_theta);
        let mut weights = Vec::new();
        for (s, c) in reached {
            ws.path_weights(s, &mut weights);
            for &(r, d) in starts {
                if d + c > loosen(found.bound()) {
                    break;
                }
                let total = weights.iter().rev().fold(d + edge.weight, |acc, w| acc + w);
                found.insert(MatchPair { r, s, dist: total });
            }
        }
        found.into_sorted_vec()
    }
}

/// Widens a bound by far more than the rounding of any path sum, for
/// pre-filtering before the exact comparison.
fn loosen(bound: f64) -> f64 {
    if bound.is_finite() {
        bound + bound.abs() * 1e-9
    } else {
        bound
    }
}
