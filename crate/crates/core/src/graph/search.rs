use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use super::{Arc, EdgeId, RoadNetwork, VertexId};
use crate::error::{Error, Result};

/// Non-negative path cost with a total order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cost(pub f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Reusable best-first search state. The distance array is sized to the
/// whole network once and reset lazily, so a single instance can run many
/// small bounded searches cheaply.
#[derive(Debug)]
pub struct Dijkstra {
    dist: Vec<f64>,
    /// Tree parent and the weight of the arc used, a source is its own parent.
    pred: Vec<(VertexId, f64)>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(Cost, VertexId)>>,
}

impl Dijkstra {
    pub fn new(vertex_count: usize) -> Self {
        Dijkstra {
            dist: vec![f64::INFINITY; vertex_count],
            pred: vec![(VertexId(0), 0.0); vertex_count],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for v in self.touched.drain(..) {
            self.dist[v.index()] = f64::INFINITY;
        }
        self.heap.clear();
    }

    /// Runs a search from `sources` (each with an initial cost).
    ///
    /// Only arcs accepted by `edge_ok(from, arc)` are relaxed and only
    /// labels `<= radius` are kept. `visit` is called once per settled
    /// vertex in non-decreasing distance order and returns the radius to
    /// use from then on; returning a smaller value tightens the search.
    /// Returns the number of settled vertices.
    pub fn run<E, V>(
        &mut self,
        net: &RoadNetwork,
        sources: &[(VertexId, f64)],
        mut radius: f64,
        mut edge_ok: E,
        mut visit: V,
    ) -> usize
    where
        E: FnMut(VertexId, &Arc) -> bool,
        V: FnMut(VertexId, f64) -> f64,
    {
        self.reset();
        for &(v, d) in sources {
            if d <= radius && d < self.dist[v.index()] {
                if self.dist[v.index()] == f64::INFINITY {
                    self.touched.push(v);
                }
                self.dist[v.index()] = d;
                self.pred[v.index()] = (v, 0.0);
                self.heap.push(Reverse((Cost(d), v)));
            }
        }

        let mut settled = 0;
        while let Some(Reverse((Cost(d), v))) = self.heap.pop() {
            if d > self.dist[v.index()] {
                continue;
            }
            if d > radius {
                break;
            }
            settled += 1;
            radius = radius.min(visit(v, d));
            for arc in net.neighbors(v) {
                let nd = d + arc.weight;
                if nd > radius || nd >= self.dist[arc.to.index()] || !edge_ok(v, arc) {
                    continue;
                }
                if self.dist[arc.to.index()] == f64::INFINITY {
                    self.touched.push(arc.to);
                }
                self.dist[arc.to.index()] = nd;
                self.pred[arc.to.index()] = (v, arc.weight);
                self.heap.push(Reverse((Cost(nd), arc.to)));
            }
        }
        settled
    }

    /// Arc weights on the tree path of the last run, from `v` back to its
    /// source. Only meaningful for vertices settled in that run.
    pub(crate) fn path_weights(&self, mut v: VertexId, out: &mut Vec<f64>) {
        out.clear();
        loop {
            let (p, w) = self.pred[v.index()];
            if p == v {
                return;
            }
            out.push(w);
            v = p;
        }
    }
}

/// Exact shortest-path distances from `source` up to `radius`, never
/// crossing an edge in `forbidden` and never leaving `region` when given.
pub fn bounded_dijkstra(
    net: &RoadNetwork,
    source: VertexId,
    radius: f64,
    forbidden: &HashSet<EdgeId>,
    region: Option<&HashSet<VertexId>>,
) -> Result<BTreeMap<VertexId, f64>> {
    if !net.contains(source) {
        return Err(Error::domain(format!("source vertex {source} is not in the network")));
    }
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::domain(format!("radius must be non-negative, got {radius}")));
    }
    if let Some(region) = region {
        if !region.contains(&source) {
            return Err(Error::domain(format!("source vertex {source} lies outside the region")));
        }
    }

    let mut out = BTreeMap::new();
    let mut search = Dijkstra::new(net.vertex_count());
    search.run(
        net,
        &[(source, 0.0)],
        radius,
        |_, arc| !forbidden.contains(&arc.edge) && region.is_none_or(|r| r.contains(&arc.to)),
        |v, d| {
            out.insert(v, d);
            f64::INFINITY
        },
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> RoadNetwork {
        RoadNetwork::with_vertex_count(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    #[test]
    fn path_distances() {
        let net = path_abc();
        let d = bounded_dijkstra(&net, VertexId(0), f64::INFINITY, &HashSet::new(), None).unwrap();
        assert_eq!(
            d.into_iter().collect::<Vec<_>>(),
            vec![(VertexId(0), 0.0), (VertexId(1), 1.0), (VertexId(2), 3.0)]
        );
    }

    #[test]
    fn radius_cuts_search() {
        let net = path_abc();
        let d = bounded_dijkstra(&net, VertexId(0), 1.5, &HashSet::new(), None).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&VertexId(1)], 1.0);
        // radius is inclusive
        let d = bounded_dijkstra(&net, VertexId(0), 3.0, &HashSet::new(), None).unwrap();
        assert_eq!(d[&VertexId(2)], 3.0);
    }

    #[test]
    fn forbidden_and_region() {
        let net = path_abc();
        let forbidden: HashSet<_> = [EdgeId(1)].into();
        let d = bounded_dijkstra(&net, VertexId(0), f64::INFINITY, &forbidden, None).unwrap();
        assert!(!d.contains_key(&VertexId(2)));
        let region: HashSet<_> = [VertexId(1), VertexId(2)].into();
        let d = bounded_dijkstra(&net, VertexId(2), f64::INFINITY, &HashSet::new(), Some(&region)).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn errors() {
        let net = path_abc();
        assert!(bounded_dijkstra(&net, VertexId(9), 1.0, &HashSet::new(), None).is_err());
        let region: HashSet<_> = [VertexId(1)].into();
        assert!(bounded_dijkstra(&net, VertexId(0), 1.0, &HashSet::new(), Some(&region)).is_err());
    }
}
