use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::smoothing::smooth;
use super::{CrossEdge, SmoothingConfig};
use crate::error::{Error, Result};
use crate::graph::search::Cost;
use crate::graph::{Dijkstra, EdgeId, RoadNetwork, VertexId};

const OUTSIDE: u8 = 0;
const FREE: u8 = 1;
const LEFT: u8 = 2;
const RIGHT: u8 = 3;

/// One side of a bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Sorted ascending.
    pub vertices: Vec<VertexId>,
    /// Sibling-boundary edges plus the inherited parent cross-edges whose
    /// back end landed in this cluster, oriented with `back` inside and
    /// sorted by edge id.
    pub cross_edges: Vec<CrossEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    pub left: Cluster,
    pub right: Cluster,
    /// Edges joining the two clusters, oriented from left to right and
    /// sorted by edge id.
    pub boundary: Vec<CrossEdge>,
    /// Minimum boundary weight, `inf` when the clusters do not touch.
    pub separation_degree: f64,
}

type FrontierEntry = Reverse<(Cost, EdgeId, VertexId)>;

/// Scratch state shared by successive bisections of the same network.
pub(crate) struct Bisector {
    state: Vec<u8>,
    search: Dijkstra,
}

impl Bisector {
    pub(crate) fn new(net: &RoadNetwork) -> Self {
        Bisector {
            state: vec![OUTSIDE; net.vertex_count()],
            search: Dijkstra::new(net.vertex_count()),
        }
    }

    fn enter(&mut self, net: &RoadNetwork, region: &[VertexId]) -> Result<()> {
        for &v in region {
            if !net.contains(v) {
                self.leave(region);
                return Err(Error::domain(format!("region vertex {v} is not in the network")));
            }
            self.state[v.index()] = FREE;
        }
        Ok(())
    }

    fn leave(&mut self, region: &[VertexId]) {
        for &v in region {
            if let Some(s) = self.state.get_mut(v.index()) {
                *s = OUTSIDE;
            }
        }
    }

    /// Connected components of the region, each sorted, in order of their
    /// smallest vertex. Expects the region entered and sorted.
    fn components(&mut self, net: &RoadNetwork, region_sorted: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut out = Vec::new();
        for &start in region_sorted {
            if self.state[start.index()] != FREE {
                continue;
            }
            self.state[start.index()] = LEFT;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for arc in net.neighbors(v) {
                    if self.state[arc.to.index()] == FREE {
                        self.state[arc.to.index()] = LEFT;
                        comp.push(arc.to);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        for &v in region_sorted {
            self.state[v.index()] = FREE;
        }
        out
    }

    /// Farthest region vertex from `source` other than itself; ties go to
    /// the smaller id.
    fn farthest(&mut self, net: &RoadNetwork, source: VertexId) -> Option<VertexId> {
        let state = &self.state;
        let mut best: Option<(f64, VertexId)> = None;
        self.search.run(
            net,
            &[(source, 0.0)],
            f64::INFINITY,
            |_, arc| state[arc.to.index()] != OUTSIDE,
            |v, d| {
                if v != source && best.is_none_or(|(bd, bv)| d > bd || (d == bd && v < bv)) {
                    best = Some((d, v));
                }
                f64::INFINITY
            },
        );
        best.map(|(_, v)| v)
    }

    pub(crate) fn select_seeds(&mut self, net: &RoadNetwork, region: &[VertexId]) -> Result<(VertexId, VertexId)> {
        let mut sorted = region.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < 2 {
            return Err(Error::domain(format!(
                "seed selection needs at least two vertices, region has {}",
                sorted.len()
            )));
        }
        self.enter(net, &sorted)?;
        let comps = self.components(net, &sorted);
        // first component of maximum size, i.e. the one with the smallest
        // minimum vertex among the largest
        let largest = comps.iter().rev().max_by_key(|c| c.len()).expect("non-empty region");
        let seeds = if largest.len() >= 2 {
            let a = self.farthest(net, largest[0]).expect("component has two vertices");
            let b = self.farthest(net, a).expect("component has two vertices");
            (a, b)
        } else {
            (sorted[0], sorted[1])
        };
        self.leave(&sorted);
        Ok(seeds)
    }

    pub(crate) fn bisect(
        &mut self,
        net: &RoadNetwork,
        region: &[VertexId],
        parent_cross: &[CrossEdge],
        left_seed: VertexId,
        right_seed: VertexId,
        cfg: SmoothingConfig,
    ) -> Result<Bisection> {
        if left_seed == right_seed {
            return Err(Error::domain(format!("seeds must be distinct, both are {left_seed}")));
        }
        let mut sorted = region.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.enter(net, &sorted)?;
        for seed in [left_seed, right_seed] {
            if !net.contains(seed) || self.state[seed.index()] != FREE {
                self.leave(&sorted);
                return Err(Error::domain(format!("seed {seed} is not in the partition")));
            }
        }

        let mut grow = Growth {
            state: &mut self.state,
            net,
            frontier: [BinaryHeap::new(), BinaryHeap::new()],
            population: [0, 0],
            boundary: Vec::new(),
        };
        grow.claim(left_seed, LEFT);
        grow.claim(right_seed, RIGHT);
        grow.run(cfg.alpha());

        // leftover components never touched either cluster
        let leftover: Vec<VertexId> = sorted
            .iter()
            .copied()
            .filter(|v| grow.state[v.index()] == FREE)
            .collect();
        for &start in &leftover {
            if grow.state[start.index()] != FREE {
                continue;
            }
            let side = if grow.population[0] <= grow.population[1] {
                LEFT
            } else {
                RIGHT
            };
            let mut stack = vec![start];
            grow.state[start.index()] = side;
            grow.population[(side - LEFT) as usize] += 1;
            while let Some(v) = stack.pop() {
                for arc in net.neighbors(v) {
                    if grow.state[arc.to.index()] == FREE {
                        grow.state[arc.to.index()] = side;
                        grow.population[(side - LEFT) as usize] += 1;
                        stack.push(arc.to);
                    }
                }
            }
        }

        let mut boundary = std::mem::take(&mut grow.boundary);
        for e in boundary.iter_mut() {
            if self.state[e.back.index()] == RIGHT {
                std::mem::swap(&mut e.back, &mut e.front);
            }
        }
        boundary.sort_by_key(|e| e.edge);
        let separation_degree = boundary.iter().map(|e| e.weight).fold(f64::INFINITY, f64::min);

        let mut clusters = [LEFT, RIGHT].map(|side| Cluster {
            vertices: sorted
                .iter()
                .copied()
                .filter(|v| self.state[v.index()] == side)
                .collect(),
            cross_edges: parent_cross
                .iter()
                .filter(|e| self.state.get(e.back.index()) == Some(&side))
                .copied()
                .collect(),
        });
        for e in &boundary {
            clusters[0].cross_edges.push(*e);
            clusters[1].cross_edges.push(e.reversed());
        }
        for c in clusters.iter_mut() {
            c.cross_edges.sort_by_key(|e| e.edge);
        }
        self.leave(&sorted);

        let [left, right] = clusters;
        Ok(Bisection {
            left,
            right,
            boundary,
            separation_degree,
        })
    }
}

struct Growth<'a> {
    state: &'a mut [u8],
    net: &'a RoadNetwork,
    frontier: [BinaryHeap<FrontierEntry>; 2],
    population: [usize; 2],
    boundary: Vec<CrossEdge>,
}

impl Growth<'_> {
    fn claim(&mut self, v: VertexId, side: u8) {
        let me = (side - LEFT) as usize;
        let other = if side == LEFT { RIGHT } else { LEFT };
        self.state[v.index()] = side;
        self.population[me] += 1;
        for arc in self.net.neighbors(v) {
            match self.state[arc.to.index()] {
                // leads out of the parent: an inherited cross-edge
                OUTSIDE => {}
                FREE => self.frontier[me].push(Reverse((Cost(arc.weight), arc.edge, arc.to))),
                s if s == other => self.boundary.push(CrossEdge {
                    edge: arc.edge,
                    back: v,
                    front: arc.to,
                    weight: arc.weight,
                }),
                _ => {}
            }
        }
    }

    fn run(&mut self, alpha: f64) {
        loop {
            let side = match (self.frontier[0].peek(), self.frontier[1].peek()) {
                (None, None) => break,
                (Some(_), None) => LEFT,
                (None, Some(_)) => RIGHT,
                (Some(Reverse((l, ..))), Some(Reverse((r, ..)))) => {
                    let (wl, wr) = smooth(l.0, r.0, self.population[0], self.population[1], alpha);
                    if wl <= wr {
                        LEFT
                    } else {
                        RIGHT
                    }
                }
            };
            let Reverse((_, _, front)) = self.frontier[(side - LEFT) as usize].pop().expect("peeked");
            if self.state[front.index()] == FREE {
                self.claim(front, side);
            }
        }
    }
}

/// Picks two far-apart vertices of the region by a double sweep: the
/// farthest vertex `a` from the smallest id, then the farthest `b` from `a`.
///
/// On a disconnected region the sweep runs inside the largest component;
/// if every component is a single vertex the two smallest ids are used.
pub fn select_seeds(net: &RoadNetwork, region: &[VertexId]) -> Result<(VertexId, VertexId)> {
    Bisector::new(net).select_seeds(net, region)
}

/// Splits `region` into two clusters grown best-first from the two seeds.
///
/// Each step expands the cluster whose cheapest frontier edge has the
/// smaller smoothed weight (ties go left, then to the smaller edge id).
/// Edges leading out of the region are never traversed. Vertices that
/// neither cluster reaches are handed, one component at a time, to the
/// currently smaller cluster.
pub fn bisect(
    net: &RoadNetwork,
    region: &[VertexId],
    parent_cross: &[CrossEdge],
    left_seed: VertexId,
    right_seed: VertexId,
    cfg: SmoothingConfig,
) -> Result<Bisection> {
    Bisector::new(net).bisect(net, region, parent_cross, left_seed, right_seed, cfg)
}
