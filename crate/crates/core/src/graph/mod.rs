//! Road-network representation, file ingestion, bounded shortest paths,
//! query-set sampling and the brute-force reference answer.

mod load;
mod oracle;
mod sample;
pub(crate) mod search;
pub mod synthetic;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use load::load_network;
pub use oracle::oracle_closest_pairs;
pub use sample::sample_sets;
pub use search::{bounded_dijkstra, Dijkstra};

/// Dense vertex index in `[0, |V|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense edge index, in load order after self-loops are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
    pub weight: f64,
}

impl Edge {
    /// The endpoint opposite to `v`.
    #[inline]
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// One entry of a vertex's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub to: VertexId,
    pub edge: EdgeId,
    pub weight: f64,
}

/// Undirected weighted graph. Coordinates are carried for output only;
/// every distance is a sum of edge weights.
#[derive(Debug, Clone)]
pub struct RoadNetwork {
    coords: Vec<(f64, f64)>,
    external_ids: Vec<i64>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    arcs: Vec<Arc>,
}

impl RoadNetwork {
    /// Builds a network from dense vertices and an edge list given as
    /// `(a, b, weight)`. Self-loops are dropped, parallel edges kept.
    pub fn from_edges(coords: Vec<(f64, f64)>, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        let n = coords.len();
        let external_ids = (0..n as i64).collect();
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Integrity(format!(
                    "edge ({a}, {b}) references a vertex outside [0, {n})"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::domain(format!("edge ({a}, {b}) has invalid weight {w}")));
            }
            if a == b {
                continue;
            }
            list.push((VertexId(a), VertexId(b), w));
        }
        Ok(Self::assemble(coords, external_ids, list))
    }

    /// Unit-coordinate helper: `n` vertices placed on the x axis.
    pub fn with_vertex_count(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        Self::from_edges((0..n).map(|i| (i as f64, 0.0)).collect(), edges)
    }

    pub(crate) fn assemble(
        coords: Vec<(f64, f64)>,
        external_ids: Vec<i64>,
        list: Vec<(VertexId, VertexId, f64)>,
    ) -> Self {
        let n = coords.len();
        let edges: Vec<Edge> = list
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, weight))| Edge {
                id: EdgeId(i as u32),
                a,
                b,
                weight,
            })
            .collect();

        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.a.index()] += 1;
            degree[e.b.index()] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets.clone();
        let placeholder = Arc {
            to: VertexId(0),
            edge: EdgeId(0),
            weight: 0.0,
        };
        let mut arcs = vec![placeholder; offsets[n]];
        for e in &edges {
            arcs[cursor[e.a.index()]] = Arc {
                to: e.b,
                edge: e.id,
                weight: e.weight,
            };
            cursor[e.a.index()] += 1;
            arcs[cursor[e.b.index()]] = Arc {
                to: e.a,
                edge: e.id,
                weight: e.weight,
            };
            cursor[e.b.index()] += 1;
        }

        RoadNetwork {
            coords,
            external_ids,
            edges,
            offsets,
            arcs,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertex_count() as u32).map(VertexId)
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count()
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[Arc] {
        &self.arcs[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn coordinates(&self, v: VertexId) -> (f64, f64) {
        self.coords[v.index()]
    }

    /// The id this vertex carried in the input file.
    pub fn external_id(&self, v: VertexId) -> i64 {
        self.external_ids[v.index()]
    }

    /// Inverse of [`external_id`](Self::external_id).
    pub fn vertex_by_external_id(&self, id: i64) -> Option<VertexId> {
        // external ids are stored in ascending order
        self.external_ids.binary_search(&id).ok().map(|i| VertexId(i as u32))
    }
}

/// The two disjoint vertex sets being joined; pairs are always oriented
/// from `r` to `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySets {
    r: BTreeSet<VertexId>,
    s: BTreeSet<VertexId>,
}

impl QuerySets {
    pub fn new(r: impl IntoIterator<Item = VertexId>, s: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let r: BTreeSet<_> = r.into_iter().collect();
        let s: BTreeSet<_> = s.into_iter().collect();
        if let Some(v) = r.intersection(&s).next() {
            return Err(Error::domain(format!(
                "R and S must be disjoint, vertex {v} is in both"
            )));
        }
        Ok(QuerySets { r, s })
    }

    pub fn r(&self) -> &BTreeSet<VertexId> {
        &self.r
    }

    pub fn s(&self) -> &BTreeSet<VertexId> {
        &self.s
    }

    pub(crate) fn check_within(&self, net: &RoadNetwork) -> Result<()> {
        for v in self.r.iter().chain(&self.s) {
            if !net.contains(*v) {
                return Err(Error::domain(format!("query vertex {v} is not in the network")));
            }
        }
        Ok(())
    }
}

/// Dense membership bitmaps for `R` and `S`.
#[derive(Debug, Clone)]
pub struct Membership {
    in_r: Vec<bool>,
    in_s: Vec<bool>,
}

impl Membership {
    pub fn new(net: &RoadNetwork, sets: &QuerySets) -> Self {
        let mut in_r = vec![false; net.vertex_count()];
        let mut in_s = vec![false; net.vertex_count()];
        for v in sets.r() {
            in_r[v.index()] = true;
        }
        for v in sets.s() {
            in_s[v.index()] = true;
        }
        Membership { in_r, in_s }
    }

    #[inline]
    pub fn is_r(&self, v: VertexId) -> bool {
        self.in_r[v.index()]
    }

    #[inline]
    pub fn is_s(&self, v: VertexId) -> bool {
        self.in_s[v.index()]
    }
}
