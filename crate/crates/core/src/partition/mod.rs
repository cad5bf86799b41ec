//! Well-separated recursive bisection of a road network.
//!
//! Every node of a [`PartitionHierarchy`] owns a contiguous slice of one
//! shared vertex ordering, so membership tests are a range check and the
//! vertex set of any node is a borrowed slice.

mod bisect;
mod build;
mod persist;
mod smoothing;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, RoadNetwork, VertexId};

pub use bisect::{bisect, select_seeds, Bisection, Cluster};
pub use build::build_hierarchy;
pub use persist::{load_hierarchy, save_hierarchy, FORMAT_VERSION};
pub use smoothing::{smoothed_weights, SmoothingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionId(pub u32);

impl PartitionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An edge leaving a partition: `back` lies inside, `front` outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossEdge {
    pub edge: EdgeId,
    pub back: VertexId,
    pub front: VertexId,
    pub weight: f64,
}

impl CrossEdge {
    pub fn reversed(&self) -> Self {
        CrossEdge {
            back: self.front,
            front: self.back,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionNode {
    pub(crate) id: PartitionId,
    pub(crate) parent: Option<PartitionId>,
    pub(crate) children: Option<(PartitionId, PartitionId)>,
    pub(crate) range: Range<usize>,
    pub(crate) cross_edges: Vec<CrossEdge>,
    pub(crate) separation_degree: f64,
}

impl PartitionNode {
    pub fn id(&self) -> PartitionId {
        self.id
    }

    pub fn parent(&self) -> Option<PartitionId> {
        self.parent
    }

    pub fn children(&self) -> Option<(PartitionId, PartitionId)> {
        self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn population(&self) -> usize {
        self.range.len()
    }

    /// All edges with exactly one endpoint in this node, sorted by edge id.
    pub fn cross_edges(&self) -> &[CrossEdge] {
        &self.cross_edges
    }

    /// Minimum weight of the edges separating this node from its sibling;
    /// `inf` for the root or when the siblings do not touch.
    pub fn separation_degree(&self) -> f64 {
        self.separation_degree
    }

    /// Inside endpoints of the cross-edges, sorted and deduplicated.
    pub fn border_nodes(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.cross_edges.iter().map(|e| e.back).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Binary tree of vertex regions; every vertex lies in exactly one leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionHierarchy {
    pub(crate) nodes: Vec<PartitionNode>,
    pub(crate) order: Vec<VertexId>,
    pub(crate) position: Vec<u32>,
    pub(crate) leaf_size_limit: usize,
    pub(crate) alpha: f64,
}

impl PartitionHierarchy {
    pub fn root(&self) -> &PartitionNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: PartitionId) -> &PartitionNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[PartitionNode] {
        &self.nodes
    }

    pub fn leaves(&self) -> impl Iterator<Item = &PartitionNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn leaf_size_limit(&self) -> usize {
        self.leaf_size_limit
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    /// Vertices of a node. Within a leaf they are sorted ascending.
    pub fn vertices(&self, id: PartitionId) -> &[VertexId] {
        &self.order[self.node(id).range.clone()]
    }

    #[inline]
    pub fn contains(&self, id: PartitionId, v: VertexId) -> bool {
        self.nodes[id.index()]
            .range
            .contains(&(self.position[v.index()] as usize))
    }

    pub fn sibling(&self, id: PartitionId) -> Option<PartitionId> {
        let (l, r) = self.node(self.node(id).parent?).children?;
        Some(if l == id { r } else { l })
    }

    /// Cross-edges of `id` that lead into its sibling, ascending by
    /// `(weight, edge id)`.
    pub fn sibling_edges(&self, id: PartitionId) -> Vec<CrossEdge> {
        let Some(sib) = self.sibling(id) else {
            return Vec::new();
        };
        let mut out: Vec<CrossEdge> = self
            .node(id)
            .cross_edges
            .iter()
            .filter(|e| self.contains(sib, e.front))
            .copied()
            .collect();
        out.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.edge.cmp(&b.edge)));
        out
    }

    /// Distance in edges to the shallowest leaf below (0 for a leaf).
    pub fn height(&self, id: PartitionId) -> usize {
        match self.node(id).children {
            None => 0,
            Some((l, r)) => 1 + self.height(l).min(self.height(r)),
        }
    }

    /// Checks that the hierarchy was built over a network shaped like `net`.
    pub fn check_network(&self, net: &RoadNetwork) -> Result<()> {
        if self.vertex_count() != net.vertex_count() {
            return Err(Error::Integrity(format!(
                "hierarchy covers {} vertices but the network has {}",
                self.vertex_count(),
                net.vertex_count()
            )));
        }
        for node in &self.nodes {
            for e in &node.cross_edges {
                let ok = e.edge.index() < net.edge_count() && {
                    let g = net.edge(e.edge);
                    g.weight == e.weight && ((g.a == e.back && g.b == e.front) || (g.b == e.back && g.a == e.front))
                };
                if !ok {
                    return Err(Error::Integrity(format!(
                        "cross-edge {} of partition {} does not match the network",
                        e.edge.0, node.id.0
                    )));
                }
            }
        }
        Ok(())
    }
}
