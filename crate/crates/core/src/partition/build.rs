use std::collections::VecDeque;

use super::bisect::Bisector;
use super::{PartitionHierarchy, PartitionId, PartitionNode, SmoothingConfig};
use crate::error::{Error, Result};
use crate::graph::{RoadNetwork, VertexId};

/// Recursively bisects the network until every leaf holds at most
/// `leaf_size_limit` vertices. Node ids are assigned breadth-first, the
/// root is `0` and the left child of a split precedes the right one.
pub fn build_hierarchy(net: &RoadNetwork, leaf_size_limit: usize, cfg: SmoothingConfig) -> Result<PartitionHierarchy> {
    if leaf_size_limit == 0 {
        return Err(Error::domain("leaf size limit must be at least 1"));
    }
    let n = net.vertex_count();
    let mut h = PartitionHierarchy {
        nodes: vec![PartitionNode {
            id: PartitionId(0),
            parent: None,
            children: None,
            range: 0..n,
            cross_edges: Vec::new(),
            separation_degree: f64::INFINITY,
        }],
        order: net.vertices().collect(),
        position: (0..n as u32).collect(),
        leaf_size_limit,
        alpha: cfg.alpha(),
    };

    let mut bisector = Bisector::new(net);
    let mut queue = VecDeque::from([PartitionId(0)]);
    while let Some(id) = queue.pop_front() {
        let range = h.nodes[id.index()].range.clone();
        if range.len() <= leaf_size_limit || range.len() < 2 {
            continue;
        }
        let region = &h.order[range.clone()];
        let (left_seed, right_seed) = bisector.select_seeds(net, region)?;
        let split = bisector.bisect(
            net,
            region,
            &h.nodes[id.index()].cross_edges,
            left_seed,
            right_seed,
            cfg,
        )?;

        let mid = range.start + split.left.vertices.len();
        let placed: Vec<VertexId> = split
            .left
            .vertices
            .iter()
            .chain(&split.right.vertices)
            .copied()
            .collect();
        for (offset, v) in placed.into_iter().enumerate() {
            h.order[range.start + offset] = v;
            h.position[v.index()] = (range.start + offset) as u32;
        }

        let left = PartitionId(h.nodes.len() as u32);
        let right = PartitionId(left.0 + 1);
        for (child, sub, cluster) in [
            (left, range.start..mid, split.left),
            (right, mid..range.end, split.right),
        ] {
            h.nodes.push(PartitionNode {
                id: child,
                parent: Some(id),
                children: None,
                range: sub,
                cross_edges: cluster.cross_edges,
                separation_degree: split.separation_degree,
            });
            queue.push_back(child);
        }
        h.nodes[id.index()].children = Some((left, right));
    }
    Ok(h)
}
