use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CrossEdge, PartitionHierarchy, PartitionId, PartitionNode};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct HierarchyFile {
    version: u32,
    leaf_size_limit: usize,
    alpha: f64,
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NodeRecord {
    id: u32,
    parent: Option<u32>,
    left: Option<u32>,
    right: Option<u32>,
    /// `null` stands for an unbounded degree.
    separation_degree: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<u32>>,
    cross_edges: Vec<CrossEdgeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossEdgeRecord {
    eid: u32,
    back: u32,
    front: u32,
    weight: f64,
}

/// Writes the hierarchy as JSON. Only leaves list their vertices.
pub fn save_hierarchy(h: &PartitionHierarchy, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = HierarchyFile {
        version: FORMAT_VERSION,
        leaf_size_limit: h.leaf_size_limit,
        alpha: h.alpha,
        nodes: h
            .nodes
            .iter()
            .map(|n| NodeRecord {
                id: n.id.0,
                parent: n.parent.map(|p| p.0),
                left: n.children.map(|c| c.0 .0),
                right: n.children.map(|c| c.1 .0),
                separation_degree: n.separation_degree.is_finite().then_some(n.separation_degree),
                vertices: n.is_leaf().then(|| h.vertices(n.id).iter().map(|v| v.0).collect()),
                cross_edges: n
                    .cross_edges
                    .iter()
                    .map(|e| CrossEdgeRecord {
                        eid: e.edge.0,
                        back: e.back.0,
                        front: e.front.0,
                        weight: e.weight,
                    })
                    .collect(),
            })
            .collect(),
    };
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, &doc).map_err(|e| Error::Format(e.to_string()))?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn load_hierarchy(path: impl AsRef<Path>) -> Result<PartitionHierarchy> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: HierarchyFile =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    from_document(doc).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn from_document(doc: HierarchyFile) -> Result<PartitionHierarchy> {
    let bad = |msg: String| Error::Format(msg);
    if doc.version != FORMAT_VERSION {
        return Err(bad(format!(
            "unsupported version {}, expected {FORMAT_VERSION}",
            doc.version
        )));
    }
    if doc.nodes.is_empty() {
        return Err(bad("no nodes".into()));
    }
    if !(0.0..=1.0).contains(&doc.alpha) || doc.leaf_size_limit == 0 {
        return Err(bad("alpha or leafSizeLimit out of range".into()));
    }
    let count = doc.nodes.len();
    for (i, rec) in doc.nodes.iter().enumerate() {
        if rec.id as usize != i {
            return Err(bad(format!("node at index {i} has id {}", rec.id)));
        }
        let in_range = |c: Option<u32>| c.is_none_or(|c| (c as usize) < count && c as usize != i);
        if !in_range(rec.parent) || !in_range(rec.left) || !in_range(rec.right) {
            return Err(bad(format!("node {i} links outside the node list")));
        }
        match (rec.left, rec.right, &rec.vertices) {
            (Some(l), Some(r), None) => {
                for c in [l, r] {
                    if doc.nodes[c as usize].parent != Some(rec.id) {
                        return Err(bad(format!("child {c} does not point back to {i}")));
                    }
                }
            }
            (None, None, Some(_)) => {}
            _ => return Err(bad(format!("node {i} must have two children or a vertex list"))),
        }
    }
    if doc.nodes[0].parent.is_some() {
        return Err(bad("node 0 must be the root".into()));
    }

    let mut nodes: Vec<PartitionNode> = Vec::with_capacity(count);
    let mut order: Vec<VertexId> = Vec::new();
    let mut ranges = vec![None; count];
    // post-order walk that lays leaves out left to right
    let mut stack = vec![(0u32, false)];
    let mut start = vec![0usize; count];
    let mut visited = vec![false; count];
    while let Some((id, expanded)) = stack.pop() {
        let rec = &doc.nodes[id as usize];
        if !expanded {
            if visited[id as usize] {
                return Err(bad(format!("node {id} is reachable twice")));
            }
            visited[id as usize] = true;
            start[id as usize] = order.len();
            match (rec.left, rec.right) {
                (Some(l), Some(r)) => {
                    stack.push((id, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
                _ => {
                    order.extend(rec.vertices.iter().flatten().map(|&v| VertexId(v)));
                    ranges[id as usize] = Some(start[id as usize]..order.len());
                }
            }
        } else {
            ranges[id as usize] = Some(start[id as usize]..order.len());
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(bad("some nodes are unreachable from the root".into()));
    }

    let n = order.len();
    let mut position = vec![u32::MAX; n];
    for (i, v) in order.iter().enumerate() {
        if v.index() >= n || position[v.index()] != u32::MAX {
            return Err(bad(format!("vertex {v} is out of range or listed twice")));
        }
        position[v.index()] = i as u32;
    }

    for (i, rec) in doc.nodes.into_iter().enumerate() {
        nodes.push(PartitionNode {
            id: PartitionId(i as u32),
            parent: rec.parent.map(PartitionId),
            children: rec.left.zip(rec.right).map(|(l, r)| (PartitionId(l), PartitionId(r))),
            range: ranges[i].clone().expect("every node visited"),
            cross_edges: rec
                .cross_edges
                .into_iter()
                .map(|e| CrossEdge {
                    edge: EdgeId(e.eid),
                    back: VertexId(e.back),
                    front: VertexId(e.front),
                    weight: e.weight,
                })
                .collect(),
            separation_degree: rec.separation_degree.unwrap_or(f64::INFINITY),
        });
    }

    Ok(PartitionHierarchy {
        nodes,
        order,
        position,
        leaf_size_limit: doc.leaf_size_limit,
        alpha: doc.alpha,
    })
}
