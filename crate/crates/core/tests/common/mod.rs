#![allow(dead_code)]

use std::collections::HashSet;

use roadjoin::{EdgeId, MatchPair, QuerySets, RoadNetwork, VertexId};

/// All-pairs distances by Floyd-Warshall.
pub fn floyd_warshall(net: &RoadNetwork) -> Vec<Vec<f64>> {
    let n = net.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in net.edges() {
        let (a, b) = (e.a.index(), e.b.index());
        if e.weight < d[a][b] {
            d[a][b] = e.weight;
            d[b][a] = e.weight;
        }
    }
    for k in 0..n {
        let through = d[k].clone();
        for row in d.iter_mut() {
            let dik = row[k];
            if dik == f64::INFINITY {
                continue;
            }
            for (cell, dkj) in row.iter_mut().zip(&through) {
                let via = dik + dkj;
                if via < *cell {
                    *cell = via;
                }
            }
        }
    }
    d
}

/// Single-source distances by Bellman-Ford, skipping `forbidden` edges and,
/// when given, any vertex outside `region`.
pub fn bellman_ford(
    net: &RoadNetwork,
    source: VertexId,
    forbidden: &HashSet<EdgeId>,
    region: Option<&HashSet<VertexId>>,
) -> Vec<f64> {
    let inside = |v: VertexId| region.is_none_or(|r| r.contains(&v));
    let mut d = vec![f64::INFINITY; net.vertex_count()];
    d[source.index()] = 0.0;
    for _ in 0..net.vertex_count() {
        let mut changed = false;
        for e in net.edges() {
            if forbidden.contains(&e.id) || !inside(e.a) || !inside(e.b) {
                continue;
            }
            for (u, v) in [(e.a, e.b), (e.b, e.a)] {
                let via = d[u.index()] + e.weight;
                if via < d[v.index()] {
                    d[v.index()] = via;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Every reachable `(r, s)` pair within `theta` from a distance matrix,
/// sorted by `(dist, r, s)` and cut to `k`.
pub fn pairs_from_matrix(d: &[Vec<f64>], sets: &QuerySets, k: Option<usize>, theta: f64) -> Vec<MatchPair> {
    let mut out = Vec::new();
    for &r in sets.r() {
        for &s in sets.s() {
            let dist = d[r.index()][s.index()];
            if dist.is_finite() && dist <= theta {
                out.push(MatchPair { r, s, dist });
            }
        }
    }
    out.sort();
    if let Some(k) = k {
        out.truncate(k);
    }
    out
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Compares the sorted distance multisets of two answers.
pub fn same_distances(got: &[MatchPair], want: &[MatchPair], rel: f64) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{} pairs, expected {}", got.len(), want.len()));
    }
    let mut a: Vec<f64> = got.iter().map(|p| p.dist).collect();
    let mut b: Vec<f64> = want.iter().map(|p| p.dist).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        if !close(*x, *y, rel) {
            return Err(format!("distance #{i}: {x} vs {y}"));
        }
    }
    Ok(())
}

pub fn pair_keys(pairs: &[MatchPair]) -> HashSet<(VertexId, VertexId)> {
    pairs.iter().map(|p| (p.r, p.s)).collect()
}

/// Median of the finite R x S distances, by the lower-middle element.
pub fn median_distance(all: &[MatchPair]) -> f64 {
    all[(all.len() - 1) / 2].dist
}

/// Checks the structural invariants of a hierarchy against its network:
/// children partition their parent, leaves cover the network once, every
/// node's cross-edges equal a fresh scan of the edge list, and each child's
/// separation degree is the lightest edge to its sibling.
pub fn check_hierarchy(net: &RoadNetwork, h: &roadjoin::PartitionHierarchy) -> Result<(), String> {
    use std::collections::BTreeSet;

    let as_set = |id| h.vertices(id).iter().copied().collect::<BTreeSet<VertexId>>();
    let root: BTreeSet<VertexId> = as_set(h.root().id());
    if root != net.vertices().collect() {
        return Err("root does not cover the network".into());
    }
    let mut leaf_total = 0;
    for node in h.nodes() {
        let mine = as_set(node.id());
        match node.children() {
            None => leaf_total += mine.len(),
            Some((l, r)) => {
                let (a, b) = (as_set(l), as_set(r));
                if !a.is_disjoint(&b) {
                    return Err(format!("children of {} overlap", node.id().0));
                }
                if a.union(&b).copied().collect::<BTreeSet<_>>() != mine {
                    return Err(format!("children of {} do not cover it", node.id().0));
                }
                for child in [l, r] {
                    let sib = h.sibling(child).unwrap();
                    let lightest = net
                        .edges()
                        .iter()
                        .filter(|e| {
                            (h.contains(child, e.a) && h.contains(sib, e.b))
                                || (h.contains(child, e.b) && h.contains(sib, e.a))
                        })
                        .map(|e| e.weight)
                        .fold(f64::INFINITY, f64::min);
                    if h.node(child).separation_degree() != lightest {
                        return Err(format!("separation degree of {} is off", child.0));
                    }
                }
            }
        }
        let scanned: BTreeSet<(u32, u32, u32)> = net
            .edges()
            .iter()
            .filter_map(|e| match (mine.contains(&e.a), mine.contains(&e.b)) {
                (true, false) => Some((e.id.0, e.a.0, e.b.0)),
                (false, true) => Some((e.id.0, e.b.0, e.a.0)),
                _ => None,
            })
            .collect();
        let kept: BTreeSet<(u32, u32, u32)> = node
            .cross_edges()
            .iter()
            .map(|c| (c.edge.0, c.back.0, c.front.0))
            .collect();
        if scanned != kept || kept.len() != node.cross_edges().len() {
            return Err(format!("cross-edges of {} differ from a fresh scan", node.id().0));
        }
        if node.cross_edges().iter().any(|c| c.weight != net.edge(c.edge).weight) {
            return Err(format!("cross-edge weight mismatch in {}", node.id().0));
        }
        if node.parent().is_none() && node.separation_degree() != f64::INFINITY {
            return Err("root separation degree must be infinite".into());
        }
    }
    if leaf_total != net.vertex_count() {
        return Err("leaves do not partition the vertex set".into());
    }
    Ok(())
}

/// Vertex sets of every node, in node-id order.
pub fn assignment(h: &roadjoin::PartitionHierarchy) -> Vec<Vec<VertexId>> {
    h.nodes()
        .iter()
        .map(|n| {
            let mut v = h.vertices(n.id()).to_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

/// The same network with every weight multiplied by `c`.
pub fn scaled(net: &RoadNetwork, c: f64) -> RoadNetwork {
    let coords = net.vertices().map(|v| net.coordinates(v)).collect();
    RoadNetwork::from_edges(coords, net.edges().iter().map(|e| (e.a.0, e.b.0, e.weight * c))).unwrap()
}
