use super::{Dijkstra, Membership, QuerySets, RoadNetwork};
use crate::error::{Error, Result};
use crate::query::MatchPair;

/// Reference answer: one unrestricted radius-`theta` search per `r`, every
/// `(r, s, d)` collected, sorted by `(d, r, s)` and cut to `k` (`None`
/// keeps everything, i.e. the distance join).
pub fn oracle_closest_pairs(
    net: &RoadNetwork,
    sets: &QuerySets,
    k: Option<usize>,
    theta: f64,
) -> Result<Vec<MatchPair>> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::domain(format!("theta must be non-negative, got {theta}")));
    }
    sets.check_within(net)?;
    if k == Some(0) {
        return Ok(Vec::new());
    }

    let member = Membership::new(net, sets);
    let mut search = Dijkstra::new(net.vertex_count());
    let mut pairs = Vec::new();
    for &r in sets.r() {
        search.run(
            net,
            &[(r, 0.0)],
            theta,
            |_, _| true,
            |v, d| {
                if member.is_s(v) {
                    pairs.push(MatchPair { r, s: v, dist: d });
                }
                f64::INFINITY
            },
        );
    }
    pairs.sort();
    if let Some(k) = k {
        pairs.truncate(k);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

    #[test]
    fn single_path() {
        let net = RoadNetwork::with_vertex_count(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let q = QuerySets::new([VertexId(0)], [VertexId(2)]).unwrap();
        let got = oracle_closest_pairs(&net, &q, Some(1), f64::INFINITY).unwrap();
        assert_eq!(
            got,
            vec![MatchPair {
                r: VertexId(0),
                s: VertexId(2),
                dist: 3.0
            }]
        );
        assert!(oracle_closest_pairs(&net, &q, Some(0), f64::INFINITY)
            .unwrap()
            .is_empty());
        assert!(oracle_closest_pairs(&net, &q, None, 2.5).unwrap().is_empty());
    }

    #[test]
    fn disconnected_pairs_never_match() {
        let net = RoadNetwork::with_vertex_count(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let q = QuerySets::new([VertexId(0)], [VertexId(3)]).unwrap();
        assert!(oracle_closest_pairs(&net, &q, None, f64::INFINITY).unwrap().is_empty());
    }
}
