mod common;

use std::collections::HashSet;

use roadjoin::{
    build_hierarchy, closest_pairs_parallel, distance_join, oracle_closest_pairs, sample_sets, synthetic,
    GlobalThreshold, JoinContext, QueryParams, QuerySets, RoadNetwork, SchedulerConfig, SmoothingConfig, VertexId,
};

use common::{floyd_warshall, pair_keys, pairs_from_matrix, same_distances};

/// Distances inside `region` only, by Floyd-Warshall on the induced subgraph.
fn confined_matrix(net: &RoadNetwork, region: &HashSet<VertexId>) -> Vec<Vec<f64>> {
    let keep: Vec<(u32, u32, f64)> = net
        .edges()
        .iter()
        .filter(|e| region.contains(&e.a) && region.contains(&e.b))
        .map(|e| (e.a.0, e.b.0, e.weight))
        .collect();
    floyd_warshall(&RoadNetwork::with_vertex_count(net.vertex_count(), keep).unwrap())
}

#[test]
fn local_pairs_on_a_fifty_vertex_leaf() {
    let net = synthetic::random_connected(200, 80, 11);
    let h = build_hierarchy(&net, 50, SmoothingConfig::default()).unwrap();
    let leaf = h.leaves().max_by_key(|l| l.population()).unwrap().id();
    assert!(h.node(leaf).population() > 25);
    let region: HashSet<VertexId> = h.vertices(leaf).iter().copied().collect();
    let d = confined_matrix(&net, &region);
    let sets = sample_sets(&net, 20.0, 20.0, 5).unwrap();

    let params = QueryParams::new(None, f64::INFINITY).unwrap();
    let ctx = JoinContext::new(&net, &h, &sets, params).unwrap();
    let mut ws = ctx.workspace();
    let out = ctx.local_pairs(leaf, &mut ws, &GlobalThreshold::new(f64::INFINITY));

    let local_sets = QuerySets::new(
        sets.r().iter().copied().filter(|v| region.contains(v)),
        sets.s().iter().copied().filter(|v| region.contains(v)),
    )
    .unwrap();
    let want = pairs_from_matrix(&d, &local_sets, None, f64::INFINITY);
    let got = out.heap.clone().into_sorted_vec();
    same_distances(&got, &want, 1e-9).unwrap();
    assert_eq!(pair_keys(&got), pair_keys(&want));

    let border = h.node(leaf).border_nodes();
    let mut seen = 0;
    for &b in &border {
        for &(r, dist) in out.routes.get(b) {
            assert!(common::close(dist, d[r.index()][b.index()], 1e-9));
            seen += 1;
        }
        let reachable = local_sets
            .r()
            .iter()
            .filter(|r| d[r.index()][b.index()].is_finite())
            .count();
        assert_eq!(out.routes.get(b).len(), reachable);
    }
    assert!(seen > 0);

    // with k = 10 the heap holds the ten best of the same candidates
    let params = QueryParams::closest_pairs(10, f64::INFINITY).unwrap();
    let ctx = JoinContext::new(&net, &h, &sets, params).unwrap();
    let out = ctx.local_pairs(leaf, &mut ws, &GlobalThreshold::new(f64::INFINITY));
    let want = pairs_from_matrix(&d, &local_sets, Some(10), f64::INFINITY);
    same_distances(&out.heap.into_sorted_vec(), &want, 1e-9).unwrap();
}

fn barbell() -> RoadNetwork {
    let mut edges = Vec::new();
    for base in [0u32, 5] {
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((base + a, base + b, 1.0 + ((a * 3 + b + base) % 4) as f64));
            }
        }
    }
    edges.push((4, 5, 6.0));
    RoadNetwork::with_vertex_count(10, edges).unwrap()
}

#[test]
fn barbell_closest_pairs_equal_full_oracle() {
    let net = barbell();
    let sets = QuerySets::new([0, 1, 2].map(VertexId), [7, 8, 9].map(VertexId)).unwrap();
    let want = pairs_from_matrix(&floyd_warshall(&net), &sets, Some(3), f64::INFINITY);
    for limit in [1, 3, 5, 10] {
        let h = build_hierarchy(&net, limit, SmoothingConfig::default()).unwrap();
        let params = QueryParams::closest_pairs(3, f64::INFINITY).unwrap();
        let got = closest_pairs_parallel(&net, &h, &sets, params, &SchedulerConfig::default()).unwrap();
        assert_eq!(got.pairs, want, "leaf limit {limit}");
    }
}

#[test]
fn join_at_median_matches_oracle_set() {
    let net = synthetic::random_connected(150, 50, 23);
    let sets = sample_sets(&net, 8.0, 8.0, 23).unwrap();
    let all = oracle_closest_pairs(&net, &sets, None, f64::INFINITY).unwrap();
    let theta = common::median_distance(&all);
    let want = oracle_closest_pairs(&net, &sets, None, theta).unwrap();
    for limit in [8, 40, 150] {
        let h = build_hierarchy(&net, limit, SmoothingConfig::new(0.5).unwrap()).unwrap();
        let got = distance_join(&net, &h, &sets, theta, &SchedulerConfig::default()).unwrap();
        assert_eq!(pair_keys(&got), pair_keys(&want));
        same_distances(&got, &want, 1e-9).unwrap();
    }
    let h = build_hierarchy(&net, 16, SmoothingConfig::default()).unwrap();
    let below = all[0].dist / 2.0;
    assert!(distance_join(&net, &h, &sets, below, &SchedulerConfig::default())
        .unwrap()
        .is_empty());
    assert!(distance_join(&net, &h, &sets, 0.0, &SchedulerConfig::default()).is_err());
}

#[test]
fn closest_pairs_match_floyd_warshall_on_random_graphs() {
    for seed in 0..30 {
        let n = 40 + (seed as usize * 7) % 120;
        let net = synthetic::random_connected(n, n / 3, seed);
        let sets = sample_sets(&net, 10.0, 10.0, seed).unwrap();
        let d = floyd_warshall(&net);
        for limit in [4, 16, n] {
            let h = build_hierarchy(&net, limit, SmoothingConfig::new((seed % 5) as f64 / 4.0).unwrap()).unwrap();
            for k in [1, 5, 20] {
                for theta in [f64::INFINITY, 12.0] {
                    let want = pairs_from_matrix(&d, &sets, Some(k), theta);
                    let params = QueryParams::closest_pairs(k, theta).unwrap();
                    let got = closest_pairs_parallel(&net, &h, &sets, params, &SchedulerConfig::default()).unwrap();
                    same_distances(&got.pairs, &want, 1e-9)
                        .unwrap_or_else(|e| panic!("seed {seed} limit {limit} k {k} theta {theta}: {e}"));
                }
            }
        }
    }
}

#[test]
fn disconnected_sets_give_nothing() {
    let net = RoadNetwork::with_vertex_count(6, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).unwrap();
    let sets = QuerySets::new([VertexId(0)], [VertexId(5)]).unwrap();
    let h = build_hierarchy(&net, 2, SmoothingConfig::default()).unwrap();
    let params = QueryParams::closest_pairs(3, f64::INFINITY).unwrap();
    let got = closest_pairs_parallel(&net, &h, &sets, params, &SchedulerConfig::default()).unwrap();
    assert!(got.pairs.is_empty());
}
