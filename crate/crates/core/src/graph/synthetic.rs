//! Small graph generators for tests, examples and the benchmark harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RoadNetwork;

/// Path `0 - 1 - ... - n` with the given edge weights.
pub fn path(weights: &[f64]) -> RoadNetwork {
    let edges = weights.iter().enumerate().map(|(i, &w)| (i as u32, i as u32 + 1, w));
    RoadNetwork::with_vertex_count(weights.len() + 1, edges).expect("valid path")
}

/// `width x height` grid, vertex `(x, y)` has id `y * width + x` and sits at
/// coordinates `(x, y)`. Horizontal edges come first, then vertical ones.
pub fn grid(width: usize, height: usize, mut weight: impl FnMut(usize, usize, usize, usize) -> f64) -> RoadNetwork {
    let id = |x: usize, y: usize| (y * width + x) as u32;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width.saturating_sub(1) {
            edges.push((id(x, y), id(x + 1, y), weight(x, y, x + 1, y)));
        }
    }
    for y in 0..height.saturating_sub(1) {
        for x in 0..width {
            edges.push((id(x, y), id(x, y + 1), weight(x, y, x, y + 1)));
        }
    }
    let coords = (0..height)
        .flat_map(|y| (0..width).map(move |x| (x as f64, y as f64)))
        .collect();
    RoadNetwork::from_edges(coords, edges).expect("valid grid")
}

/// Grid with weights drawn uniformly from `(0, 10]`.
pub fn random_grid(width: usize, height: usize, seed: u64) -> RoadNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grid(width, height, |_, _, _, _| uniform_weight(&mut rng))
}

/// Connected graph on `n` vertices: a random spanning tree (each vertex
/// attaches to an earlier one) plus `extra` random chords. Weights are
/// uniform in `(0, 10]`.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> RoadNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n + extra);
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u as u32, v as u32, uniform_weight(&mut rng)));
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                edges.push((a as u32, b as u32, uniform_weight(&mut rng)));
            }
        }
    }
    let coords = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    RoadNetwork::from_edges(coords, edges).expect("valid graph")
}

fn uniform_weight(rng: &mut impl Rng) -> f64 {
    10.0 * (1.0 - rng.random::<f64>())
}
