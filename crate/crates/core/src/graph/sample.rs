use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{QuerySets, RoadNetwork, VertexId};
use crate::error::{Error, Result};

/// Draws `R` and `S` uniformly without replacement as percentages of the
/// vertex count. `R` is drawn first, `S` from what remains.
pub fn sample_sets(net: &RoadNetwork, r_pct: f64, s_pct: f64, seed: u64) -> Result<QuerySets> {
    for (name, pct) in [("R", r_pct), ("S", s_pct)] {
        if !(0.0..=100.0).contains(&pct) {
            return Err(Error::domain(format!(
                "{name} percentage must lie in [0, 100], got {pct}"
            )));
        }
    }
    if r_pct + s_pct > 100.0 {
        return Err(Error::domain(format!(
            "R and S percentages sum to {} which exceeds 100",
            r_pct + s_pct
        )));
    }

    let n = net.vertex_count();
    let r_count = (r_pct * n as f64 / 100.0).round() as usize;
    // rounding both halves up can overshoot by one
    let s_count = ((s_pct * n as f64 / 100.0).round() as usize).min(n - r_count);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, n, r_count + s_count).into_vec();
    let (r, s) = picked.split_at(r_count);
    QuerySets::new(
        r.iter().map(|&i| VertexId(i as u32)),
        s.iter().map(|&i| VertexId(i as u32)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(n: usize) -> RoadNetwork {
        RoadNetwork::with_vertex_count(n, std::iter::empty()).unwrap()
    }

    #[test]
    fn table_default_proportions() {
        let q = sample_sets(&net(100), 8.0, 8.0, 42).unwrap();
        assert_eq!(q.r().len(), 8);
        assert_eq!(q.s().len(), 8);
        assert!(q.r().is_disjoint(q.s()));
    }

    #[test]
    fn zero_and_determinism() {
        let g = net(50);
        assert!(sample_sets(&g, 0.0, 10.0, 1).unwrap().r().is_empty());
        assert_eq!(
            sample_sets(&g, 10.0, 10.0, 7).unwrap(),
            sample_sets(&g, 10.0, 10.0, 7).unwrap()
        );
        assert_ne!(
            sample_sets(&g, 10.0, 10.0, 7).unwrap(),
            sample_sets(&g, 10.0, 10.0, 8).unwrap()
        );
    }

    #[test]
    fn out_of_range() {
        let g = net(10);
        assert!(sample_sets(&g, -1.0, 0.0, 0).is_err());
        assert!(sample_sets(&g, 60.0, 50.0, 0).is_err());
        let q = sample_sets(&net(1), 50.0, 50.0, 0).unwrap();
        assert_eq!(q.r().len() + q.s().len(), 1);
    }
}
