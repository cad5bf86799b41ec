use super::SchedulerConfig;
use crate::partition::{PartitionHierarchy, PartitionId};

/// Picks the partitions processed locally: starting from the root, keeps
/// splitting the most populous non-leaf node of the frontier until it holds
/// at least `granularity_factor * parallelism` nodes or only true leaves
/// remain. The result covers every vertex exactly once and is sorted by id.
pub fn choose_granularity(h: &PartitionHierarchy, cfg: &SchedulerConfig) -> Vec<PartitionId> {
    let target = cfg.granularity_factor.max(1) * cfg.parallelism.max(1);
    let mut frontier = vec![h.root().id()];
    while frontier.len() < target {
        let next = frontier
            .iter()
            .enumerate()
            .filter(|(_, id)| !h.node(**id).is_leaf())
            .max_by(|(_, a), (_, b)| h.node(**a).population().cmp(&h.node(**b).population()).then(b.cmp(a)))
            .map(|(i, _)| i);
        let Some(i) = next else { break };
        let (l, r) = h.node(frontier[i]).children().expect("internal node");
        frontier.swap_remove(i);
        frontier.push(l);
        frontier.push(r);
    }
    frontier.sort_unstable();
    frontier
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::synthetic;
    use crate::partition::{build_hierarchy, SmoothingConfig};

    fn cfg(p: usize) -> SchedulerConfig {
        SchedulerConfig {
            parallelism: p,
            ..SchedulerConfig::default()
        }
    }

    #[test]
    fn single_leaf() {
        let net = synthetic::path(&[1.0; 4]);
        let h = build_hierarchy(&net, 16, SmoothingConfig::default()).unwrap();
        assert_eq!(choose_granularity(&h, &cfg(8)), vec![PartitionId(0)]);
    }

    #[test]
    fn complete_tree_stops_at_c_times_p() {
        // 16 leaves of one vertex each on a unit path, alpha = 1 halves evenly
        let net = synthetic::path(&[1.0; 15]);
        let h = build_hierarchy(&net, 1, SmoothingConfig::new(1.0).unwrap()).unwrap();
        assert_eq!(h.leaves().count(), 16);
        let f = choose_granularity(&h, &cfg(4));
        assert_eq!(f.len(), 8);
        assert!(f.iter().all(|&id| h.node(id).population() == 2));
    }
}
