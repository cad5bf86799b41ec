use std::collections::HashMap;

use crate::graph::VertexId;

/// Per-partition map from border vertex to the `R` members that reach it
/// without leaving the partition, with those exact distances. Each list is
/// kept sorted by `(dist, r)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InsideRoutes {
    routes: HashMap<VertexId, Vec<(VertexId, f64)>>,
}

impl InsideRoutes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, border: VertexId) -> &[(VertexId, f64)] {
        self.routes.get(&border).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn push(&mut self, border: VertexId, r: VertexId, dist: f64) {
        self.routes.entry(border).or_default().push((r, dist));
    }

    pub(crate) fn finish(&mut self) {
        for list in self.routes.values_mut() {
            list.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    /// Border vertices with at least one recorded route.
    pub fn borders(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.routes.keys().copied()
    }

    /// Every `(border, r, dist)` triple.
    pub fn entries(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.routes
            .iter()
            .flat_map(|(&b, list)| list.iter().map(move |&(r, d)| (b, r, d)))
    }
}
