//! Trifurcation counting inside a window.
//!
//! A vertex is a trifurcation when deleting it splits its cluster into at
//! least three components that each contain a window-boundary vertex. The
//! count uses one iterative depth-first search per cluster: a child subtree
//! with `low >= disc(v)` becomes its own component once `v` is removed, and
//! everything else stays attached to the parent side.

use crate::clusters::label_open;
use crate::lattice::{Adjacency, BondConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrifurcationReport {
    /// Trifurcation vertices, ascending.
    pub vertices: Vec<usize>,
    /// Trifurcations per cluster (labels of [`label_open`]).
    pub per_cluster: Vec<usize>,
    /// Boundary vertices per cluster.
    pub boundary_vertices: Vec<usize>,
}

impl TrifurcationReport {
    pub fn total(&self) -> usize {
        self.vertices.len()
    }

    /// Clusters breaking the counting bound `t <= max(0, b - 2)`.
    pub fn bound_violations(&self) -> usize {
        self.per_cluster
            .iter()
            .zip(&self.boundary_vertices)
            .filter(|(&t, &b)| t > b.saturating_sub(2))
            .count()
    }
}

/// Trifurcations of the open subgraph of a window. Wiring is ignored. On a
/// torus no vertex is a boundary vertex, so the count is zero.
pub fn trifurcations(config: &BondConfig) -> TrifurcationReport {
    let region = *config.region();
    let lab = label_open(config);
    let adj = Adjacency::new(&region);
    let open = config.bits();
    let nv = region.vertex_count();
    let is_b: Vec<bool> = (0..nv)
        .map(|v| region.is_boundary_vertex(region.vertex_at(v)))
        .collect();

    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; nv];
    let mut low = vec![0usize; nv];
    let mut sub_b = vec![0usize; nv];
    let mut sep_components = vec![0usize; nv];
    let mut sep_sum = vec![0usize; nv];
    let mut per_cluster = vec![0usize; lab.cluster_count()];
    let mut vertices = Vec::new();
    let mut timer = 0;
    // frames: (vertex, edge used to enter, next neighbour slot)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    let mut members = Vec::new();

    for root in 0..nv {
        if disc[root] != UNSEEN {
            continue;
        }
        members.clear();
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        sub_b[root] = is_b[root] as usize;
        members.push(root);
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (v, via, ref mut slot)) = stack.last_mut() {
            let nbrs = adj.neighbors(v);
            if *slot < nbrs.len() {
                let (w, e) = nbrs[*slot];
                *slot += 1;
                if !open[e] || e == via {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    sub_b[w] = is_b[w] as usize;
                    members.push(w);
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                sub_b[p] += sub_b[v];
                if low[v] >= disc[p] {
                    sep_sum[p] += sub_b[v];
                    if sub_b[v] > 0 {
                        sep_components[p] += 1;
                    }
                }
            }
        }
        let total_b = sub_b[root];
        for &v in &members {
            let mut parts = sep_components[v];
            if v != root && total_b - is_b[v] as usize - sep_sum[v] > 0 {
                parts += 1;
            }
            if parts >= 3 {
                per_cluster[lab.label(v)] += 1;
                vertices.push(v);
            }
        }
    }
    vertices.sort_unstable();
    let boundary_vertices = (0..lab.cluster_count())
        .map(|l| lab.boundary_vertex_count(l))
        .collect();
    TrifurcationReport {
        vertices,
        per_cluster,
        boundary_vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{EdgeRef, Region, Vertex};

    #[test]
    fn plus_shape_centre() {
        let region = Region::free_box(7, 7).unwrap();
        let mut c = BondConfig::closed(region);
        for x in 0..6 {
            c.set_edge(EdgeRef::right(x, 3), true).unwrap();
        }
        for y in 3..6 {
            c.set_edge(EdgeRef::up(3, y), true).unwrap();
        }
        let r = trifurcations(&c);
        assert_eq!(r.vertices, vec![region.vertex_index(Vertex::new(3, 3))]);
        assert_eq!(r.bound_violations(), 0);
    }

    #[test]
    fn all_open_has_none() {
        let c = BondConfig::all_open(Region::free_box(8, 8).unwrap());
        assert_eq!(trifurcations(&c).total(), 0);
    }

    #[test]
    fn full_cross_has_centre_with_four_branches() {
        let region = Region::free_box(5, 5).unwrap();
        let mut c = BondConfig::closed(region);
        for i in 0..4 {
            c.set_edge(EdgeRef::right(i, 2), true).unwrap();
            c.set_edge(EdgeRef::up(2, i), true).unwrap();
        }
        let r = trifurcations(&c);
        assert_eq!(r.total(), 1);
        assert_eq!(r.boundary_vertices[r.per_cluster.iter().position(|&t| t == 1).unwrap()], 4);
    }
}
