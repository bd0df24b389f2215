//! Random-cluster heat bath.
//!
//! Each sweep visits the edges in canonical order and resamples edge `e`
//! from its conditional law given all other edges, which depends only on
//! whether the endpoints of `e` are joined off `e`. That query is answered
//! exactly: from a precomputed table on regions with at most
//! [`TABLE_MAX_EDGES`] edges, otherwise from cluster labels kept up to date
//! along the run. For a closed edge the labels of its endpoints decide. For
//! an open edge two interleaved breadth-first searches run until they meet
//! or either side is exhausted; an exhausted side is exactly the piece that
//! closing the edge cuts off, and it is relabelled if the edge does close.
//! Opening an edge between two clusters relabels the smaller one, found by
//! the same kind of race. The boundary of a wired box acts as one extra
//! vertex adjacent to every boundary vertex.

use rand::Rng;

use crate::lattice::{Adjacency, Region};
use crate::samplers::Init;
use crate::UnionFind;

const TABLE_MAX_EDGES: usize = 16;

/// Self-dual point `sqrt(q) / (1 + sqrt(q))`. Panics unless `q > 0`.
pub fn p_sd(q: f64) -> f64 {
    assert!(q > 0.0 && q.is_finite(), "p_sd needs q > 0, got {q}");
    let s = q.sqrt();
    s / (1.0 + s)
}

/// Probability that an edge is open given the rest of the configuration.
pub fn rc_conditional(p: f64, q: f64, endpoints_connected_off_e: bool) -> f64 {
    if endpoints_connected_off_e {
        p
    } else {
        p / (p + (1.0 - p) * q)
    }
}

pub(crate) struct HeatBath {
    init: Init,
    sweeps: usize,
    p_connected: f64,
    p_disconnected: f64,
    ends: Vec<(usize, usize)>,
    oracle: Connectivity,
}

enum Connectivity {
    /// Bit `e * 2^E + mask` says whether the endpoints of `e` are joined by
    /// the edges in `mask` (which never contains `e`).
    Table(Vec<u64>),
    Search(Search),
}

struct Search {
    adj: Adjacency,
    boundary: Vec<usize>,
    is_boundary: Vec<bool>,
    wired: bool,
    seen: Vec<u64>,
    epoch: u64,
    qa: Vec<usize>,
    qb: Vec<usize>,
    /// Cluster label of every vertex, the wiring vertex last.
    comp: Vec<usize>,
    next_label: usize,
}

/// Result of racing two searches from the endpoints of an edge.
enum Race {
    Met,
    /// The search from the first endpoint ran out of vertices; its queue
    /// holds that endpoint's whole cluster.
    FirstExhausted,
    SecondExhausted,
}

impl HeatBath {
    pub(crate) fn new(region: Region, p: f64, q: f64, sweeps: usize, init: Init) -> Self {
        let m = region.edge_count();
        let ends: Vec<(usize, usize)> = (0..m).map(|i| region.endpoints(i)).collect();
        let nv = region.vertex_count();
        let is_boundary: Vec<bool> = (0..nv)
            .map(|v| region.is_boundary_vertex(region.vertex_at(v)))
            .collect();
        let boundary: Vec<usize> = (0..nv).filter(|&v| is_boundary[v]).collect();
        let wired = region.is_wired();
        let oracle = if m <= TABLE_MAX_EDGES {
            Connectivity::Table(build_table(nv, &ends, if wired { &boundary } else { &[] }))
        } else {
            Connectivity::Search(Search {
                adj: Adjacency::new(&region),
                boundary,
                is_boundary,
                wired,
                seen: vec![0; nv + 1],
                epoch: 0,
                qa: Vec::new(),
                qb: Vec::new(),
                comp: vec![0; nv + 1],
                next_label: 0,
            })
        };
        Self {
            init,
            sweeps,
            p_connected: rc_conditional(p, q, true),
            p_disconnected: rc_conditional(p, q, false),
            ends,
            oracle,
        }
    }

    pub(crate) fn run<R: Rng + ?Sized>(&mut self, rng: &mut R, bits: &mut [bool]) {
        let start = matches!(self.init, Init::AllOpen);
        bits.fill(start);
        let m = bits.len();
        match &mut self.oracle {
            Connectivity::Table(table) => {
                let mut mask: u64 = if start { (1u64 << m) - 1 } else { 0 };
                for _ in 0..self.sweeps {
                    for e in 0..m {
                        let off = mask & !(1u64 << e);
                        let bit = (e << m) | off as usize;
                        let joined = (table[bit / 64] >> (bit % 64)) & 1 == 1;
                        let prob = if joined {
                            self.p_connected
                        } else {
                            self.p_disconnected
                        };
                        mask = if rng.gen::<f64>() < prob {
                            off | (1u64 << e)
                        } else {
                            off
                        };
                    }
                }
                for (e, b) in bits.iter_mut().enumerate() {
                    *b = (mask >> e) & 1 == 1;
                }
            }
            Connectivity::Search(search) => {
                // at q = 1 the two conditionals agree and no search is needed
                if self.p_connected == self.p_disconnected {
                    for _ in 0..self.sweeps {
                        for b in bits.iter_mut() {
                            *b = rng.gen::<f64>() < self.p_connected;
                        }
                    }
                    return;
                }
                search.reset_labels(start);
                for _ in 0..self.sweeps {
                    for e in 0..m {
                        let (a, b) = self.ends[e];
                        let was_open = bits[e];
                        bits[e] = false;
                        let race = if was_open {
                            Some(search.race(bits, a, b))
                        } else {
                            None
                        };
                        let joined = match race {
                            Some(Race::Met) => true,
                            Some(_) => false,
                            None => search.comp[a] == search.comp[b],
                        };
                        let prob = if joined {
                            self.p_connected
                        } else {
                            self.p_disconnected
                        };
                        let now_open = rng.gen::<f64>() < prob;
                        if joined || was_open == now_open {
                            bits[e] = now_open;
                            continue;
                        }
                        if was_open {
                            // a bridge closed: the exhausted side splits off
                            let label = search.fresh_label();
                            search.relabel(race.expect("open edges are raced"), label);
                        } else {
                            // two clusters merge: relabel the smaller
                            let race = search.race(bits, a, b);
                            let label = match race {
                                Race::FirstExhausted => search.comp[b],
                                _ => search.comp[a],
                            };
                            search.relabel(race, label);
                        }
                        bits[e] = now_open;
                    }
                }
            }
        }
    }
}

fn build_table(nv: usize, ends: &[(usize, usize)], wired: &[usize]) -> Vec<u64> {
    let m = ends.len();
    let bits = m << m;
    let mut table = vec![0u64; bits.div_ceil(64).max(1)];
    for mask in 0..(1usize << m) {
        let mut uf = UnionFind::new(nv);
        for w in wired.windows(2) {
            uf.union(w[0], w[1]);
        }
        for (e, &(a, b)) in ends.iter().enumerate() {
            if mask >> e & 1 == 1 {
                uf.union(a, b);
            }
        }
        for (e, &(a, b)) in ends.iter().enumerate() {
            if mask >> e & 1 == 0 && uf.connected(a, b) {
                let bit = (e << m) | mask;
                table[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    table
}

impl Search {
    /// Labels for the all-open or all-closed start.
    fn reset_labels(&mut self, all_open: bool) {
        let ghost = self.comp.len() - 1;
        for (v, c) in self.comp.iter_mut().enumerate() {
            *c = if all_open { 0 } else { v };
        }
        if self.wired && !all_open {
            for &v in &self.boundary {
                self.comp[v] = ghost;
            }
        }
        self.next_label = self.comp.len();
    }

    fn fresh_label(&mut self) -> usize {
        self.next_label += 1;
        self.next_label
    }

    /// Gives the cluster left in the exhausted queue of `race` a new label.
    fn relabel(&mut self, race: Race, label: usize) {
        let queue = match race {
            Race::FirstExhausted => &self.qa,
            Race::SecondExhausted => &self.qb,
            Race::Met => unreachable!("joined endpoints are never relabelled"),
        };
        for &v in queue {
            self.comp[v] = label;
        }
    }

    /// Whether `a` and `b` are joined by open edges (plus wiring). The edge
    /// being resampled must already be marked closed in `open`.
    #[cfg(test)]
    fn connected(&mut self, open: &[bool], a: usize, b: usize) -> bool {
        matches!(self.race(open, a, b), Race::Met)
    }

    fn race(&mut self, open: &[bool], a: usize, b: usize) -> Race {
        if a == b || (self.wired && self.is_boundary[a] && self.is_boundary[b]) {
            return Race::Met;
        }
        self.epoch += 2;
        let (sa, sb) = (self.epoch, self.epoch + 1);
        let ghost = self.seen.len() - 1;
        self.seen[a] = sa;
        self.seen[b] = sb;
        let mut qa = std::mem::take(&mut self.qa);
        let mut qb = std::mem::take(&mut self.qb);
        qa.clear();
        qb.clear();
        qa.push(a);
        qb.push(b);
        let (mut ha, mut hb) = (0, 0);
        let outcome = loop {
            if ha == qa.len() {
                break Race::FirstExhausted;
            }
            if hb == qb.len() {
                break Race::SecondExhausted;
            }
            if self.expand(open, &mut qa, &mut ha, sa, sb, ghost) {
                break Race::Met;
            }
            if self.expand(open, &mut qb, &mut hb, sb, sa, ghost) {
                break Race::Met;
            }
        };
        self.qa = qa;
        self.qb = qb;
        outcome
    }

    /// Pops one vertex from `queue` and pushes its unseen neighbours; returns
    /// true if the other search has already been there.
    fn expand(
        &mut self,
        open: &[bool],
        queue: &mut Vec<usize>,
        head: &mut usize,
        mine: u64,
        other: u64,
        ghost: usize,
    ) -> bool {
        if *head == queue.len() {
            return false;
        }
        let v = queue[*head];
        *head += 1;
        let mut visit = |w: usize, seen: &mut [u64]| -> bool {
            if seen[w] == other {
                return true;
            }
            if seen[w] != mine {
                seen[w] = mine;
                queue.push(w);
            }
            false
        };
        if v == ghost {
            for &w in &self.boundary {
                if visit(w, &mut self.seen) {
                    return true;
                }
            }
            return false;
        }
        for &(w, e) in self.adj.neighbors(v) {
            if open[e] && visit(w, &mut self.seen) {
                return true;
            }
        }
        if self.wired && self.is_boundary[v] && visit(ghost, &mut self.seen) {
            return true;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_dual_point() {
        assert!((p_sd(1.0) - 0.5).abs() < 1e-15);
        assert!((p_sd(4.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((p_sd(0.25) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn self_dual_point_rejects_nonpositive_q() {
        p_sd(0.0);
    }

    #[test]
    fn conditional_probabilities() {
        assert_eq!(rc_conditional(0.3, 1.0, true), 0.3);
        assert_eq!(rc_conditional(0.3, 1.0, false), 0.3);
        assert!((rc_conditional(0.5, 2.0, false) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn labels_follow_the_clusters() {
        let mut rng = crate::samplers::rng_from_seed(1);
        for region in [
            Region::torus(5).unwrap(),
            Region::free_box(6, 4).unwrap(),
            Region::wired_box(5, 5).unwrap(),
        ] {
            for (init, q) in [(Init::AllOpen, 0.5), (Init::AllClosed, 0.5), (Init::AllClosed, 3.0)] {
                let mut hb = HeatBath::new(region, p_sd(q), q, 2, init);
                let mut bits = vec![false; region.edge_count()];
                for _ in 0..50 {
                    hb.run(&mut rng, &mut bits);
                    let Connectivity::Search(search) = &hb.oracle else {
                        panic!("expected the search path");
                    };
                    let nv = region.vertex_count();
                    let mut uf = UnionFind::new(nv + 1);
                    for (e, &(a, b)) in hb.ends.iter().enumerate() {
                        if bits[e] {
                            uf.union(a, b);
                        }
                    }
                    if region.is_wired() {
                        for &v in &search.boundary {
                            uf.union(v, nv);
                        }
                    }
                    let top = if region.is_wired() { nv + 1 } else { nv };
                    for v in 0..top {
                        for w in 0..top {
                            assert_eq!(
                                uf.connected(v, w),
                                search.comp[v] == search.comp[w],
                                "{region} {init:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn table_matches_search() {
        let region = Region::wired_box(3, 3).unwrap();
        let m = region.edge_count();
        let ends: Vec<_> = (0..m).map(|i| region.endpoints(i)).collect();
        let nv = region.vertex_count();
        let boundary: Vec<usize> = (0..nv)
            .filter(|&v| region.is_boundary_vertex(region.vertex_at(v)))
            .collect();
        let table = build_table(nv, &ends, &boundary);
        let mut search = Search {
            adj: Adjacency::new(&region),
            is_boundary: (0..nv).map(|v| boundary.contains(&v)).collect(),
            boundary,
            wired: true,
            seen: vec![0; nv + 1],
            epoch: 0,
            qa: Vec::new(),
            qb: Vec::new(),
            comp: vec![0; nv + 1],
            next_label: 0,
        };
        for mask in 0..(1usize << m) {
            let open: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
            for (e, &(a, b)) in ends.iter().enumerate() {
                if open[e] {
                    continue;
                }
                let bit = (e << m) | mask;
                let t = (table[bit / 64] >> (bit % 64)) & 1 == 1;
                assert_eq!(t, search.connected(&open, a, b), "mask {mask} edge {e}");
            }
        }
    }
}
