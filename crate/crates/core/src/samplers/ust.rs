//! Uniform spanning tree by Wilson's algorithm.
//!
//! The root is vertex `(0, 0)`. Loop-erased walks start from each vertex in
//! index order; the walk keeps only the last exit taken from every vertex,
//! which performs the loop erasure implicitly.

use rand::Rng;

use crate::lattice::{Adjacency, Region};

pub(crate) struct Wilson {
    adj: Adjacency,
    in_tree: Vec<bool>,
    next: Vec<(usize, usize)>,
}

impl Wilson {
    pub(crate) fn new(region: Region) -> Self {
        let nv = region.vertex_count();
        Self {
            adj: Adjacency::new(&region),
            in_tree: vec![false; nv],
            next: vec![(0, 0); nv],
        }
    }

    pub(crate) fn run<R: Rng + ?Sized>(&mut self, rng: &mut R, bits: &mut [bool]) {
        bits.fill(false);
        self.in_tree.fill(false);
        self.in_tree[0] = true;
        for start in 0..self.in_tree.len() {
            let mut u = start;
            while !self.in_tree[u] {
                let nbrs = self.adj.neighbors(u);
                let step = nbrs[rng.gen_range(0..nbrs.len())];
                self.next[u] = step;
                u = step.0;
            }
            u = start;
            while !self.in_tree[u] {
                self.in_tree[u] = true;
                let (w, e) = self.next[u];
                bits[e] = true;
                u = w;
            }
        }
    }
}
