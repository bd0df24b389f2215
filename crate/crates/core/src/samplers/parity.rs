//! Uniform even and odd subgraphs from plaquette signs.
//!
//! Every plaquette gets an independent uniform sign. On the torus an edge is
//! open when its two plaquettes agree; the result is then XORed with a
//! uniform element of the homology group spanned by the row-0 horizontal
//! cycle and the column-0 vertical cycle, which together reach every even
//! subgraph with equal probability. On a box the outer face carries a sign
//! as well and an edge is open when its plaquettes disagree: the open set is
//! then the boundary of the set of positive faces, and the boundary map from
//! face subsets onto the cycle space is exactly two-to-one. (With the
//! "agree" rule the complement of a cycle is not even on a box, since side
//! vertices have degree three.) Odd subgraphs are even subgraphs XORed with
//! the horizontal dimers `(2x, y) - (2x + 1, y)`.

use rand::Rng;

use crate::lattice::{EdgeRef, Region};

pub(crate) struct ParitySampler {
    faces: usize,
    edge_faces: Vec<(usize, usize)>,
    open_when_equal: bool,
    homology: Option<(Vec<usize>, Vec<usize>)>,
    matching: Option<Vec<usize>>,
    signs: Vec<bool>,
}

impl ParitySampler {
    pub(crate) fn new(region: Region, odd: bool) -> Self {
        let m = region.edge_count();
        let mut edge_faces = Vec::with_capacity(m);
        let (faces, open_when_equal, homology, matching) = match region {
            Region::Torus { n } => {
                let face = |x: usize, y: usize| y * n + x;
                for i in 0..m {
                    let e = region.edge_at(i).expect("in range");
                    let (x, y) = (e.base.x, e.base.y);
                    edge_faces.push(match e.dir {
                        crate::lattice::Dir::Right => (face(x, (y + n - 1) % n), face(x, y)),
                        crate::lattice::Dir::Up => (face((x + n - 1) % n, y), face(x, y)),
                    });
                }
                let row: Vec<usize> = (0..n)
                    .map(|x| region.edge_index(EdgeRef::right(x, 0)).unwrap())
                    .collect();
                let col: Vec<usize> = (0..n)
                    .map(|y| region.edge_index(EdgeRef::up(0, y)).unwrap())
                    .collect();
                let matching = odd.then(|| {
                    let mut dimers = Vec::new();
                    for y in 0..n {
                        for x in (0..n).step_by(2) {
                            dimers.push(region.edge_index(EdgeRef::right(x, y)).unwrap());
                        }
                    }
                    dimers
                });
                (n * n, true, Some((row, col)), matching)
            }
            Region::Box { width, height, .. } => {
                assert!(!odd, "odd subgraphs are sampled on even tori only");
                let pw = width.saturating_sub(1);
                let inner = pw * height.saturating_sub(1);
                let face = |x: isize, y: isize| -> usize {
                    if x < 0 || y < 0 || x >= pw as isize || y + 1 >= height as isize {
                        inner
                    } else {
                        y as usize * pw + x as usize
                    }
                };
                for i in 0..m {
                    let e = region.edge_at(i).expect("in range");
                    let (x, y) = (e.base.x as isize, e.base.y as isize);
                    edge_faces.push(match e.dir {
                        crate::lattice::Dir::Right => (face(x, y - 1), face(x, y)),
                        crate::lattice::Dir::Up => (face(x - 1, y), face(x, y)),
                    });
                }
                (inner + 1, false, None, None)
            }
        };
        Self {
            faces,
            edge_faces,
            open_when_equal,
            homology,
            matching,
            signs: vec![false; faces],
        }
    }

    pub(crate) fn run<R: Rng + ?Sized>(&mut self, rng: &mut R, bits: &mut [bool]) {
        for chunk in self.signs.chunks_mut(64) {
            let word: u64 = rng.gen();
            for (k, s) in chunk.iter_mut().enumerate() {
                *s = (word >> k) & 1 == 1;
            }
        }
        debug_assert_eq!(self.signs.len(), self.faces);
        for (b, &(f, g)) in bits.iter_mut().zip(&self.edge_faces) {
            *b = (self.signs[f] == self.signs[g]) == self.open_when_equal;
        }
        if let Some((row, col)) = &self.homology {
            let class: u8 = rng.gen_range(0..4);
            if class & 1 == 1 {
                for &e in row {
                    bits[e] = !bits[e];
                }
            }
            if class & 2 == 2 {
                for &e in col {
                    bits[e] = !bits[e];
                }
            }
        }
        if let Some(dimers) = &self.matching {
            for &e in dimers {
                bits[e] = !bits[e];
            }
        }
    }
}
