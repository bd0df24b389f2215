//! Cluster labeling and the diagnostics built on it.

mod arms;
mod tenuous;
mod trifurcation;

pub use arms::{arms, Arm, ArmKind, ArmSequence, InnerBox};
pub use tenuous::{tenuous_check, TenuousStatus};
pub use trifurcation::{trifurcations, TrifurcationReport};

use std::fmt;
use std::io::{self, Write};

use crate::lattice::{BondConfig, Region, Vertex};
use crate::{Error, Result, UnionFind};

/// Set of box sides, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Sides(u8);

impl Sides {
    pub const NONE: Sides = Sides(0);
    pub const LEFT: Sides = Sides(1);
    pub const RIGHT: Sides = Sides(2);
    pub const BOTTOM: Sides = Sides(4);
    pub const TOP: Sides = Sides(8);

    pub fn of_vertex(region: &Region, v: Vertex) -> Sides {
        if region.is_torus() {
            return Sides::NONE;
        }
        let mut s = Sides::NONE;
        if v.x == 0 {
            s |= Sides::LEFT;
        }
        if v.x + 1 == region.width() {
            s |= Sides::RIGHT;
        }
        if v.y == 0 {
            s |= Sides::BOTTOM;
        }
        if v.y + 1 == region.height() {
            s |= Sides::TOP;
        }
        s
    }

    pub fn contains(self, other: Sides) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn intersects(self, other: Sides) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::BitOr for Sides {
    type Output = Sides;
    fn bitor(self, rhs: Sides) -> Sides {
        Sides(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for Sides {
    fn bitor_assign(&mut self, rhs: Sides) {
        self.0 |= rhs.0;
    }
}

/// Crossing direction inside a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftRight,
    TopBottom,
}

/// Partition of the vertices of a region into clusters.
///
/// Labels are `0..cluster_count` in order of first appearance when vertices
/// are scanned by index, so they do not depend on union-find internals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    region: Region,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    sides: Vec<Sides>,
    boundary_vertices: Vec<usize>,
}

impl ClusterLabeling {
    fn from_union_find(region: Region, uf: &mut UnionFind) -> Self {
        let nv = region.vertex_count();
        let mut root_label = vec![usize::MAX; uf.len()];
        let mut labels = Vec::with_capacity(nv);
        let mut sizes = Vec::new();
        let mut sides = Vec::new();
        let mut boundary_vertices = Vec::new();
        for v in 0..nv {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = sizes.len();
                sizes.push(0);
                sides.push(Sides::NONE);
                boundary_vertices.push(0);
            }
            let l = root_label[r];
            labels.push(l);
            sizes[l] += 1;
            let vert = region.vertex_at(v);
            sides[l] |= Sides::of_vertex(&region, vert);
            if region.is_boundary_vertex(vert) {
                boundary_vertices[l] += 1;
            }
        }
        Self {
            region,
            labels,
            sizes,
            sides,
            boundary_vertices,
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, cluster: usize) -> usize {
        self.sizes[cluster]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Box sides touched by the cluster (empty on the torus).
    pub fn sides(&self, cluster: usize) -> Sides {
        self.sides[cluster]
    }

    /// Number of boundary vertices in the cluster.
    pub fn boundary_vertex_count(&self, cluster: usize) -> usize {
        self.boundary_vertices[cluster]
    }

    pub fn largest_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Writes one CSV row per cluster with header
    /// `label,size,touches_left,touches_right,touches_bottom,touches_top,boundary_vertices`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "label,size,touches_left,touches_right,touches_bottom,touches_top,boundary_vertices"
        )?;
        for l in 0..self.cluster_count() {
            let s = self.sides[l];
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                l,
                self.sizes[l],
                s.contains(Sides::LEFT) as u8,
                s.contains(Sides::RIGHT) as u8,
                s.contains(Sides::BOTTOM) as u8,
                s.contains(Sides::TOP) as u8,
                self.boundary_vertices[l]
            )?;
        }
        Ok(())
    }
}

fn union_open(config: &BondConfig, wired: bool) -> UnionFind {
    let region = config.region();
    let mut uf = UnionFind::new(region.vertex_count());
    for (i, &open) in config.bits().iter().enumerate() {
        if open {
            let (a, b) = region.endpoints(i);
            uf.union(a, b);
        }
    }
    if wired {
        let mut first = None;
        for v in 0..region.vertex_count() {
            if region.is_boundary_vertex(region.vertex_at(v)) {
                match first {
                    None => first = Some(v),
                    Some(f) => {
                        uf.union(f, v);
                    }
                }
            }
        }
    }
    uf
}

/// Clusters of the open subgraph, with the boundary of a wired box merged
/// into a single cluster. `cluster_count` is then the component count that
/// weights the random-cluster measure.
pub fn label(config: &BondConfig) -> ClusterLabeling {
    let mut uf = union_open(config, config.region().is_wired());
    ClusterLabeling::from_union_find(*config.region(), &mut uf)
}

/// Clusters of the open subgraph alone, ignoring any boundary wiring.
pub fn label_open(config: &BondConfig) -> ClusterLabeling {
    let mut uf = union_open(config, false);
    ClusterLabeling::from_union_find(*config.region(), &mut uf)
}

/// Whether an open path joins the two opposite sides of a box. Wiring is
/// ignored: only open edges count.
pub fn crossing(config: &BondConfig, direction: Direction) -> Result<bool> {
    if config.region().is_torus() {
        return Err(Error::UnsupportedRegion(
            "crossings are defined on boxes only".into(),
        ));
    }
    let need = match direction {
        Direction::LeftRight => Sides::LEFT | Sides::RIGHT,
        Direction::TopBottom => Sides::BOTTOM | Sides::TOP,
    };
    let lab = label_open(config);
    Ok((0..lab.cluster_count()).any(|l| lab.sides(l).contains(need)))
}

/// A non-negative fraction `num / den` kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Size of the largest cluster over the number of vertices (wiring applied).
pub fn largest_cluster_fraction(config: &BondConfig) -> Fraction {
    let lab = label(config);
    Fraction {
        num: lab.largest_size() as u64,
        den: config.region().vertex_count() as u64,
    }
}
