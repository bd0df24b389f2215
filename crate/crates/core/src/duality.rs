//! Complement and planar dual of bond configurations.
//!
//! Dual vertices sit at plaquette centres. On the torus the plaquette whose
//! lower-left corner is `(x, y)` is dual vertex `(x, y)` and the dual graph is
//! again `Torus(n)`. The dual of a free `w x h` box is a wired
//! `(w + 1) x (h + 1)` box: dual vertex `(i, j)` is the plaquette with
//! lower-left corner `(i - 1, j - 1)`, and the outer ring of the dual box
//! stands for the single unbounded face. Ring edges cross no primal edge and
//! are kept closed. The dual of a wired box is the free
//! `(w - 1) x (h - 1)` box of its inner plaquettes; rim edges have no dual.

use crate::clusters::{self, Direction};
use crate::lattice::{Boundary, BondConfig, Dir, EdgeRef, Region};
use crate::{Error, Result};

/// Every bit flipped.
pub fn complement(config: &BondConfig) -> BondConfig {
    let bits = config.bits().iter().map(|b| !b).collect();
    BondConfig::from_bits(*config.region(), bits).expect("same length")
}

/// Region carrying the planar dual of `region`.
pub fn dual_region(region: &Region) -> Result<Region> {
    match *region {
        Region::Torus { n } => Region::torus(n),
        Region::Box {
            width,
            height,
            boundary: Boundary::Free,
        } => Region::wired_box(width + 1, height + 1),
        Region::Box {
            width,
            height,
            boundary: Boundary::Wired,
        } => {
            if width < 2 || height < 2 {
                return Err(Error::UnsupportedRegion(format!(
                    "wired box {width}x{height} has no inner plaquettes"
                )));
            }
            Region::free_box(width - 1, height - 1)
        }
    }
}

/// The dual edge crossing primal edge `e`, or `None` for rim edges of a wired
/// box.
pub fn crossing_dual_edge(region: &Region, e: EdgeRef) -> Option<EdgeRef> {
    let (x, y) = (e.base.x, e.base.y);
    match (*region, e.dir) {
        (Region::Torus { n }, Dir::Right) => Some(EdgeRef::up(x, (y + n - 1) % n)),
        (Region::Torus { n }, Dir::Up) => Some(EdgeRef::right((x + n - 1) % n, y)),
        (
            Region::Box {
                boundary: Boundary::Free,
                ..
            },
            Dir::Right,
        ) => Some(EdgeRef::up(x + 1, y)),
        (
            Region::Box {
                boundary: Boundary::Free,
                ..
            },
            Dir::Up,
        ) => Some(EdgeRef::right(x, y + 1)),
        (
            Region::Box {
                height,
                boundary: Boundary::Wired,
                ..
            },
            Dir::Right,
        ) => (y > 0 && y + 1 < height).then(|| EdgeRef::up(x, y - 1)),
        (
            Region::Box {
                width,
                boundary: Boundary::Wired,
                ..
            },
            Dir::Up,
        ) => (x > 0 && x + 1 < width).then(|| EdgeRef::right(x - 1, y)),
    }
}

/// Dual configuration stored in the primal edge index space: bit `i` is the
/// state of the dual edge crossing primal edge `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualConfig {
    primal_region: Region,
    region: Region,
    bits: Vec<bool>,
}

impl DualConfig {
    pub fn primal_region(&self) -> &Region {
        &self.primal_region
    }

    /// The region the dual graph lives on.
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The index-space bits as a configuration on the primal region. On the
    /// torus this is a configuration on the dual region as well, which makes
    /// `dual(dual(c).index_config()) == c` a literal identity.
    pub fn index_config(&self) -> BondConfig {
        BondConfig::from_bits(self.primal_region, self.bits.clone()).expect("same length")
    }

    /// The dual configuration laid out on the dual region's own edge indexing.
    pub fn geometric(&self) -> BondConfig {
        let mut out = BondConfig::closed(self.region);
        for (i, &open) in self.bits.iter().enumerate() {
            if !open {
                continue;
            }
            let e = self.primal_region.edge_at(i).expect("index in range");
            if let Some(d) = crossing_dual_edge(&self.primal_region, e) {
                out.set_edge(d, true).expect("dual edge inside dual region");
            }
        }
        out
    }
}

/// Planar dual: the dual edge crossing primal edge `i` is open iff edge `i`
/// is closed.
pub fn dual(config: &BondConfig) -> Result<DualConfig> {
    let region = dual_region(config.region())?;
    Ok(DualConfig {
        primal_region: *config.region(),
        region,
        bits: config.bits().iter().map(|b| !b).collect(),
    })
}

fn require_free_box(config: &BondConfig) -> Result<(usize, usize)> {
    match *config.region() {
        Region::Box {
            width,
            height,
            boundary: Boundary::Free,
        } => Ok((width, height)),
        other => Err(Error::UnsupportedRegion(format!(
            "expected a free box, got {other}"
        ))),
    }
}

/// Checks that exactly one of {open left-right crossing, dual top-bottom
/// crossing} occurs in a free box.
pub fn crossing_duality_check(config: &BondConfig) -> Result<bool> {
    require_free_box(config)?;
    let primal = clusters::crossing(config, Direction::LeftRight)?;
    let dual_geo = dual(config)?.geometric();
    let dual_tb = clusters::crossing(&dual_geo, Direction::TopBottom)?;
    Ok(primal ^ dual_tb)
}

/// Whether an open dual cycle separates cluster `cluster` (a label of
/// [`clusters::label`]) from the boundary of a free box.
///
/// The outer contour of the cluster is extracted as the set of closed edges
/// leaving the cluster whose adjacent plaquettes can be reached from the
/// unbounded face without crossing an open edge of the cluster. The check
/// succeeds when these dual edges are all open, form a cycle (even degree at
/// every dual vertex) and wind an odd number of times around a vertex of the
/// cluster.
pub fn enclosure_check(config: &BondConfig, cluster: usize) -> Result<bool> {
    let (w, h) = require_free_box(config)?;
    let region = *config.region();
    let labeling = clusters::label(config);
    if cluster >= labeling.cluster_count() {
        return Err(Error::InvalidParameter(format!(
            "cluster {cluster} does not exist ({} clusters)",
            labeling.cluster_count()
        )));
    }
    if !labeling.sides(cluster).is_empty() {
        return Err(Error::Precondition(format!(
            "cluster {cluster} touches the box boundary"
        )));
    }
    let in_cluster = |v: usize| labeling.label(v) == cluster;

    // Plaquette ids: inner plaquette (px, py) -> py * (w - 1) + px; the
    // unbounded face gets the last id.
    let pw = w - 1;
    let outer = pw * (h - 1);
    let faces_of = |e: EdgeRef| -> (usize, usize) {
        let face = |px: isize, py: isize| -> usize {
            if px < 0 || py < 0 || px >= pw as isize || py >= (h - 1) as isize {
                outer
            } else {
                py as usize * pw + px as usize
            }
        };
        let (x, y) = (e.base.x as isize, e.base.y as isize);
        match e.dir {
            Dir::Right => (face(x, y - 1), face(x, y)),
            Dir::Up => (face(x - 1, y), face(x, y)),
        }
    };

    let m = region.edge_count();
    let mut face_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); outer + 1];
    for i in 0..m {
        let (a, b) = region.endpoints(i);
        let blocked = config.is_open(i) && in_cluster(a) && in_cluster(b);
        if blocked {
            continue;
        }
        let (f, g) = faces_of(region.edge_at(i)?);
        face_edges[f].push((g, i));
        face_edges[g].push((f, i));
    }
    let mut outside = vec![false; outer + 1];
    outside[outer] = true;
    let mut stack = vec![outer];
    while let Some(f) = stack.pop() {
        for &(g, _) in &face_edges[f] {
            if !outside[g] {
                outside[g] = true;
                stack.push(g);
            }
        }
    }

    let dual_geo = dual(config)?.geometric();
    let mut degree = vec![0usize; outer + 1];
    let mut contour = Vec::new();
    for i in 0..m {
        let (a, b) = region.endpoints(i);
        if in_cluster(a) == in_cluster(b) {
            continue;
        }
        let e = region.edge_at(i)?;
        let (f, g) = faces_of(e);
        if outside[f] && outside[g] {
            let d = crossing_dual_edge(&region, e).expect("free box edges all have duals");
            if !dual_geo.edge_is_open(d)? {
                return Ok(false);
            }
            degree[f] += 1;
            degree[g] += 1;
            contour.push(e);
        }
    }
    if contour.is_empty() || degree.iter().any(|d| d % 2 == 1) {
        return Ok(false);
    }
    let v = (0..region.vertex_count())
        .map(|i| region.vertex_at(i))
        .find(|&v| in_cluster(region.vertex_index(v)))
        .expect("clusters are non-empty");
    let crossings = contour
        .iter()
        .filter(|e| e.dir == Dir::Right && e.base.y == v.y && e.base.x >= v.x)
        .count();
    Ok(crossings % 2 == 1)
}
