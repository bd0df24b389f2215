//! Primal and dual arms around an inner box.
//!
//! The annulus is the window minus the inner box `B`: an edge belongs to it
//! unless both endpoints lie in the vertex rectangle of `B`. A primal arm is
//! a cluster of the annulus that reaches the window boundary and meets `B`
//! through an open radial edge (an annulus edge with one endpoint on `B`). A
//! dual arm is a cluster of dual edges crossing closed annulus edges,
//! restricted to inner plaquettes, that contains a plaquette along `B` and a
//! plaquette along the window boundary.
//!
//! Arms are read off a counterclockwise circuit around `B` that alternates
//! radial edges and the plaquettes between them. Consecutive circuit sites
//! touching the same arm merge into one interval.

use crate::lattice::{BondConfig, EdgeRef};
use crate::{Error, Result, UnionFind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArmKind {
    Primal,
    Dual,
}

/// Inclusive vertex rectangle `[x0, x1] x [y0, y1]` of the inner box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InnerBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl InnerBox {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Self { x0, y0, x1, y1 }
    }

    fn contains(&self, x: usize, y: usize) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }
}

/// One interval of the circuit touched by a single arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arm {
    pub kind: ArmKind,
    /// Union-find root of the arm's cluster (primal vertices or plaquettes).
    pub cluster: usize,
    /// First and last circuit sites of the interval; `first > last` when the
    /// interval wraps past site 0.
    pub first_site: usize,
    pub last_site: usize,
}

/// Cyclic sequence of arm intervals around the inner box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmSequence {
    arms: Vec<Arm>,
    circuit_len: usize,
}

impl ArmSequence {
    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn circuit_len(&self) -> usize {
        self.circuit_len
    }

    fn distinct(&self, kind: ArmKind) -> usize {
        let mut ids: Vec<usize> = self
            .arms
            .iter()
            .filter(|a| a.kind == kind)
            .map(|a| a.cluster)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Number of distinct primal arm clusters.
    pub fn primal_arms(&self) -> usize {
        self.distinct(ArmKind::Primal)
    }

    /// Number of distinct dual arm clusters.
    pub fn dual_arms(&self) -> usize {
        self.distinct(ArmKind::Dual)
    }

    /// Cyclically consecutive intervals of the same kind. Zero when the
    /// sequence alternates.
    pub fn violations(&self) -> usize {
        let k = self.arms.len();
        if k < 2 {
            return 0;
        }
        (0..k)
            .filter(|&i| self.arms[i].kind == self.arms[(i + 1) % k].kind)
            .count()
    }

    pub fn is_alternating(&self) -> bool {
        self.violations() == 0
    }
}

#[derive(Clone, Copy)]
enum Site {
    Radial(EdgeRef),
    Face(usize, usize),
}

fn circuit(b: &InnerBox) -> Vec<Site> {
    let mut sites = Vec::new();
    for x in b.x0..=b.x1 {
        sites.push(Site::Radial(EdgeRef::up(x, b.y0 - 1)));
        sites.push(Site::Face(x, b.y0 - 1));
    }
    for y in b.y0..=b.y1 {
        sites.push(Site::Radial(EdgeRef::right(b.x1, y)));
        sites.push(Site::Face(b.x1, y));
    }
    for x in (b.x0..=b.x1).rev() {
        sites.push(Site::Radial(EdgeRef::up(x, b.y1)));
        sites.push(Site::Face(x - 1, b.y1));
    }
    for y in (b.y0..=b.y1).rev() {
        sites.push(Site::Radial(EdgeRef::right(b.x0 - 1, y)));
        sites.push(Site::Face(b.x0 - 1, y - 1));
    }
    sites
}

/// Arms of a box window around the inner box `inner`. Wiring is ignored.
pub fn arms(config: &BondConfig, inner: InnerBox) -> Result<ArmSequence> {
    let region = *config.region();
    if region.is_torus() {
        return Err(Error::UnsupportedRegion("arms need a box window".into()));
    }
    let (w, h) = (region.width(), region.height());
    if inner.x0 < 1 || inner.y0 < 1 || inner.x1 + 2 > w || inner.y1 + 2 > h
        || inner.x0 > inner.x1 || inner.y0 > inner.y1
    {
        return Err(Error::Precondition(format!(
            "inner box [{}, {}] x [{}, {}] is not strictly inside the {w}x{h} window",
            inner.x0, inner.x1, inner.y0, inner.y1
        )));
    }

    let in_b = |v: usize| {
        let p = region.vertex_at(v);
        inner.contains(p.x, p.y)
    };
    let pw = w - 1;
    let plaquettes = pw * (h - 1);
    let mut primal = UnionFind::new(region.vertex_count());
    let mut dual = UnionFind::new(plaquettes);
    for i in 0..region.edge_count() {
        let (a, b) = region.endpoints(i);
        if in_b(a) && in_b(b) {
            continue;
        }
        if config.is_open(i) {
            primal.union(a, b);
            continue;
        }
        let e = region.edge_at(i)?;
        let (x, y) = (e.base.x, e.base.y);
        let pair = match e.dir {
            crate::lattice::Dir::Right if y > 0 && y + 1 < h => {
                Some(((y - 1) * pw + x, y * pw + x))
            }
            crate::lattice::Dir::Up if x > 0 && x + 1 < w => Some((y * pw + x - 1, y * pw + x)),
            _ => None,
        };
        if let Some((f, g)) = pair {
            dual.union(f, g);
        }
    }

    let mut primal_reaches = vec![false; region.vertex_count()];
    for v in 0..region.vertex_count() {
        if region.is_boundary_vertex(region.vertex_at(v)) {
            let r = primal.find(v);
            primal_reaches[r] = true;
        }
    }
    let mut dual_reaches = vec![false; plaquettes];
    for py in 0..h - 1 {
        for px in 0..pw {
            if px == 0 || py == 0 || px + 1 == pw || py + 2 == h {
                let r = dual.find(py * pw + px);
                dual_reaches[r] = true;
            }
        }
    }

    let sites = circuit(&inner);
    let mut touches: Vec<(usize, ArmKind, usize)> = Vec::new();
    for (s, site) in sites.iter().enumerate() {
        match *site {
            Site::Radial(e) => {
                if config.edge_is_open(e)? {
                    let outer = if inner.contains(e.base.x, e.base.y) {
                        region.far_end(e)
                    } else {
                        e.base
                    };
                    let r = primal.find(region.vertex_index(outer));
                    if primal_reaches[r] {
                        touches.push((s, ArmKind::Primal, r));
                    }
                }
            }
            Site::Face(px, py) => {
                let r = dual.find(py * pw + px);
                if dual_reaches[r] {
                    touches.push((s, ArmKind::Dual, r));
                }
            }
        }
    }

    let mut out: Vec<Arm> = Vec::new();
    for (s, kind, r) in touches {
        match out.last_mut() {
            Some(a) if a.kind == kind && a.cluster == r => a.last_site = s,
            _ => out.push(Arm {
                kind,
                cluster: r,
                first_site: s,
                last_site: s,
            }),
        }
    }
    if out.len() >= 2 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if first.kind == last.kind && first.cluster == last.cluster {
            out.pop();
            out[0].first_site = last.first_site;
        }
    }
    Ok(ArmSequence {
        arms: out,
        circuit_len: sites.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Region;

    #[test]
    fn all_open_has_one_primal_arm() {
        let c = BondConfig::all_open(Region::free_box(9, 9).unwrap());
        let a = arms(&c, InnerBox::new(3, 3, 5, 5)).unwrap();
        assert_eq!(a.arms().len(), 1);
        assert_eq!(a.primal_arms(), 1);
        assert_eq!(a.dual_arms(), 0);
        assert!(a.is_alternating());
    }

    #[test]
    fn all_closed_has_one_dual_arm() {
        let c = BondConfig::closed(Region::free_box(9, 9).unwrap());
        let a = arms(&c, InnerBox::new(3, 3, 5, 5)).unwrap();
        assert_eq!(a.primal_arms(), 0);
        assert_eq!(a.dual_arms(), 1);
    }

    #[test]
    fn inner_box_must_be_strictly_inside() {
        let c = BondConfig::all_open(Region::free_box(6, 6).unwrap());
        assert!(arms(&c, InnerBox::new(0, 2, 3, 3)).is_err());
        assert!(arms(&c, InnerBox::new(1, 1, 5, 3)).is_err());
        assert!(arms(&c, InnerBox::new(1, 1, 4, 4)).is_ok());
    }

    #[test]
    fn vertical_stripes_alternate() {
        let region = Region::free_box(13, 13).unwrap();
        let mut c = BondConfig::closed(region);
        for x in (0..13).step_by(2) {
            for y in 0..12 {
                c.set_edge(EdgeRef::up(x, y), true).unwrap();
            }
        }
        let a = arms(&c, InnerBox::new(4, 4, 8, 8)).unwrap();
        let kinds: Vec<ArmKind> = a.arms().iter().map(|x| x.kind).collect();
        assert_eq!(kinds.len(), 12);
        assert!(a.is_alternating());
        assert_eq!(a.primal_arms(), 6);
        assert_eq!(a.dual_arms(), 6);
        // along the top of B, read right to left: primal at x = 8, 6, 4; the
        // corner plaquette belongs to the interval continuing down the left side
        let top: Vec<ArmKind> = a
            .arms()
            .iter()
            .filter(|x| x.first_site >= 20 && x.last_site < 30)
            .map(|x| x.kind)
            .collect();
        assert_eq!(
            top,
            vec![
                ArmKind::Primal,
                ArmKind::Dual,
                ArmKind::Primal,
                ArmKind::Dual,
                ArmKind::Primal
            ]
        );
    }
}
