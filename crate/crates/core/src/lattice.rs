//! Finite pieces of the square lattice and bond configurations on them.
//!
//! Edges are named by their lower/left endpoint and a direction. The
//! canonical index layout, shared by every region, is: all `Right` edges in
//! row-major order (row `y`, then column `x`), followed by all `Up` edges in
//! row-major order. On the torus both blocks hold `n * n` edges; on a
//! `width x height` box the `Right` block holds `(width - 1) * height` edges
//! and the `Up` block `width * (height - 1)`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Right,
    Up,
}

/// Canonical name of an undirected edge: its lower/left endpoint plus the
/// direction towards the other endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub base: Vertex,
    pub dir: Dir,
}

impl EdgeRef {
    pub const fn new(x: usize, y: usize, dir: Dir) -> Self {
        Self {
            base: Vertex::new(x, y),
            dir,
        }
    }

    pub const fn right(x: usize, y: usize) -> Self {
        Self::new(x, y, Dir::Right)
    }

    pub const fn up(x: usize, y: usize) -> Self {
        Self::new(x, y, Dir::Up)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dir {
            Dir::Right => "R",
            Dir::Up => "U",
        };
        write!(f, "({},{}){}", self.base.x, self.base.y, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Free,
    /// All boundary vertices are identified when counting clusters.
    Wired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Torus {
        n: usize,
    },
    Box {
        width: usize,
        height: usize,
        boundary: Boundary,
    },
}

impl Region {
    pub fn torus(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidRegion(format!("torus side must be >= 3, got {n}")));
        }
        Ok(Region::Torus { n })
    }

    pub fn boxed(width: usize, height: usize, boundary: Boundary) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRegion(format!(
                "box dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(Region::Box {
            width,
            height,
            boundary,
        })
    }

    pub fn free_box(width: usize, height: usize) -> Result<Self> {
        Self::boxed(width, height, Boundary::Free)
    }

    pub fn wired_box(width: usize, height: usize) -> Result<Self> {
        Self::boxed(width, height, Boundary::Wired)
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Region::Torus { .. })
    }

    pub fn width(&self) -> usize {
        match *self {
            Region::Torus { n } => n,
            Region::Box { width, .. } => width,
        }
    }

    pub fn height(&self) -> usize {
        match *self {
            Region::Torus { n } => n,
            Region::Box { height, .. } => height,
        }
    }

    pub fn boundary(&self) -> Option<Boundary> {
        match *self {
            Region::Torus { .. } => None,
            Region::Box { boundary, .. } => Some(boundary),
        }
    }

    pub fn is_wired(&self) -> bool {
        self.boundary() == Some(Boundary::Wired)
    }

    pub fn vertex_count(&self) -> usize {
        self.width() * self.height()
    }

    /// Number of `Right` edges in each row.
    pub fn right_per_row(&self) -> usize {
        match *self {
            Region::Torus { n } => n,
            Region::Box { width, .. } => width - 1,
        }
    }

    /// Number of rows that carry `Up` edges.
    pub fn up_rows(&self) -> usize {
        match *self {
            Region::Torus { n } => n,
            Region::Box { height, .. } => height - 1,
        }
    }

    pub fn right_count(&self) -> usize {
        self.right_per_row() * self.height()
    }

    pub fn up_count(&self) -> usize {
        self.width() * self.up_rows()
    }

    pub fn edge_count(&self) -> usize {
        self.right_count() + self.up_count()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x < self.width() && v.y < self.height()
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutsideRegion { x: v.x, y: v.y })
        }
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        v.y * self.width() + v.x
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        Vertex::new(i % self.width(), i / self.width())
    }

    /// True for vertices on the outer rim of a box; the torus has none.
    pub fn is_boundary_vertex(&self, v: Vertex) -> bool {
        match *self {
            Region::Torus { .. } => false,
            Region::Box { width, height, .. } => {
                v.x == 0 || v.y == 0 || v.x + 1 == width || v.y + 1 == height
            }
        }
    }

    pub fn is_valid_edge(&self, e: EdgeRef) -> bool {
        if !self.contains(e.base) {
            return false;
        }
        match (*self, e.dir) {
            (Region::Torus { .. }, _) => true,
            (Region::Box { width, .. }, Dir::Right) => e.base.x + 1 < width,
            (Region::Box { height, .. }, Dir::Up) => e.base.y + 1 < height,
        }
    }

    pub fn edge_index(&self, e: EdgeRef) -> Result<usize> {
        if !self.is_valid_edge(e) {
            return Err(Error::InvalidEdge(e.to_string()));
        }
        Ok(self.edge_index_unchecked(e))
    }

    pub(crate) fn edge_index_unchecked(&self, e: EdgeRef) -> usize {
        match e.dir {
            Dir::Right => e.base.y * self.right_per_row() + e.base.x,
            Dir::Up => self.right_count() + e.base.y * self.width() + e.base.x,
        }
    }

    pub fn edge_at(&self, i: usize) -> Result<EdgeRef> {
        let count = self.edge_count();
        if i >= count {
            return Err(Error::EdgeIndexOutOfRange { index: i, count });
        }
        Ok(self.edge_at_unchecked(i))
    }

    pub(crate) fn edge_at_unchecked(&self, i: usize) -> EdgeRef {
        let rc = self.right_count();
        if i < rc {
            let per = self.right_per_row();
            EdgeRef::right(i % per, i / per)
        } else {
            let j = i - rc;
            EdgeRef::up(j % self.width(), j / self.width())
        }
    }

    /// The far endpoint of a valid edge (wrapping on the torus).
    pub fn far_end(&self, e: EdgeRef) -> Vertex {
        let (w, h) = (self.width(), self.height());
        match e.dir {
            Dir::Right => Vertex::new((e.base.x + 1) % w, e.base.y),
            Dir::Up => Vertex::new(e.base.x, (e.base.y + 1) % h),
        }
    }

    /// Vertex indices of both endpoints of edge `i`.
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        let e = self.edge_at_unchecked(i);
        (
            self.vertex_index(e.base),
            self.vertex_index(self.far_end(e)),
        )
    }

    /// The edges meeting `v`, in the order east, north, west, south.
    pub fn incident_edges(&self, v: Vertex) -> Result<Vec<EdgeRef>> {
        self.check_vertex(v)?;
        let (w, h) = (self.width(), self.height());
        let mut out = Vec::with_capacity(4);
        let candidates = match self {
            Region::Torus { .. } => [
                Some(EdgeRef::right(v.x, v.y)),
                Some(EdgeRef::up(v.x, v.y)),
                Some(EdgeRef::right((v.x + w - 1) % w, v.y)),
                Some(EdgeRef::up(v.x, (v.y + h - 1) % h)),
            ],
            Region::Box { .. } => [
                Some(EdgeRef::right(v.x, v.y)),
                Some(EdgeRef::up(v.x, v.y)),
                v.x.checked_sub(1).map(|x| EdgeRef::right(x, v.y)),
                v.y.checked_sub(1).map(|y| EdgeRef::up(v.x, y)),
            ],
        };
        for e in candidates.into_iter().flatten() {
            if self.is_valid_edge(e) {
                out.push(e);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::Torus { n } => write!(f, "torus {n}"),
            Region::Box {
                width,
                height,
                boundary,
            } => {
                let b = match boundary {
                    Boundary::Free => "free",
                    Boundary::Wired => "wired",
                };
                write!(f, "box {width} {height} {b}")
            }
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer '{t}' in region '{s}'")))
        };
        match parts.as_slice() {
            ["torus", n] => Region::torus(num(n)?),
            ["box", w, h, b] => {
                let boundary = match *b {
                    "free" => Boundary::Free,
                    "wired" => Boundary::Wired,
                    other => return Err(Error::Parse(format!("unknown boundary '{other}'"))),
                };
                Region::boxed(num(w)?, num(h)?, boundary)
            }
            _ => Err(Error::Parse(format!("unrecognised region header '{s}'"))),
        }
    }
}

/// Neighbour lists of a region's graph, stored flat.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

impl Adjacency {
    pub fn new(region: &Region) -> Self {
        let nv = region.vertex_count();
        let mut lists: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(4); nv];
        for i in 0..region.edge_count() {
            let (a, b) = region.endpoints(i);
            lists[a].push((b, i));
            lists[b].push((a, i));
        }
        let mut offsets = Vec::with_capacity(nv + 1);
        let mut entries = Vec::with_capacity(2 * region.edge_count());
        offsets.push(0);
        for l in lists {
            entries.extend(l);
            offsets.push(entries.len());
        }
        Self { offsets, entries }
    }

    /// `(neighbour vertex, edge index)` pairs of vertex `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// A subset of the edges of a region: bit `i` set means edge `i` is open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BondConfig {
    region: Region,
    open: Vec<bool>,
}

impl BondConfig {
    pub fn closed(region: Region) -> Self {
        Self {
            open: vec![false; region.edge_count()],
            region,
        }
    }

    pub fn all_open(region: Region) -> Self {
        Self {
            open: vec![true; region.edge_count()],
            region,
        }
    }

    pub fn from_bits(region: Region, open: Vec<bool>) -> Result<Self> {
        if open.len() != region.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "bit sequence has length {}, region {} has {} edges",
                open.len(),
                region,
                region.edge_count()
            )));
        }
        Ok(Self { region, open })
    }

    /// Builds a configuration from the low `edge_count` bits of `key`
    /// (bit `i` = edge `i`).
    pub fn from_key(region: Region, key: u64) -> Result<Self> {
        let m = region.edge_count();
        if m > 64 {
            return Err(Error::InvalidParameter(format!(
                "region has {m} edges, too many for a 64-bit key"
            )));
        }
        Ok(Self {
            open: (0..m).map(|i| key >> i & 1 == 1).collect(),
            region,
        })
    }

    /// Packs the configuration into an integer (bit `i` = edge `i`); `None`
    /// when the region has more than 64 edges.
    pub fn key(&self) -> Option<u64> {
        if self.open.len() > 64 {
            return None;
        }
        Some(
            self.open
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i),
        )
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bits(&self) -> &[bool] {
        &self.open
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.open
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    #[inline]
    pub fn is_open(&self, i: usize) -> bool {
        self.open[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, open: bool) {
        self.open[i] = open;
    }

    pub fn edge_is_open(&self, e: EdgeRef) -> Result<bool> {
        Ok(self.open[self.region.edge_index(e)?])
    }

    pub fn set_edge(&mut self, e: EdgeRef, open: bool) -> Result<()> {
        let i = self.region.edge_index(e)?;
        self.open[i] = open;
        Ok(())
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&b| b).count()
    }

    /// Number of open edges at `v`.
    pub fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self
            .region
            .incident_edges(v)?
            .into_iter()
            .filter(|&e| self.open[self.region.edge_index_unchecked(e)])
            .count())
    }

    /// Shifts the configuration by `(dx, dy)` on the torus: the result has
    /// edge `e` open iff `e - (dx, dy)` is open here.
    pub fn translate(&self, dx: i64, dy: i64) -> Result<Self> {
        let n = match self.region {
            Region::Torus { n } => n,
            Region::Box { .. } => {
                return Err(Error::UnsupportedRegion(
                    "translation is only defined on the torus".into(),
                ))
            }
        };
        let ni = n as i64;
        let sx = (-dx).rem_euclid(ni) as usize;
        let sy = (-dy).rem_euclid(ni) as usize;
        let mut out = Self::closed(self.region);
        for i in 0..self.open.len() {
            let e = self.region.edge_at_unchecked(i);
            let src = EdgeRef::new((e.base.x + sx) % n, (e.base.y + sy) % n, e.dir);
            out.open[i] = self.open[self.region.edge_index_unchecked(src)];
        }
        Ok(out)
    }

    /// Marginal on rows `y0..height`: the edges with both endpoints at height
    /// at least `y0`, as a configuration on a box.
    ///
    /// On the torus the horizontal wrap edges (from column `n - 1` back to
    /// column 0) and the vertical wrap edges are dropped, so the result is a
    /// planar `n x (n - y0)` band with free boundary. On a box the boundary tag
    /// is kept.
    pub fn halfplane_restrict(&self, y0: usize) -> Result<Self> {
        let h = self.region.height();
        if y0 >= h {
            return Err(Error::InvalidParameter(format!(
                "restriction row {y0} outside region of height {h}"
            )));
        }
        let boundary = self.region.boundary().unwrap_or(Boundary::Free);
        let band = Region::boxed(self.region.width(), h - y0, boundary)?;
        Ok(self.window_unchecked(band, 0, y0))
    }

    /// Sub-box with lower-left corner `(x0, y0)` of the given size; on the
    /// torus the window may not wrap.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if x0 + width > self.region.width() || y0 + height > self.region.height() {
            return Err(Error::InvalidParameter(format!(
                "window {width}x{height} at ({x0},{y0}) exceeds region {}",
                self.region
            )));
        }
        let boundary = match self.region {
            Region::Box { boundary, .. } => boundary,
            Region::Torus { .. } => Boundary::Free,
        };
        let window = Region::boxed(width, height, boundary)?;
        Ok(self.window_unchecked(window, x0, y0))
    }

    fn window_unchecked(&self, window: Region, x0: usize, y0: usize) -> Self {
        let mut out = Self::closed(window);
        for i in 0..window.edge_count() {
            let e = window.edge_at_unchecked(i);
            let src = EdgeRef::new(e.base.x + x0, e.base.y + y0, e.dir);
            out.open[i] = self.open[self.region.edge_index_unchecked(src)];
        }
        out
    }

    /// Text form: the region header line, then the `Right` block as one line
    /// per row and the `Up` block as one line per row, each a run of `0`/`1`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.region);
        let bit = |b: bool| if b { '1' } else { '0' };
        let per = self.region.right_per_row();
        if per > 0 {
            for row in self.open[..self.region.right_count()].chunks(per) {
                s.extend(row.iter().map(|&b| bit(b)));
                s.push('\n');
            }
        }
        let w = self.region.width();
        for row in self.open[self.region.right_count()..].chunks(w) {
            s.extend(row.iter().map(|&b| bit(b)));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty configuration text".into()))?;
        let region: Region = header.trim().parse()?;
        let mut open = Vec::with_capacity(region.edge_count());
        for line in lines {
            for c in line.trim().chars() {
                match c {
                    '0' => open.push(false),
                    '1' => open.push(true),
                    other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
                }
            }
        }
        if open.len() != region.edge_count() {
            return Err(Error::Parse(format!(
                "expected {} bits for {}, found {}",
                region.edge_count(),
                region,
                open.len()
            )));
        }
        Ok(Self { region, open })
    }
}
