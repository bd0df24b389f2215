//! Column-cutting exploration of a band window.
//!
//! The window is a box of width `2W + 1` and height `H + 1`; window column
//! `x` in `[-W, W]` is box column `x + W`, and the target vertex is
//! `(0, n - 1)`. At every step the revealed edges are those with both
//! endpoints in rows `>= n`, plus every edge whose open segment meets the
//! strip `(m- - 1, m+ + 1) x [0, n)`: the horizontal edges starting at
//! `x in [m- - 1, m+]` in rows `0..n` and the vertical edges in columns
//! `[m-, m+]` from row `0` up to row `n`. Step `i` works with `C_i`, the
//! cluster of the target in the revealed open subgraph, and halts when
//!
//! * `C_i` reaches the top row, or a side column in a row `>= n`
//!   ([`HaltReason::InfiniteProxy`]);
//! * `C_i` has no vertex in rows `<= n` outside columns `[m-, m+]`
//!   ([`HaltReason::CutOff`]); the revealed edges then contain every edge
//!   incident to `C_i`, so `C_i` is the full cluster;
//! * the next strip would leave the window ([`HaltReason::WindowExhausted`]).
//!
//! Otherwise `m+` becomes the largest and `m-` the smallest column that
//! `C_i` meets in rows `<= n`, and the strip grows accordingly. The edges
//! added in the two outermost columns (`m- - 1 -> m-` horizontals plus
//! column `m-` verticals on the left, `m+ -> m+ + 1` horizontals plus column
//! `m+` verticals on the right) number at most `4n`.

use crate::lattice::{Adjacency, BondConfig, EdgeRef, Region, Vertex};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaltReason {
    InfiniteProxy,
    CutOff,
    WindowExhausted,
}

impl HaltReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            HaltReason::InfiniteProxy => "infinite_proxy",
            HaltReason::CutOff => "cut_off",
            HaltReason::WindowExhausted => "window_exhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationStep {
    pub index: usize,
    pub m_minus: i64,
    pub m_plus: i64,
    /// Size of `C_i`.
    pub cluster_size: usize,
    /// Edges of the two outermost columns revealed on entering this step.
    pub column_edges_revealed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationTrace {
    pub n: usize,
    /// Target vertex in box coordinates.
    pub target: Vertex,
    pub steps: Vec<ExplorationStep>,
    pub halt_reason: HaltReason,
    pub halt_index: usize,
}

/// Finite-energy lower bound for the probability that all column edges of a
/// step are closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaltingBound {
    pub gamma: f64,
    /// Edges in the two columns of a generic step.
    pub column_edges: usize,
}

/// `gamma = min(p, 1 - p)^(4n)`.
pub fn halting_bound(p: f64, n: usize) -> HaltingBound {
    let column_edges = 4 * n;
    HaltingBound {
        gamma: p.min(1.0 - p).powi(column_edges as i32),
        column_edges,
    }
}

/// Window half-width `W` and height `H` of a band window region.
pub fn window_dims(region: &Region) -> Result<(usize, usize)> {
    match *region {
        Region::Box { width, height, .. } if width % 2 == 1 && width >= 3 && height >= 2 => {
            Ok(((width - 1) / 2, height - 1))
        }
        other => Err(Error::UnsupportedRegion(format!(
            "exploration needs a box of odd width >= 3 and height >= 2, got {other}"
        ))),
    }
}

/// Marks the edges revealed for strip `[m_minus, m_plus]` at level `n`.
/// Returns the number of edges that were not marked before.
fn reveal_strip(
    region: &Region,
    half: i64,
    n: usize,
    m_minus: i64,
    m_plus: i64,
    revealed: &mut [bool],
) -> usize {
    let mut fresh = 0;
    let mut mark = |e: EdgeRef, revealed: &mut [bool]| {
        let i = region.edge_index(e).expect("strip stays inside the window");
        if !revealed[i] {
            revealed[i] = true;
            fresh += 1;
        }
    };
    for y in 0..n {
        for x in (m_minus - 1)..=m_plus {
            mark(EdgeRef::right((x + half) as usize, y), revealed);
        }
        for x in m_minus..=m_plus {
            mark(EdgeRef::up((x + half) as usize, y), revealed);
        }
    }
    fresh
}

/// Edges revealed at level `n` with strip `[m_minus, m_plus]`, as a mask over
/// the window's edges.
pub fn revealed_edges(region: &Region, n: usize, m_minus: i64, m_plus: i64) -> Result<Vec<bool>> {
    let (half, height) = window_dims(region)?;
    let half = half as i64;
    if n == 0 || n >= height || m_minus > 0 || m_plus < 0 || m_minus - 1 < -half || m_plus + 1 > half
    {
        return Err(Error::InvalidParameter(format!(
            "strip [{m_minus}, {m_plus}] at level {n} does not fit the window"
        )));
    }
    let mut revealed = vec![false; region.edge_count()];
    reveal_upper(region, n, &mut revealed);
    reveal_strip(region, half, n, m_minus, m_plus, &mut revealed);
    Ok(revealed)
}

fn reveal_upper(region: &Region, n: usize, revealed: &mut [bool]) {
    for (i, r) in revealed.iter_mut().enumerate() {
        let e = region.edge_at(i).expect("in range");
        *r = *r || e.base.y >= n;
    }
}

/// Runs the exploration for target `(0, n - 1)`.
pub fn explore(config: &BondConfig, n: usize) -> Result<ExplorationTrace> {
    let region = *config.region();
    let (half_u, height) = window_dims(&region)?;
    if n == 0 || n >= height {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must satisfy 1 <= n < {height}"
        )));
    }
    let half = half_u as i64;
    let adj = Adjacency::new(&region);
    let open = config.bits();
    let nv = region.vertex_count();
    let target = Vertex::new(half_u, n - 1);
    let start = region.vertex_index(target);

    let mut revealed = vec![false; region.edge_count()];
    reveal_upper(&region, n, &mut revealed);
    reveal_strip(&region, half, n, 0, 0, &mut revealed);

    let mut seen = vec![false; nv];
    let mut members: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    let (mut m_minus, mut m_plus) = (0i64, 0i64);
    let mut column_edges = 0;
    for index in 0.. {
        for &v in &members {
            seen[v] = false;
        }
        members.clear();
        seen[start] = true;
        members.push(start);
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &(w, e) in adj.neighbors(v) {
                if revealed[e] && open[e] && !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
        }
        steps.push(ExplorationStep {
            index,
            m_minus,
            m_plus,
            cluster_size: members.len(),
            column_edges_revealed: column_edges,
        });

        let mut infinite = false;
        let (mut lo, mut hi) = (0i64, 0i64);
        for &v in &members {
            let p = region.vertex_at(v);
            let x = p.x as i64 - half;
            if p.y == height || (p.y >= n && x.abs() == half) {
                infinite = true;
            }
            if p.y <= n {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        let halt = if infinite {
            Some(HaltReason::InfiniteProxy)
        } else if lo >= m_minus && hi <= m_plus {
            Some(HaltReason::CutOff)
        } else if hi + 1 > half || lo - 1 < -half {
            Some(HaltReason::WindowExhausted)
        } else {
            None
        };
        if let Some(halt_reason) = halt {
            return Ok(ExplorationTrace {
                n,
                target,
                steps,
                halt_reason,
                halt_index: index,
            });
        }

        // Rectangles first, then the two columns.
        let grow_left = lo < m_minus;
        let grow_right = hi > m_plus;
        let inner_minus = if grow_left { lo + 1 } else { m_minus };
        let inner_plus = if grow_right { hi - 1 } else { m_plus };
        if inner_minus <= inner_plus {
            reveal_strip(&region, half, n, inner_minus, inner_plus, &mut revealed);
        }
        m_minus = lo;
        m_plus = hi;
        column_edges = reveal_strip(&region, half, n, m_minus, m_plus, &mut revealed);
    }
    unreachable!("the loop only exits by returning")
}
