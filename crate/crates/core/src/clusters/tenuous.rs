//! Finite-band proxy for tenuous clusters.
//!
//! In a band window, "infinite" is read as "touches the left, right or top
//! side of the band". A cluster meeting these sides is tenuous at level `n`
//! if none of the components of its restriction to rows `y >= n` does.

use std::collections::VecDeque;

use crate::clusters::Sides;
use crate::lattice::{Adjacency, BondConfig, Vertex};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TenuousStatus {
    /// The cluster of `v` stays away from the far sides.
    NotApplicable,
    /// The cluster reaches the far sides, but only through rows below `n`.
    TenuousProxy,
    /// Some component of the cluster above row `n` reaches the far sides.
    NonTenuousProxy,
}

const FAR: Sides = Sides(1 | 2 | 8);

/// Classifies the cluster of `v` (with `v.y < n`) in a band window.
pub fn tenuous_check(config: &BondConfig, n: usize, v: Vertex) -> Result<TenuousStatus> {
    let region = *config.region();
    if region.is_torus() {
        return Err(Error::UnsupportedRegion(
            "tenuousness is measured on a band window".into(),
        ));
    }
    if n == 0 || n >= region.height() {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must satisfy 1 <= n < band height {}",
            region.height()
        )));
    }
    if !region.contains(v) || v.y >= n {
        return Err(Error::Precondition(format!(
            "vertex ({}, {}) must lie in the band below row {n}",
            v.x, v.y
        )));
    }
    let adj = Adjacency::new(&region);
    let open = config.bits();
    let nv = region.vertex_count();
    let mut in_cluster = vec![false; nv];
    let start = region.vertex_index(v);
    in_cluster[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut reaches_far = false;
    while let Some(u) = queue.pop_front() {
        reaches_far |= Sides::of_vertex(&region, region.vertex_at(u)).intersects(FAR);
        for &(w, e) in adj.neighbors(u) {
            if open[e] && !in_cluster[w] {
                in_cluster[w] = true;
                queue.push_back(w);
            }
        }
    }
    if !reaches_far {
        return Ok(TenuousStatus::NotApplicable);
    }
    let upper = |u: usize| in_cluster[u] && region.vertex_at(u).y >= n;
    let mut seen = vec![false; nv];
    for s in 0..nv {
        if seen[s] || !upper(s) {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut far = false;
        while let Some(u) = queue.pop_front() {
            far |= Sides::of_vertex(&region, region.vertex_at(u)).intersects(FAR);
            for &(w, e) in adj.neighbors(u) {
                if open[e] && upper(w) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if far {
            return Ok(TenuousStatus::NonTenuousProxy);
        }
    }
    Ok(TenuousStatus::TenuousProxy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{EdgeRef, Region};

    fn band() -> Region {
        Region::free_box(9, 8).unwrap()
    }

    #[test]
    fn open_column_is_not_tenuous() {
        let mut c = BondConfig::closed(band());
        for y in 0..7 {
            c.set_edge(EdgeRef::up(4, y), true).unwrap();
        }
        assert_eq!(
            tenuous_check(&c, 3, Vertex::new(4, 1)).unwrap(),
            TenuousStatus::NonTenuousProxy
        );
    }

    #[test]
    fn low_cluster_not_applicable() {
        let mut c = BondConfig::closed(band());
        c.set_edge(EdgeRef::up(4, 0), true).unwrap();
        c.set_edge(EdgeRef::right(4, 1), true).unwrap();
        assert_eq!(
            tenuous_check(&c, 3, Vertex::new(4, 1)).unwrap(),
            TenuousStatus::NotApplicable
        );
    }

    #[test]
    fn path_to_the_side_below_n_is_tenuous() {
        // v connects to the left side along row 1, with a finite tooth
        // poking above row n = 3.
        let mut c = BondConfig::closed(band());
        for x in 0..4 {
            c.set_edge(EdgeRef::right(x, 1), true).unwrap();
        }
        for y in 1..5 {
            c.set_edge(EdgeRef::up(2, y), true).unwrap();
        }
        assert_eq!(
            tenuous_check(&c, 3, Vertex::new(4, 1)).unwrap(),
            TenuousStatus::TenuousProxy
        );
    }

    #[test]
    fn rejects_bad_levels() {
        let c = BondConfig::closed(band());
        assert!(tenuous_check(&c, 8, Vertex::new(0, 0)).is_err());
        assert!(tenuous_check(&c, 0, Vertex::new(0, 0)).is_err());
        assert!(tenuous_check(&c, 2, Vertex::new(0, 2)).is_err());
    }
}
