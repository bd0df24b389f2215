//! Percolation laboratory for the square lattice.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: finite regions (torus, box), canonical edge indexing, bond
//!   configurations, translations and half-plane restriction.
//! * [`duality`]: complement and planar dual of a configuration, crossing
//!   duality and enclosure checks.
//! * [`clusters`]: union-find labeling and the diagnostics built on it
//!   (crossings, arms around a box, tenuousness, trifurcations).
//! * [`samplers`]: Bernoulli, random-cluster, uniform spanning tree and
//!   uniform even/odd subgraph samplers, plus exact enumeration tables.
//! * [`exploration`]: the column-cutting exploration that hunts clusters
//!   whose connection to infinity only runs along the bottom rows.

pub mod clusters;
pub mod duality;
pub mod exploration;
pub mod lattice;
pub mod samplers;

mod error;
mod union_find;

pub use error::{Error, Result};
pub use union_find::UnionFind;
