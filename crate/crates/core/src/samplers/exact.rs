//! Exact distributions on small regions, for validating the samplers.
//!
//! Bernoulli, random-cluster and spanning-tree tables are built by visiting
//! all `2^E` configurations, so they need `E <= MAX_ENUMERATION_BITS`. Even
//! and odd subgraphs are enumerated through a basis of fundamental cycles,
//! so what must stay below the limit is the cycle-space dimension
//! `E - V + 1`; this admits `Torus(4)` (dimension 17, 32 edges).

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::clusters;
use crate::lattice::{Adjacency, BondConfig, EdgeRef, Region};
use crate::samplers::Model;
use crate::{Error, Result, UnionFind};

/// Largest number of free bits an exact table may enumerate.
pub const MAX_ENUMERATION_BITS: usize = 20;

/// Exact law of a model on a small region, keyed by [`BondConfig::key`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactTable {
    region: Region,
    /// Sorted by key; every listed configuration has positive mass.
    entries: Vec<(u64, f64)>,
}

impl ExactTable {
    fn from_weights(region: Region, mut entries: Vec<(u64, f64)>) -> Self {
        entries.retain(|&(_, w)| w > 0.0);
        entries.sort_unstable_by_key(|&(k, _)| k);
        let z: f64 = entries.iter().map(|&(_, w)| w).sum();
        for entry in &mut entries {
            entry.1 /= z;
        }
        Self { region, entries }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Number of configurations with positive mass.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn probability(&self, key: u64) -> f64 {
        self.entries
            .binary_search_by_key(&key, |&(k, _)| k)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    /// Total-variation distance to an empirical distribution.
    pub fn tv_distance(&self, empirical: &EmpiricalDistribution) -> f64 {
        let n = empirical.total as f64;
        let mut sum = 0.0;
        for &(k, p) in &self.entries {
            let c = empirical.counts.get(&k).copied().unwrap_or(0) as f64;
            sum += (p - c / n).abs();
        }
        for (&k, &c) in &empirical.counts {
            if self.probability(k) == 0.0 {
                sum += c as f64 / n;
            }
        }
        sum / 2.0
    }
}

/// Multiplicative hasher for configuration keys, which are already well
/// spread integers.
#[derive(Default)]
pub struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, k: u64) {
        self.0 = (k ^ (k >> 29)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

/// Counts of sampled configurations by key.
#[derive(Debug, Clone, Default)]
pub struct EmpiricalDistribution {
    counts: HashMap<u64, u64, BuildHasherDefault<KeyHasher>>,
    total: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_key(&mut self, key: u64) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    /// Records a configuration; panics on regions with more than 64 edges.
    pub fn record(&mut self, config: &BondConfig) {
        self.record_key(config.key().expect("configuration fits in a key"));
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, key: u64) -> u64 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn merge(&mut self, other: &EmpiricalDistribution) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }
}

fn mask_config(region: Region, m: usize, mask: u64) -> BondConfig {
    let bits = (0..m).map(|e| mask >> e & 1 == 1).collect();
    BondConfig::from_bits(region, bits).expect("length matches")
}

fn require_edges(region: &Region) -> Result<usize> {
    let m = region.edge_count();
    if m > MAX_ENUMERATION_BITS {
        return Err(Error::RegionTooLarge(format!(
            "{region} has {m} edges; at most {MAX_ENUMERATION_BITS} can be enumerated"
        )));
    }
    Ok(m)
}

/// Fundamental cycles of a BFS spanning tree, as edge masks.
fn cycle_basis(region: &Region) -> Vec<u64> {
    let adj = Adjacency::new(region);
    let nv = region.vertex_count();
    let mut path = vec![0u64; nv];
    let mut seen = vec![false; nv];
    let mut tree = vec![false; region.edge_count()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in adj.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                tree[e] = true;
                path[w] = path[v] ^ (1 << e);
                queue.push_back(w);
            }
        }
    }
    (0..region.edge_count())
        .filter(|&e| !tree[e])
        .map(|e| {
            let (a, b) = region.endpoints(e);
            (1u64 << e) ^ path[a] ^ path[b]
        })
        .collect()
}

fn even_subgraphs(region: &Region) -> Result<Vec<u64>> {
    let m = region.edge_count();
    if m > 64 {
        return Err(Error::RegionTooLarge(format!(
            "{region} has {m} edges; keys hold at most 64"
        )));
    }
    let basis = cycle_basis(region);
    if basis.len() > MAX_ENUMERATION_BITS {
        return Err(Error::RegionTooLarge(format!(
            "{region} has cycle-space dimension {}; at most {MAX_ENUMERATION_BITS} can be enumerated",
            basis.len()
        )));
    }
    let count = 1usize << basis.len();
    let mut out = Vec::with_capacity(count);
    let mut current = 0u64;
    out.push(current);
    for i in 1..count {
        current ^= basis[i.trailing_zeros() as usize];
        out.push(current);
    }
    Ok(out)
}

/// Exact law of `model` on `region`.
pub fn enumerate_exact(model: &Model, region: &Region) -> Result<ExactTable> {
    model.validate(region)?;
    let region = *region;
    let nv = region.vertex_count();
    let entries: Vec<(u64, f64)> = match *model {
        Model::Bernoulli { p } => {
            let m = require_edges(&region)?;
            (0..1u64 << m)
                .map(|mask| {
                    let k = mask.count_ones() as i32;
                    (mask, p.powi(k) * (1.0 - p).powi(m as i32 - k))
                })
                .collect()
        }
        Model::RandomCluster { p, q, .. } => {
            let m = require_edges(&region)?;
            let ratio = p / (1.0 - p);
            (0..1u64 << m)
                .map(|mask| {
                    let kappa = clusters::label(&mask_config(region, m, mask)).cluster_count();
                    (
                        mask,
                        ratio.powi(mask.count_ones() as i32) * q.powi(kappa as i32),
                    )
                })
                .collect()
        }
        Model::Ust => {
            let m = require_edges(&region)?;
            let ends: Vec<(usize, usize)> = (0..m).map(|e| region.endpoints(e)).collect();
            (0..1u64 << m)
                .filter(|mask| mask.count_ones() as usize + 1 == nv)
                .filter(|&mask| {
                    let mut uf = UnionFind::new(nv);
                    (0..m)
                        .filter(|&e| mask >> e & 1 == 1)
                        .all(|e| uf.union(ends[e].0, ends[e].1))
                })
                .map(|mask| (mask, 1.0))
                .collect()
        }
        Model::UniformEven => even_subgraphs(&region)?
            .into_iter()
            .map(|mask| (mask, 1.0))
            .collect(),
        Model::UniformOdd => {
            let n = region.width();
            let mut matching = 0u64;
            for y in 0..n {
                for x in (0..n).step_by(2) {
                    matching |= 1 << region.edge_index(EdgeRef::right(x, y))?;
                }
            }
            even_subgraphs(&region)?
                .into_iter()
                .map(|mask| (mask ^ matching, 1.0))
                .collect()
        }
    };
    Ok(ExactTable::from_weights(region, entries))
}
