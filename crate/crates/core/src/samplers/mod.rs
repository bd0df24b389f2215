//! Samplers for the bond measures and exact enumeration tables.
//!
//! All randomness flows through a caller-supplied [`rand::Rng`]; the
//! convenience entry point [`sample`] seeds a ChaCha8 generator from the
//! spec, so identical specs give bit-identical configurations.

mod exact;
mod parity;
mod rc;
mod ust;

pub use exact::{enumerate_exact, EmpiricalDistribution, ExactTable, MAX_ENUMERATION_BITS};
pub use rc::{p_sd, rc_conditional};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{BondConfig, Region};
use crate::{Error, Result};

/// Initial state of the random-cluster heat bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Init {
    AllOpen,
    AllClosed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Bernoulli {
        p: f64,
    },
    RandomCluster {
        p: f64,
        q: f64,
        sweeps: usize,
        init: Init,
    },
    /// Uniform spanning tree (wiring of a box is ignored).
    Ust,
    /// Uniform even-degree subgraph.
    UniformEven,
    /// Uniform odd-degree subgraph; needs a torus of even side.
    UniformOdd,
}

impl Model {
    /// Short tag used in CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            Model::Bernoulli { .. } => "bernoulli",
            Model::RandomCluster { .. } => "rc",
            Model::Ust => "ust",
            Model::UniformEven => "even",
            Model::UniformOdd => "odd",
        }
    }

    pub fn validate(&self, region: &Region) -> Result<()> {
        let check_p = |p: f64| {
            if p > 0.0 && p < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1)")))
            }
        };
        match *self {
            Model::Bernoulli { p } => check_p(p),
            Model::RandomCluster { p, q, sweeps, .. } => {
                check_p(p)?;
                if !(q > 0.0 && q.is_finite()) {
                    return Err(Error::InvalidParameter(format!("q = {q} must be positive")));
                }
                if sweeps == 0 {
                    return Err(Error::InvalidParameter("sweeps must be at least 1".into()));
                }
                Ok(())
            }
            Model::Ust | Model::UniformEven => Ok(()),
            Model::UniformOdd => match *region {
                Region::Torus { n } if n % 2 == 0 => Ok(()),
                _ => Err(Error::UnsupportedRegion(format!(
                    "uniform odd subgraphs need a torus of even side, got {region}"
                ))),
            },
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Model::Bernoulli { p } => write!(f, "bernoulli p={p}"),
            Model::RandomCluster { p, q, sweeps, init } => write!(
                f,
                "rc p={p} q={q} sweeps={sweeps} init={}",
                match init {
                    Init::AllOpen => "open",
                    Init::AllClosed => "closed",
                }
            ),
            Model::Ust => write!(f, "ust"),
            Model::UniformEven => write!(f, "even"),
            Model::UniformOdd => write!(f, "odd"),
        }
    }
}

/// A model, a region and a seed: everything needed to reproduce one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub model: Model,
    pub region: Region,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(model: Model, region: Region, seed: u64) -> Result<Self> {
        model.validate(&region)?;
        Ok(Self {
            model,
            region,
            seed,
        })
    }
}

/// The generator every seeded entry point uses.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws one configuration for `spec`.
pub fn sample(spec: &SampleSpec) -> Result<BondConfig> {
    let mut sampler = Sampler::new(spec.model, spec.region)?;
    let mut rng = rng_from_seed(spec.seed);
    Ok(sampler.sample(&mut rng))
}

enum Kernel {
    Bernoulli(f64),
    RandomCluster(rc::HeatBath),
    Ust(ust::Wilson),
    Parity(parity::ParitySampler),
}

/// Reusable sampler holding the per-region scratch space of its model.
pub struct Sampler {
    region: Region,
    kernel: Kernel,
}

impl Sampler {
    pub fn new(model: Model, region: Region) -> Result<Self> {
        model.validate(&region)?;
        let kernel = match model {
            Model::Bernoulli { p } => Kernel::Bernoulli(p),
            Model::RandomCluster {
                p,
                q,
                sweeps,
                init,
            } => Kernel::RandomCluster(rc::HeatBath::new(region, p, q, sweeps, init)),
            Model::Ust => Kernel::Ust(ust::Wilson::new(region)),
            Model::UniformEven => Kernel::Parity(parity::ParitySampler::new(region, false)),
            Model::UniformOdd => Kernel::Parity(parity::ParitySampler::new(region, true)),
        };
        Ok(Self { region, kernel })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> BondConfig {
        let mut out = BondConfig::closed(self.region);
        self.sample_into(rng, &mut out);
        out
    }

    /// Overwrites `out` (which must live on this sampler's region).
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut BondConfig) {
        assert_eq!(out.region(), &self.region, "output region mismatch");
        match &mut self.kernel {
            Kernel::Bernoulli(p) => {
                let p = *p;
                for b in out.bits_mut() {
                    *b = rng.gen::<f64>() < p;
                }
            }
            Kernel::RandomCluster(hb) => hb.run(rng, out.bits_mut()),
            Kernel::Ust(w) => w.run(rng, out.bits_mut()),
            Kernel::Parity(s) => s.run(rng, out.bits_mut()),
        }
    }
}
