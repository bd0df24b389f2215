//! Flat `key = value` configuration files.
//!
//! Lines are trimmed; empty lines and everything after `#` are ignored.
//! Lists are comma separated. Unknown keys are rejected by name.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use planeperc_core::lattice::{Boundary, Region};
use planeperc_core::samplers::{p_sd, Init, Model, SampleSpec};

use crate::{HarnessError, Result};

/// Parsed key-value pairs, remembering which keys were consumed.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| HarnessError::Config {
                key: line.to_string(),
                msg: format!("line {} is not of the form key = value", lineno + 1),
            })?;
            let key = k.trim().to_string();
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(HarnessError::Config {
                    key,
                    msg: "given more than once".into(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(HarnessError::UnknownKey(k.clone())),
            None => Ok(()),
        }
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| HarnessError::Config {
                    key: key.to_string(),
                    msg: format!("cannot parse '{v}': {e}"),
                })
            })
            .transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        let item = item.trim();
                        item.parse::<T>().map_err(|e| HarnessError::Config {
                            key: key.to_string(),
                            msg: format!("cannot parse '{item}': {e}"),
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

fn bad(key: &str, msg: impl Into<String>) -> HarnessError {
    HarnessError::Config {
        key: key.to_string(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
}

impl FromStr for ExperimentId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "E1" => Self::E1,
            "E2" => Self::E2,
            "E3" => Self::E3,
            "E4" => Self::E4,
            "E5" => Self::E5,
            "E6" => Self::E6,
            "E7" => Self::E7,
            "E8" => Self::E8,
            _ => return Err(format!("unknown experiment '{s}' (expected E1..E8)")),
        })
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Bernoulli,
    RandomCluster,
    Ust,
    Even,
    Odd,
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "bernoulli" => Self::Bernoulli,
            "rc" | "random_cluster" | "randomcluster" => Self::RandomCluster,
            "ust" => Self::Ust,
            "even" | "uniform_even" => Self::Even,
            "odd" | "uniform_odd" => Self::Odd,
            _ => {
                return Err(format!(
                    "unknown model '{s}' (expected bernoulli, rc, ust, even or odd)"
                ))
            }
        })
    }
}

/// Edge parameter `p`: a number or the self-dual point of each `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Fixed(f64),
    SelfDual,
}

impl FromStr for PValue {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("sd") {
            Ok(Self::SelfDual)
        } else {
            s.parse::<f64>()
                .map(Self::Fixed)
                .map_err(|e| format!("{e} (expected a number or 'sd')"))
        }
    }
}

/// Initial state policy of the random-cluster heat bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitPolicy {
    Open,
    Closed,
    /// Even replicates start all open, odd replicates all closed.
    Alternate,
}

impl InitPolicy {
    pub fn for_replicate(self, replicate: usize) -> Init {
        match self {
            InitPolicy::Open => Init::AllOpen,
            InitPolicy::Closed => Init::AllClosed,
            InitPolicy::Alternate if replicate.is_multiple_of(2) => Init::AllOpen,
            InitPolicy::Alternate => Init::AllClosed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InitPolicy::Open => "open",
            InitPolicy::Closed => "closed",
            InitPolicy::Alternate => "alternate",
        }
    }
}

impl FromStr for InitPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "open" => Ok(Self::Open),
            "closed" => Ok(Self::Closed),
            "alternate" => Ok(Self::Alternate),
            _ => Err(format!("unknown init '{s}' (expected open, closed or alternate)")),
        }
    }
}

/// One model with concrete parameters, before the per-replicate init is
/// chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub kind: ModelKind,
    pub p: f64,
    pub q: f64,
    pub sweeps: usize,
    pub init: InitPolicy,
}

impl ParamPoint {
    pub fn model(&self, replicate: usize) -> Model {
        match self.kind {
            ModelKind::Bernoulli => Model::Bernoulli { p: self.p },
            ModelKind::RandomCluster => Model::RandomCluster {
                p: self.p,
                q: self.q,
                sweeps: self.sweeps,
                init: self.init.for_replicate(replicate),
            },
            ModelKind::Ust => Model::Ust,
            ModelKind::Even => Model::UniformEven,
            ModelKind::Odd => Model::UniformOdd,
        }
    }

    pub fn tag(&self) -> &'static str {
        self.model(0).tag()
    }

    /// `;`-separated parameter list for CSV output.
    pub fn params(&self) -> String {
        match self.kind {
            ModelKind::Bernoulli => format!("p={}", self.p),
            ModelKind::RandomCluster => format!(
                "p={};q={};sweeps={};init={}",
                self.p,
                self.q,
                self.sweeps,
                self.init.as_str()
            ),
            _ => "-".to_string(),
        }
    }
}

pub const EXPERIMENT_KEYS: &[&str] = &[
    "experiment",
    "model",
    "p",
    "q",
    "sweeps",
    "init",
    "sizes",
    "replicates",
    "seed",
    "band_fraction",
    "margin",
    "tenuous_n",
    "width_factor",
    "threads",
    "out",
];

/// Everything needed to run one experiment reproducibly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    pub points: Vec<ParamPoint>,
    /// Torus sides (E1-E6, E8) or band heights (E7); strictly increasing.
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// Band height as a fraction of the torus side.
    pub band_fraction: f64,
    /// Columns dropped on each side of the band; defaults to the band height.
    pub margin: Option<usize>,
    /// Level `n` of the exploration (E7).
    pub tenuous_n: usize,
    /// Exploration half-width over height (E7).
    pub width_factor: usize,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_key_values(&KeyValues::parse(text)?)
    }

    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        kv.check_keys(EXPERIMENT_KEYS)?;
        let id: ExperimentId = kv
            .parsed("experiment")?
            .ok_or_else(|| bad("experiment", "missing"))?;
        let default_model = match id {
            ExperimentId::E1 | ExperimentId::E7 | ExperimentId::E8 => ModelKind::Bernoulli,
            ExperimentId::E2 => ModelKind::RandomCluster,
            ExperimentId::E3 => ModelKind::Ust,
            ExperimentId::E4 => ModelKind::Odd,
            ExperimentId::E5 => ModelKind::Even,
            ExperimentId::E6 => ModelKind::Bernoulli,
        };
        let kinds: Vec<ModelKind> = kv.list("model")?.unwrap_or_else(|| vec![default_model]);
        let ps: Vec<PValue> = kv.list("p")?.unwrap_or_else(|| vec![PValue::Fixed(0.5)]);
        let qs: Vec<f64> = kv.list("q")?.unwrap_or_else(|| vec![1.0]);
        let sweeps: usize = kv.parsed("sweeps")?.unwrap_or(100);
        let init: InitPolicy = kv.parsed("init")?.unwrap_or(InitPolicy::Alternate);
        if kinds.is_empty() || ps.is_empty() || qs.is_empty() {
            return Err(bad("model", "empty list"));
        }
        if qs.iter().any(|&q| !(q > 0.0 && q.is_finite())) {
            return Err(bad("q", "every q must be positive"));
        }
        if sweeps == 0 {
            return Err(bad("sweeps", "must be at least 1"));
        }
        let mut points = Vec::new();
        for &kind in &kinds {
            match kind {
                ModelKind::Bernoulli => {
                    for &p in &ps {
                        match p {
                            PValue::Fixed(p) => points.push(ParamPoint {
                                kind,
                                p,
                                q: 1.0,
                                sweeps,
                                init,
                            }),
                            PValue::SelfDual => points.push(ParamPoint {
                                kind,
                                p: 0.5,
                                q: 1.0,
                                sweeps,
                                init,
                            }),
                        }
                    }
                }
                ModelKind::RandomCluster => {
                    for &p in &ps {
                        for &q in &qs {
                            let p = match p {
                                PValue::Fixed(p) => p,
                                PValue::SelfDual => p_sd(q),
                            };
                            points.push(ParamPoint {
                                kind,
                                p,
                                q,
                                sweeps,
                                init,
                            });
                        }
                    }
                }
                _ => points.push(ParamPoint {
                    kind,
                    p: 0.5,
                    q: 1.0,
                    sweeps,
                    init,
                }),
            }
        }
        for pt in &points {
            if !(pt.p > 0.0 && pt.p < 1.0) {
                return Err(bad("p", format!("p = {} must lie in (0, 1)", pt.p)));
            }
        }

        let sizes: Vec<usize> = kv.list("sizes")?.ok_or_else(|| bad("sizes", "missing"))?;
        if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("sizes", "must be a non-empty strictly increasing list"));
        }
        let replicates: usize = kv.parsed("replicates")?.unwrap_or(100);
        if replicates == 0 {
            return Err(bad("replicates", "must be at least 1"));
        }
        let band_fraction: f64 = kv.parsed("band_fraction")?.unwrap_or(0.25);
        if !(band_fraction > 0.0 && band_fraction <= 1.0) {
            return Err(bad("band_fraction", "must lie in (0, 1]"));
        }
        let tenuous_n: usize = kv.parsed("tenuous_n")?.unwrap_or(2);
        let width_factor: usize = kv.parsed("width_factor")?.unwrap_or(4);
        if tenuous_n == 0 || width_factor == 0 {
            return Err(bad("tenuous_n", "tenuous_n and width_factor must be positive"));
        }
        let spec = Self {
            id,
            points,
            sizes,
            replicates,
            seed: kv.parsed("seed")?.unwrap_or(1),
            band_fraction,
            margin: kv.parsed("margin")?,
            tenuous_n,
            width_factor,
            threads: kv.parsed("threads")?,
            out: kv.parsed("out")?,
        };
        for &size in &spec.sizes {
            spec.check_size(size)?;
        }
        Ok(spec)
    }

    /// Band height, first band row and margin for torus side `n`.
    pub fn band(&self, n: usize) -> (usize, usize, usize) {
        let h = ((n as f64 * self.band_fraction).round() as usize).clamp(1, n);
        let margin = self.margin.unwrap_or(h);
        (h, n - h, margin)
    }

    fn check_size(&self, n: usize) -> Result<()> {
        match self.id {
            ExperimentId::E7 => {
                if self.tenuous_n >= n {
                    return Err(bad("sizes", format!("band height {n} must exceed tenuous_n")));
                }
            }
            ExperimentId::E8 => {
                if n < 3 {
                    return Err(bad("sizes", "windows need side at least 3"));
                }
            }
            _ => {
                if n < 3 {
                    return Err(bad("sizes", "torus side must be at least 3"));
                }
                let (h, _, margin) = self.band(n);
                if n < 2 * margin + 2 {
                    return Err(bad(
                        "margin",
                        format!("margin {margin} leaves no band columns at size {n}"),
                    ));
                }
                if self.id == ExperimentId::E6 && (h < 4 || n - 2 * margin < 4) {
                    return Err(bad(
                        "sizes",
                        format!("size {n} gives a band too small to hold an inner box"),
                    ));
                }
                if self.points.iter().any(|p| p.kind == ModelKind::Odd) && n % 2 == 1 {
                    return Err(bad("sizes", "odd subgraphs need even torus sides"));
                }
            }
        }
        Ok(())
    }
}

pub const SAMPLE_KEYS: &[&str] = &[
    "model", "p", "q", "sweeps", "init", "region", "n", "width", "height", "boundary", "seed",
    "out",
];

/// Builds a [`SampleSpec`] from `model`, `p`, `q`, `sweeps`, `init`
/// (`open`/`closed`), the region (`region = torus 8`, or `n`, or `width`,
/// `height`, `boundary`) and `seed`.
pub fn sample_spec(kv: &KeyValues) -> Result<SampleSpec> {
    kv.check_keys(SAMPLE_KEYS)?;
    let kind: ModelKind = kv.parsed("model")?.ok_or_else(|| bad("model", "missing"))?;
    let q: f64 = kv.parsed("q")?.unwrap_or(1.0);
    let p = match kv.parsed::<PValue>("p")?.unwrap_or(PValue::Fixed(0.5)) {
        PValue::Fixed(p) => p,
        PValue::SelfDual if q > 0.0 => p_sd(q),
        PValue::SelfDual => return Err(bad("q", "must be positive")),
    };
    let init = match kv.parsed::<InitPolicy>("init")?.unwrap_or(InitPolicy::Open) {
        InitPolicy::Closed => InitPolicy::Closed,
        InitPolicy::Open => InitPolicy::Open,
        InitPolicy::Alternate => return Err(bad("init", "a single sample needs open or closed")),
    };
    let point = ParamPoint {
        kind,
        p,
        q,
        sweeps: kv.parsed("sweeps")?.unwrap_or(100),
        init,
    };
    let region = if let Some(r) = kv.get("region") {
        r.parse::<Region>().map_err(|e| bad("region", e.to_string()))?
    } else if let Some(n) = kv.parsed::<usize>("n")? {
        Region::torus(n).map_err(|e| bad("n", e.to_string()))?
    } else {
        let w: usize = kv.parsed("width")?.ok_or_else(|| bad("region", "missing"))?;
        let h: usize = kv.parsed("height")?.ok_or_else(|| bad("height", "missing"))?;
        let boundary = match kv.get("boundary").unwrap_or("free") {
            "free" => Boundary::Free,
            "wired" => Boundary::Wired,
            other => return Err(bad("boundary", format!("unknown boundary '{other}'"))),
        };
        Region::boxed(w, h, boundary).map_err(|e| bad("width", e.to_string()))?
    };
    let seed: u64 = kv.parsed("seed")?.unwrap_or(1);
    SampleSpec::new(point.model(0), region, seed).map_err(|e| bad("model", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_spec() {
        let text = "# coexistence\nexperiment = E2\nmodel = rc\np = sd\nq = 0.25, 4\n\
                    sweeps = 7\nsizes = 16,32\nreplicates = 10\nseed = 5 # trailing\n";
        let spec = ExperimentSpec::from_text(text).unwrap();
        assert_eq!(spec.id, ExperimentId::E2);
        assert_eq!(spec.points.len(), 2);
        assert!((spec.points[0].p - 1.0 / 3.0).abs() < 1e-12);
        assert!((spec.points[1].p - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(spec.points[1].sweeps, 7);
        assert_eq!(spec.band(16), (4, 12, 4));
    }

    #[test]
    fn rejects_unknown_and_bad_keys() {
        let err = ExperimentSpec::from_text("experiment = E1\nsizes = 16\ncolour = red\n")
            .unwrap_err();
        assert!(err.to_string().contains("colour"));
        let err = ExperimentSpec::from_text("experiment = E1\nsizes = 32,16\n").unwrap_err();
        assert!(err.to_string().contains("sizes"));
        let err = ExperimentSpec::from_text("experiment = E9\nsizes = 16\n").unwrap_err();
        assert!(err.to_string().contains("experiment"));
        let err =
            ExperimentSpec::from_text("experiment = E4\nsizes = 16, 17\n").unwrap_err();
        assert!(err.to_string().contains("sizes"));
        let err = ExperimentSpec::from_text("experiment = E1\nsizes = 16\np = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("p"));
    }

    #[test]
    fn sample_spec_keys() {
        let kv = KeyValues::parse("model = rc\np = sd\nq = 4\nregion = box 5 4 wired\nseed = 3")
            .unwrap();
        let spec = sample_spec(&kv).unwrap();
        assert_eq!(spec.region, Region::wired_box(5, 4).unwrap());
        assert_eq!(spec.seed, 3);
        let kv = KeyValues::parse("model = odd\nn = 5").unwrap();
        assert!(sample_spec(&kv).is_err());
    }
}
