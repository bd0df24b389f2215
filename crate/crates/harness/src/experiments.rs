//! The experiment catalog.
//!
//! E1-E6 sample a model on the torus of side `n` and look at the band of the
//! top `h = round(n * band_fraction)` rows with the wrap edges removed,
//! further cropped by `margin` columns on each side (default `h`). With the
//! default fraction the window is `n/2` wide and `n/4` high.
//!
//! | id | model | per-sample statistics |
//! |----|-------|-----------------------|
//! | E1 | Bernoulli | `one_arm`: the cluster of the bottom-centre vertex reaches the left, right or top side |
//! | E2 | random cluster | `primal_crossing`, `dual_crossing` (left-right, dual band), `coexistence` (both) |
//! | E3 | UST | `largest_fraction`, `crossing` |
//! | E4 | uniform odd | `crossing`, `largest_fraction` |
//! | E5 | uniform even | `crossing`, `largest_fraction` |
//! | E6 | any | `primal_arms`, `dual_arms`, `arm_violations` around the central third |
//! | E7 | Bernoulli on a `(2 * width_factor * H + 1) x (H + 1)` box | halting index, halt reason indicators, `halt_gt_j` for `j = 1..=10` |
//! | E8 | any, on the `n x n` box obtained by cutting the torus | `trifurcations`, `trifurcation_density`, `bound_violations` |
//!
//! The decaying statistics of E1-E4 are finite-volume stand-ins for the
//! absence of infinite half-plane clusters (for E2, of coexisting primal and
//! dual ones); E5 is a control whose crossing frequency should not decay.
//! Every band window is also checked for the exclusivity of primal
//! left-right and dual top-bottom crossings.

use rayon::prelude::*;

use planeperc_core::clusters::{
    arms, crossing, label_open, largest_cluster_fraction, tenuous_check, trifurcations, Direction,
    InnerBox, Sides, TenuousStatus,
};
use planeperc_core::duality::{crossing_duality_check, dual};
use planeperc_core::exploration::{explore, HaltReason};
use planeperc_core::lattice::{BondConfig, Region, Vertex};
use planeperc_core::samplers::{rng_from_seed, Sampler};

use crate::config::{ExperimentId, ExperimentSpec, ParamPoint};
use crate::seeds::derive_seed;
use crate::stats::{sort_rows, summarize, StatRow, SummaryRow};
use crate::{with_threads, Result};

/// Tail thresholds `j` reported by E7.
pub const HALT_TAIL_MAX: usize = 10;

const HALT_GT: [&str; HALT_TAIL_MAX] = [
    "halt_gt_1",
    "halt_gt_2",
    "halt_gt_3",
    "halt_gt_4",
    "halt_gt_5",
    "halt_gt_6",
    "halt_gt_7",
    "halt_gt_8",
    "halt_gt_9",
    "halt_gt_10",
];

/// Counts of failed per-sample invariants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Violations {
    pub crossing_duality: u64,
    pub arm_alternation: u64,
    pub trifurcation_bound: u64,
    /// Exploration halts that disagree with the tenuous-cluster check.
    pub exploration: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.crossing_duality + self.arm_alternation + self.trifurcation_bound + self.exploration
    }

    fn add(&mut self, o: &Violations) {
        self.crossing_duality += o.crossing_duality;
        self.arm_alternation += o.arm_alternation;
        self.trifurcation_bound += o.trifurcation_bound;
        self.exploration += o.exploration;
    }

    /// One-line description of the non-zero counts.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = [
            ("crossing duality", self.crossing_duality),
            ("arm alternation", self.arm_alternation),
            ("trifurcation bound", self.trifurcation_bound),
            ("exploration halt", self.exploration),
        ]
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(name, c)| format!("{name} failed in {c} samples"))
        .collect();
        parts.join("; ")
    }
}

/// One step (or the final halt) of an E7 exploration trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub size: usize,
    pub replicate: usize,
    pub step: usize,
    pub m_minus: i64,
    pub m_plus: i64,
    pub cluster_size: usize,
    /// Set on the last row of a trace only.
    pub halt_reason: Option<&'static str>,
}

pub const TRACE_HEADER: [&str; 7] = [
    "size",
    "replicate",
    "step",
    "m_minus",
    "m_plus",
    "cluster_size",
    "halt_reason",
];

pub fn write_traces<W: std::io::Write>(traces: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for t in traces {
        w.write_record([
            t.size.to_string(),
            t.replicate.to_string(),
            t.step.to_string(),
            t.m_minus.to_string(),
            t.m_plus.to_string(),
            t.cluster_size.to_string(),
            t.halt_reason.unwrap_or("").to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<StatRow>,
    pub summary: Vec<SummaryRow>,
    pub traces: Vec<TraceRow>,
    pub violations: Violations,
}

impl RunOutput {
    /// Summary entry for `statistic` at `size` of parameter point `point`.
    pub fn summary_for(&self, point: usize, size: usize, statistic: &str) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|s| s.point == point && s.size == size && s.statistic == statistic)
    }
}

#[derive(Default)]
struct ReplicateOut {
    stats: Vec<(&'static str, f64)>,
    violations: Violations,
    trace: Vec<TraceRow>,
}

/// Runs every (parameter point, size, replicate) of `spec` and returns the
/// sorted rows with their summary. Replicates run in parallel; the output
/// does not depend on the number of threads.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutput> {
    with_threads(spec.threads, || run_inner(spec))?
}

fn run_inner(spec: &ExperimentSpec) -> Result<RunOutput> {
    let mut rows = Vec::new();
    let mut traces = Vec::new();
    let mut violations = Violations::default();
    for (pi, point) in spec.points.iter().enumerate() {
        for (si, &size) in spec.sizes.iter().enumerate() {
            let stream = (pi * spec.sizes.len() + si) as u64;
            let outs: Vec<(u64, ReplicateOut)> = (0..spec.replicates)
                .into_par_iter()
                .map(|rep| {
                    let seed = derive_seed(spec.seed, rep as u64, stream);
                    replicate(spec, point, size, rep, seed).map(|o| (seed, o))
                })
                .collect::<Result<_>>()?;
            for (rep, (seed, out)) in outs.into_iter().enumerate() {
                violations.add(&out.violations);
                traces.extend(out.trace);
                rows.extend(out.stats.into_iter().map(|(statistic, value)| StatRow {
                    experiment: spec.id.to_string(),
                    model: point.tag().to_string(),
                    params: point.params(),
                    size,
                    replicate: rep,
                    seed,
                    statistic,
                    value,
                    point: pi,
                }));
            }
        }
    }
    sort_rows(&mut rows);
    let summary = summarize(&rows);
    Ok(RunOutput {
        rows,
        summary,
        traces,
        violations,
    })
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// The band window of a torus configuration.
fn band_window(spec: &ExperimentSpec, config: &BondConfig) -> Result<BondConfig> {
    let n = config.region().width();
    let (h, y0, margin) = spec.band(n);
    Ok(config
        .halfplane_restrict(y0)?
        .crop(margin, 0, n - 2 * margin, h)?)
}

fn replicate(
    spec: &ExperimentSpec,
    point: &ParamPoint,
    size: usize,
    rep: usize,
    seed: u64,
) -> Result<ReplicateOut> {
    let mut rng = rng_from_seed(seed);
    let model = point.model(rep);
    let mut out = ReplicateOut::default();

    if spec.id == ExperimentId::E7 {
        let h = size;
        let half = spec.width_factor * h;
        let region = Region::free_box(2 * half + 1, h + 1)?;
        let config = Sampler::new(model, region)?.sample(&mut rng);
        let trace = explore(&config, spec.tenuous_n)?;
        let status = tenuous_check(&config, spec.tenuous_n, trace.target)?;
        let consistent = match trace.halt_reason {
            HaltReason::CutOff => status == TenuousStatus::NotApplicable,
            HaltReason::InfiniteProxy => status != TenuousStatus::NotApplicable,
            HaltReason::WindowExhausted => true,
        };
        out.violations.exploration += u64::from(!consistent);
        out.stats.push(("halt_index", trace.halt_index as f64));
        for reason in [
            HaltReason::CutOff,
            HaltReason::InfiniteProxy,
            HaltReason::WindowExhausted,
        ] {
            out.stats
                .push((reason.as_str(), indicator(trace.halt_reason == reason)));
        }
        if trace.halt_reason != HaltReason::WindowExhausted {
            for (j, name) in HALT_GT.iter().enumerate() {
                out.stats.push((name, indicator(trace.halt_index > j + 1)));
            }
        }
        let last = trace.steps.len() - 1;
        out.trace = trace
            .steps
            .iter()
            .map(|s| TraceRow {
                size,
                replicate: rep,
                step: s.index,
                m_minus: s.m_minus,
                m_plus: s.m_plus,
                cluster_size: s.cluster_size,
                halt_reason: (s.index == last).then(|| trace.halt_reason.as_str()),
            })
            .collect();
        return Ok(out);
    }

    let torus = Region::torus(size)?;
    let config = Sampler::new(model, torus)?.sample(&mut rng);

    if spec.id == ExperimentId::E8 {
        let window = config.halfplane_restrict(0)?;
        let report = trifurcations(&window);
        let bad = report.bound_violations();
        out.violations.trifurcation_bound += bad as u64;
        let t = report.total();
        out.stats.push(("trifurcations", t as f64));
        out.stats.push((
            "trifurcation_density",
            t as f64 / window.region().vertex_count() as f64,
        ));
        out.stats.push(("bound_violations", bad as f64));
        return Ok(out);
    }

    let window = band_window(spec, &config)?;
    out.violations.crossing_duality += u64::from(!crossing_duality_check(&window)?);
    let (w, h) = (window.region().width(), window.region().height());
    match spec.id {
        ExperimentId::E1 => {
            let lab = label_open(&window);
            let origin = window.region().vertex_index(Vertex::new(w / 2, 0));
            let reach = Sides::LEFT | Sides::RIGHT | Sides::TOP;
            let hit = lab.sides(lab.label(origin)).intersects(reach);
            out.stats.push(("one_arm", indicator(hit)));
        }
        ExperimentId::E2 => {
            let dual_window = band_window(spec, &dual(&config)?.geometric())?;
            let primal = crossing(&window, Direction::LeftRight)?;
            let dual_cross = crossing(&dual_window, Direction::LeftRight)?;
            out.stats.push(("primal_crossing", indicator(primal)));
            out.stats.push(("dual_crossing", indicator(dual_cross)));
            out.stats
                .push(("coexistence", indicator(primal && dual_cross)));
        }
        ExperimentId::E3 => {
            out.stats
                .push(("largest_fraction", largest_cluster_fraction(&window).to_f64()));
            out.stats.push((
                "crossing",
                indicator(crossing(&window, Direction::LeftRight)?),
            ));
        }
        ExperimentId::E4 | ExperimentId::E5 => {
            out.stats.push((
                "crossing",
                indicator(crossing(&window, Direction::LeftRight)?),
            ));
            out.stats
                .push(("largest_fraction", largest_cluster_fraction(&window).to_f64()));
        }
        ExperimentId::E6 => {
            let (mx, my) = ((w / 3).max(1), (h / 3).max(1));
            let inner = InnerBox::new(mx, my, w - 1 - mx, h - 1 - my);
            let seq = arms(&window, inner)?;
            let bad = seq.violations();
            out.violations.arm_alternation += u64::from(bad > 0);
            out.stats.push(("primal_arms", seq.primal_arms() as f64));
            out.stats.push(("dual_arms", seq.dual_arms() as f64));
            out.stats.push(("arm_violations", bad as f64));
        }
        ExperimentId::E7 | ExperimentId::E8 => unreachable!("handled above"),
    }
    Ok(out)
}
