//! Per-replicate statistic rows and their summaries.

use std::io::Write;

use crate::Result;

pub const ROW_HEADER: [&str; 8] = [
    "experiment",
    "model",
    "params",
    "size",
    "replicate",
    "seed",
    "statistic",
    "value",
];

pub const SUMMARY_HEADER: [&str; 9] = [
    "experiment",
    "model",
    "params",
    "size",
    "statistic",
    "count",
    "mean",
    "ci_low",
    "ci_high",
];

/// One value of one statistic on one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub experiment: String,
    pub model: String,
    pub params: String,
    pub size: usize,
    pub replicate: usize,
    pub seed: u64,
    pub statistic: &'static str,
    pub value: f64,
    /// Position of the parameter point in the spec; orders rows, not written.
    pub point: usize,
}

impl StatRow {
    fn sort_key(&self) -> (usize, usize, usize) {
        (self.point, self.size, self.replicate)
    }
}

/// Sorts rows by parameter point, size and replicate. The sort is stable, so
/// statistics keep their per-replicate order.
pub fn sort_rows(rows: &mut [StatRow]) {
    rows.sort_by_key(StatRow::sort_key);
}

pub fn write_rows<W: Write>(rows: &[StatRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ROW_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.as_str(),
            &r.model,
            &r.params,
            &r.size.to_string(),
            &r.replicate.to_string(),
            &r.seed.to_string(),
            r.statistic,
            &r.value.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean and 95% interval of one statistic at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub model: String,
    pub params: String,
    pub point: usize,
    pub size: usize,
    pub statistic: &'static str,
    pub count: usize,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SummaryRow {
    pub fn overlaps(&self, other: &SummaryRow) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

const Z95: f64 = 1.959_963_984_540_054;

/// Normal-approximation 95% interval.
///
/// For 0/1 data this is the Wald binomial interval widened by the continuity
/// correction `1 / (2n)` and clipped to `[0, 1]`; otherwise it is
/// `mean +- z * s / sqrt(n)` with the sample standard deviation `s`.
pub fn confidence_interval(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.iter().all(|&v| v == 0.0 || v == 1.0) {
        let half = Z95 * (mean * (1.0 - mean) / n).sqrt() + 0.5 / n;
        return (mean, (mean - half).max(0.0), (mean + half).min(1.0));
    }
    if values.len() < 2 {
        return (mean, mean, mean);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = Z95 * (var / n).sqrt();
    (mean, mean - half, mean + half)
}

/// Groups sorted rows by (parameter point, size, statistic), keeping the
/// order of first appearance.
pub fn summarize(rows: &[StatRow]) -> Vec<SummaryRow> {
    let mut groups: Vec<(SummaryRow, Vec<f64>)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for r in rows {
        let key = (r.point, r.size, r.statistic);
        let slot = *index.entry(key).or_insert_with(|| {
            groups.push((
                SummaryRow {
                    experiment: r.experiment.clone(),
                    model: r.model.clone(),
                    params: r.params.clone(),
                    point: r.point,
                    size: r.size,
                    statistic: r.statistic,
                    count: 0,
                    mean: 0.0,
                    ci_low: 0.0,
                    ci_high: 0.0,
                },
                Vec::new(),
            ));
            groups.len() - 1
        });
        groups[slot].1.push(r.value);
    }
    groups
        .into_iter()
        .map(|(mut s, values)| {
            let (mean, lo, hi) = confidence_interval(&values);
            s.count = values.len();
            s.mean = mean;
            s.ci_low = lo;
            s.ci_high = hi;
            s
        })
        .collect()
}

pub fn write_summary<W: Write>(summary: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in summary {
        w.write_record([
            s.experiment.as_str(),
            &s.model,
            &s.params,
            &s.size.to_string(),
            s.statistic,
            &s.count.to_string(),
            &s.mean.to_string(),
            &s.ci_low.to_string(),
            &s.ci_high.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
