//! Monte Carlo sweeps over a grid of `m` (or `α`) values.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use hypermin_core::bounds::{expected_min_exact, expected_min_sandwich, regime_classify};
use hypermin_core::minimize::minimize_sorted;
use hypermin_core::sampler::{derive_seed, sample_hypergraph};
use hypermin_core::{DerivedParams, EdgeCount, LogReal, Margins, ModelParams, Regime};

use crate::error::{CliError, CliResult};

/// The swept axis. `m` grids are log-spaced, `α` grids linear.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    M(Vec<EdgeCount>),
    Alpha(Vec<f64>),
}

impl Grid {
    /// `start:stop:count` (log-spaced) or a comma-separated list of values `>= 1`.
    pub fn parse_m(text: &str) -> CliResult<Self> {
        let ln_values = match parse_range(text)? {
            Some((start, stop, count)) => {
                check_m(start)?;
                check_m(stop)?;
                spaced(start.ln(), stop.ln(), count)
            }
            None => parse_list(text)?.into_iter().map(|v| check_m(v).map(|_| v.ln())).collect::<CliResult<_>>()?,
        };
        let counts = ln_values.into_iter().map(EdgeCount::from_ln).collect::<Result<_, _>>()?;
        Ok(Grid::M(counts))
    }

    /// `start:stop:count` (linear) or a comma-separated list of values `>= 0`.
    pub fn parse_alpha(text: &str) -> CliResult<Self> {
        let values = match parse_range(text)? {
            Some((start, stop, count)) => spaced(start, stop, count),
            None => parse_list(text)?,
        };
        if let Some(bad) = values.iter().find(|a| !(**a >= 0.0) || a.is_infinite()) {
            return Err(CliError::Usage(format!("alpha must be finite and >= 0, got {bad}")));
        }
        Ok(Grid::Alpha(values))
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::M(v) => v.len(),
            Grid::Alpha(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_m(v: f64) -> CliResult<()> {
    if !(v >= 1.0) || v.is_infinite() {
        return Err(CliError::Usage(format!("m must be finite and >= 1, got {v}")));
    }
    Ok(())
}

fn parse_number(text: &str) -> CliResult<f64> {
    text.trim().parse().map_err(|_| CliError::Usage(format!("{text:?} is not a number")))
}

fn parse_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',').map(parse_number).collect()
}

fn parse_range(text: &str) -> CliResult<Option<(f64, f64, usize)>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => Ok(None),
        [start, stop, count] => {
            let count: usize =
                count.trim().parse().map_err(|_| CliError::Usage(format!("grid count {count:?} is not an integer")))?;
            if count == 0 {
                return Err(CliError::Usage("grid count must be positive".into()));
            }
            Ok(Some((parse_number(start)?, parse_number(stop)?, count)))
        }
        _ => Err(CliError::Usage(format!("grid {text:?} must be start:stop:count or a comma list"))),
    }
}

fn spaced(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count).map(|j| start + (stop - start) * j as f64 / (count - 1) as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: u64,
    pub p: f64,
    pub grid: Grid,
    pub replicates: u64,
    pub seed: u64,
    pub margins: Margins,
    /// Record wall time per point; off makes the output fully deterministic.
    pub timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.n == 0 {
            return Err(CliError::Usage("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(CliError::Usage(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if matches!(self.grid, Grid::Alpha(_)) && !(self.p > 0.0 && self.p < 1.0) {
            return Err(CliError::Usage("an alpha grid needs 0 < p < 1".into()));
        }
        if self.replicates == 0 {
            return Err(CliError::Usage("replicates must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(CliError::Usage("the grid is empty".into()));
        }
        if !(self.margins.eps > 0.0 && self.margins.eps_prime > 0.0) {
            return Err(CliError::Usage("eps and epsp must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticColumns {
    pub lower: LogReal,
    pub exact: LogReal,
    pub upper: LogReal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub grid_index: usize,
    pub n: u64,
    pub p: f64,
    pub alpha: Option<f64>,
    pub m: LogReal,
    /// Integer `m` used for sampling, when sampling was feasible.
    pub m_sampled: Option<u64>,
    /// Seed of this grid point; replicate `r` uses `derive_seed(seed, [r])`.
    pub seed: u64,
    pub replicates: u64,
    pub sampled: bool,
    pub empirical_mean_min: Option<f64>,
    pub empirical_stderr: Option<f64>,
    pub analytic: AnalyticColumns,
    pub regime: Option<Regime>,
    pub near_transition: bool,
    /// Empirical mean outside `[lower - 3·stderr, upper + 3·stderr]`, with the
    /// bounds taken at `m_sampled` rather than at the nominal `m`.
    pub band_violation: bool,
    pub wall_time_ms: f64,
}

pub const CSV_COLUMNS: &[&str] = &[
    "grid_index",
    "n",
    "p",
    "alpha",
    "m_log10",
    "m_sampled",
    "seed",
    "replicates",
    "sampled",
    "empirical_mean_min",
    "empirical_stderr",
    "analytic_lower_log10",
    "analytic_exact_log10",
    "analytic_upper_log10",
    "regime",
    "near_transition",
    "band_violation",
    "wall_time_ms",
];

impl SweepRecord {
    fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.grid_index.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            opt(self.alpha),
            self.m.log10_magnitude().to_string(),
            self.m_sampled.map(|v| v.to_string()).unwrap_or_default(),
            self.seed.to_string(),
            self.replicates.to_string(),
            self.sampled.to_string(),
            opt(self.empirical_mean_min),
            opt(self.empirical_stderr),
            self.analytic.lower.log10_magnitude().to_string(),
            self.analytic.exact.log10_magnitude().to_string(),
            self.analytic.upper.log10_magnitude().to_string(),
            self.regime.map(|r| r.to_string()).unwrap_or_default(),
            self.near_transition.to_string(),
            self.band_violation.to_string(),
            self.wall_time_ms.to_string(),
        ]
    }
}

fn run_point(config: &SweepConfig, grid_index: usize, m: EdgeCount) -> CliResult<SweepRecord> {
    let start = Instant::now();
    let (n, p) = (config.n, config.p);
    let sandwich = expected_min_sandwich(n, p, m)?;
    let analytic =
        AnalyticColumns { lower: sandwich.lower, exact: expected_min_exact(n, p, m)?, upper: sandwich.upper() };
    let derived = (p > 0.0 && p < 1.0).then(|| DerivedParams::new(n, p, m)).transpose()?;
    let class = derived.map(|d| regime_classify(&d, config.margins));
    let seed = derive_seed(config.seed, &[grid_index as u64]);

    let m_sampled = m.to_integer().filter(|&v| usize::try_from(n).is_ok_and(|n| v <= ModelParams::max_edges(n)));
    let mut record = SweepRecord {
        grid_index,
        n,
        p,
        alpha: derived.map(|d| d.alpha),
        m: m.value(),
        m_sampled,
        seed,
        replicates: config.replicates,
        sampled: m_sampled.is_some(),
        empirical_mean_min: None,
        empirical_stderr: None,
        analytic,
        regime: class.map(|c| c.regime),
        near_transition: class.is_some_and(|c| c.near_transition),
        band_violation: false,
        wall_time_ms: 0.0,
    };
    if let Some(mm) = m_sampled {
        let sizes = (0..config.replicates)
            .into_par_iter()
            .map(|r| {
                let params = ModelParams::new(n as usize, mm, p, derive_seed(seed, &[r]))?;
                Ok(minimize_sorted(&sample_hypergraph(&params)?).len() as f64)
            })
            .collect::<hypermin_core::Result<Vec<f64>>>()?;
        let (mean, stderr) = mean_and_stderr(&sizes);
        let band = expected_min_sandwich(n, p, EdgeCount::new(mm)?)?;
        let lower = band.lower.to_f64() * (1.0 - 1e-9) - 3.0 * stderr;
        let upper = band.upper().to_f64() * (1.0 + 1e-9) + 3.0 * stderr;
        record.empirical_mean_min = Some(mean);
        record.empirical_stderr = Some(stderr);
        record.band_violation = !(lower <= mean && mean <= upper);
    }
    if config.timing {
        record.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    Ok(record)
}

/// Sequential sums in replicate order, so the result is independent of scheduling.
fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// One record per grid point, in grid order.
pub fn run_sweep(config: &SweepConfig) -> CliResult<Vec<SweepRecord>> {
    config.validate()?;
    let points: Vec<EdgeCount> = match &config.grid {
        Grid::M(ms) => ms.clone(),
        Grid::Alpha(alphas) => {
            alphas.iter().map(|&a| EdgeCount::from_alpha(config.n, config.p, a)).collect::<Result<_, _>>()?
        }
    };
    points.into_par_iter().enumerate().map(|(i, m)| run_point(config, i, m)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format {other:?} (expected csv or jsonl)")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        })
    }
}

/// Writes the resolved configuration as a header, then the records. CSV
/// headers are `# key=value (source)` comment lines; JSON-lines output starts
/// with one `{"config": {...}}` object.
pub fn write_records<W: Write>(
    mut out: W,
    format: Format,
    header: &[(String, String, String)],
    records: &[SweepRecord],
) -> CliResult<()> {
    match format {
        Format::Csv => {
            for (key, value, source) in header {
                writeln!(out, "# {key}={value} ({source})")?;
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let config: serde_json::Map<String, serde_json::Value> =
                header.iter().map(|(k, v, s)| (k.clone(), serde_json::json!({ "value": v, "source": s }))).collect();
            serde_json::to_writer(&mut out, &serde_json::json!({ "config": config }))?;
            writeln!(out)?;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
