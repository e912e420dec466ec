use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hypermin_core::bounds::EdgeCount;
use hypermin_core::sampler::sample_hypergraph;
use hypermin_core::{Algorithm, BoundsReport, LogReal, Margins, ModelParams, MultiHypergraph};

use crate::config::{parse_count, ConfigFile, Resolver};
use crate::error::{CliError, CliResult};
use crate::sweep::{run_sweep, write_records, Format, Grid, SweepConfig};
use crate::verify::run_verify;

#[derive(Debug, Parser)]
#[command(name = "hypermin", version, about = "Minimization of random multi-hypergraphs B(n, m, p)")]
pub struct Cli {
    /// `key = value` file; explicit flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw B(n, m, p) and write it in the hypergraph text format.
    Sample(SampleArgs),
    /// Minimize a hypergraph file.
    Minimize(MinimizeArgs),
    /// Analytic report for one (n, p, m) point.
    Bounds(BoundsArgs),
    /// Monte Carlo sweep over an m or alpha grid.
    Sweep(SweepArgs),
    /// Run the oracle verification suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of edges, e.g. 1000 or 1e5.
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    /// Input hypergraph file (default: stdin).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// naive, sorted or stream.
    #[arg(long)]
    pub algo: Option<Algorithm>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of trials; accepts 1e30 or 2^100.
    #[arg(long, conflicts_with = "alpha")]
    pub m: Option<String>,
    /// m = (1-p)^(-alpha n).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub epsp: Option<f64>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// m grid: start:stop:count (log-spaced) or a comma list.
    #[arg(long, conflicts_with = "alpha")]
    pub m: Option<String>,
    /// alpha grid: start:stop:count (linear) or a comma list.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub replicates: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub epsp: Option<f64>,
    /// Write 0 for wall_time_ms so that repeated runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_REPLICATES: u64 = 100;

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `1e30`, `123`, or `b^k` (e.g. `2^100`).
pub fn parse_edge_count(text: &str) -> CliResult<EdgeCount> {
    let bad = || CliError::Usage(format!("{text:?} is not a valid m (use e.g. 1000, 1e30 or 2^100)"));
    let ln = match text.split_once('^') {
        Some((base, exp)) => {
            let base: f64 = base.trim().parse().map_err(|_| bad())?;
            let exp: f64 = exp.trim().parse().map_err(|_| bad())?;
            if !(base > 0.0) {
                return Err(bad());
            }
            exp * base.ln()
        }
        None => text.trim().parse::<f64>().map_err(|_| bad())?.ln(),
    };
    EdgeCount::from_ln(ln).map_err(|_| bad())
}

fn margins(r: &mut Resolver, eps: Option<f64>, epsp: Option<f64>) -> CliResult<Margins> {
    let d = Margins::default();
    let margins =
        Margins { eps: r.with_default("eps", eps, d.eps)?, eps_prime: r.with_default("epsp", epsp, d.eps_prime)? };
    if !(margins.eps > 0.0 && margins.eps_prime > 0.0) {
        return Err(CliError::Usage("eps and epsp must be positive".into()));
    }
    Ok(margins)
}

fn sample(args: SampleArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let n = r.required("n", args.n)?;
    let m = parse_count(&r.raw("m", args.m).ok_or_else(|| CliError::Usage("missing required setting --m".into()))?)
        .map_err(CliError::Usage)?;
    let p = r.required("p", args.p)?;
    let seed = r.with_default("seed", args.seed, DEFAULT_SEED)?;
    let out = r.optional::<String>("out", args.out.map(|p| p.display().to_string()))?;
    let h = sample_hypergraph(&ModelParams::new(n, m, p, seed)?)?;
    let mut w = output(out.as_deref().map(Path::new))?;
    h.write_text(&mut w)?;
    w.flush()?;
    Ok(())
}

fn minimize(args: MinimizeArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let input = r.optional::<String>("in", args.input.map(|p| p.display().to_string()))?;
    let algo = r.with_default("algo", args.algo, Algorithm::default())?;
    let out = r.optional::<String>("out", args.out.map(|p| p.display().to_string()))?;
    let h = match &input {
        Some(path) => {
            let f = File::open(path).map_err(|e| CliError::Usage(format!("cannot open {path}: {e}")))?;
            MultiHypergraph::read_text(BufReader::new(f))?
        }
        None => MultiHypergraph::read_text(io::stdin().lock())?,
    };
    let start = Instant::now();
    let min = algo.run(&h);
    let elapsed = start.elapsed();
    let mut w = output(out.as_deref().map(Path::new))?;
    min.to_hypergraph().write_text(&mut w)?;
    w.flush()?;
    eprintln!(
        "m={} distinct={} min={} algo={algo} wall_ms={:.3}",
        h.len(),
        h.count_distinct(),
        min.len(),
        elapsed.as_secs_f64() * 1e3
    );
    Ok(())
}

fn show(v: LogReal) -> String {
    if v.is_zero() {
        "0".into()
    } else if v.log10_magnitude().abs() < 15.0 {
        format!("{:.6}", v.to_f64())
    } else {
        v.to_string()
    }
}

fn bounds(args: BoundsArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let n: u64 = r.required("n", args.n)?;
    let p: f64 = r.required("p", args.p)?;
    let m_text = r.raw("m", args.m);
    let alpha = if m_text.is_none() { r.optional("alpha", args.alpha)? } else { None };
    let margins = margins(&mut r, args.eps, args.epsp)?;
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let m = match (m_text, alpha) {
        (Some(text), _) => parse_edge_count(&text)?,
        (None, Some(a)) => EdgeCount::from_alpha(n, p, a)?,
        (None, None) => return Err(CliError::Usage("one of --m or --alpha is required".into())),
    };
    let report = BoundsReport::compute(n, p, m, margins)?;
    let mut w = output(None)?;
    if args.json {
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
    } else {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "undefined".into());
        writeln!(w, "n = {n}, p = {p}, m = {}", show(m.value()))?;
        writeln!(w, "alpha = {}, i* = {}", opt(report.alpha), opt(report.i_star))?;
        match report.regime {
            Some(regime) => writeln!(
                w,
                "regime = {regime}{}{} (eps = {}, eps' = {}), magnitude = {}",
                if report.near_transition { ", near transition" } else { "" },
                if report.heuristic { ", heuristic" } else { "" },
                margins.eps,
                margins.eps_prime,
                report.regime_magnitude.map(show).unwrap_or_else(|| "not asserted".into())
            )?,
            None => writeln!(w, "regime = degenerate (|min| = 1 deterministically)")?,
        }
        writeln!(w, "E|min| exact = {}", show(report.exact))?;
        writeln!(
            w,
            "sandwich: lower = {}, upper_shifted = {}, upper_scaled = {}",
            show(report.sandwich.lower),
            show(report.sandwich.upper_shifted),
            show(report.sandwich.upper_scaled)
        )?;
        writeln!(w, "E||H|| distinct = {}", show(report.distinct_exact))?;
        writeln!(w, "maximum at m* = {}, value ~ {}", show(report.m_star), show(report.max_value_estimate))?;
    }
    w.flush()?;
    Ok(())
}

fn sweep(args: SweepArgs, file: &ConfigFile, threads: Option<usize>) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let n = r.required("n", args.n)?;
    let p = r.required("p", args.p)?;
    let grid = match r.raw("m", args.m) {
        Some(text) => Grid::parse_m(&text)?,
        None => match r.raw("alpha", args.alpha) {
            Some(text) => Grid::parse_alpha(&text)?,
            None => return Err(CliError::Usage("one of --m or --alpha is required".into())),
        },
    };
    let replicates = r.with_default("replicates", args.replicates, DEFAULT_REPLICATES)?;
    let seed = r.with_default("seed", args.seed, DEFAULT_SEED)?;
    let format = r.with_default("format", args.format, Format::Csv)?;
    let out = r.optional::<String>("out", args.out.map(|p| p.display().to_string()))?;
    let margins = margins(&mut r, args.eps, args.epsp)?;
    let timing = r.with_default("timing", args.no_timing.then_some(false), true)?;
    let config = SweepConfig { n, p, grid, replicates, seed, margins, timing };
    let records = run_sweep(&config)?;

    let mut header: Vec<(String, String, String)> =
        r.entries().iter().map(|(k, v, s)| (k.to_string(), v.clone(), s.to_string())).collect();
    if let Some(t) = threads {
        header.push(("threads".into(), t.to_string(), "resolved".into()));
    }
    header.push(("generator_version".into(), hypermin_core::sampler::GENERATOR_VERSION.to_string(), "build".into()));
    let flagged = records.iter().filter(|r| r.band_violation).count();
    if flagged > 0 {
        eprintln!("warning: {flagged} grid points fall outside the analytic band by more than 3 standard errors");
    }
    write_records(output(out.as_deref().map(Path::new))?, format, &header, &records)
}

fn verify() -> CliResult<()> {
    let report = run_verify();
    print!("{}", report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification("one or more verification families failed".into()))
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let threads = Resolver::new(&file).optional::<usize>("threads", cli.threads)?;
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {t} threads: {e}")))?;
    }
    match cli.command {
        Command::Sample(a) => sample(a, &file),
        Command::Minimize(a) => minimize(a, &file),
        Command::Bounds(a) => bounds(a, &file),
        Command::Sweep(a) => sweep(a, &file, threads),
        Command::Verify => verify(),
    }
}
