// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::Context;
use clap::{Args, ValueEnum};
use eda_schema::analysis::{
    baseline_report, classify_operating_point, parameter_correlation, scpr, sweep_manifest,
    BaselineMetric, CorrelationSample, DatasetInstance, Pdk, Stat, DEFAULT_PAIRS,
};
use eda_schema::store::read_dataset;
use eda_schema::Stage;

use crate::config::RunConfig;
use crate::exit::{say, usage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, env = "EDA_SCHEMA_ROOT")]
    pub dataset: PathBuf,
    /// Comma-separated `BASE-FINAL` stage pairs, e.g. `FP-DR,GP-DR`.
    #[arg(long)]
    pub pairs: Option<String>,
    /// `all`, or a comma-separated list of metric names.
    #[arg(long, default_value = "all")]
    pub metrics: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, env = "EDA_SCHEMA_ROOT")]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// ns.
    #[arg(long, allow_negative_numbers = true)]
    pub worst_slack: f64,
    /// ns.
    #[arg(long, allow_negative_numbers = true)]
    pub clock_period: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Barely-pass clock period, ns.
    #[arg(long)]
    pub bp: f64,
    /// Barely-fail clock period, ns.
    #[arg(long)]
    pub bf: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Map `f` over `items` on up to `jobs` threads, keeping input order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: NonZeroUsize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let n = items.len();
    let workers = jobs.get().min(n.max(1));
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

fn load_dataset(root: &Path, jobs: NonZeroUsize) -> anyhow::Result<Vec<DatasetInstance>> {
    let bundles = read_dataset(root)?;
    if bundles.is_empty() {
        return Err(usage(format!("no instances under {}", root.display())));
    }
    par_map(&bundles, jobs, |b| {
        b.load_all().with_context(|| format!("loading {}", b.id()))
    })
    .into_iter()
    .collect()
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => say(text),
    }
}

pub fn parse_pairs(s: &str) -> anyhow::Result<Vec<(Stage, Stage)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once('-')
                .ok_or_else(|| usage(format!("stage pair `{p}` is not BASE-FINAL")))?;
            let stage =
                |x: &str| Stage::parse(x).ok_or_else(|| usage(format!("unknown stage `{x}`")));
            let (a, b) = (stage(a)?, stage(b)?);
            if a > b {
                return Err(usage(format!("stage pair `{p}` runs backwards")));
            }
            Ok((a, b))
        })
        .collect()
}

pub fn parse_metrics(s: &str) -> anyhow::Result<Vec<BaselineMetric>> {
    if s == "all" {
        return Ok(BaselineMetric::ALL.to_vec());
    }
    s.split(',')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(|m| {
            BaselineMetric::ALL
                .into_iter()
                .find(|x| x.as_str() == m)
                .ok_or_else(|| usage(format!("unknown metric `{m}`")))
        })
        .collect()
}

pub fn run_baseline(
    args: &BaselineArgs,
    cfg: &RunConfig,
    jobs: NonZeroUsize,
) -> anyhow::Result<()> {
    let pairs = match &args.pairs {
        Some(p) => parse_pairs(p)?,
        None => DEFAULT_PAIRS.to_vec(),
    };
    if pairs.is_empty() {
        return Err(usage("--pairs names no stage pairs"));
    }
    let metrics = parse_metrics(&args.metrics)?;
    let data = load_dataset(&args.dataset, jobs)?;
    let report = baseline_report(&data, &pairs, &metrics, cfg.averaging)?;
    let text = match args.format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json())?),
    };
    emit(args.out.as_deref(), &text)
}

/// Parameters and latest-stage metrics of one instance; `None` without a constraint.
pub fn correlation_sample(inst: &DatasetInstance) -> Option<CorrelationSample> {
    let c = inst.constraint?;
    let params = BTreeMap::from([
        ("clock_period".to_string(), c.clock_period),
        ("aspect_ratio".to_string(), c.aspect_ratio),
        ("utilization".to_string(), c.utilization),
        ("placement_density".to_string(), c.placement_density),
    ]);
    let (_, snap) = inst.snapshots.iter().next_back()?;
    let m = &snap.metrics;
    let mut metrics = BTreeMap::new();
    metrics.insert("total_area".to_string(), m.area.total_area);
    metrics.insert("cell_count".to_string(), m.cell.no_of_total_cells as f64);
    if let Some(p) = m.power.as_ref().and_then(|p| p.total_power) {
        metrics.insert("total_power".to_string(), p);
    }
    if let Some(t) = &m.timing {
        metrics.insert("worst_slack".to_string(), t.worst_slack);
        metrics.insert("total_negative_slack".to_string(), t.total_negative_slack);
    }
    if let Some(wl) = snap.summary.total_wirelength {
        metrics.insert("total_wirelength".to_string(), wl);
    }
    Some(CorrelationSample {
        circuit: inst.design.clone(),
        params,
        metrics,
    })
}

pub fn run_correlate(args: &CorrelateArgs, jobs: NonZeroUsize) -> anyhow::Result<()> {
    let data = load_dataset(&args.dataset, jobs)?;
    let mut samples = Vec::new();
    for inst in &data {
        match correlation_sample(inst) {
            Some(s) => samples.push(s),
            None => log::warn!("instance {} has no constraint or stages; skipped", inst.id),
        }
    }
    let rows = parameter_correlation(&samples);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["circuit", "parameter", "metric", "n", "r"])?;
    for r in &rows {
        let v = match r.r {
            Stat::Value(x) => format!("{x:.4}"),
            Stat::Sentinel(s) => s.as_str().to_string(),
        };
        w.write_record([
            r.circuit.as_str(),
            &r.parameter,
            &r.metric,
            &r.n.to_string(),
            &v,
        ])?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    emit(Some(&args.out), &text)
}

pub fn run_classify(args: &ClassifyArgs) -> anyhow::Result<()> {
    let ratio = scpr(args.worst_slack, args.clock_period).map_err(|e| usage(e.to_string()))?;
    say(&format!("{}\n", classify_operating_point(ratio)))
}

pub fn run_sweep(args: &SweepArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let pdk: Pdk = cfg.pdk()?;
    let sets = sweep_manifest(args.bp, args.bf, pdk, &cfg.sweep_options())
        .map_err(|e| usage(e.to_string()))?;
    let text = format!("{}\n", serde_json::to_string_pretty(&sets)?);
    emit(args.out.as_deref(), &text)
}
