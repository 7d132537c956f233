// SPDX-License-Identifier: Apache-2.0

//! Cross-stage baseline report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matching::{hpwl_baseline, match_series, MatchedSeries, Quantity};
use super::stats::{
    classification_metrics, directional_metrics, regression_metrics, tail_metrics, Sentinel, Stat,
};
use super::{AnalysisError, SeriesKind};
use crate::schema::{DesignConstraint, Stage, StageSnapshot};

/// One design instance with its loaded stage snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetInstance {
    pub id: String,
    pub design: String,
    pub pdk: String,
    pub constraint: Option<DesignConstraint>,
    pub snapshots: BTreeMap<Stage, StageSnapshot>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatName {
    Mae,
    Mape,
    R2,
    Mpe,
    Mne,
    Tpr,
    Tnr,
    MaeP95,
    MapeP95,
    MaeTop5,
    MapeTop5,
}

impl StatName {
    pub const ALL: [StatName; 11] = [
        StatName::Mae,
        StatName::Mape,
        StatName::R2,
        StatName::Mpe,
        StatName::Mne,
        StatName::Tpr,
        StatName::Tnr,
        StatName::MaeP95,
        StatName::MapeP95,
        StatName::MaeTop5,
        StatName::MapeTop5,
    ];

    pub fn header(&self) -> &'static str {
        match self {
            StatName::Mae => "MAE",
            StatName::Mape => "MAPE",
            StatName::R2 => "R2",
            StatName::Mpe => "MPE",
            StatName::Mne => "MNE",
            StatName::Tpr => "TPR",
            StatName::Tnr => "TNR",
            StatName::MaeP95 => "MAE_P95",
            StatName::MapeP95 => "MAPE_P95",
            StatName::MaeTop5 => "MAE_TOP5",
            StatName::MapeTop5 => "MAPE_TOP5",
        }
    }

    /// Percent-valued statistics (TPR/TNR are stored as fractions).
    pub fn is_percent(&self) -> bool {
        matches!(
            self,
            StatName::Mape | StatName::MapeP95 | StatName::MapeTop5 | StatName::Tpr | StatName::Tnr
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMetric {
    TotalArea,
    TotalPower,
    TotalWirelength,
    InterconnectLength,
    WorstArrival,
    WorstSlack,
    TotalNegativeSlack,
    PathArrival,
    PathSlack,
    NetArcDelay,
    CellArcDelay,
    CellArcSlew,
}

impl BaselineMetric {
    pub const ALL: [BaselineMetric; 12] = [
        BaselineMetric::TotalArea,
        BaselineMetric::TotalPower,
        BaselineMetric::TotalWirelength,
        BaselineMetric::InterconnectLength,
        BaselineMetric::WorstArrival,
        BaselineMetric::WorstSlack,
        BaselineMetric::TotalNegativeSlack,
        BaselineMetric::PathArrival,
        BaselineMetric::PathSlack,
        BaselineMetric::NetArcDelay,
        BaselineMetric::CellArcDelay,
        BaselineMetric::CellArcSlew,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BaselineMetric::TotalArea => "total_area",
            BaselineMetric::TotalPower => "total_power",
            BaselineMetric::TotalWirelength => "total_wirelength",
            BaselineMetric::InterconnectLength => "interconnect_length",
            BaselineMetric::WorstArrival => "worst_arrival",
            BaselineMetric::WorstSlack => "worst_slack",
            BaselineMetric::TotalNegativeSlack => "total_negative_slack",
            BaselineMetric::PathArrival => "path_arrival",
            BaselineMetric::PathSlack => "path_slack",
            BaselineMetric::NetArcDelay => "net_arc_delay",
            BaselineMetric::CellArcDelay => "cell_arc_delay",
            BaselineMetric::CellArcSlew => "cell_arc_slew",
        }
    }

    /// Statistics reported for this metric.
    pub fn stats(&self) -> &'static [StatName] {
        use StatName::*;
        match self {
            BaselineMetric::TotalArea
            | BaselineMetric::TotalPower
            | BaselineMetric::TotalWirelength
            | BaselineMetric::NetArcDelay
            | BaselineMetric::CellArcDelay
            | BaselineMetric::CellArcSlew => &[Mae, Mape, R2],
            BaselineMetric::InterconnectLength => {
                &[Mae, Mape, R2, MaeP95, MapeP95, MaeTop5, MapeTop5]
            }
            BaselineMetric::WorstArrival => &[Mae, Mape],
            BaselineMetric::WorstSlack | BaselineMetric::PathSlack => &[Mae, Mpe, Mne, Tpr, Tnr],
            BaselineMetric::TotalNegativeSlack => &[Mae, Mpe, Mne],
            BaselineMetric::PathArrival => &[Mae, Mape, MaeP95, MapeP95, MaeTop5, MapeTop5],
        }
    }

    fn quantity(&self) -> Option<Quantity> {
        Some(match self {
            BaselineMetric::TotalArea => Quantity::TotalArea,
            BaselineMetric::TotalPower => Quantity::TotalPower,
            BaselineMetric::TotalWirelength => Quantity::TotalWirelength,
            BaselineMetric::InterconnectLength => return None,
            BaselineMetric::WorstArrival => Quantity::WorstArrival,
            BaselineMetric::WorstSlack => Quantity::WorstSlack,
            BaselineMetric::TotalNegativeSlack => Quantity::TotalNegativeSlack,
            BaselineMetric::PathArrival => Quantity::PathArrival,
            BaselineMetric::PathSlack => Quantity::PathSlack,
            BaselineMetric::NetArcDelay => Quantity::NetArcDelay,
            BaselineMetric::CellArcDelay => Quantity::CellArcDelay,
            BaselineMetric::CellArcSlew => Quantity::CellArcSlew,
        })
    }

    /// Matched series for one instance, or `Unavailable`.
    pub fn series(
        &self,
        a: &StageSnapshot,
        b: &StageSnapshot,
    ) -> Result<MatchedSeries, AnalysisError> {
        match self.quantity() {
            Some(q) => match_series(a, b, q),
            None if a.stage >= Stage::DetailedRoute => match_series(a, b, Quantity::NetLength),
            None => hpwl_baseline(a, b),
        }
    }
}

impl FromStr for BaselineMetric {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, AnalysisError> {
        BaselineMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| AnalysisError::UnknownMetric(s.to_string()))
    }
}

impl fmt::Display for BaselineMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// One series pooled over every instance.
    #[default]
    Pooled,
    /// Per-circuit statistics averaged with equal weight.
    Macro,
}

impl FromStr for Averaging {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, AnalysisError> {
        match s {
            "pooled" => Ok(Averaging::Pooled),
            "macro" => Ok(Averaging::Macro),
            other => Err(AnalysisError::UnknownMetric(format!(
                "averaging mode `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub metric: BaselineMetric,
    pub baseline_stage: Stage,
    pub final_stage: Stage,
    pub pdk: String,
    pub n: usize,
    pub excluded: usize,
    pub n_p: usize,
    pub n_n: usize,
    pub stats: BTreeMap<StatName, Stat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub averaging: Averaging,
    pub note: String,
    pub rows: Vec<BaselineRow>,
}

/// All statistics of `metric` over one series.
pub fn series_stats(
    metric: BaselineMetric,
    s: &MatchedSeries,
) -> (BTreeMap<StatName, Stat>, usize, usize) {
    let wanted = metric.stats();
    let undefined = Stat::Sentinel(Sentinel::Undefined);
    let reg = regression_metrics(s).ok();
    let dir = directional_metrics(s);
    let cls = classification_metrics(s);
    let tail = tail_metrics(s);
    let mut out = BTreeMap::new();
    for &name in wanted {
        let v = match name {
            StatName::Mae => reg.map_or(undefined, |r| Stat::Value(r.mae)),
            StatName::Mape => reg.map_or(undefined, |r| r.mape),
            StatName::R2 => reg.map_or(undefined, |r| r.r2),
            StatName::Mpe => dir.mpe,
            StatName::Mne => dir.mne,
            StatName::Tpr => cls.tpr,
            StatName::Tnr => cls.tnr,
            StatName::MaeP95 => tail.mae_p95,
            StatName::MapeP95 => tail.mape_p95,
            StatName::MaeTop5 => tail.mae_top5,
            StatName::MapeTop5 => tail.mape_top5,
        };
        out.insert(name, v);
    }
    (out, dir.n_p, dir.n_n)
}

fn unavailable_row(metric: BaselineMetric, a: Stage, b: Stage, pdk: &str) -> BaselineRow {
    BaselineRow {
        metric,
        baseline_stage: a,
        final_stage: b,
        pdk: pdk.to_string(),
        n: 0,
        excluded: 0,
        n_p: 0,
        n_n: 0,
        stats: metric
            .stats()
            .iter()
            .map(|&s| (s, Stat::Sentinel(Sentinel::Unavailable)))
            .collect(),
    }
}

/// Baseline-vs-final statistics per (metric, stage pair, PDK).
///
/// Instances lacking either stage of a pair contribute nothing to it.
pub fn baseline_report(
    dataset: &[DatasetInstance],
    pairs: &[(Stage, Stage)],
    metrics: &[BaselineMetric],
    averaging: Averaging,
) -> Result<BaselineReport, AnalysisError> {
    let mut by_pdk: BTreeMap<&str, Vec<&DatasetInstance>> = BTreeMap::new();
    for inst in dataset {
        by_pdk.entry(inst.pdk.as_str()).or_default().push(inst);
    }
    let mut rows = Vec::new();
    for &metric in metrics {
        for &(a, b) in pairs {
            for (pdk, insts) in &by_pdk {
                // per circuit series; pooled mode merges them afterwards
                let mut per_circuit: BTreeMap<&str, MatchedSeries> = BTreeMap::new();
                let mut unavailable = false;
                for inst in insts {
                    let (Some(sa), Some(sb)) = (inst.snapshots.get(&a), inst.snapshots.get(&b))
                    else {
                        continue;
                    };
                    match metric.series(sa, sb) {
                        Ok(s) => per_circuit
                            .entry(inst.design.as_str())
                            .or_insert_with(|| MatchedSeries::new(s.kind))
                            .extend_prefixed(&inst.id, s),
                        Err(AnalysisError::Unavailable { .. }) => {
                            unavailable = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if unavailable {
                    rows.push(unavailable_row(metric, a, b, pdk));
                    continue;
                }
                rows.push(aggregate(metric, a, b, pdk, per_circuit, averaging));
            }
        }
    }
    Ok(BaselineReport {
        averaging,
        note: match averaging {
            Averaging::Pooled => "statistics pooled over all matched pairs of all instances".into(),
            Averaging::Macro => {
                "statistics computed per circuit, then averaged with equal weight".into()
            }
        },
        rows,
    })
}

fn aggregate(
    metric: BaselineMetric,
    a: Stage,
    b: Stage,
    pdk: &str,
    per_circuit: BTreeMap<&str, MatchedSeries>,
    averaging: Averaging,
) -> BaselineRow {
    let mut row = BaselineRow {
        metric,
        baseline_stage: a,
        final_stage: b,
        pdk: pdk.to_string(),
        n: per_circuit.values().map(MatchedSeries::len).sum(),
        excluded: per_circuit.values().map(|s| s.excluded_count).sum(),
        n_p: 0,
        n_n: 0,
        stats: BTreeMap::new(),
    };
    match averaging {
        Averaging::Pooled => {
            let mut all = MatchedSeries::new(SeriesKind::Design);
            for (c, s) in per_circuit {
                all.kind = s.kind;
                all.extend_prefixed(c, s);
            }
            let (stats, n_p, n_n) = series_stats(metric, &all);
            row.stats = stats;
            row.n_p = n_p;
            row.n_n = n_n;
        }
        Averaging::Macro => {
            let mut acc: BTreeMap<StatName, Vec<Stat>> = BTreeMap::new();
            for s in per_circuit.values() {
                let (stats, n_p, n_n) = series_stats(metric, s);
                row.n_p += n_p;
                row.n_n += n_n;
                for (k, v) in stats {
                    acc.entry(k).or_default().push(v);
                }
            }
            for &name in metric.stats() {
                let vals = acc.remove(&name).unwrap_or_default();
                let nums: Vec<f64> = vals.iter().filter_map(Stat::value).collect();
                let v = if nums.is_empty() {
                    vals.first()
                        .copied()
                        .unwrap_or(Stat::Sentinel(Sentinel::Undefined))
                } else {
                    Stat::Value(nums.iter().sum::<f64>() / nums.len() as f64)
                };
                row.stats.insert(name, v);
            }
        }
    }
    row
}

/// Cell text: percentages with 2 decimals and a `%`, others with 4 decimals.
pub fn format_stat(name: StatName, s: &Stat) -> String {
    match s {
        Stat::Value(v) if name.is_percent() => {
            let pct = if matches!(name, StatName::Tpr | StatName::Tnr) {
                v * 100.0
            } else {
                *v
            };
            format!("{pct:.2}%")
        }
        Stat::Value(v) => format!("{v:.4}"),
        Stat::Sentinel(x) => x.as_str().to_string(),
    }
}

impl BaselineReport {
    pub fn to_csv(&self) -> String {
        let mut w = ::csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec!["metric", "stage_pair", "pdk", "n", "excluded", "n_p", "n_n"];
        header.extend(StatName::ALL.iter().map(StatName::header));
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![
                r.metric.as_str().to_string(),
                format!("{}-{}", r.baseline_stage.abbrev(), r.final_stage.abbrev()),
                r.pdk.clone(),
                r.n.to_string(),
                r.excluded.to_string(),
                r.n_p.to_string(),
                r.n_n.to_string(),
            ];
            rec.extend(StatName::ALL.iter().map(|n| {
                r.stats
                    .get(n)
                    .map(|s| format_stat(*n, s))
                    .unwrap_or_default()
            }));
            w.write_record(&rec).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        format!("# averaging: {:?}; {}\n{body}", self.averaging, self.note)
    }

    /// JSON with sentinels as `{"sentinel": "<text>"}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let stats: serde_json::Map<String, serde_json::Value> = r
                    .stats
                    .iter()
                    .map(|(k, v)| {
                        let j = match v {
                            Stat::Value(x) => serde_json::json!(x),
                            Stat::Sentinel(s) => serde_json::json!({ "sentinel": s.as_str() }),
                        };
                        (k.header().to_string(), j)
                    })
                    .collect();
                serde_json::json!({
                    "metric": r.metric.as_str(),
                    "baseline_stage": r.baseline_stage.as_str(),
                    "final_stage": r.final_stage.as_str(),
                    "pdk": r.pdk,
                    "n": r.n,
                    "excluded": r.excluded,
                    "n_p": r.n_p,
                    "n_n": r.n_n,
                    "stats": stats,
                })
            })
            .collect();
        serde_json::json!({
            "averaging": self.averaging,
            "note": self.note,
            "rows": rows,
        })
    }
}

/// Stage pairs compared against detailed route.
pub const DEFAULT_PAIRS: [(Stage, Stage); 5] = [
    (Stage::Floorplan, Stage::DetailedRoute),
    (Stage::GlobalPlace, Stage::DetailedRoute),
    (Stage::DetailedPlace, Stage::DetailedRoute),
    (Stage::Cts, Stage::DetailedRoute),
    (Stage::GlobalRoute, Stage::DetailedRoute),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(format_stat(StatName::Mape, &Stat::Value(25.0)), "25.00%");
        assert_eq!(format_stat(StatName::Tpr, &Stat::Value(1.0)), "100.00%");
        assert_eq!(format_stat(StatName::Mae, &Stat::Value(0.5)), "0.5000");
        assert_eq!(
            format_stat(StatName::Mape, &Stat::Sentinel(Sentinel::MapeOverflow)),
            ">10000%"
        );
        assert_eq!(
            format_stat(StatName::R2, &Stat::Sentinel(Sentinel::R2Underflow)),
            "<-1"
        );
    }

    #[test]
    fn metric_names_roundtrip() {
        for m in BaselineMetric::ALL {
            assert_eq!(m.as_str().parse::<BaselineMetric>().unwrap(), m);
        }
        assert!("bogus".parse::<BaselineMetric>().is_err());
    }
}
