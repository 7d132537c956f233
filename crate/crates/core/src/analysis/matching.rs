// SPDX-License-Identifier: Apache-2.0

//! Cross-stage entity matching.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::graphs::{TimingPathGraph, TpgNode};
use crate::interchange::CheckType;
use crate::schema::{Stage, StageSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Path,
    CellArc,
    NetArc,
    Net,
    Design,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub key: String,
    pub baseline: f64,
    pub final_value: f64,
}

/// Baseline/final value pairs of one quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedSeries {
    pub kind: SeriesKind,
    pub pairs: Vec<MatchedPair>,
    /// Entities present in only one stage or lacking the value on one side.
    pub excluded_count: usize,
}

impl MatchedSeries {
    pub fn new(kind: SeriesKind) -> MatchedSeries {
        MatchedSeries {
            kind,
            pairs: Vec::new(),
            excluded_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Append another series, prefixing its keys to keep them unique.
    pub fn extend_prefixed(&mut self, prefix: &str, other: MatchedSeries) {
        self.excluded_count += other.excluded_count;
        self.pairs.extend(other.pairs.into_iter().map(|mut p| {
            p.key = format!("{prefix}/{}", p.key);
            p
        }));
    }
}

/// Per-entity or per-design quantity compared across stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    PathArrival,
    PathSlack,
    CellArcDelay,
    CellArcSlew,
    NetArcDelay,
    /// Routed net length (both stages detailed_route onward).
    NetLength,
    TotalArea,
    TotalPower,
    TotalWirelength,
    WorstArrival,
    WorstSlack,
    TotalNegativeSlack,
}

impl Quantity {
    pub fn kind(&self) -> SeriesKind {
        use Quantity::*;
        match self {
            PathArrival | PathSlack => SeriesKind::Path,
            CellArcDelay | CellArcSlew => SeriesKind::CellArc,
            NetArcDelay => SeriesKind::NetArc,
            NetLength => SeriesKind::Net,
            _ => SeriesKind::Design,
        }
    }
}

fn check_name(c: CheckType) -> &'static str {
    match c {
        CheckType::Setup => "setup",
        CheckType::Hold => "hold",
    }
}

pub fn path_key(p: &TimingPathGraph) -> String {
    format!(
        "{}|{}|{}",
        p.startpoint,
        p.endpoint,
        check_name(p.path_type)
    )
}

/// Worst-slack path per `(startpoint, endpoint, check)` key.
fn paths_by_key(s: &StageSnapshot) -> BTreeMap<String, &TimingPathGraph> {
    let mut out: BTreeMap<String, &TimingPathGraph> = BTreeMap::new();
    for p in &s.timing_paths {
        out.entry(path_key(p))
            .and_modify(|cur| {
                if p.slack < cur.slack {
                    *cur = p;
                }
            })
            .or_insert(p);
    }
    out
}

fn arc_values(s: &StageSnapshot, q: Quantity) -> BTreeMap<String, Option<f64>> {
    let mut out = BTreeMap::new();
    for (pk, p) in paths_by_key(s) {
        for (drv, snk, node) in p.arcs() {
            let v = match (q, node) {
                (Quantity::CellArcDelay, TpgNode::CellArc { delay, .. }) => Some(*delay),
                (Quantity::CellArcSlew, TpgNode::CellArc { slew, .. }) => *slew,
                (Quantity::NetArcDelay, TpgNode::NetArc { delay, .. }) => Some(*delay),
                _ => continue,
            };
            out.entry(format!("{pk}|{drv}|{snk}")).or_insert(v);
        }
    }
    out
}

fn design_value(s: &StageSnapshot, q: Quantity) -> Result<Option<f64>, AnalysisError> {
    let m = &s.metrics;
    let t = m.timing.as_ref();
    Ok(match q {
        Quantity::TotalArea => Some(m.area.cell_area),
        Quantity::TotalPower => m.power.as_ref().and_then(|p| p.total_power),
        Quantity::TotalWirelength => {
            if s.stage >= Stage::DetailedRoute {
                s.summary.total_wirelength
            } else if s.stage >= Stage::GlobalPlace {
                s.summary.total_hpwl
            } else {
                return Err(AnalysisError::Unavailable {
                    what: "total wirelength".into(),
                    stage: s.stage,
                });
            }
        }
        Quantity::WorstArrival => t.map(|t| t.worst_arrival_time),
        Quantity::WorstSlack => t.map(|t| t.worst_slack),
        Quantity::TotalNegativeSlack => t.map(|t| t.total_negative_slack),
        _ => unreachable!("not a design quantity"),
    })
}

fn join(
    kind: SeriesKind,
    a: BTreeMap<String, Option<f64>>,
    mut b: BTreeMap<String, Option<f64>>,
) -> MatchedSeries {
    let mut s = MatchedSeries::new(kind);
    for (k, va) in a {
        match (va, b.remove(&k).flatten()) {
            (Some(x), Some(y)) => s.pairs.push(MatchedPair {
                key: k,
                baseline: x,
                final_value: y,
            }),
            _ => s.excluded_count += 1,
        }
    }
    s.excluded_count += b.len();
    s
}

fn net_values(s: &StageSnapshot, hpwl: bool) -> BTreeMap<String, Option<f64>> {
    s.netlist
        .nets
        .iter()
        .filter(|n| !n.is_special)
        .map(|n| (n.name.clone(), if hpwl { n.hpwl } else { n.length }))
        .collect()
}

/// Pair a quantity between a baseline snapshot `a` and a final snapshot `b`.
pub fn match_series(
    a: &StageSnapshot,
    b: &StageSnapshot,
    q: Quantity,
) -> Result<MatchedSeries, AnalysisError> {
    let kind = q.kind();
    match kind {
        SeriesKind::Path => {
            let pick = |s: &StageSnapshot| -> BTreeMap<String, Option<f64>> {
                paths_by_key(s)
                    .into_iter()
                    .map(|(k, p)| {
                        let v = if q == Quantity::PathArrival {
                            p.arrival_time
                        } else {
                            p.slack
                        };
                        (k, Some(v))
                    })
                    .collect()
            };
            Ok(join(kind, pick(a), pick(b)))
        }
        SeriesKind::CellArc | SeriesKind::NetArc => {
            Ok(join(kind, arc_values(a, q), arc_values(b, q)))
        }
        SeriesKind::Net => {
            for s in [a, b] {
                if s.stage < Stage::DetailedRoute {
                    return Err(AnalysisError::Unavailable {
                        what: "net length".into(),
                        stage: s.stage,
                    });
                }
            }
            Ok(join(kind, net_values(a, false), net_values(b, false)))
        }
        SeriesKind::Design => {
            let key = a.netlist.context.design.clone();
            let one = |v: Option<f64>| BTreeMap::from([(key.clone(), v)]);
            Ok(join(
                kind,
                one(design_value(a, q)?),
                one(design_value(b, q)?),
            ))
        }
    }
}

/// Net HPWL at a pre-routing stage against routed length at `dr`.
/// Nets without a placed endpoint are excluded and counted.
pub fn hpwl_baseline(
    pre: &StageSnapshot,
    dr: &StageSnapshot,
) -> Result<MatchedSeries, AnalysisError> {
    if pre.stage >= Stage::DetailedRoute || pre.stage < Stage::GlobalPlace {
        return Err(AnalysisError::Unavailable {
            what: "HPWL baseline".into(),
            stage: pre.stage,
        });
    }
    if dr.stage < Stage::DetailedRoute {
        return Err(AnalysisError::Unavailable {
            what: "net length".into(),
            stage: dr.stage,
        });
    }
    Ok(join(
        SeriesKind::Net,
        net_values(pre, true),
        net_values(dr, false),
    ))
}
