// SPDX-License-Identifier: Apache-2.0

//! Error statistics between baseline and final values.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AnalysisError, MatchedSeries};

/// MAPE values above this percentage are reported as a sentinel.
pub const MAPE_CAP: f64 = 10_000.0;
/// R² values below this are reported as a sentinel.
pub const R2_FLOOR: f64 = -1.0;
/// Final-value variance below this makes R² undefined.
pub const MIN_VARIANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sentinel {
    /// MAPE above 10000%.
    MapeOverflow,
    /// R² below -1.
    R2Underflow,
    /// Zero denominator or zero variance.
    Undefined,
    /// No pair on that side of zero error.
    NoError,
    /// Metric not available at the baseline stage.
    Unavailable,
}

impl Sentinel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sentinel::MapeOverflow => ">10000%",
            Sentinel::R2Underflow => "<-1",
            Sentinel::Undefined => "undefined",
            Sentinel::NoError => "n_p = n_n = 0",
            Sentinel::Unavailable => "unavailable",
        }
    }
}

/// A statistic value or the marker that replaces it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Value(f64),
    Sentinel(Sentinel),
}

impl Stat {
    pub fn value(&self) -> Option<f64> {
        match self {
            Stat::Value(v) => Some(*v),
            Stat::Sentinel(_) => None,
        }
    }

    pub fn is_sentinel(&self, s: Sentinel) -> bool {
        *self == Stat::Sentinel(s)
    }

    fn mape(v: Option<f64>) -> Stat {
        match v {
            Some(v) if v > MAPE_CAP => Stat::Sentinel(Sentinel::MapeOverflow),
            Some(v) => Stat::Value(v),
            None => Stat::Sentinel(Sentinel::Undefined),
        }
    }

    fn or_undefined(v: Option<f64>) -> Stat {
        v.map_or(Stat::Sentinel(Sentinel::Undefined), Stat::Value)
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stat::Value(v) => write!(f, "{v}"),
            Stat::Sentinel(s) => f.write_str(s.as_str()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub n: usize,
    /// Σ|b − f|, formed as `sum_pos + sum_neg`.
    pub sum_abs: f64,
    pub mae: f64,
    /// Percent.
    pub mape: Stat,
    /// Pairs left out of MAPE because the final value is zero.
    pub mape_excluded: usize,
    pub r2: Stat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionalMetrics {
    pub n_p: usize,
    pub n_n: usize,
    pub sum_pos: f64,
    pub sum_neg: f64,
    /// Mean of `b − f` over `b > f`.
    pub mpe: Stat,
    /// Mean of `f − b` over `b < f`.
    pub mne: Stat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub tp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub fp: usize,
    /// Fraction in [0, 1].
    pub tpr: Stat,
    pub tnr: Stat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMetrics {
    pub mae_p95: Stat,
    pub mape_p95: Stat,
    pub mae_top5: Stat,
    pub mape_top5: Stat,
    pub top5_size: usize,
}

fn split_sums(series: &MatchedSeries) -> (usize, usize, f64, f64) {
    let (mut n_p, mut n_n, mut sp, mut sn) = (0, 0, 0.0, 0.0);
    for p in &series.pairs {
        let d = p.baseline - p.final_value;
        if d > 0.0 {
            n_p += 1;
            sp += d;
        } else if d < 0.0 {
            n_n += 1;
            sn += -d;
        }
    }
    (n_p, n_n, sp, sn)
}

fn pct_errors<'a>(it: impl Iterator<Item = &'a super::MatchedPair>) -> (Vec<f64>, usize) {
    let mut out = Vec::new();
    let mut excluded = 0;
    for p in it {
        if p.final_value == 0.0 {
            excluded += 1;
        } else {
            out.push((p.baseline - p.final_value).abs() / p.final_value.abs() * 100.0);
        }
    }
    (out, excluded)
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Nearest-rank percentile (`p` in (0, 100]) of unsorted values.
pub fn nearest_rank(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    Some(v[rank.min(v.len()) - 1])
}

/// MAE, MAPE and R². Fails on an empty series.
pub fn regression_metrics(series: &MatchedSeries) -> Result<RegressionMetrics, AnalysisError> {
    let n = series.pairs.len();
    if n == 0 {
        return Err(AnalysisError::EmptySeries);
    }
    let (_, _, sp, sn) = split_sums(series);
    let sum_abs = sp + sn;
    let (pct, mape_excluded) = pct_errors(series.pairs.iter());
    let mean_f = series.pairs.iter().map(|p| p.final_value).sum::<f64>() / n as f64;
    let ss_tot: f64 = series
        .pairs
        .iter()
        .map(|p| (p.final_value - mean_f).powi(2))
        .sum();
    let ss_res: f64 = series
        .pairs
        .iter()
        .map(|p| (p.final_value - p.baseline).powi(2))
        .sum();
    let r2 = if ss_res == 0.0 {
        Stat::Value(1.0)
    } else if ss_tot / (n as f64) < MIN_VARIANCE {
        Stat::Sentinel(Sentinel::Undefined)
    } else {
        let r = 1.0 - ss_res / ss_tot;
        if r < R2_FLOOR {
            Stat::Sentinel(Sentinel::R2Underflow)
        } else {
            Stat::Value(r)
        }
    };
    Ok(RegressionMetrics {
        n,
        sum_abs,
        mae: sum_abs / n as f64,
        mape: Stat::mape(mean(&pct)),
        mape_excluded,
        r2,
    })
}

/// MPE and MNE with their pair counts; equal pairs count on neither side.
pub fn directional_metrics(series: &MatchedSeries) -> DirectionalMetrics {
    let (n_p, n_n, sum_pos, sum_neg) = split_sums(series);
    let side = |s: f64, k: usize| {
        if k == 0 {
            Stat::Sentinel(Sentinel::NoError)
        } else {
            Stat::Value(s / k as f64)
        }
    };
    DirectionalMetrics {
        n_p,
        n_n,
        sum_pos,
        sum_neg,
        mpe: side(sum_pos, n_p),
        mne: side(sum_neg, n_n),
    }
}

/// Violation detection rates; a value below zero is a violation.
pub fn classification_metrics(series: &MatchedSeries) -> ClassificationMetrics {
    let (mut tp, mut fn_, mut tn, mut fp) = (0, 0, 0, 0);
    for p in &series.pairs {
        match (p.final_value < 0.0, p.baseline < 0.0) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
        }
    }
    let rate =
        |a: usize, b: usize| Stat::or_undefined((a + b > 0).then(|| a as f64 / (a + b) as f64));
    ClassificationMetrics {
        tp,
        fn_,
        tn,
        fp,
        tpr: rate(tp, fn_),
        tnr: rate(tn, fp),
    }
}

/// 95th-percentile errors and errors over the largest 5% of final values.
pub fn tail_metrics(series: &MatchedSeries) -> TailMetrics {
    let abs: Vec<f64> = series
        .pairs
        .iter()
        .map(|p| (p.baseline - p.final_value).abs())
        .collect();
    let (pct, _) = pct_errors(series.pairs.iter());
    let finals: Vec<f64> = series.pairs.iter().map(|p| p.final_value).collect();
    let top: Vec<&super::MatchedPair> = match nearest_rank(&finals, 95.0) {
        Some(cut) => series
            .pairs
            .iter()
            .filter(|p| p.final_value > cut)
            .collect(),
        None => Vec::new(),
    };
    let top_abs: Vec<f64> = top
        .iter()
        .map(|p| (p.baseline - p.final_value).abs())
        .collect();
    let (top_pct, _) = pct_errors(top.iter().copied());
    TailMetrics {
        mae_p95: Stat::or_undefined(nearest_rank(&abs, 95.0)),
        mape_p95: Stat::mape(nearest_rank(&pct, 95.0)),
        mae_top5: Stat::or_undefined(mean(&top_abs)),
        mape_top5: Stat::mape(mean(&top_pct)),
        top5_size: top.len(),
    }
}
