// SPDX-License-Identifier: Apache-2.0

//! Operating-point classification, parameter sweeps, cross-stage matching,
//! baseline error statistics and Pearson correlation.

mod correlation;
mod matching;
mod report;
mod scpr;
mod stats;
mod sweep;

use thiserror::Error;

use crate::schema::Stage;

pub use self::correlation::{parameter_correlation, pearson, CorrelationRow, CorrelationSample};
pub use self::matching::{
    hpwl_baseline, match_series, path_key, MatchedPair, MatchedSeries, Quantity, SeriesKind,
};
pub use self::report::{
    baseline_report, format_stat, series_stats, Averaging, BaselineMetric, BaselineReport,
    BaselineRow, DatasetInstance, StatName, DEFAULT_PAIRS,
};
pub use self::scpr::{classify_operating_point, scpr, OperatingClass, OperatingClassKind};
pub use self::stats::{
    classification_metrics, directional_metrics, nearest_rank, regression_metrics, tail_metrics,
    ClassificationMetrics, DirectionalMetrics, RegressionMetrics, Sentinel, Stat, TailMetrics,
    MAPE_CAP, MIN_VARIANCE, R2_FLOOR,
};
pub use self::sweep::{
    derive_constraint, sweep_clocks, sweep_manifest, Pdk, PdkParams, SweepOptions, ASPECT_RATIOS,
    LATENCY_CAP, PLACEMENT_DENSITIES, UNCERTAINTY_CAP_TABLE, UNCERTAINTY_CAP_TEXT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("clock period must be positive, got {0}")]
    NonPositivePeriod(f64),
    #[error("barely-pass period {bp} is below barely-fail period {bf}")]
    InvertedPeriods { bp: f64, bf: f64 },
    #[error("series is empty")]
    EmptySeries,
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("{what} is not available at {stage}")]
    Unavailable { what: String, stage: Stage },
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown PDK `{0}`")]
    UnknownPdk(String),
}
