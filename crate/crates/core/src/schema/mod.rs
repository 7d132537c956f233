// SPDX-License-Identifier: Apache-2.0

//! Flow hierarchy, stage snapshots and metric bundles, with stage-availability
//! enforcement.

mod assemble;
pub mod availability;
mod metrics;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;
use crate::graphs::{ClockNetworkGraph, GraphError, NetId, NetlistGraph, TimingPathGraph};
use crate::raster::{RasterError, ScalarMap, SpatialMap};

pub use self::assemble::{assemble_stage, AssembleOptions, PdnSamples, StageArtifacts};
pub use self::availability::Window;
pub use self::metrics::{
    compute_area_metrics, compute_cell_metrics, AreaMetrics, CellMetrics, PowerMetrics,
    StageMetrics, TimingMetrics,
};
pub use self::validate::{validate_snapshot, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Floorplan,
    GlobalPlace,
    PlaceResize,
    DetailedPlace,
    Cts,
    GlobalRoute,
    DetailedRoute,
    Final,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Floorplan,
        Stage::GlobalPlace,
        Stage::PlaceResize,
        Stage::DetailedPlace,
        Stage::Cts,
        Stage::GlobalRoute,
        Stage::DetailedRoute,
        Stage::Final,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Floorplan => "floorplan",
            Stage::GlobalPlace => "global_place",
            Stage::PlaceResize => "place_resize",
            Stage::DetailedPlace => "detailed_place",
            Stage::Cts => "cts",
            Stage::GlobalRoute => "global_route",
            Stage::DetailedRoute => "detailed_route",
            Stage::Final => "final",
        }
    }

    pub fn abbrev(&self) -> &'static str {
        match self {
            Stage::Floorplan => "FP",
            Stage::GlobalPlace => "GP",
            Stage::PlaceResize => "PR",
            Stage::DetailedPlace => "DP",
            Stage::Cts => "CTS",
            Stage::GlobalRoute => "GR",
            Stage::DetailedRoute => "DR",
            Stage::Final => "F",
        }
    }

    /// Accepts canonical names and abbreviations, case-insensitively.
    pub fn parse(s: &str) -> Option<Stage> {
        let l = s.to_ascii_lowercase();
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == l || st.abbrev().eq_ignore_ascii_case(&l))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// True when `stages` is strictly increasing in canonical order.
pub fn is_canonical_order(stages: &[Stage]) -> bool {
    stages.windows(2).all(|w| w[0] < w[1])
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignFlow {
    pub id: String,
    pub toolchain: String,
    pub design: String,
    pub run_status: String,
    pub stages: Vec<Stage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignConstraint {
    /// ns.
    pub clock_period: f64,
    pub clock_uncertainty: f64,
    pub clock_latency: f64,
    pub clock_transition: f64,
    pub input_delay: f64,
    pub output_delay: f64,
    pub aspect_ratio: f64,
    pub utilization: f64,
    /// Placement density relative to uniform spreading (1.0 = uniform).
    pub placement_density: f64,
}

impl DesignConstraint {
    pub fn validate(&self) -> Result<(), SchemaError> {
        if !(self.clock_period > 0.0) {
            return Err(SchemaError::InvalidConstraint(format!(
                "clock_period must be positive, got {}",
                self.clock_period
            )));
        }
        if !(self.utilization > 0.0 && self.utilization < 1.0) {
            return Err(SchemaError::InvalidConstraint(format!(
                "utilization must lie in (0, 1), got {}",
                self.utilization
            )));
        }
        if !(self.aspect_ratio > 0.0) {
            return Err(SchemaError::InvalidConstraint(format!(
                "aspect_ratio must be positive, got {}",
                self.aspect_ratio
            )));
        }
        Ok(())
    }
}

/// Design-level netlist attributes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NetlistSummary {
    /// Die size, µm.
    pub width: f64,
    pub height: f64,
    pub no_of_inputs: u64,
    pub no_of_outputs: u64,
    pub no_of_cells: u64,
    pub no_of_nets: u64,
    pub no_of_pins: u64,
    /// Placed cell area over core area.
    pub utilization: f64,
    /// µm.
    pub total_wirelength: Option<f64>,
    pub total_hpwl: Option<f64>,
}

/// Supply network view: which nets are VDD/VSS and where the sources sit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PdnModel {
    pub vdd_nets: Vec<NetId>,
    pub vss_nets: Vec<NetId>,
    /// DBU.
    pub voltage_sources: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MapSet {
    pub binary: BTreeMap<String, SpatialMap>,
    pub scalar: BTreeMap<String, ScalarMap>,
}

impl MapSet {
    pub fn len(&self) -> usize {
        self.binary.len() + self.scalar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> Vec<&str> {
        self.binary
            .keys()
            .chain(self.scalar.keys())
            .map(String::as_str)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSnapshot {
    pub stage: Stage,
    pub run_status: String,
    pub netlist: NetlistGraph,
    pub summary: NetlistSummary,
    pub clock_source: Option<String>,
    pub clock_tree: Option<ClockNetworkGraph>,
    pub pdn: Option<PdnModel>,
    pub timing_paths: Vec<TimingPathGraph>,
    pub metrics: StageMetrics,
    pub maps: MapSet,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("{attribute} is available only at {window}, not at {stage}")]
    Unavailable {
        attribute: String,
        stage: Stage,
        window: Window,
    },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("cell `{0}` is not in the cell catalog")]
    UnknownCell(String),
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Raster(#[from] RasterError),
}
