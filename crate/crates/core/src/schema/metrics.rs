// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SchemaError;
use crate::geom::{dbu_to_um, Rect};
use crate::graphs::{CellCategory, NetlistGraph, TimingPathGraph};
use crate::interchange::{CellCatalog, CheckType, QorValues};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellMetrics {
    pub no_of_combinational_cells: u64,
    pub no_of_sequential_cells: u64,
    pub no_of_buffers: u64,
    pub no_of_inverters: u64,
    pub no_of_fillers: u64,
    pub no_of_tap_cells: u64,
    pub no_of_diodes: u64,
    pub no_of_macros: u64,
    pub no_of_total_cells: u64,
}

impl CellMetrics {
    pub fn bucket_sum(&self) -> u64 {
        self.no_of_combinational_cells
            + self.no_of_sequential_cells
            + self.no_of_buffers
            + self.no_of_inverters
            + self.no_of_fillers
            + self.no_of_tap_cells
            + self.no_of_diodes
            + self.no_of_macros
    }

    fn bucket(&mut self, c: CellCategory) -> &mut u64 {
        match c {
            CellCategory::Combinational => &mut self.no_of_combinational_cells,
            CellCategory::Sequential => &mut self.no_of_sequential_cells,
            CellCategory::Buffer => &mut self.no_of_buffers,
            CellCategory::Inverter => &mut self.no_of_inverters,
            CellCategory::Filler => &mut self.no_of_fillers,
            CellCategory::Tap => &mut self.no_of_tap_cells,
            CellCategory::Diode => &mut self.no_of_diodes,
            CellCategory::Macro => &mut self.no_of_macros,
        }
    }
}

/// Areas in µm².
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AreaMetrics {
    pub combinational_cell_area: f64,
    pub sequential_cell_area: f64,
    pub buffer_area: f64,
    pub inverter_area: f64,
    pub filler_area: f64,
    pub tap_cell_area: f64,
    pub diode_area: f64,
    pub macro_area: f64,
    pub cell_area: f64,
    pub total_area: f64,
}

impl AreaMetrics {
    pub fn bucket_sum(&self) -> f64 {
        self.combinational_cell_area
            + self.sequential_cell_area
            + self.buffer_area
            + self.inverter_area
            + self.filler_area
            + self.tap_cell_area
            + self.diode_area
            + self.macro_area
    }

    fn bucket(&mut self, c: CellCategory) -> &mut f64 {
        match c {
            CellCategory::Combinational => &mut self.combinational_cell_area,
            CellCategory::Sequential => &mut self.sequential_cell_area,
            CellCategory::Buffer => &mut self.buffer_area,
            CellCategory::Inverter => &mut self.inverter_area,
            CellCategory::Filler => &mut self.filler_area,
            CellCategory::Tap => &mut self.tap_cell_area,
            CellCategory::Diode => &mut self.diode_area,
            CellCategory::Macro => &mut self.macro_area,
        }
    }
}

/// Powers in µW; fields absent when the QoR report does not carry them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerMetrics {
    pub combinational_power: Option<f64>,
    pub sequential_power: Option<f64>,
    pub macro_power: Option<f64>,
    pub internal_power: Option<f64>,
    pub switching_power: Option<f64>,
    pub leakage_power: Option<f64>,
    pub total_power: Option<f64>,
}

impl PowerMetrics {
    pub fn from_qor(q: &QorValues) -> Option<PowerMetrics> {
        let p = PowerMetrics {
            combinational_power: q.number("combinational_power"),
            sequential_power: q.number("sequential_power"),
            macro_power: q.number("macro_power"),
            internal_power: q.number("internal_power"),
            switching_power: q.number("switching_power"),
            leakage_power: q.number("leakage_power"),
            total_power: q.number("total_power"),
        };
        (p != PowerMetrics::default()).then_some(p)
    }
}

/// Setup-timing summary, ns.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingMetrics {
    pub total_negative_slack: f64,
    pub worst_slack: f64,
    pub worst_arrival_time: f64,
    pub worst_required_time: f64,
    pub critical_path_startpoint: String,
    pub critical_path_endpoint: String,
    pub no_of_endpoints: u64,
    pub no_of_violating_endpoints: u64,
}

impl TimingMetrics {
    /// Derive from setup paths: per-endpoint worst slack feeds TNS and the
    /// endpoint counts. `None` without setup paths.
    pub fn from_paths(paths: &[TimingPathGraph]) -> Option<TimingMetrics> {
        let setup: Vec<&TimingPathGraph> = paths
            .iter()
            .filter(|p| p.path_type == CheckType::Setup)
            .collect();
        let worst = setup
            .iter()
            .copied()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))?;
        let mut per_endpoint: BTreeMap<&str, f64> = BTreeMap::new();
        for p in &setup {
            let e = per_endpoint
                .entry(p.endpoint.as_str())
                .or_insert(f64::INFINITY);
            *e = e.min(p.slack);
        }
        let tns: f64 = per_endpoint.values().filter(|s| **s < 0.0).sum();
        Some(TimingMetrics {
            total_negative_slack: tns,
            worst_slack: worst.slack,
            worst_arrival_time: setup
                .iter()
                .map(|p| p.arrival_time)
                .fold(f64::MIN, f64::max),
            worst_required_time: worst.required_time,
            critical_path_startpoint: worst.startpoint.clone(),
            critical_path_endpoint: worst.endpoint.clone(),
            no_of_endpoints: per_endpoint.len() as u64,
            no_of_violating_endpoints: per_endpoint.values().filter(|s| **s < 0.0).count() as u64,
        })
    }

    /// Overlay QoR-reported values on top of `base`.
    pub fn with_qor(base: Option<TimingMetrics>, q: &QorValues) -> Option<TimingMetrics> {
        let keys = [
            "total_negative_slack",
            "worst_slack",
            "worst_arrival_time",
            "worst_required_time",
            "no_of_endpoints",
            "no_of_violating_endpoints",
        ];
        let has_any = keys.iter().any(|k| q.number(k).is_some())
            || q.text("critical_path_startpoint").is_some();
        if base.is_none() && !has_any {
            return None;
        }
        let mut t = base.unwrap_or_default();
        if let Some(v) = q.number("total_negative_slack") {
            t.total_negative_slack = v;
        }
        if let Some(v) = q.number("worst_slack") {
            t.worst_slack = v;
        }
        if let Some(v) = q.number("worst_arrival_time") {
            t.worst_arrival_time = v;
        }
        if let Some(v) = q.number("worst_required_time") {
            t.worst_required_time = v;
        }
        if let Some(v) = q.number("no_of_endpoints") {
            t.no_of_endpoints = v as u64;
        }
        if let Some(v) = q.number("no_of_violating_endpoints") {
            t.no_of_violating_endpoints = v as u64;
        }
        if let Some(s) = q.text("critical_path_startpoint") {
            t.critical_path_startpoint = s.to_string();
        }
        if let Some(s) = q.text("critical_path_endpoint") {
            t.critical_path_endpoint = s.to_string();
        }
        Some(t)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageMetrics {
    pub cell: CellMetrics,
    pub area: AreaMetrics,
    pub power: Option<PowerMetrics>,
    pub timing: Option<TimingMetrics>,
}

pub fn compute_cell_metrics(
    g: &NetlistGraph,
    cat: &CellCatalog,
) -> Result<CellMetrics, SchemaError> {
    let mut m = CellMetrics::default();
    for gate in &g.gates {
        if cat.get(&gate.cell).is_none() {
            return Err(SchemaError::UnknownCell(gate.cell.clone()));
        }
        *m.bucket(gate.category) += 1;
    }
    m.no_of_total_cells = g.gates.len() as u64;
    Ok(m)
}

/// Category areas from cell width x height (Liberty area when the footprint is
/// unknown); `total_area` is the die area.
pub fn compute_area_metrics(
    g: &NetlistGraph,
    cat: &CellCatalog,
    die_box: &Rect,
) -> Result<AreaMetrics, SchemaError> {
    let mut m = AreaMetrics::default();
    for gate in &g.gates {
        let cell = cat
            .get(&gate.cell)
            .ok_or_else(|| SchemaError::UnknownCell(gate.cell.clone()))?;
        let area = match (cell.width, cell.height) {
            (Some(w), Some(h)) => w * h,
            _ => cell.area,
        };
        *m.bucket(gate.category) += area;
    }
    m.cell_area = m.bucket_sum();
    let dbu = g.context.dbu_per_micron.max(1);
    m.total_area = dbu_to_um(die_box.width(), dbu) * dbu_to_um(die_box.height(), dbu);
    Ok(m)
}
