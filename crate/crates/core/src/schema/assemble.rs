// SPDX-License-Identifier: Apache-2.0

use super::availability::check;
use super::metrics::{compute_area_metrics, compute_cell_metrics, PowerMetrics, TimingMetrics};
use super::{MapSet, NetlistSummary, PdnModel, SchemaError, Stage, StageMetrics, StageSnapshot};
use crate::geom::{um_to_dbu, Point, Rect};
use crate::graphs::{
    build_netlist_graph, build_timing_paths, extract_clock_network, find_clock_source,
    CellCategory, NetId, NetlistGraph,
};
use crate::interchange::{
    CellCatalog, GridSamples, ParasiticSet, PhysicalNetlist, PinDirection, QorValues, SignalUse,
    TechLibrary, TimingPathRecord,
};
use crate::raster::{
    grid_samples_to_scalar_map, make_grid, render_clock_maps, render_netlist_maps, render_pdn_maps,
    Aggregator, Anchor, GridSpec, MapRequest, ScalarMap, DEFAULT_K,
};
use crate::routability::{compute_rudy_maps, rudy_nets_from_graph, RudyOptions};

/// Gridded PDN analysis results (IR drop in mV, EM opaque units).
#[derive(Clone, Copy, Debug, Default)]
pub struct PdnSamples<'a> {
    pub ir_drop_vdd: Option<&'a GridSamples>,
    pub ir_drop_vss: Option<&'a GridSamples>,
    pub em_vdd: Option<&'a GridSamples>,
    pub em_vss: Option<&'a GridSamples>,
}

impl<'a> PdnSamples<'a> {
    fn named(&self) -> [(&'static str, Option<&'a GridSamples>); 4] {
        [
            ("ir_drop_vdd", self.ir_drop_vdd),
            ("ir_drop_vss", self.ir_drop_vss),
            ("em_vdd", self.em_vdd),
            ("em_vss", self.em_vss),
        ]
    }
}

/// Parsed inputs for one stage.
#[derive(Clone, Copy, Debug)]
pub struct StageArtifacts<'a> {
    pub def: &'a PhysicalNetlist,
    pub tech: &'a TechLibrary,
    pub catalog: &'a CellCatalog,
    pub parasitics: Option<&'a ParasiticSet>,
    pub timing: &'a [TimingPathRecord],
    pub qor: Option<&'a QorValues>,
    pub pdn: PdnSamples<'a>,
    /// Clock port or pin name; detected when absent.
    pub clock_source: Option<&'a str>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssembleOptions {
    pub run_status: String,
    /// Scalar-map downsampling factor.
    pub k: u32,
    pub anchor: Anchor,
    pub aggregator: Aggregator,
    /// PDN strap pitch, µm. Voltage sources sit every two pitches.
    pub strap_pitch_um: Option<f64>,
    /// Render binary and scalar maps.
    pub maps: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            run_status: "completed".into(),
            k: DEFAULT_K,
            anchor: Anchor::Core,
            aggregator: Aggregator::Mean,
            strap_pitch_um: None,
            maps: true,
        }
    }
}

/// Remove attributes whose window has not opened yet at `stage`.
fn strip_for_stage(g: &mut NetlistGraph, stage: Stage) {
    if stage < Stage::GlobalPlace {
        for gate in &mut g.gates {
            gate.bbox = None;
        }
        for pin in &mut g.pins {
            pin.bbox = None;
        }
        for port in &mut g.ports {
            port.location = None;
            port.bbox = None;
        }
        for net in &mut g.nets {
            net.bbox = None;
            net.hpwl = None;
        }
    }
    if stage < Stage::DetailedRoute {
        for net in g.nets.iter_mut().filter(|n| !n.is_special) {
            net.length = None;
            net.wires.clear();
        }
        for net in g.nets.iter_mut().filter(|n| n.is_special) {
            net.length = None;
        }
    }
    if stage < Stage::Final {
        // filler placement opens only at the final stage
        for gate in g
            .gates
            .iter_mut()
            .filter(|gt| gt.category == CellCategory::Filler)
        {
            gate.bbox = None;
        }
        for i in 0..g.pins.len() {
            if g.gates[g.pins[i].gate.index()].category == CellCategory::Filler {
                g.pins[i].bbox = None;
            }
        }
    }
}

fn pdn_model(g: &NetlistGraph, strap_pitch_um: Option<f64>) -> Option<PdnModel> {
    let mut m = PdnModel::default();
    for (i, n) in g.nets.iter().enumerate() {
        let upper = n.name.to_ascii_uppercase();
        let is_vdd = n.signal_use == Some(SignalUse::Power)
            || (n.is_special
                && (upper.starts_with("VDD") || upper.starts_with("VCC") || upper == "VPWR"));
        let is_vss = n.signal_use == Some(SignalUse::Ground)
            || (n.is_special
                && (upper.starts_with("VSS") || upper.starts_with("GND") || upper == "VGND"));
        if is_vdd {
            m.vdd_nets.push(NetId(i as u32));
        } else if is_vss {
            m.vss_nets.push(NetId(i as u32));
        }
    }
    if m.vdd_nets.is_empty() && m.vss_nets.is_empty() {
        return None;
    }
    if let Some(pitch) = strap_pitch_um {
        m.voltage_sources = voltage_source_lattice(
            &g.context.die_box,
            um_to_dbu(2.0 * pitch, g.context.dbu_per_micron),
        );
    }
    Some(m)
}

/// Regular lattice of points from the box lower-left at `step` spacing.
pub fn voltage_source_lattice(area: &Rect, step: i64) -> Vec<Point> {
    if step <= 0 || !area.has_area() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut y = area.y0;
    while y < area.y1 {
        let mut x = area.x0;
        while x < area.x1 {
            out.push(Point::new(x, y));
            x += step;
        }
        y += step;
    }
    out
}

fn summary(g: &NetlistGraph, cat: &CellCatalog, stage: Stage) -> NetlistSummary {
    let ctx = &g.context;
    let core_area = ctx.um(ctx.core_box.width()) * ctx.um(ctx.core_box.height());
    let placed: f64 = g
        .gates
        .iter()
        .filter(|gt| !matches!(gt.category, CellCategory::Filler))
        .filter_map(|gt| cat.get(&gt.cell))
        .map(|c| match (c.width, c.height) {
            (Some(w), Some(h)) => w * h,
            _ => c.area,
        })
        .sum();
    NetlistSummary {
        width: ctx.um(ctx.die_box.width()),
        height: ctx.um(ctx.die_box.height()),
        no_of_inputs: g
            .ports
            .iter()
            .filter(|p| p.direction == PinDirection::Input)
            .count() as u64,
        no_of_outputs: g
            .ports
            .iter()
            .filter(|p| p.direction == PinDirection::Output)
            .count() as u64,
        no_of_cells: g.gates.len() as u64,
        no_of_nets: g.nets.len() as u64,
        no_of_pins: g.pins.len() as u64,
        utilization: if core_area > 0.0 {
            placed / core_area
        } else {
            0.0
        },
        total_wirelength: (stage >= Stage::DetailedRoute).then(|| {
            g.nets
                .iter()
                .filter(|n| !n.is_special)
                .filter_map(|n| n.length)
                .sum()
        }),
        total_hpwl: (stage >= Stage::GlobalPlace).then(|| {
            g.nets
                .iter()
                .filter(|n| !n.is_special)
                .filter_map(|n| n.hpwl)
                .sum()
        }),
    }
}

/// Tile value at each gate's center, when that tile received samples.
fn gate_values(g: &NetlistGraph, m: &ScalarMap) -> Vec<Option<f64>> {
    g.gates
        .iter()
        .map(|gate| {
            let c = gate.bbox?.center();
            let (ix, iy) = m.grid.tile_of(c)?;
            let i = m.grid.index(ix, iy);
            m.mask[i].then_some(m.values[i])
        })
        .collect()
}

fn grids(
    g: &NetlistGraph,
    opts: &AssembleOptions,
) -> Result<Option<(GridSpec, GridSpec)>, SchemaError> {
    let area = match opts.anchor {
        Anchor::Core => g.context.core_box,
        Anchor::Die => g.context.die_box,
    };
    if !area.has_area() {
        log::warn!("layout box {area:?} is degenerate; maps skipped");
        return Ok(None);
    }
    Ok(Some((
        make_grid(&area, g.context.w_m1, 1)?,
        make_grid(&area, g.context.w_m1, opts.k)?,
    )))
}

/// Build one stage snapshot from parsed artifacts.
///
/// Inputs that exist only from a later stage (parasitics and PDN analysis)
/// are rejected; DEF geometry that is not yet meaningful is dropped.
pub fn assemble_stage(
    stage: Stage,
    art: &StageArtifacts<'_>,
    opts: &AssembleOptions,
) -> Result<StageSnapshot, SchemaError> {
    if art.parasitics.is_some() {
        check("net.resistance", stage)?;
    }
    for (name, s) in art.pdn.named() {
        if s.is_some() {
            check(&format!("pdn.{name}"), stage)?;
        }
    }

    let mut g = build_netlist_graph(art.def, art.tech, art.catalog)?;
    if let Some(rc) = art.parasitics {
        let unknown = g.annotate_parasitics(rc);
        if let Some(first) = unknown.first() {
            return Err(SchemaError::Dangling(format!(
                "SPEF net `{first}` is not in the netlist ({} unknown)",
                unknown.len()
            )));
        }
    }
    g.annotate_timing(art.timing);
    strip_for_stage(&mut g, stage);

    let source = find_clock_source(&g, art.clock_source);
    if art.clock_source.is_some() && source.is_none() {
        return Err(SchemaError::Dangling(format!(
            "clock source `{}` not found",
            art.clock_source.unwrap_or_default()
        )));
    }
    let clock_source = source.map(|s| match s {
        crate::graphs::NodeId::Port(q) => g.port(q).name.clone(),
        crate::graphs::NodeId::Pin(p) => g.pin(p).name.clone(),
        crate::graphs::NodeId::Gate(x) => g.gate(x).name.clone(),
        crate::graphs::NodeId::Net(n) => g.net(n).name.clone(),
    });
    let clock_tree = match source {
        Some(s) if stage >= Stage::Cts => Some(extract_clock_network(&g, s, art.catalog)?),
        _ => None,
    };

    let pdn = pdn_model(&g, opts.strap_pitch_um);
    let timing_paths = build_timing_paths(art.timing, &g)?;

    let cell = compute_cell_metrics(&g, art.catalog)?;
    let area = compute_area_metrics(&g, art.catalog, &g.context.die_box)?;
    let derived = TimingMetrics::from_paths(&timing_paths);
    let metrics = StageMetrics {
        cell,
        area,
        power: art.qor.and_then(PowerMetrics::from_qor),
        timing: match art.qor {
            Some(q) => TimingMetrics::with_qor(derived, q),
            None => derived,
        },
    };
    let summary = summary(&g, art.catalog, stage);

    let mut maps = MapSet::default();
    if let Some((bin, sc)) = grids(&g, opts)? {
        if opts.maps {
            maps.binary
                .extend(render_netlist_maps(&g, &bin, stage, &MapRequest::All)?);
            if let Some(cng) = &clock_tree {
                maps.binary
                    .extend(render_clock_maps(cng, &g, &bin, stage, &MapRequest::All)?);
            }
            if let Some(p) = &pdn {
                maps.binary
                    .extend(render_pdn_maps(p, &g, &bin, stage, &MapRequest::All)?);
            }
            if stage >= Stage::DetailedRoute {
                let rudy = compute_rudy_maps(
                    &rudy_nets_from_graph(&g),
                    &sc,
                    &RudyOptions::for_grid(&bin, g.context.dbu_per_micron),
                );
                for m in rudy.into_vec() {
                    maps.scalar.insert(m.name.clone(), m);
                }
            }
        }
        for (name, s) in art.pdn.named() {
            let Some(s) = s else { continue };
            let m = grid_samples_to_scalar_map(
                name,
                s,
                &sc,
                g.context.dbu_per_micron,
                opts.aggregator,
            )?;
            if name.starts_with("ir_drop") {
                let vals = gate_values(&g, &m);
                for (gate, v) in g.gates.iter_mut().zip(vals) {
                    if name == "ir_drop_vdd" {
                        gate.ir_drop_vdd = v;
                    } else {
                        gate.ir_drop_vss = v;
                    }
                }
            }
            maps.scalar.insert(name.to_string(), m);
        }
    }

    Ok(StageSnapshot {
        stage,
        run_status: opts.run_status.clone(),
        netlist: g,
        summary,
        clock_source,
        clock_tree,
        pdn,
        timing_paths,
        metrics,
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_spacing() {
        let pts = voltage_source_lattice(&Rect::new(0, 0, 100, 50), 40);
        assert_eq!(pts.len(), 3 * 2);
        assert_eq!(pts[1], Point::new(40, 0));
        assert!(voltage_source_lattice(&Rect::new(0, 0, 100, 50), 0).is_empty());
    }
}
