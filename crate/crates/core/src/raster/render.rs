// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashSet};

use super::{GridSpec, RasterError, SpatialMap};
use crate::graphs::{CellCategory, ClockNetworkGraph, NetId, NetlistGraph};
use crate::schema::availability::map_window;
use crate::schema::{PdnModel, Stage};

/// Which maps to render.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum MapRequest {
    /// Every map available at the stage; unavailable ones are skipped.
    #[default]
    All,
    /// Exactly these names; any name outside its window is an error.
    Only(Vec<String>),
}

impl MapRequest {
    fn wants(&self, name: &str, stage: Stage) -> Result<bool, RasterError> {
        let window = map_window(name).ok_or_else(|| RasterError::UnknownMap(name.to_string()))?;
        match self {
            MapRequest::All => Ok(window.contains(stage)),
            MapRequest::Only(names) if names.iter().any(|n| n == name) => {
                if window.contains(stage) {
                    Ok(true)
                } else {
                    Err(RasterError::Unavailable {
                        map: name.to_string(),
                        stage,
                        window,
                    })
                }
            }
            MapRequest::Only(_) => Ok(false),
        }
    }

    /// Names in an `Only` request not produced by any renderer in `known`.
    pub fn unknown_names(&self, known: &[String]) -> Vec<String> {
        match self {
            MapRequest::All => Vec::new(),
            MapRequest::Only(names) => names
                .iter()
                .filter(|n| !known.contains(n))
                .cloned()
                .collect(),
        }
    }
}

type Maps = BTreeMap<String, SpatialMap>;

fn layer_maps(
    g: &NetlistGraph,
    nets: &[NetId],
    grid: &GridSpec,
    prefix: &str,
    stage: Stage,
    req: &MapRequest,
    out: &mut Maps,
) -> Result<(), RasterError> {
    let overall = format!("{prefix}routing");
    let want_overall = req.wants(&overall, stage)?;
    let mut per_layer = Vec::new();
    for layer in &g.context.routing_layers {
        let name = format!("{prefix}routing_{layer}");
        if req.wants(&name, stage)? {
            per_layer.push((layer.as_str(), name));
        }
    }
    if !want_overall && per_layer.is_empty() {
        return Ok(());
    }
    let mut maps: Vec<SpatialMap> = g
        .context
        .routing_layers
        .iter()
        .map(|_| SpatialMap::empty("", *grid))
        .collect();
    let layer_idx: BTreeMap<&str, usize> = g
        .context
        .routing_layers
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    for &n in nets {
        for w in &g.net(n).wires {
            if let Some(&i) = layer_idx.get(w.layer.as_str()) {
                maps[i].fill_rect(&w.rect);
            }
        }
    }
    if want_overall {
        let mut all = SpatialMap::empty(overall.clone(), *grid);
        for m in &maps {
            all.or_assign(m);
        }
        out.insert(overall, all);
    }
    for (layer, name) in per_layer {
        let mut m = std::mem::replace(&mut maps[layer_idx[layer]], SpatialMap::empty("", *grid));
        m.name = name.clone();
        out.insert(name, m);
    }
    Ok(())
}

/// Netlist-level placement, pin and routing maps.
pub fn render_netlist_maps(
    g: &NetlistGraph,
    grid: &GridSpec,
    stage: Stage,
    req: &MapRequest,
) -> Result<Maps, RasterError> {
    let mut out = Maps::new();
    type Filter = fn(CellCategory) -> bool;
    let placement: [(&str, Filter); 4] = [
        ("cell_placement", |_| true),
        ("cell_placement_combinational", |c| {
            matches!(
                c,
                CellCategory::Combinational | CellCategory::Buffer | CellCategory::Inverter
            )
        }),
        ("cell_placement_sequential", |c| {
            c == CellCategory::Sequential
        }),
        ("cell_placement_filler", |c| c == CellCategory::Filler),
    ];
    for (name, keep) in placement {
        if req.wants(name, stage)? {
            let mut m = SpatialMap::empty(name, *grid);
            for gate in g.gates.iter().filter(|gt| keep(gt.category)) {
                if let Some(b) = &gate.bbox {
                    m.mark_shape(b);
                }
            }
            out.insert(name.to_string(), m);
        }
    }
    if req.wants("pin_placement", stage)? {
        let mut m = SpatialMap::empty("pin_placement", *grid);
        for b in g.pins.iter().filter_map(|p| p.bbox.as_ref()) {
            m.mark_shape(b);
        }
        for q in &g.ports {
            match (&q.bbox, q.location) {
                (Some(b), _) => m.mark_shape(b),
                (None, Some(p)) => m.mark_point(p),
                _ => {}
            }
        }
        out.insert("pin_placement".into(), m);
    }
    let signal: Vec<NetId> = (0..g.nets.len())
        .map(|i| NetId(i as u32))
        .filter(|&n| !g.net(n).is_special)
        .collect();
    layer_maps(g, &signal, grid, "", stage, req, &mut out)?;
    Ok(out)
}

/// Clock buffer, sink, pin and routing maps of one clock network.
pub fn render_clock_maps(
    cng: &ClockNetworkGraph,
    g: &NetlistGraph,
    grid: &GridSpec,
    stage: Stage,
    req: &MapRequest,
) -> Result<Maps, RasterError> {
    let mut out = Maps::new();
    let sinks = cng.sink_gates(g);
    let sets = [
        (
            "clock_cell_placement",
            [cng.gates.as_slice(), sinks.as_slice()].concat(),
        ),
        ("clock_cell_placement_combinational", cng.gates.clone()),
        ("clock_cell_placement_sequential", sinks.clone()),
    ];
    for (name, gates) in sets {
        if req.wants(name, stage)? {
            let mut m = SpatialMap::empty(name, *grid);
            for b in gates.iter().filter_map(|&gid| g.gate(gid).bbox.as_ref()) {
                m.mark_shape(b);
            }
            out.insert(name.to_string(), m);
        }
    }
    if req.wants("clock_pin_placement", stage)? {
        let mut m = SpatialMap::empty("clock_pin_placement", *grid);
        for b in cng.pins.iter().filter_map(|&p| g.pin(p).bbox.as_ref()) {
            m.mark_shape(b);
        }
        out.insert("clock_pin_placement".into(), m);
    }
    layer_maps(g, &cng.nets, grid, "clock_", stage, req, &mut out)?;
    Ok(out)
}

/// VDD/VSS routing and voltage-source maps.
pub fn render_pdn_maps(
    pdn: &PdnModel,
    g: &NetlistGraph,
    grid: &GridSpec,
    stage: Stage,
    req: &MapRequest,
) -> Result<Maps, RasterError> {
    let specials = g.nets.iter().any(|n| n.is_special);
    if !specials && pdn.vdd_nets.is_empty() && pdn.vss_nets.is_empty() {
        return Err(RasterError::NoSpecialNets);
    }
    let mut out = Maps::new();
    for (name, nets) in [
        ("pdn_routing_vdd", &pdn.vdd_nets),
        ("pdn_routing_vss", &pdn.vss_nets),
    ] {
        if req.wants(name, stage)? {
            let uniq: HashSet<NetId> = nets.iter().copied().collect();
            let mut m = SpatialMap::empty(name, *grid);
            for &n in &uniq {
                for w in &g.net(n).wires {
                    m.fill_rect(&w.rect);
                }
            }
            out.insert(name.to_string(), m);
        }
    }
    if req.wants("voltage_source", stage)? {
        let mut m = SpatialMap::empty("voltage_source", *grid);
        for &p in &pdn.voltage_sources {
            m.mark_point(p);
        }
        out.insert("voltage_source".into(), m);
    }
    Ok(out)
}
