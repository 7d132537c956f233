// SPDX-License-Identifier: Apache-2.0

//! Heterogeneous netlist graph (gates, pins, nets, ports).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::geom::{dbu_to_um, Dbu, Point, Rect};
use crate::interchange::{
    CellCatalog, CheckType, Edge, LayerRect, NetConnection, ParasiticSet, PhysicalNetlist,
    PinDirection, PointKind, SignalUse, StandardCell, TechLibrary, TimingPathRecord,
};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
        )]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(GateId);
id_type!(PinId);
id_type!(NetId);
id_type!(PortId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeId {
    Gate(GateId),
    Pin(PinId),
    Net(NetId),
    Port(PortId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Gate contains pin.
    Contains,
    /// Pin or port attaches to net.
    Connects,
}

/// Exclusive cell bucket used by the cell and area metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellCategory {
    Filler,
    Tap,
    Diode,
    Macro,
    Sequential,
    Buffer,
    Inverter,
    Combinational,
}

impl CellCategory {
    pub const ALL: [CellCategory; 8] = [
        CellCategory::Combinational,
        CellCategory::Sequential,
        CellCategory::Buffer,
        CellCategory::Inverter,
        CellCategory::Filler,
        CellCategory::Tap,
        CellCategory::Diode,
        CellCategory::Macro,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CellCategory::Filler => "filler",
            CellCategory::Tap => "tap",
            CellCategory::Diode => "diode",
            CellCategory::Macro => "macro",
            CellCategory::Sequential => "sequential",
            CellCategory::Buffer => "buffer",
            CellCategory::Inverter => "inverter",
            CellCategory::Combinational => "combinational",
        }
    }

    pub fn parse(s: &str) -> Option<CellCategory> {
        CellCategory::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Classify with precedence filler > tap > diode > macro > sequential >
    /// buffer > inverter > combinational. The LEF class fills in for flags
    /// the Liberty view does not carry.
    pub fn classify(cell: Option<&StandardCell>, lef_class: Option<&str>) -> CellCategory {
        let class = lef_class.unwrap_or("").to_ascii_uppercase();
        let flag = |f: fn(&StandardCell) -> bool| cell.is_some_and(f);
        if flag(|c| c.is_filler) || class.contains("SPACER") {
            CellCategory::Filler
        } else if flag(|c| c.is_tap) || class.contains("WELLTAP") {
            CellCategory::Tap
        } else if flag(|c| c.is_diode) || class.contains("ANTENNACELL") {
            CellCategory::Diode
        } else if class.starts_with("BLOCK")
            || class.starts_with("RING")
            || class.starts_with("PAD")
        {
            CellCategory::Macro
        } else if flag(|c| c.is_sequential) {
            CellCategory::Sequential
        } else if flag(|c| c.is_buffer) {
            CellCategory::Buffer
        } else if flag(|c| c.is_inverter) {
            CellCategory::Inverter
        } else {
            CellCategory::Combinational
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GatePower {
    pub internal_power: Option<f64>,
    pub switching_power: Option<f64>,
    pub leakage_power: Option<f64>,
    pub total_power: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub cell: String,
    pub category: CellCategory,
    /// Placed footprint, DBU.
    pub bbox: Option<Rect>,
    pub no_of_inputs: u32,
    pub no_of_outputs: u32,
    pub pins: Vec<PinId>,
    pub power: GatePower,
    /// mV.
    pub ir_drop_vdd: Option<f64>,
    pub ir_drop_vss: Option<f64>,
}

/// Slews and slacks per check type and transition, ns.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PinTiming {
    pub setup_rise_slew: Option<f64>,
    pub setup_fall_slew: Option<f64>,
    pub hold_rise_slew: Option<f64>,
    pub hold_fall_slew: Option<f64>,
    pub setup_rise_slack: Option<f64>,
    pub setup_fall_slack: Option<f64>,
    pub hold_rise_slack: Option<f64>,
    pub hold_fall_slack: Option<f64>,
}

impl PinTiming {
    fn slot(&mut self, check: CheckType, edge: Edge) -> (&mut Option<f64>, &mut Option<f64>) {
        match (check, edge) {
            (CheckType::Setup, Edge::Rise) => {
                (&mut self.setup_rise_slew, &mut self.setup_rise_slack)
            }
            (CheckType::Setup, Edge::Fall) => {
                (&mut self.setup_fall_slew, &mut self.setup_fall_slack)
            }
            (CheckType::Hold, Edge::Rise) => (&mut self.hold_rise_slew, &mut self.hold_rise_slack),
            (CheckType::Hold, Edge::Fall) => (&mut self.hold_fall_slew, &mut self.hold_fall_slack),
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == PinTiming::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pin {
    /// `instance/pin`.
    pub name: String,
    pub gate: GateId,
    pub net: NetId,
    pub direction: PinDirection,
    /// Placed pin shape union, DBU.
    pub bbox: Option<Rect>,
    pub timing: PinTiming,
    /// fF.
    pub load_capacitance: Option<f64>,
    pub switching_activity: Option<f64>,
    pub is_startpoint: bool,
    pub is_endpoint: bool,
}

impl Pin {
    pub fn pin_name(&self) -> &str {
        self.name.rsplit_once('/').map_or(&self.name, |(_, p)| p)
    }

    pub fn is_sink(&self) -> bool {
        self.direction == PinDirection::Input
    }

    pub fn is_driver(&self) -> bool {
        matches!(self.direction, PinDirection::Output | PinDirection::InOut)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub name: String,
    pub is_special: bool,
    pub signal_use: Option<SignalUse>,
    pub pins: Vec<PinId>,
    pub ports: Vec<PortId>,
    pub no_of_fanouts: u32,
    /// Bounding box of connected pin and port locations, DBU.
    pub bbox: Option<Rect>,
    /// µm.
    pub hpwl: Option<f64>,
    /// Routed center-line length, µm.
    pub length: Option<f64>,
    /// Ohm.
    pub resistance: Option<f64>,
    /// fF.
    pub capacitance: Option<f64>,
    pub total_coupling_capacitance: Option<f64>,
    /// Routed metal, DBU.
    pub wires: Vec<LayerRect>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub direction: PinDirection,
    pub net: Option<NetId>,
    /// DBU.
    pub location: Option<Point>,
    pub bbox: Option<Rect>,
}

/// Coordinate frame shared by every node of one graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LayoutContext {
    pub design: String,
    pub dbu_per_micron: u32,
    pub die_box: Rect,
    pub core_box: Rect,
    /// Metal-1 minimum width in this graph's DBU.
    pub w_m1: Dbu,
    pub routing_layers: Vec<String>,
}

impl LayoutContext {
    pub fn um(&self, v: Dbu) -> f64 {
        dbu_to_um(v, self.dbu_per_micron)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NetlistGraph {
    pub context: LayoutContext,
    pub gates: Vec<Gate>,
    pub pins: Vec<Pin>,
    pub nets: Vec<Net>,
    pub ports: Vec<Port>,
}

/// Half-perimeter of a DBU box, in µm.
pub fn hpwl_um(bbox: &Rect, dbu_per_micron: u32) -> f64 {
    dbu_to_um(bbox.width() + bbox.height(), dbu_per_micron)
}

impl NetlistGraph {
    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn pin(&self, id: PinId) -> &Pin {
        &self.pins[id.index()]
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    pub fn port(&self, id: PortId) -> &Port {
        &self.ports[id.index()]
    }

    pub fn gate_by_name(&self, name: &str) -> Option<GateId> {
        self.gates
            .iter()
            .position(|g| g.name == name)
            .map(|i| GateId(i as u32))
    }

    pub fn net_by_name(&self, name: &str) -> Option<NetId> {
        self.nets
            .iter()
            .position(|n| n.name == name)
            .map(|i| NetId(i as u32))
    }

    pub fn port_by_name(&self, name: &str) -> Option<PortId> {
        self.ports
            .iter()
            .position(|p| p.name == name)
            .map(|i| PortId(i as u32))
    }

    /// Name lookup tables for pins and ports.
    pub fn pin_index(&self) -> HashMap<&str, PinId> {
        self.pins
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.as_str(), PinId(i as u32)))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty() && self.nets.is_empty() && self.ports.is_empty()
    }

    /// All edges, gate-pin containment first, then pin-net and port-net.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, EdgeKind)> {
        let mut out = Vec::new();
        for (gi, g) in self.gates.iter().enumerate() {
            for &p in &g.pins {
                out.push((
                    NodeId::Gate(GateId(gi as u32)),
                    NodeId::Pin(p),
                    EdgeKind::Contains,
                ));
            }
        }
        for (pi, p) in self.pins.iter().enumerate() {
            out.push((
                NodeId::Pin(PinId(pi as u32)),
                NodeId::Net(p.net),
                EdgeKind::Connects,
            ));
        }
        for (qi, q) in self.ports.iter().enumerate() {
            if let Some(n) = q.net {
                out.push((
                    NodeId::Port(PortId(qi as u32)),
                    NodeId::Net(n),
                    EdgeKind::Connects,
                ));
            }
        }
        out
    }

    /// Locations of a net's pins (box centers) and ports, DBU.
    pub fn net_points(&self, id: NetId) -> Vec<Point> {
        let net = self.net(id);
        let pins = net
            .pins
            .iter()
            .filter_map(|&p| self.pin(p).bbox.map(|b| b.center()));
        let ports = net.ports.iter().filter_map(|&q| self.port(q).location);
        pins.chain(ports).collect()
    }

    /// HPWL in µm over placed pins and ports.
    pub fn net_hpwl(&self, id: NetId) -> Result<f64, GraphError> {
        let bbox =
            Rect::bounding(self.net_points(id)).ok_or_else(|| GraphError::NoPlacedEndpoints {
                net: self.net(id).name.clone(),
            })?;
        Ok(hpwl_um(&bbox, self.context.dbu_per_micron))
    }

    /// Fill per-pin slews, slacks, load capacitances and start/end flags from
    /// STA paths. Worst (largest) slew and worst (smallest) slack win.
    pub fn annotate_timing(&mut self, records: &[TimingPathRecord]) {
        let index: HashMap<String, PinId> = self
            .pins
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), PinId(i as u32)))
            .collect();
        for rec in records {
            let mut prev: Option<PinId> = None;
            for (k, pt) in rec.points.iter().enumerate() {
                let id = index.get(&pt.pin).copied();
                if let Some(id) = id {
                    let pin = &mut self.pins[id.index()];
                    let (slew, slack) = pin.timing.slot(rec.check_type, pt.edge);
                    if let Some(s) = pt.slew {
                        *slew = Some(slew.map_or(s, |v: f64| v.max(s)));
                    }
                    *slack = Some(slack.map_or(rec.slack, |v: f64| v.min(rec.slack)));
                    if k == 0 {
                        pin.is_startpoint = true;
                    }
                    if k + 1 == rec.points.len() {
                        pin.is_endpoint = true;
                    }
                }
                if pt.kind == PointKind::NetArc {
                    if let (Some(d), Some(c)) = (prev, pt.capacitance) {
                        let load = &mut self.pins[d.index()].load_capacitance;
                        *load = Some(load.map_or(c, |v: f64| v.max(c)));
                    }
                }
                prev = id;
            }
        }
    }

    /// Attach per-net parasitics; unknown net names are returned.
    pub fn annotate_parasitics(&mut self, rc: &ParasiticSet) -> Vec<String> {
        let mut unknown = Vec::new();
        let index: HashMap<String, usize> = self
            .nets
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.clone(), i))
            .collect();
        for (name, p) in &rc.nets {
            match index.get(name) {
                Some(&i) => {
                    let n = &mut self.nets[i];
                    n.resistance = Some(p.total_resistance);
                    n.capacitance = Some(p.total_capacitance);
                    n.total_coupling_capacitance = Some(p.total_coupling_capacitance);
                }
                None => unknown.push(name.clone()),
            }
        }
        unknown
    }
}

/// Build the netlist graph from a parsed design.
///
/// Every non-wildcard net connection becomes one pin node. Geometry is taken
/// from whatever the DEF provides; stage windows are applied by the caller.
pub fn build_netlist_graph(
    pn: &PhysicalNetlist,
    tech: &TechLibrary,
    cat: &CellCatalog,
) -> Result<NetlistGraph, GraphError> {
    let dbu = pn.dbu_per_micron;
    let w_m1 = tech
        .w_m1()
        .map(|w| tech.rescale(w, dbu))
        .ok_or(GraphError::NoRoutingLayer)?;
    let mut g = NetlistGraph {
        context: LayoutContext {
            design: pn.design.clone(),
            dbu_per_micron: dbu,
            die_box: pn.die_box,
            core_box: pn.core_box,
            w_m1,
            routing_layers: tech.routing_layers().map(|l| l.name.clone()).collect(),
        },
        ..Default::default()
    };

    let mut gate_index: HashMap<&str, GateId> = HashMap::with_capacity(pn.components.len());
    for c in &pn.components {
        let mac = tech.macros.get(&c.cell);
        let lib = cat.get(&c.cell);
        if mac.is_none() && lib.is_none() {
            return Err(GraphError::UnknownCell {
                instance: c.name.clone(),
                cell: c.cell.clone(),
            });
        }
        let bbox = match (c.origin, mac) {
            (Some(o), Some(m)) if c.status.is_placed() => Some(c.orient.footprint(
                tech.rescale(m.width, dbu),
                tech.rescale(m.height, dbu),
                o,
            )),
            _ => None,
        };
        let id = GateId(g.gates.len() as u32);
        if gate_index.insert(c.name.as_str(), id).is_some() {
            return Err(GraphError::DuplicateName {
                kind: "gate",
                name: c.name.clone(),
            });
        }
        g.gates.push(Gate {
            name: c.name.clone(),
            cell: c.cell.clone(),
            category: CellCategory::classify(lib, mac.and_then(|m| m.class.as_deref())),
            bbox,
            no_of_inputs: 0,
            no_of_outputs: 0,
            pins: Vec::new(),
            power: GatePower::default(),
            ir_drop_vdd: None,
            ir_drop_vss: None,
        });
    }

    let mut port_index: HashMap<&str, PortId> = HashMap::with_capacity(pn.ports.len());
    for p in &pn.ports {
        let shapes = p.placed_shapes();
        let bbox = shapes.iter().map(|s| s.rect).reduce(|a, b| a.union(&b));
        port_index.insert(p.name.as_str(), PortId(g.ports.len() as u32));
        g.ports.push(Port {
            name: p.name.clone(),
            direction: p.direction,
            net: None,
            location: if p.status.is_placed() {
                p.location()
            } else {
                None
            },
            bbox: if p.status.is_placed() { bbox } else { None },
        });
    }

    let mut seen_pins: HashMap<String, NetId> = HashMap::new();
    for rn in &pn.nets {
        let net_id = NetId(g.nets.len() as u32);
        let mut net = Net {
            name: rn.name.clone(),
            is_special: rn.is_special,
            signal_use: rn.signal_use,
            pins: Vec::new(),
            ports: Vec::new(),
            no_of_fanouts: 0,
            bbox: None,
            hpwl: None,
            length: None,
            resistance: None,
            capacitance: None,
            total_coupling_capacitance: None,
            wires: rn
                .segments
                .iter()
                .map(|s| LayerRect {
                    layer: s.layer.clone(),
                    rect: s.rect(),
                })
                .collect(),
        };
        if !rn.segments.is_empty() {
            net.length = Some(dbu_to_um(rn.routed_length(), dbu));
        }
        for conn in &rn.connections {
            match conn {
                NetConnection::Global(_) => {}
                NetConnection::Port(name) => {
                    let &q = port_index.get(name.as_str()).ok_or_else(|| {
                        GraphError::DanglingConnection {
                            net: rn.name.clone(),
                            target: format!("PIN {name}"),
                        }
                    })?;
                    let port = &mut g.ports[q.index()];
                    if port.net.is_some_and(|n| n != net_id) {
                        return Err(GraphError::DuplicateName {
                            kind: "port connection",
                            name: name.clone(),
                        });
                    }
                    port.net = Some(net_id);
                    if !net.ports.contains(&q) {
                        net.ports.push(q);
                        if port.direction == PinDirection::Output {
                            net.no_of_fanouts += 1;
                        }
                    }
                }
                NetConnection::Instance { instance, pin } => {
                    let &gid = gate_index.get(instance.as_str()).ok_or_else(|| {
                        GraphError::DanglingConnection {
                            net: rn.name.clone(),
                            target: format!("{instance}/{pin}"),
                        }
                    })?;
                    let comp = &pn.components[gid.index()];
                    let mac = tech.macros.get(&comp.cell);
                    let lib_cell = cat.get(&comp.cell);
                    let mac_pin = mac.and_then(|m| m.pins.get(pin));
                    let lib_pin = lib_cell.and_then(|c| c.pin(pin));
                    let direction = match (lib_pin, mac_pin) {
                        (Some(lp), _) => lp.direction,
                        (None, Some(mp)) => mp.direction,
                        (None, None) => {
                            return Err(GraphError::DanglingConnection {
                                net: rn.name.clone(),
                                target: format!("{instance}/{pin}"),
                            })
                        }
                    };
                    let full = format!("{instance}/{pin}");
                    if let Some(prev) = seen_pins.insert(full.clone(), net_id) {
                        if prev == net_id {
                            continue;
                        }
                        return Err(GraphError::DuplicateName {
                            kind: "pin connection",
                            name: full,
                        });
                    }
                    let bbox = match (comp.origin, mac, mac_pin.and_then(|mp| mp.bbox())) {
                        (Some(o), Some(m), Some(r)) if comp.status.is_placed() => {
                            let r = Rect::new(
                                tech.rescale(r.x0, dbu),
                                tech.rescale(r.y0, dbu),
                                tech.rescale(r.x1, dbu),
                                tech.rescale(r.y1, dbu),
                            );
                            Some(comp.orient.place_rect(
                                &r,
                                tech.rescale(m.width, dbu),
                                tech.rescale(m.height, dbu),
                                o,
                            ))
                        }
                        _ => g.gates[gid.index()].bbox.map(|b| {
                            let c = b.center();
                            Rect::new(c.x, c.y, c.x, c.y)
                        }),
                    };
                    let pid = PinId(g.pins.len() as u32);
                    let gate = &mut g.gates[gid.index()];
                    gate.pins.push(pid);
                    match direction {
                        PinDirection::Input => gate.no_of_inputs += 1,
                        PinDirection::Output => gate.no_of_outputs += 1,
                        _ => {}
                    }
                    if direction == PinDirection::Input {
                        net.no_of_fanouts += 1;
                    }
                    net.pins.push(pid);
                    g.pins.push(Pin {
                        name: full,
                        gate: gid,
                        net: net_id,
                        direction,
                        bbox,
                        timing: PinTiming::default(),
                        load_capacitance: None,
                        switching_activity: None,
                        is_startpoint: false,
                        is_endpoint: false,
                    });
                }
            }
        }
        g.nets.push(net);
    }

    for i in 0..g.nets.len() {
        let id = NetId(i as u32);
        if let Some(b) = Rect::bounding(g.net_points(id)) {
            g.nets[i].bbox = Some(b);
            g.nets[i].hpwl = Some(hpwl_um(&b, dbu));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_precedence() {
        let mut c = StandardCell {
            is_sequential: true,
            is_buffer: true,
            ..Default::default()
        };
        assert_eq!(
            CellCategory::classify(Some(&c), Some("CORE")),
            CellCategory::Sequential
        );
        c.is_filler = true;
        assert_eq!(CellCategory::classify(Some(&c), None), CellCategory::Filler);
        assert_eq!(
            CellCategory::classify(None, Some("CORE WELLTAP")),
            CellCategory::Tap
        );
        assert_eq!(
            CellCategory::classify(None, Some("BLOCK")),
            CellCategory::Macro
        );
        assert_eq!(
            CellCategory::classify(None, None),
            CellCategory::Combinational
        );
    }

    #[test]
    fn hpwl_of_two_points() {
        let mut g = NetlistGraph {
            context: LayoutContext {
                dbu_per_micron: 1000,
                ..Default::default()
            },
            ..Default::default()
        };
        g.ports = vec![
            Port {
                name: "a".into(),
                direction: PinDirection::Input,
                net: Some(NetId(0)),
                location: Some(Point::new(0, 0)),
                bbox: None,
            },
            Port {
                name: "b".into(),
                direction: PinDirection::Output,
                net: Some(NetId(0)),
                location: Some(Point::new(3000, 4000)),
                bbox: None,
            },
        ];
        g.nets.push(Net {
            name: "n".into(),
            is_special: false,
            signal_use: None,
            pins: vec![],
            ports: vec![PortId(0), PortId(1)],
            no_of_fanouts: 1,
            bbox: None,
            hpwl: None,
            length: None,
            resistance: None,
            capacitance: None,
            total_coupling_capacitance: None,
            wires: vec![],
        });
        assert_eq!(g.net_hpwl(NetId(0)).unwrap(), 7.0);
        g.nets[0].ports.truncate(1);
        assert_eq!(g.net_hpwl(NetId(0)).unwrap(), 0.0);
        g.nets[0].ports.clear();
        assert!(matches!(
            g.net_hpwl(NetId(0)),
            Err(GraphError::NoPlacedEndpoints { .. })
        ));
    }
}
