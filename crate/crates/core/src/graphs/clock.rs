// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::netlist::{CellCategory, GateId, NetId, NetlistGraph, NodeId, PinId};
use super::GraphError;
use crate::interchange::{CellCatalog, PinDirection, SignalUse};

/// Clock fan-out cone of one source, as id lists into the parent netlist graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClockNetworkGraph {
    pub clock_source: Option<NodeId>,
    pub source_name: String,
    /// Clock buffers and inverters.
    pub gates: Vec<GateId>,
    pub pins: Vec<PinId>,
    pub nets: Vec<NetId>,
    /// Clock pins of the sequential cells reached.
    pub sinks: Vec<PinId>,
    pub no_of_buffers: u32,
    pub no_of_clock_sinks: u32,
}

impl ClockNetworkGraph {
    pub fn is_empty(&self) -> bool {
        self.sinks.is_empty()
    }

    /// Gates owning the sink pins, deduplicated in sink order.
    pub fn sink_gates(&self, g: &NetlistGraph) -> Vec<GateId> {
        let mut seen = HashSet::new();
        self.sinks
            .iter()
            .map(|&p| g.pin(p).gate)
            .filter(|gid| seen.insert(*gid))
            .collect()
    }
}

/// Pick the clock source: an explicit port or pin name, else the first port
/// on a `USE CLOCK` net, else a port whose name looks like a clock.
pub fn find_clock_source(g: &NetlistGraph, hint: Option<&str>) -> Option<NodeId> {
    if let Some(name) = hint {
        if let Some(q) = g.port_by_name(name) {
            return Some(NodeId::Port(q));
        }
        return g.pin_index().get(name).map(|&p| NodeId::Pin(p));
    }
    let on_clock_net = g.ports.iter().position(|p| {
        p.net
            .is_some_and(|n| g.net(n).signal_use == Some(SignalUse::Clock))
    });
    let by_name = || {
        g.ports.iter().position(|p| {
            let n = p.name.to_ascii_lowercase();
            p.direction == PinDirection::Input && (n == "clk" || n == "clock" || n.contains("clk"))
        })
    };
    on_clock_net
        .or_else(by_name)
        .map(|i| NodeId::Port(super::netlist::PortId(i as u32)))
}

/// Breadth-first walk through clock buffers and inverters from `source`.
pub fn extract_clock_network(
    g: &NetlistGraph,
    source: NodeId,
    cat: &CellCatalog,
) -> Result<ClockNetworkGraph, GraphError> {
    let (start_net, source_name) = match source {
        NodeId::Port(q) if q.index() < g.ports.len() => (g.port(q).net, g.port(q).name.clone()),
        NodeId::Pin(p) if p.index() < g.pins.len() => (Some(g.pin(p).net), g.pin(p).name.clone()),
        other => return Err(GraphError::UnknownNode(format!("{other:?}"))),
    };
    let mut cng = ClockNetworkGraph {
        clock_source: Some(source),
        source_name,
        ..Default::default()
    };
    if let NodeId::Pin(p) = source {
        cng.pins.push(p);
    }
    let mut seen_nets = HashSet::new();
    let mut seen_gates = HashSet::new();
    let mut queue: VecDeque<NetId> = start_net.into_iter().collect();
    while let Some(nid) = queue.pop_front() {
        if !seen_nets.insert(nid) {
            continue;
        }
        cng.nets.push(nid);
        for &pid in &g.net(nid).pins {
            let pin = g.pin(pid);
            if !pin.is_sink() {
                continue;
            }
            let gate = g.gate(pin.gate);
            match gate.category {
                CellCategory::Buffer | CellCategory::Inverter => {
                    cng.pins.push(pid);
                    if seen_gates.insert(pin.gate) {
                        cng.gates.push(pin.gate);
                        for &out in &gate.pins {
                            if g.pin(out).is_driver() {
                                cng.pins.push(out);
                                queue.push_back(g.pin(out).net);
                            }
                        }
                    }
                }
                CellCategory::Sequential => {
                    let is_clock = cat
                        .get(&gate.cell)
                        .and_then(|c| c.pin(pin.pin_name()))
                        .is_some_and(|lp| lp.is_clock);
                    if is_clock {
                        cng.pins.push(pid);
                        cng.sinks.push(pid);
                    }
                }
                _ => {}
            }
        }
    }
    cng.no_of_buffers = cng.gates.len() as u32;
    cng.no_of_clock_sinks = cng.sinks.len() as u32;
    if cng.is_empty() {
        log::warn!(
            "clock source `{}` reaches no sequential sinks",
            cng.source_name
        );
    }
    Ok(cng)
}
