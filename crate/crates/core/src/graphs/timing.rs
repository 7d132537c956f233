// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::netlist::{GateId, NetId, NetlistGraph, PinId, PortId};
use super::GraphError;
use crate::interchange::{CheckType, Edge, PointKind, TimingPathRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TpgNode {
    Pin {
        name: String,
        pin: Option<PinId>,
        edge: Edge,
    },
    Port {
        name: String,
        port: Option<PortId>,
        edge: Edge,
    },
    CellArc {
        gate: Option<GateId>,
        delay: f64,
        arrival: f64,
        slew: Option<f64>,
    },
    NetArc {
        net: Option<NetId>,
        delay: f64,
        arrival: f64,
        slew: Option<f64>,
        /// fF.
        capacitance: Option<f64>,
    },
}

impl TpgNode {
    pub fn is_arc(&self) -> bool {
        matches!(self, TpgNode::CellArc { .. } | TpgNode::NetArc { .. })
    }

    pub fn arrival(&self) -> Option<f64> {
        match self {
            TpgNode::CellArc { arrival, .. } | TpgNode::NetArc { arrival, .. } => Some(*arrival),
            _ => None,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            TpgNode::Pin { name, .. } | TpgNode::Port { name, .. } => Some(name),
            _ => None,
        }
    }
}

/// One timing path as an alternating sequence of pin/port nodes and arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingPathGraph {
    pub startpoint: String,
    pub endpoint: String,
    pub path_type: CheckType,
    pub arrival_time: f64,
    pub required_time: f64,
    pub slack: f64,
    pub no_of_pins: u32,
    pub is_critical_path: bool,
    /// Number of pin/port names not found in the netlist graph.
    pub unresolved: u32,
    /// Arrival time of the startpoint pin itself.
    pub start_arrival: f64,
    pub nodes: Vec<TpgNode>,
}

impl TimingPathGraph {
    /// Pin/port names along the path.
    pub fn pin_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().filter_map(TpgNode::name)
    }

    /// `(driver, sink, arc)` triples in path order.
    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str, &TpgNode)> {
        self.nodes
            .windows(3)
            .step_by(2)
            .filter_map(|w| Some((w[0].name()?, w[2].name()?, &w[1])))
    }

    /// Arrival times at each pin in order.
    pub fn arrivals(&self) -> Vec<f64> {
        std::iter::once(self.start_arrival)
            .chain(self.nodes.iter().filter_map(TpgNode::arrival))
            .collect()
    }
}

fn net_between(
    g: &NetlistGraph,
    a: Option<PinId>,
    b: Option<PinId>,
    pa: Option<PortId>,
    pb: Option<PortId>,
) -> Option<NetId> {
    let of_pin = |p: Option<PinId>| p.map(|p| g.pin(p).net);
    let of_port = |q: Option<PortId>| q.and_then(|q| g.port(q).net);
    let na = of_pin(a).or_else(|| of_port(pa));
    let nb = of_pin(b).or_else(|| of_port(pb));
    match (na, nb) {
        (Some(x), Some(y)) if x == y => Some(x),
        (Some(x), None) | (None, Some(x)) => Some(x),
        _ => None,
    }
}

pub fn build_timing_path_graph(
    rec: &TimingPathRecord,
    g: &NetlistGraph,
) -> Result<TimingPathGraph, GraphError> {
    let pins = g.pin_index();
    build_with_index(rec, g, &pins)
}

fn build_with_index(
    rec: &TimingPathRecord,
    g: &NetlistGraph,
    pins: &HashMap<&str, PinId>,
) -> Result<TimingPathGraph, GraphError> {
    let mut nodes = Vec::with_capacity(rec.points.len() * 2);
    let mut unresolved = 0u32;
    let mut last_arc: Option<PointKind> = None;
    let mut prev: (Option<PinId>, Option<PortId>) = (None, None);
    for (k, pt) in rec.points.iter().enumerate() {
        let is_port = pt.instance().is_none();
        let (pin, port) = if is_port {
            (None, g.port_by_name(&pt.pin))
        } else {
            (pins.get(pt.pin.as_str()).copied(), None)
        };
        if pin.is_none() && port.is_none() {
            unresolved += 1;
        }
        if k > 0 {
            if last_arc == Some(pt.kind) {
                return Err(GraphError::NonAlternating {
                    path: format!("{} -> {}", rec.startpoint, rec.endpoint),
                    at: pt.pin.clone(),
                });
            }
            let arc = match pt.kind {
                PointKind::CellArc => TpgNode::CellArc {
                    gate: pin.map(|p| g.pin(p).gate),
                    delay: pt.delay,
                    arrival: pt.arrival,
                    slew: pt.slew,
                },
                PointKind::NetArc | PointKind::Startpoint => TpgNode::NetArc {
                    net: net_between(g, prev.0, pin, prev.1, port),
                    delay: pt.delay,
                    arrival: pt.arrival,
                    slew: pt.slew,
                    capacitance: pt.capacitance,
                },
            };
            last_arc = Some(pt.kind);
            nodes.push(arc);
        }
        nodes.push(if is_port {
            TpgNode::Port {
                name: pt.pin.clone(),
                port,
                edge: pt.edge,
            }
        } else {
            TpgNode::Pin {
                name: pt.pin.clone(),
                pin,
                edge: pt.edge,
            }
        });
        prev = (pin, port);
    }
    Ok(TimingPathGraph {
        startpoint: rec.startpoint.clone(),
        endpoint: rec.endpoint.clone(),
        path_type: rec.check_type,
        arrival_time: rec.arrival_time,
        required_time: rec.required_time,
        slack: rec.slack,
        no_of_pins: rec.points.len() as u32,
        is_critical_path: false,
        unresolved,
        start_arrival: rec.points.first().map_or(0.0, |p| p.arrival),
        nodes,
    })
}

/// Build every path and flag the minimum-slack path(s) per check type.
pub fn build_timing_paths(
    records: &[TimingPathRecord],
    g: &NetlistGraph,
) -> Result<Vec<TimingPathGraph>, GraphError> {
    let pins = g.pin_index();
    let mut out = records
        .iter()
        .map(|r| build_with_index(r, g, &pins))
        .collect::<Result<Vec<_>, _>>()?;
    mark_critical(&mut out);
    Ok(out)
}

/// Set `is_critical_path` on every path whose slack equals its check type's minimum.
pub fn mark_critical(paths: &mut [TimingPathGraph]) {
    for check in [CheckType::Setup, CheckType::Hold] {
        let min = paths
            .iter()
            .filter(|p| p.path_type == check)
            .map(|p| p.slack)
            .fold(f64::INFINITY, f64::min);
        for p in paths.iter_mut().filter(|p| p.path_type == check) {
            p.is_critical_path = p.slack == min;
        }
    }
}
