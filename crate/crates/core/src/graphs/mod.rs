// SPDX-License-Identifier: Apache-2.0

//! Netlist, clock-network and timing-path graphs.

mod clock;
mod netlist;
mod timing;

use thiserror::Error;

pub use self::clock::{extract_clock_network, find_clock_source, ClockNetworkGraph};
pub use self::netlist::{
    build_netlist_graph, hpwl_um, CellCategory, EdgeKind, Gate, GateId, GatePower, LayoutContext,
    Net, NetId, NetlistGraph, NodeId, Pin, PinId, PinTiming, Port, PortId,
};
pub use self::timing::{
    build_timing_path_graph, build_timing_paths, mark_critical, TimingPathGraph, TpgNode,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("instance `{instance}` uses cell `{cell}` found in neither LEF nor Liberty")]
    UnknownCell { instance: String, cell: String },
    #[error("net `{net}` has a dangling connection to `{target}`")]
    DanglingConnection { net: String, target: String },
    #[error("duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("technology has no routing layer with a width")]
    NoRoutingLayer,
    #[error("net `{net}` has no placed pins or ports")]
    NoPlacedEndpoints { net: String },
    #[error("unknown graph node {0}")]
    UnknownNode(String),
    #[error("arc kinds do not alternate on path {path} at `{at}`")]
    NonAlternating { path: String, at: String },
}
