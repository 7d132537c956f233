// SPDX-License-Identifier: Apache-2.0

//! Stage windows of every staged attribute.

use serde::{Deserialize, Serialize};

use super::{SchemaError, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub first: Stage,
    pub last: Stage,
}

impl Window {
    pub const fn from(first: Stage) -> Window {
        Window {
            first,
            last: Stage::Final,
        }
    }

    pub fn contains(&self, s: Stage) -> bool {
        self.first <= s && s <= self.last
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.first == self.last {
            write!(f, "{}", self.first.abbrev())
        } else {
            write!(f, "{} - {}", self.first.abbrev(), self.last.abbrev())
        }
    }
}

use Stage::*;

const FP: Window = Window::from(Floorplan);
const GP: Window = Window::from(GlobalPlace);
const CTS: Window = Window::from(Cts);
const DR: Window = Window::from(DetailedRoute);
const F_ONLY: Window = Window {
    first: Final,
    last: Final,
};

/// `entity.attribute` keys and their windows. Flow, constraint and standard
/// cell attributes are stage independent and not listed.
pub const ATTRIBUTES: &[(&str, Window)] = &[
    ("netlist.width", FP),
    ("netlist.height", FP),
    ("netlist.no_of_inputs", FP),
    ("netlist.no_of_outputs", FP),
    ("netlist.no_of_cells", FP),
    ("netlist.no_of_nets", FP),
    ("netlist.no_of_pins", FP),
    ("netlist.utilization", FP),
    ("netlist.total_wirelength", DR),
    ("netlist.total_hpwl", FP),
    ("netlist.cell_placement", GP),
    ("netlist.cell_placement_combinational", GP),
    ("netlist.cell_placement_sequential", GP),
    ("netlist.cell_placement_filler", F_ONLY),
    ("netlist.pin_placement", GP),
    ("netlist.routing", DR),
    ("netlist.routing_by_metal_layers", DR),
    ("clock_tree.clock_source", FP),
    ("clock_tree.no_of_buffers", CTS),
    ("clock_tree.no_of_clock_sinks", CTS),
    ("clock_tree.cell_placement", CTS),
    ("clock_tree.cell_placement_combinational", CTS),
    ("clock_tree.cell_placement_sequential", CTS),
    ("clock_tree.pin_placement", CTS),
    ("clock_tree.routing", DR),
    ("clock_tree.routing_by_metal", DR),
    ("pdn.pdn_routing_vdd", FP),
    ("pdn.pdn_routing_vss", FP),
    ("pdn.voltage_source", FP),
    ("pdn.ir_drop_vdd", DR),
    ("pdn.ir_drop_vss", DR),
    ("pdn.em_vdd", DR),
    ("pdn.em_vss", DR),
    ("port.name", FP),
    ("port.direction", FP),
    ("port.x", GP),
    ("port.y", GP),
    ("gate.name", FP),
    ("gate.standard_cell", FP),
    ("gate.x_min", GP),
    ("gate.y_min", GP),
    ("gate.x_max", GP),
    ("gate.y_max", GP),
    ("gate.no_of_inputs", FP),
    ("gate.no_of_outputs", FP),
    ("gate.internal_power", FP),
    ("gate.switching_power", FP),
    ("gate.leakage_power", FP),
    ("gate.total_power", FP),
    ("gate.ir_drop_vdd", DR),
    ("gate.ir_drop_vss", DR),
    ("net.name", FP),
    ("net.is_special_net", FP),
    ("net.no_of_fanouts", FP),
    ("net.x_min", GP),
    ("net.y_min", GP),
    ("net.x_max", GP),
    ("net.y_max", GP),
    ("net.length", DR),
    ("net.hpwl", GP),
    ("net.resistance", DR),
    ("net.capacitance", DR),
    ("net.total_coupling_capacitance", DR),
    ("pin.name", FP),
    ("pin.direction", FP),
    ("pin.x_min", GP),
    ("pin.y_min", GP),
    ("pin.x_max", GP),
    ("pin.y_max", GP),
    ("pin.is_startpoint", FP),
    ("pin.is_endpoint", FP),
    ("pin.setup_rise_slew", FP),
    ("pin.setup_fall_slew", FP),
    ("pin.hold_rise_slew", FP),
    ("pin.hold_fall_slew", FP),
    ("pin.setup_rise_slack", FP),
    ("pin.setup_fall_slack", FP),
    ("pin.hold_rise_slack", FP),
    ("pin.hold_fall_slack", FP),
    ("pin.load_capacitance", FP),
    ("pin.switching_activity", FP),
    ("timing_path.startpoint", FP),
    ("timing_path.endpoint", FP),
    ("timing_path.path_type", FP),
    ("timing_path.arrival_time", FP),
    ("timing_path.required_time", FP),
    ("timing_path.slack", FP),
    ("timing_path.no_of_pins", FP),
    ("timing_path.is_critical_path", FP),
    ("cell_arc.gate", FP),
    ("cell_arc.delay", FP),
    ("cell_arc.arrival_time", FP),
    ("cell_arc.slew", FP),
    ("net_arc.net", FP),
    ("net_arc.delay", FP),
    ("net_arc.arrival_time", FP),
    ("net_arc.slew", FP),
    ("net_arc.capacitance", FP),
    ("cell_metrics", FP),
    ("area_metrics", FP),
    ("power_metrics", FP),
    ("timing_metrics", FP),
    ("routability.rudy_net", DR),
    ("routability.rudy_net_long", DR),
    ("routability.rudy_net_short", DR),
    ("routability.rudy_pin", DR),
];

pub fn window(attribute: &str) -> Option<Window> {
    ATTRIBUTES
        .iter()
        .find(|(k, _)| *k == attribute)
        .map(|(_, w)| *w)
}

/// Ok when `attribute` may be present at `stage`.
pub fn check(attribute: &str, stage: Stage) -> Result<(), SchemaError> {
    let w =
        window(attribute).ok_or_else(|| SchemaError::UnknownAttribute(attribute.to_string()))?;
    if w.contains(stage) {
        Ok(())
    } else {
        Err(SchemaError::Unavailable {
            attribute: attribute.to_string(),
            stage,
            window: w,
        })
    }
}

/// Attribute key for a stored map name.
pub fn map_attribute(name: &str) -> Option<String> {
    let key = if let Some(rest) = name.strip_prefix("clock_") {
        if rest.starts_with("routing_") {
            "clock_tree.routing_by_metal".to_string()
        } else {
            format!("clock_tree.{rest}")
        }
    } else if name.starts_with("rudy_") {
        format!("routability.{name}")
    } else if name.starts_with("pdn_")
        || name == "voltage_source"
        || name.starts_with("ir_drop_")
        || name.starts_with("em_")
    {
        format!("pdn.{name}")
    } else if name.starts_with("routing_") {
        "netlist.routing_by_metal_layers".to_string()
    } else {
        format!("netlist.{name}")
    };
    window(&key).map(|_| key)
}

pub fn map_window(name: &str) -> Option<Window> {
    map_attribute(name).and_then(|k| window(&k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_match_table() {
        assert!(check("net.resistance", Stage::Floorplan).is_err());
        assert!(check("net.resistance", Stage::DetailedRoute).is_ok());
        assert!(check("clock_tree.no_of_buffers", Stage::DetailedPlace).is_err());
        assert!(check("clock_tree.no_of_buffers", Stage::Cts).is_ok());
        assert!(check("netlist.cell_placement_filler", Stage::DetailedRoute).is_err());
        assert!(check("netlist.cell_placement_filler", Stage::Final).is_ok());
        assert!(matches!(
            check("bogus", Stage::Final),
            Err(SchemaError::UnknownAttribute(_))
        ));
    }

    #[test]
    fn map_names_resolve() {
        assert_eq!(map_window("routing_metal3"), Some(DR));
        assert_eq!(map_window("clock_routing_metal3"), Some(DR));
        assert_eq!(map_window("clock_pin_placement"), Some(CTS));
        assert_eq!(map_window("pin_placement"), Some(GP));
        assert_eq!(map_window("voltage_source"), Some(FP));
        assert_eq!(map_window("em_vss"), Some(DR));
        assert_eq!(map_window("rudy_pin"), Some(DR));
        assert_eq!(map_window("nope"), None);
    }
}
