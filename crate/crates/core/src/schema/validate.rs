// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::availability::{map_window, window};
use super::{Stage, StageSnapshot};
use crate::geom::Rect;
use crate::graphs::TpgNode;
use crate::raster::GridSpec;

/// One invariant breach, located by entity path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

struct Sink(Vec<Violation>);

impl Sink {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    fn require(&mut self, ok: bool, path: impl Into<String>, message: impl FnOnce() -> String) {
        if !ok {
            self.push(path, message());
        }
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn ordered(r: &Rect) -> bool {
    r.x0 <= r.x1 && r.y0 <= r.y1
}

fn open(attr: &str, stage: Stage) -> bool {
    window(attr).is_some_and(|w| w.contains(stage))
}

fn grid_ok(g: &GridSpec) -> bool {
    let p = g.pitch();
    p > 0 && g.nx == ((g.l + p - 1) / p) as usize && g.ny == ((g.w + p - 1) / p) as usize
}

/// Every invariant breach in `s`; empty means valid.
pub fn validate_snapshot(s: &StageSnapshot) -> Vec<Violation> {
    let mut v = Sink(Vec::new());
    let st = s.stage;
    let g = &s.netlist;
    let m = &s.metrics;

    // metric identities
    v.require(
        m.cell.no_of_total_cells == m.cell.bucket_sum(),
        "CellMetrics.no_of_total_cells",
        || {
            format!(
                "total {} != bucket sum {}",
                m.cell.no_of_total_cells,
                m.cell.bucket_sum()
            )
        },
    );
    v.require(
        m.cell.no_of_total_cells == g.gates.len() as u64,
        "CellMetrics.no_of_total_cells",
        || {
            format!(
                "total {} != gate count {}",
                m.cell.no_of_total_cells,
                g.gates.len()
            )
        },
    );
    v.require(
        close(m.area.cell_area, m.area.bucket_sum(), 1e-9),
        "AreaMetrics.cell_area",
        || {
            format!(
                "cell_area {} != category sum {}",
                m.area.cell_area,
                m.area.bucket_sum()
            )
        },
    );
    v.require(
        m.area.total_area >= m.area.cell_area,
        "AreaMetrics.total_area",
        || {
            format!(
                "total_area {} < cell_area {}",
                m.area.total_area, m.area.cell_area
            )
        },
    );
    if let Some(p) = &m.power {
        if let (Some(t), Some(i), Some(sw), Some(l)) = (
            p.total_power,
            p.internal_power,
            p.switching_power,
            p.leakage_power,
        ) {
            let sum = i + sw + l;
            v.require(
                (t - sum).abs() <= 0.01 * t.abs().max(sum.abs()),
                "PowerMetrics.total_power",
                || {
                    format!(
                        "total {t} differs from internal+switching+leakage {sum} by more than 1%"
                    )
                },
            );
        }
    }
    if let Some(t) = &m.timing {
        v.require(
            t.total_negative_slack <= 0.0,
            "TimingMetrics.total_negative_slack",
            || format!("TNS {} is positive", t.total_negative_slack),
        );
        v.require(
            (t.total_negative_slack == 0.0) == (t.worst_slack >= 0.0),
            "TimingMetrics.total_negative_slack",
            || {
                format!(
                    "TNS {} inconsistent with worst slack {}",
                    t.total_negative_slack, t.worst_slack
                )
            },
        );
        v.require(
            t.no_of_violating_endpoints <= t.no_of_endpoints,
            "TimingMetrics.no_of_violating_endpoints",
            || {
                format!(
                    "{} violating > {} endpoints",
                    t.no_of_violating_endpoints, t.no_of_endpoints
                )
            },
        );
    }

    // availability windows
    let geo = open("gate.x_min", st);
    for (i, gate) in g.gates.iter().enumerate() {
        let path = || format!("netlist.gates[{i}]");
        if let Some(b) = &gate.bbox {
            v.require(geo, path(), || format!("placement present at {st}"));
            v.require(ordered(b), path(), || "box min exceeds max".into());
        }
        if gate.ir_drop_vdd.is_some() || gate.ir_drop_vss.is_some() {
            v.require(open("gate.ir_drop_vdd", st), path(), || {
                format!("IR drop present at {st}")
            });
        }
    }
    for (i, pin) in g.pins.iter().enumerate() {
        if let Some(b) = &pin.bbox {
            v.require(geo, format!("netlist.pins[{i}]"), || {
                format!("pin box present at {st}")
            });
            v.require(ordered(b), format!("netlist.pins[{i}]"), || {
                "box min exceeds max".into()
            });
        }
        v.require(
            pin.gate.index() < g.gates.len() && pin.net.index() < g.nets.len(),
            format!("netlist.pins[{i}]"),
            || "dangling gate or net id".into(),
        );
    }
    for (i, port) in g.ports.iter().enumerate() {
        v.require(
            port.location.is_none() || open("port.x", st),
            format!("netlist.ports[{i}]"),
            || format!("port location present at {st}"),
        );
    }
    for (i, net) in g.nets.iter().enumerate() {
        let path = || format!("netlist.nets[{i}]");
        if net.length.is_some() {
            v.require(open("net.length", st), path(), || {
                format!("net length present at {st}")
            });
        }
        if net.resistance.is_some()
            || net.capacitance.is_some()
            || net.total_coupling_capacitance.is_some()
        {
            v.require(open("net.resistance", st), path(), || {
                format!("parasitics present at {st}")
            });
        }
        if net.hpwl.is_some() {
            v.require(open("net.hpwl", st), path(), || {
                format!("HPWL present at {st}")
            });
        }
        if let Some(b) = &net.bbox {
            v.require(ordered(b), path(), || "box min exceeds max".into());
        }
        if let (Some(h), Some(l)) = (net.hpwl, net.length) {
            if !net.is_special && !net.wires.is_empty() {
                v.require(h <= l + 1e-6, path(), || {
                    format!("HPWL {h} exceeds routed length {l}")
                });
            }
        }
    }
    if let Some(c) = &s.clock_tree {
        v.require(open("clock_tree.no_of_buffers", st), "clock_tree", || {
            format!("clock tree present at {st}")
        });
        let ok = c.gates.iter().all(|x| x.index() < g.gates.len())
            && c.pins.iter().all(|x| x.index() < g.pins.len())
            && c.nets.iter().all(|x| x.index() < g.nets.len())
            && c.sinks.iter().all(|x| c.pins.contains(x));
        v.require(ok, "clock_tree", || {
            "node outside the parent netlist graph".into()
        });
        v.require(
            c.no_of_buffers as usize == c.gates.len()
                && c.no_of_clock_sinks as usize == c.sinks.len(),
            "clock_tree",
            || "counts disagree with node lists".into(),
        );
    }
    if let Some(t) = s.summary.total_wirelength {
        v.require(
            open("netlist.total_wirelength", st),
            "netlist.total_wirelength",
            || format!("{t} present at {st}"),
        );
    }

    // maps
    let maps = s
        .maps
        .binary
        .iter()
        .map(|(k, m)| (k, &m.grid, m.bits.len(), m.grid.k == 1))
        .chain(
            s.maps
                .scalar
                .iter()
                .map(|(k, m)| (k, &m.grid, m.values.len(), m.mask.len() == m.values.len())),
        );
    for (name, grid, len, shape_ok) in maps {
        let path = format!("maps.{name}");
        match map_window(name) {
            Some(w) => v.require(w.contains(st), path.clone(), || {
                format!("available only at {w}, not at {st}")
            }),
            None => v.push(path.clone(), "unknown map name"),
        }
        v.require(grid_ok(grid) && len == grid.len() && shape_ok, path, || {
            format!(
                "dimensions {}x{} (len {len}) disagree with the grid formula",
                grid.nx, grid.ny
            )
        });
    }
    for (name, m) in &s.maps.scalar {
        v.require(
            m.values.iter().all(|x| x.is_finite()),
            format!("maps.{name}"),
            || "non-finite value".into(),
        );
    }

    // timing paths
    for (i, p) in s.timing_paths.iter().enumerate() {
        let path = format!("timing_paths[{i}]");
        let arr = p.arrivals();
        v.require(
            arr.windows(2).all(|w| w[1] >= w[0] - 1e-9),
            path.clone(),
            || "arrival times decrease along the path".into(),
        );
        if let Some(last) = p.nodes.iter().rev().find_map(TpgNode::arrival) {
            v.require((last - p.arrival_time).abs() <= 1e-3, path.clone(), || {
                format!(
                    "path arrival {} != last point arrival {last}",
                    p.arrival_time
                )
            });
        }
        let expect = p.path_type.slack(p.arrival_time, p.required_time);
        v.require((expect - p.slack).abs() <= 1e-3, path.clone(), || {
            format!(
                "slack {} inconsistent with arrival/required ({expect})",
                p.slack
            )
        });
        let alternates = p
            .nodes
            .iter()
            .enumerate()
            .all(|(k, n)| n.is_arc() == (k % 2 == 1));
        v.require(alternates, path, || {
            "nodes do not alternate between pins and arcs".into()
        });
    }
    v.0
}
