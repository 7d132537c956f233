// SPDX-License-Identifier: Apache-2.0

//! Entity tables of one stage snapshot and their inverse.

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::table::{Column, Table};
use super::StoreError;
use crate::geom::{Point, Rect};
use crate::graphs::{
    Gate, GateId, GatePower, Net, NetId, Pin, PinId, PinTiming, Port, PortId, TimingPathGraph,
    TpgNode,
};
use crate::interchange::{CheckType, LayerRect};
use crate::schema::{
    AreaMetrics, CellMetrics, NetlistSummary, PowerMetrics, StageMetrics, TimingMetrics,
};

/// Entity kinds with a table of their own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Gates,
    Pins,
    Nets,
    Wires,
    Ports,
    Paths,
    Arcs,
    Metrics,
}

impl EntityKind {
    pub const ALL: [EntityKind; 8] = [
        EntityKind::Gates,
        EntityKind::Pins,
        EntityKind::Nets,
        EntityKind::Wires,
        EntityKind::Ports,
        EntityKind::Paths,
        EntityKind::Arcs,
        EntityKind::Metrics,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EntityKind::Gates => "gates",
            EntityKind::Pins => "pins",
            EntityKind::Nets => "nets",
            EntityKind::Wires => "wires",
            EntityKind::Ports => "ports",
            EntityKind::Paths => "paths",
            EntityKind::Arcs => "arcs",
            EntityKind::Metrics => "metrics",
        }
    }

    pub fn parse(s: &str) -> Option<EntityKind> {
        EntityKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn file_name(&self) -> String {
        format!("{}.parquet", self.as_str())
    }
}

pub(crate) fn enum_str<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => panic!("not a unit enum: {other:?}"),
    }
}

pub(crate) fn enum_parse<T: DeserializeOwned>(s: &str, what: &str) -> Result<T, StoreError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| StoreError::Corrupt(format!("bad {what} `{s}`")))
}

fn ids(v: impl IntoIterator<Item = u32>) -> Option<String> {
    let parts: Vec<String> = v.into_iter().map(|i| i.to_string()).collect();
    Some(parts.join(" "))
}

fn parse_ids(s: &Option<String>) -> Result<Vec<u32>, StoreError> {
    s.as_deref()
        .unwrap_or("")
        .split_ascii_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| StoreError::Corrupt(format!("bad id list `{t}`")))
        })
        .collect()
}

fn need<T: Clone>(v: &Option<T>, what: &str) -> Result<T, StoreError> {
    v.clone()
        .ok_or_else(|| StoreError::Corrupt(format!("null {what}")))
}

fn u32_of(v: &Option<i64>, what: &str) -> Result<u32, StoreError> {
    u32::try_from(need(v, what)?).map_err(|_| StoreError::Corrupt(format!("{what} out of range")))
}

fn u64_of(v: &Option<i64>, what: &str) -> Result<u64, StoreError> {
    u64::try_from(need(v, what)?).map_err(|_| StoreError::Corrupt(format!("{what} out of range")))
}

/// Four nullable DBU columns `<p>_x0.. <p>_y1`.
struct RectCols {
    x0: Vec<Option<i64>>,
    y0: Vec<Option<i64>>,
    x1: Vec<Option<i64>>,
    y1: Vec<Option<i64>>,
}

impl RectCols {
    fn new() -> Self {
        RectCols {
            x0: vec![],
            y0: vec![],
            x1: vec![],
            y1: vec![],
        }
    }

    fn push(&mut self, r: Option<&Rect>) {
        self.x0.push(r.map(|r| r.x0));
        self.y0.push(r.map(|r| r.y0));
        self.x1.push(r.map(|r| r.x1));
        self.y1.push(r.map(|r| r.y1));
    }

    fn into_table(self, t: &mut Table, p: &str) {
        t.push(&format!("{p}_x0"), Column::I64(self.x0))
            .push(&format!("{p}_y0"), Column::I64(self.y0))
            .push(&format!("{p}_x1"), Column::I64(self.x1))
            .push(&format!("{p}_y1"), Column::I64(self.y1));
    }
}

struct RectReader<'a> {
    c: [&'a [Option<i64>]; 4],
}

impl<'a> RectReader<'a> {
    fn new(t: &'a Table, p: &str) -> Result<Self, StoreError> {
        Ok(RectReader {
            c: [
                t.i64s(&format!("{p}_x0"))?,
                t.i64s(&format!("{p}_y0"))?,
                t.i64s(&format!("{p}_x1"))?,
                t.i64s(&format!("{p}_y1"))?,
            ],
        })
    }

    fn get(&self, i: usize) -> Option<Rect> {
        Some(Rect {
            x0: self.c[0][i]?,
            y0: self.c[1][i]?,
            x1: self.c[2][i]?,
            y1: self.c[3][i]?,
        })
    }
}

pub fn gates_table(gates: &[Gate]) -> Table {
    let mut t = Table::new();
    let mut bbox = RectCols::new();
    for g in gates {
        bbox.push(g.bbox.as_ref());
    }
    t.push(
        "name",
        Column::Str(gates.iter().map(|g| Some(g.name.clone())).collect()),
    )
    .push(
        "cell",
        Column::Str(gates.iter().map(|g| Some(g.cell.clone())).collect()),
    )
    .push(
        "category",
        Column::Str(
            gates
                .iter()
                .map(|g| Some(g.category.as_str().to_string()))
                .collect(),
        ),
    );
    bbox.into_table(&mut t, "bbox");
    t.push(
        "no_of_inputs",
        Column::I64(gates.iter().map(|g| Some(g.no_of_inputs as i64)).collect()),
    )
    .push(
        "no_of_outputs",
        Column::I64(gates.iter().map(|g| Some(g.no_of_outputs as i64)).collect()),
    )
    .push(
        "pins",
        Column::Str(
            gates
                .iter()
                .map(|g| ids(g.pins.iter().map(|p| p.0)))
                .collect(),
        ),
    )
    .push(
        "internal_power",
        Column::F64(gates.iter().map(|g| g.power.internal_power).collect()),
    )
    .push(
        "switching_power",
        Column::F64(gates.iter().map(|g| g.power.switching_power).collect()),
    )
    .push(
        "leakage_power",
        Column::F64(gates.iter().map(|g| g.power.leakage_power).collect()),
    )
    .push(
        "total_power",
        Column::F64(gates.iter().map(|g| g.power.total_power).collect()),
    )
    .push(
        "ir_drop_vdd",
        Column::F64(gates.iter().map(|g| g.ir_drop_vdd).collect()),
    )
    .push(
        "ir_drop_vss",
        Column::F64(gates.iter().map(|g| g.ir_drop_vss).collect()),
    );
    t
}

pub fn gates_from(t: &Table) -> Result<Vec<Gate>, StoreError> {
    let name = t.strs("name")?;
    let cell = t.strs("cell")?;
    let cat = t.strs("category")?;
    let bbox = RectReader::new(t, "bbox")?;
    let ni = t.i64s("no_of_inputs")?;
    let no = t.i64s("no_of_outputs")?;
    let pins = t.strs("pins")?;
    let (ip, sp, lp, tp) = (
        t.f64s("internal_power")?,
        t.f64s("switching_power")?,
        t.f64s("leakage_power")?,
        t.f64s("total_power")?,
    );
    let (vdd, vss) = (t.f64s("ir_drop_vdd")?, t.f64s("ir_drop_vss")?);
    (0..t.num_rows())
        .map(|i| {
            let c = need(&cat[i], "category")?;
            Ok(Gate {
                name: need(&name[i], "gate name")?,
                cell: need(&cell[i], "cell")?,
                category: crate::graphs::CellCategory::parse(&c)
                    .ok_or_else(|| StoreError::Corrupt(format!("bad category `{c}`")))?,
                bbox: bbox.get(i),
                no_of_inputs: u32_of(&ni[i], "no_of_inputs")?,
                no_of_outputs: u32_of(&no[i], "no_of_outputs")?,
                pins: parse_ids(&pins[i])?.into_iter().map(PinId).collect(),
                power: GatePower {
                    internal_power: ip[i],
                    switching_power: sp[i],
                    leakage_power: lp[i],
                    total_power: tp[i],
                },
                ir_drop_vdd: vdd[i],
                ir_drop_vss: vss[i],
            })
        })
        .collect()
}

const PIN_TIMING: [&str; 8] = [
    "setup_rise_slew",
    "setup_fall_slew",
    "hold_rise_slew",
    "hold_fall_slew",
    "setup_rise_slack",
    "setup_fall_slack",
    "hold_rise_slack",
    "hold_fall_slack",
];

fn timing_fields(t: &PinTiming) -> [Option<f64>; 8] {
    [
        t.setup_rise_slew,
        t.setup_fall_slew,
        t.hold_rise_slew,
        t.hold_fall_slew,
        t.setup_rise_slack,
        t.setup_fall_slack,
        t.hold_rise_slack,
        t.hold_fall_slack,
    ]
}

pub fn pins_table(pins: &[Pin]) -> Table {
    let mut t = Table::new();
    let mut bbox = RectCols::new();
    for p in pins {
        bbox.push(p.bbox.as_ref());
    }
    t.push(
        "name",
        Column::Str(pins.iter().map(|p| Some(p.name.clone())).collect()),
    )
    .push(
        "gate",
        Column::I64(pins.iter().map(|p| Some(p.gate.0 as i64)).collect()),
    )
    .push(
        "net",
        Column::I64(pins.iter().map(|p| Some(p.net.0 as i64)).collect()),
    )
    .push(
        "direction",
        Column::Str(pins.iter().map(|p| Some(enum_str(&p.direction))).collect()),
    );
    bbox.into_table(&mut t, "bbox");
    for (k, name) in PIN_TIMING.iter().enumerate() {
        t.push(
            name,
            Column::F64(pins.iter().map(|p| timing_fields(&p.timing)[k]).collect()),
        );
    }
    t.push(
        "load_capacitance",
        Column::F64(pins.iter().map(|p| p.load_capacitance).collect()),
    )
    .push(
        "switching_activity",
        Column::F64(pins.iter().map(|p| p.switching_activity).collect()),
    )
    .push(
        "is_startpoint",
        Column::Bool(pins.iter().map(|p| Some(p.is_startpoint)).collect()),
    )
    .push(
        "is_endpoint",
        Column::Bool(pins.iter().map(|p| Some(p.is_endpoint)).collect()),
    );
    t
}

pub fn pins_from(t: &Table) -> Result<Vec<Pin>, StoreError> {
    let name = t.strs("name")?;
    let gate = t.i64s("gate")?;
    let net = t.i64s("net")?;
    let dir = t.strs("direction")?;
    let bbox = RectReader::new(t, "bbox")?;
    let tcols: Vec<&[Option<f64>]> = PIN_TIMING
        .iter()
        .map(|n| t.f64s(n))
        .collect::<Result<_, _>>()?;
    let load = t.f64s("load_capacitance")?;
    let act = t.f64s("switching_activity")?;
    let sp = t.bools("is_startpoint")?;
    let ep = t.bools("is_endpoint")?;
    (0..t.num_rows())
        .map(|i| {
            Ok(Pin {
                name: need(&name[i], "pin name")?,
                gate: GateId(u32_of(&gate[i], "pin gate")?),
                net: NetId(u32_of(&net[i], "pin net")?),
                direction: enum_parse(&need(&dir[i], "direction")?, "direction")?,
                bbox: bbox.get(i),
                timing: PinTiming {
                    setup_rise_slew: tcols[0][i],
                    setup_fall_slew: tcols[1][i],
                    hold_rise_slew: tcols[2][i],
                    hold_fall_slew: tcols[3][i],
                    setup_rise_slack: tcols[4][i],
                    setup_fall_slack: tcols[5][i],
                    hold_rise_slack: tcols[6][i],
                    hold_fall_slack: tcols[7][i],
                },
                load_capacitance: load[i],
                switching_activity: act[i],
                is_startpoint: need(&sp[i], "is_startpoint")?,
                is_endpoint: need(&ep[i], "is_endpoint")?,
            })
        })
        .collect()
}

pub fn nets_table(nets: &[Net]) -> Table {
    let mut t = Table::new();
    let mut bbox = RectCols::new();
    for n in nets {
        bbox.push(n.bbox.as_ref());
    }
    t.push(
        "name",
        Column::Str(nets.iter().map(|n| Some(n.name.clone())).collect()),
    )
    .push(
        "is_special",
        Column::Bool(nets.iter().map(|n| Some(n.is_special)).collect()),
    )
    .push(
        "signal_use",
        Column::Str(
            nets.iter()
                .map(|n| n.signal_use.as_ref().map(enum_str))
                .collect(),
        ),
    )
    .push(
        "pins",
        Column::Str(
            nets.iter()
                .map(|n| ids(n.pins.iter().map(|p| p.0)))
                .collect(),
        ),
    )
    .push(
        "ports",
        Column::Str(
            nets.iter()
                .map(|n| ids(n.ports.iter().map(|p| p.0)))
                .collect(),
        ),
    )
    .push(
        "no_of_fanouts",
        Column::I64(nets.iter().map(|n| Some(n.no_of_fanouts as i64)).collect()),
    );
    bbox.into_table(&mut t, "bbox");
    t.push("hpwl", Column::F64(nets.iter().map(|n| n.hpwl).collect()))
        .push(
            "length",
            Column::F64(nets.iter().map(|n| n.length).collect()),
        )
        .push(
            "resistance",
            Column::F64(nets.iter().map(|n| n.resistance).collect()),
        )
        .push(
            "capacitance",
            Column::F64(nets.iter().map(|n| n.capacitance).collect()),
        )
        .push(
            "total_coupling_capacitance",
            Column::F64(nets.iter().map(|n| n.total_coupling_capacitance).collect()),
        );
    t
}

pub fn wires_table(nets: &[Net]) -> Table {
    let (mut net, mut layer, mut rc) = (Vec::new(), Vec::new(), RectCols::new());
    for (i, n) in nets.iter().enumerate() {
        for w in &n.wires {
            net.push(Some(i as i64));
            layer.push(Some(w.layer.clone()));
            rc.push(Some(&w.rect));
        }
    }
    let mut t = Table::new();
    t.push("net", Column::I64(net))
        .push("layer", Column::Str(layer));
    rc.into_table(&mut t, "rect");
    t
}

pub fn nets_from(t: &Table, wires: &Table) -> Result<Vec<Net>, StoreError> {
    let name = t.strs("name")?;
    let special = t.bools("is_special")?;
    let use_ = t.strs("signal_use")?;
    let pins = t.strs("pins")?;
    let ports = t.strs("ports")?;
    let fan = t.i64s("no_of_fanouts")?;
    let bbox = RectReader::new(t, "bbox")?;
    let hpwl = t.f64s("hpwl")?;
    let len = t.f64s("length")?;
    let res = t.f64s("resistance")?;
    let cap = t.f64s("capacitance")?;
    let cc = t.f64s("total_coupling_capacitance")?;
    let mut nets = (0..t.num_rows())
        .map(|i| {
            Ok(Net {
                name: need(&name[i], "net name")?,
                is_special: need(&special[i], "is_special")?,
                signal_use: use_[i]
                    .as_deref()
                    .map(|s| enum_parse(s, "signal use"))
                    .transpose()?,
                pins: parse_ids(&pins[i])?.into_iter().map(PinId).collect(),
                ports: parse_ids(&ports[i])?.into_iter().map(PortId).collect(),
                no_of_fanouts: u32_of(&fan[i], "no_of_fanouts")?,
                bbox: bbox.get(i),
                hpwl: hpwl[i],
                length: len[i],
                resistance: res[i],
                capacitance: cap[i],
                total_coupling_capacitance: cc[i],
                wires: Vec::new(),
            })
        })
        .collect::<Result<Vec<Net>, StoreError>>()?;
    let wnet = wires.i64s("net")?;
    let wlayer = wires.strs("layer")?;
    let wrect = RectReader::new(wires, "rect")?;
    for i in 0..wires.num_rows() {
        let n = u32_of(&wnet[i], "wire net")? as usize;
        let net = nets
            .get_mut(n)
            .ok_or_else(|| StoreError::Corrupt(format!("wire references net {n}")))?;
        net.wires.push(LayerRect {
            layer: need(&wlayer[i], "wire layer")?,
            rect: wrect
                .get(i)
                .ok_or_else(|| StoreError::Corrupt("null wire rect".into()))?,
        });
    }
    Ok(nets)
}

pub fn ports_table(ports: &[Port]) -> Table {
    let mut t = Table::new();
    let mut bbox = RectCols::new();
    for q in ports {
        bbox.push(q.bbox.as_ref());
    }
    t.push(
        "name",
        Column::Str(ports.iter().map(|q| Some(q.name.clone())).collect()),
    )
    .push(
        "direction",
        Column::Str(ports.iter().map(|q| Some(enum_str(&q.direction))).collect()),
    )
    .push(
        "net",
        Column::I64(ports.iter().map(|q| q.net.map(|n| n.0 as i64)).collect()),
    )
    .push(
        "location_x",
        Column::I64(ports.iter().map(|q| q.location.map(|p| p.x)).collect()),
    )
    .push(
        "location_y",
        Column::I64(ports.iter().map(|q| q.location.map(|p| p.y)).collect()),
    );
    bbox.into_table(&mut t, "bbox");
    t
}

pub fn ports_from(t: &Table) -> Result<Vec<Port>, StoreError> {
    let name = t.strs("name")?;
    let dir = t.strs("direction")?;
    let net = t.i64s("net")?;
    let (lx, ly) = (t.i64s("location_x")?, t.i64s("location_y")?);
    let bbox = RectReader::new(t, "bbox")?;
    (0..t.num_rows())
        .map(|i| {
            Ok(Port {
                name: need(&name[i], "port name")?,
                direction: enum_parse(&need(&dir[i], "direction")?, "direction")?,
                net: net[i]
                    .map(|n| u32_of(&Some(n), "port net").map(NetId))
                    .transpose()?,
                location: lx[i].zip(ly[i]).map(|(x, y)| Point::new(x, y)),
                bbox: bbox.get(i),
            })
        })
        .collect()
}

pub fn paths_table(paths: &[TimingPathGraph]) -> Table {
    let mut t = Table::new();
    t.push(
        "startpoint",
        Column::Str(paths.iter().map(|p| Some(p.startpoint.clone())).collect()),
    )
    .push(
        "endpoint",
        Column::Str(paths.iter().map(|p| Some(p.endpoint.clone())).collect()),
    )
    .push(
        "path_type",
        Column::Str(
            paths
                .iter()
                .map(|p| Some(p.path_type.as_str().to_string()))
                .collect(),
        ),
    )
    .push(
        "arrival_time",
        Column::F64(paths.iter().map(|p| Some(p.arrival_time)).collect()),
    )
    .push(
        "required_time",
        Column::F64(paths.iter().map(|p| Some(p.required_time)).collect()),
    )
    .push(
        "slack",
        Column::F64(paths.iter().map(|p| Some(p.slack)).collect()),
    )
    .push(
        "no_of_pins",
        Column::I64(paths.iter().map(|p| Some(p.no_of_pins as i64)).collect()),
    )
    .push(
        "is_critical_path",
        Column::Bool(paths.iter().map(|p| Some(p.is_critical_path)).collect()),
    )
    .push(
        "unresolved",
        Column::I64(paths.iter().map(|p| Some(p.unresolved as i64)).collect()),
    )
    .push(
        "start_arrival",
        Column::F64(paths.iter().map(|p| Some(p.start_arrival)).collect()),
    );
    t
}

/// Every path node in order; pin and port nodes included so the
/// alternating sequence is recoverable.
pub fn arcs_table(paths: &[TimingPathGraph]) -> Table {
    let mut path = Vec::new();
    let mut seq = Vec::new();
    let mut kind = Vec::new();
    let mut name = Vec::new();
    let mut id = Vec::new();
    let mut edge = Vec::new();
    let mut delay = Vec::new();
    let mut arrival = Vec::new();
    let mut slew = Vec::new();
    let mut cap = Vec::new();
    for (pi, p) in paths.iter().enumerate() {
        for (si, n) in p.nodes.iter().enumerate() {
            path.push(Some(pi as i64));
            seq.push(Some(si as i64));
            let (k, nm, i, e, d, a, s, c) = match n {
                TpgNode::Pin { name, pin, edge } => (
                    "pin",
                    Some(name.clone()),
                    pin.map(|x| x.0),
                    Some(enum_str(edge)),
                    None,
                    None,
                    None,
                    None,
                ),
                TpgNode::Port { name, port, edge } => (
                    "port",
                    Some(name.clone()),
                    port.map(|x| x.0),
                    Some(enum_str(edge)),
                    None,
                    None,
                    None,
                    None,
                ),
                TpgNode::CellArc {
                    gate,
                    delay,
                    arrival,
                    slew,
                } => (
                    "cell_arc",
                    None,
                    gate.map(|x| x.0),
                    None,
                    Some(*delay),
                    Some(*arrival),
                    *slew,
                    None,
                ),
                TpgNode::NetArc {
                    net,
                    delay,
                    arrival,
                    slew,
                    capacitance,
                } => (
                    "net_arc",
                    None,
                    net.map(|x| x.0),
                    None,
                    Some(*delay),
                    Some(*arrival),
                    *slew,
                    *capacitance,
                ),
            };
            kind.push(Some(k.to_string()));
            name.push(nm);
            id.push(i.map(i64::from));
            edge.push(e);
            delay.push(d);
            arrival.push(a);
            slew.push(s);
            cap.push(c);
        }
    }
    let mut t = Table::new();
    t.push("path", Column::I64(path))
        .push("seq", Column::I64(seq))
        .push("kind", Column::Str(kind))
        .push("name", Column::Str(name))
        .push("ref_id", Column::I64(id))
        .push("edge", Column::Str(edge))
        .push("delay", Column::F64(delay))
        .push("arrival", Column::F64(arrival))
        .push("slew", Column::F64(slew))
        .push("capacitance", Column::F64(cap));
    t
}

pub fn paths_from(t: &Table, arcs: &Table) -> Result<Vec<TimingPathGraph>, StoreError> {
    let sp = t.strs("startpoint")?;
    let ep = t.strs("endpoint")?;
    let ty = t.strs("path_type")?;
    let at = t.f64s("arrival_time")?;
    let rt = t.f64s("required_time")?;
    let sl = t.f64s("slack")?;
    let np = t.i64s("no_of_pins")?;
    let crit = t.bools("is_critical_path")?;
    let unres = t.i64s("unresolved")?;
    let sa = t.f64s("start_arrival")?;
    let mut paths = (0..t.num_rows())
        .map(|i| {
            Ok(TimingPathGraph {
                startpoint: need(&sp[i], "startpoint")?,
                endpoint: need(&ep[i], "endpoint")?,
                path_type: {
                    let s = need(&ty[i], "path type")?;
                    CheckType::parse(&s)
                        .ok_or_else(|| StoreError::Corrupt(format!("bad path type `{s}`")))?
                },
                arrival_time: need(&at[i], "arrival_time")?,
                required_time: need(&rt[i], "required_time")?,
                slack: need(&sl[i], "slack")?,
                no_of_pins: u32_of(&np[i], "no_of_pins")?,
                is_critical_path: need(&crit[i], "is_critical_path")?,
                unresolved: u32_of(&unres[i], "unresolved")?,
                start_arrival: need(&sa[i], "start_arrival")?,
                nodes: Vec::new(),
            })
        })
        .collect::<Result<Vec<TimingPathGraph>, StoreError>>()?;
    let path = arcs.i64s("path")?;
    let kind = arcs.strs("kind")?;
    let name = arcs.strs("name")?;
    let id = arcs.i64s("ref_id")?;
    let edge = arcs.strs("edge")?;
    let delay = arcs.f64s("delay")?;
    let arrival = arcs.f64s("arrival")?;
    let slew = arcs.f64s("slew")?;
    let cap = arcs.f64s("capacitance")?;
    for i in 0..arcs.num_rows() {
        let pi = u32_of(&path[i], "arc path")? as usize;
        let rid = id[i].map(|v| u32_of(&Some(v), "ref_id")).transpose()?;
        let node = match need(&kind[i], "node kind")?.as_str() {
            "pin" => TpgNode::Pin {
                name: need(&name[i], "node name")?,
                pin: rid.map(PinId),
                edge: enum_parse(&need(&edge[i], "edge")?, "edge")?,
            },
            "port" => TpgNode::Port {
                name: need(&name[i], "node name")?,
                port: rid.map(PortId),
                edge: enum_parse(&need(&edge[i], "edge")?, "edge")?,
            },
            "cell_arc" => TpgNode::CellArc {
                gate: rid.map(GateId),
                delay: need(&delay[i], "delay")?,
                arrival: need(&arrival[i], "arrival")?,
                slew: slew[i],
            },
            "net_arc" => TpgNode::NetArc {
                net: rid.map(NetId),
                delay: need(&delay[i], "delay")?,
                arrival: need(&arrival[i], "arrival")?,
                slew: slew[i],
                capacitance: cap[i],
            },
            other => return Err(StoreError::Corrupt(format!("bad node kind `{other}`"))),
        };
        paths
            .get_mut(pi)
            .ok_or_else(|| StoreError::Corrupt(format!("arc references path {pi}")))?
            .nodes
            .push(node);
    }
    Ok(paths)
}

macro_rules! metric_cols {
    ($t:ident, $src:expr, $col:ident, $wrap:expr, [$($f:ident),*]) => {
        $( $t.push(stringify!($f), Column::$col(vec![$wrap($src.map(|s| s.$f.clone()))])); )*
    };
}

/// One row: summary, cell, area, power and timing metrics.
pub fn metrics_table(summary: &NetlistSummary, m: &StageMetrics) -> Table {
    let mut t = Table::new();
    let s = Some(summary);
    let id = |v: Option<f64>| v;
    let flat = |v: Option<Option<f64>>| v.flatten();
    let int = |v: Option<u64>| v.map(|x| x as i64);
    metric_cols!(t, s, F64, id, [width, height, utilization]);
    metric_cols!(
        t,
        s,
        I64,
        int,
        [
            no_of_inputs,
            no_of_outputs,
            no_of_cells,
            no_of_nets,
            no_of_pins
        ]
    );
    metric_cols!(t, s, F64, flat, [total_wirelength, total_hpwl]);
    let c = Some(&m.cell);
    metric_cols!(
        t,
        c,
        I64,
        int,
        [
            no_of_combinational_cells,
            no_of_sequential_cells,
            no_of_buffers,
            no_of_inverters,
            no_of_fillers,
            no_of_tap_cells,
            no_of_diodes,
            no_of_macros,
            no_of_total_cells
        ]
    );
    let a = Some(&m.area);
    metric_cols!(
        t,
        a,
        F64,
        id,
        [
            combinational_cell_area,
            sequential_cell_area,
            buffer_area,
            inverter_area,
            filler_area,
            tap_cell_area,
            diode_area,
            macro_area,
            cell_area,
            total_area
        ]
    );
    t.push("has_power", Column::Bool(vec![Some(m.power.is_some())]));
    let p = m.power.as_ref();
    metric_cols!(
        t,
        p,
        F64,
        flat,
        [
            combinational_power,
            sequential_power,
            macro_power,
            internal_power,
            switching_power,
            leakage_power,
            total_power
        ]
    );
    let tm = m.timing.as_ref();
    metric_cols!(
        t,
        tm,
        F64,
        id,
        [
            total_negative_slack,
            worst_slack,
            worst_arrival_time,
            worst_required_time
        ]
    );
    let st = |v: Option<String>| v;
    metric_cols!(
        t,
        tm,
        Str,
        st,
        [critical_path_startpoint, critical_path_endpoint]
    );
    metric_cols!(
        t,
        tm,
        I64,
        int,
        [no_of_endpoints, no_of_violating_endpoints]
    );
    t
}

pub fn metrics_from(t: &Table) -> Result<(NetlistSummary, StageMetrics), StoreError> {
    if t.num_rows() != 1 {
        return Err(StoreError::Corrupt(format!(
            "metrics table has {} rows",
            t.num_rows()
        )));
    }
    let f = |n: &str| -> Result<f64, StoreError> { need(&t.f64s(n)?[0], n) };
    let fo = |n: &str| -> Result<Option<f64>, StoreError> { Ok(t.f64s(n)?[0]) };
    let u = |n: &str| -> Result<u64, StoreError> { u64_of(&t.i64s(n)?[0], n) };
    let summary = NetlistSummary {
        width: f("width")?,
        height: f("height")?,
        no_of_inputs: u("no_of_inputs")?,
        no_of_outputs: u("no_of_outputs")?,
        no_of_cells: u("no_of_cells")?,
        no_of_nets: u("no_of_nets")?,
        no_of_pins: u("no_of_pins")?,
        utilization: f("utilization")?,
        total_wirelength: fo("total_wirelength")?,
        total_hpwl: fo("total_hpwl")?,
    };
    let cell = CellMetrics {
        no_of_combinational_cells: u("no_of_combinational_cells")?,
        no_of_sequential_cells: u("no_of_sequential_cells")?,
        no_of_buffers: u("no_of_buffers")?,
        no_of_inverters: u("no_of_inverters")?,
        no_of_fillers: u("no_of_fillers")?,
        no_of_tap_cells: u("no_of_tap_cells")?,
        no_of_diodes: u("no_of_diodes")?,
        no_of_macros: u("no_of_macros")?,
        no_of_total_cells: u("no_of_total_cells")?,
    };
    let area = AreaMetrics {
        combinational_cell_area: f("combinational_cell_area")?,
        sequential_cell_area: f("sequential_cell_area")?,
        buffer_area: f("buffer_area")?,
        inverter_area: f("inverter_area")?,
        filler_area: f("filler_area")?,
        tap_cell_area: f("tap_cell_area")?,
        diode_area: f("diode_area")?,
        macro_area: f("macro_area")?,
        cell_area: f("cell_area")?,
        total_area: f("total_area")?,
    };
    let power = if need(&t.bools("has_power")?[0], "has_power")? {
        Some(PowerMetrics {
            combinational_power: fo("combinational_power")?,
            sequential_power: fo("sequential_power")?,
            macro_power: fo("macro_power")?,
            internal_power: fo("internal_power")?,
            switching_power: fo("switching_power")?,
            leakage_power: fo("leakage_power")?,
            total_power: fo("total_power")?,
        })
    } else {
        None
    };
    let timing = match t.f64s("worst_slack")?[0] {
        None => None,
        Some(_) => Some(TimingMetrics {
            total_negative_slack: f("total_negative_slack")?,
            worst_slack: f("worst_slack")?,
            worst_arrival_time: f("worst_arrival_time")?,
            worst_required_time: f("worst_required_time")?,
            critical_path_startpoint: need(&t.strs("critical_path_startpoint")?[0], "startpoint")?,
            critical_path_endpoint: need(&t.strs("critical_path_endpoint")?[0], "endpoint")?,
            no_of_endpoints: u("no_of_endpoints")?,
            no_of_violating_endpoints: u("no_of_violating_endpoints")?,
        }),
    };
    Ok((
        summary,
        StageMetrics {
            cell,
            area,
            power,
            timing,
        },
    ))
}
