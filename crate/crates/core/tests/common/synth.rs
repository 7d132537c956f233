// SPDX-License-Identifier: Apache-2.0

//! Seeded synthetic placed-and-routed designs built on the bundled cell library.

#![allow(dead_code)]

use eda_schema::geom::Orient;
use eda_schema::interchange::{
    CellCatalog, CheckType, Component, Edge, LayerRect, NetConnection, NetParasitics, ParasiticSet,
    PhysicalNetlist, PinDirection, PlacementStatus, PointKind, PortPin, RoutedNet, Row, SignalUse,
    SlackCheck, TechLibrary, TimingPathRecord, TimingPoint, Via, WireSegment,
};
use eda_schema::schema::{assemble_stage, AssembleOptions, PdnSamples, StageArtifacts};
use eda_schema::{Point, Rect, Stage, StageSnapshot};
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SITE_W: i64 = 400;
const ROW_H: i64 = 2800;
const MARGIN: i64 = 4000;

const LOGIC: [&str; 6] = [
    "INV_X1", "BUF_X1", "NAND2_X1", "NOR2_X1", "AND2_X1", "XOR2_X1",
];

pub struct SynthDesign {
    pub def: PhysicalNetlist,
    pub routed: PhysicalNetlist,
    pub spef: ParasiticSet,
    pub sta: Vec<TimingPathRecord>,
}

struct Placed {
    name: String,
    cell: &'static str,
    origin: Point,
}

fn pin_center(tech: &TechLibrary, cell: &str, pin: &str, origin: Point) -> Point {
    let r = tech.macros[cell].pins[pin].bbox().expect("pin shape");
    let c = r.center();
    Point::new(origin.x + c.x, origin.y + c.y)
}

fn macro_pins(tech: &TechLibrary, cell: &str, dir: PinDirection) -> Vec<String> {
    tech.macros[cell]
        .pins
        .values()
        .filter(|p| p.direction == dir)
        .map(|p| p.name.clone())
        .collect()
}

fn segment(layer: &str, a: Point, b: Point, width: i64) -> WireSegment {
    WireSegment {
        layer: layer.into(),
        start: a,
        end: b,
        width,
        start_ext: width / 2,
        end_ext: width / 2,
    }
}

/// A design with `n_gates` logic and sequential cells plus one clock buffer.
pub fn generate(tech: &TechLibrary, n_gates: usize, seed: u64) -> SynthDesign {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_row = ((n_gates as f64).sqrt().ceil() as i64).max(4);
    let row_w = per_row * 3 * SITE_W * 2;
    let mut placed: Vec<Placed> = Vec::with_capacity(n_gates + 1);
    let (mut x, mut row) = (0i64, 0i64);
    let mut place = |name: String, cell: &'static str, placed: &mut Vec<Placed>| {
        let w = tech.macros[cell].width;
        if x + w > row_w {
            x = 0;
            row += 1;
        }
        placed.push(Placed {
            name,
            cell,
            origin: Point::new(MARGIN + x, MARGIN + row * ROW_H),
        });
        x += w + SITE_W * 2;
    };
    place("cb0".into(), "CLKBUF_X1", &mut placed);
    for i in 0..n_gates {
        let cell = if rng.gen_bool(0.12) {
            "DFF_X1"
        } else {
            LOGIC[rng.gen_range(0..LOGIC.len())]
        };
        place(format!("g{i}"), cell, &mut placed);
    }
    let rows = row + 1;
    let core = Rect::new(MARGIN, MARGIN, MARGIN + row_w, MARGIN + rows * ROW_H);
    let die = Rect::new(0, 0, core.x1 + MARGIN, core.y1 + MARGIN);

    let n_in = 8usize;
    let n_out = 8usize;
    let mut ports = Vec::new();
    let port_shape = vec![LayerRect {
        layer: "metal3".into(),
        rect: Rect::new(-70, -70, 70, 70),
    }];
    let mut port_pos = Vec::new();
    let mut add_port =
        |name: String, net: String, dir: PinDirection, use_: SignalUse, at: Point| {
            port_pos.push((name.clone(), at));
            ports.push(PortPin {
                name,
                net: Some(net),
                direction: dir,
                signal_use: use_,
                status: PlacementStatus::Placed,
                position: Some(at),
                orient: Orient::N,
                shapes: port_shape.clone(),
            });
        };
    let span = die.y1 - 2 * MARGIN;
    add_port(
        "clk".into(),
        "clk".into(),
        PinDirection::Input,
        SignalUse::Clock,
        Point::new(0, die.y1 / 2),
    );
    for i in 0..n_in {
        let y = MARGIN + span * (i as i64 + 1) / (n_in as i64 + 2);
        add_port(
            format!("in{i}"),
            format!("n_in{i}"),
            PinDirection::Input,
            SignalUse::Signal,
            Point::new(0, y),
        );
    }
    for i in 0..n_out {
        let y = MARGIN + span * (i as i64 + 1) / (n_out as i64 + 2);
        add_port(
            format!("out{i}"),
            format!("n_out{i}"),
            PinDirection::Output,
            SignalUse::Signal,
            Point::new(die.x1, y),
        );
    }

    // drivers: input ports then each gate output in placement order
    #[derive(Clone)]
    enum Drv {
        Port(usize),
        Gate(usize, String),
    }
    let mut sinks: Vec<Vec<NetConnection>> = Vec::new();
    let mut drivers: Vec<Drv> = (0..n_in).map(Drv::Port).collect();
    sinks.resize(n_in, Vec::new());
    let mut ck_sinks = Vec::new();
    for (gi, p) in placed.iter().enumerate().skip(1) {
        for (k, pin) in macro_pins(tech, p.cell, PinDirection::Input)
            .into_iter()
            .enumerate()
        {
            let conn = NetConnection::Instance {
                instance: p.name.clone(),
                pin: pin.clone(),
            };
            if pin == "CK" {
                ck_sinks.push(conn);
                continue;
            }
            // prefer recent drivers so nets stay local
            let lo = drivers.len().saturating_sub(24);
            let d = if k == 0 && gi <= n_in {
                gi - 1
            } else {
                rng.gen_range(lo..drivers.len())
            };
            sinks[d].push(conn);
        }
        let out = macro_pins(tech, p.cell, PinDirection::Output);
        drivers.push(Drv::Gate(gi, out[0].clone()));
        sinks.push(Vec::new());
    }
    // output ports take the last drivers
    for i in 0..n_out {
        let d = drivers.len() - 1 - i;
        sinks[d].push(NetConnection::Port(format!("out{i}")));
    }

    let w2 = tech
        .layer("metal2")
        .and_then(|l| l.min_width)
        .unwrap_or(140);
    let w3 = tech
        .layer("metal3")
        .and_then(|l| l.min_width)
        .unwrap_or(140);
    let by_name: HashMap<&str, &Placed> = placed.iter().map(|p| (p.name.as_str(), p)).collect();
    let loc = |c: &NetConnection| -> Point {
        match c {
            NetConnection::Instance { instance, pin } => {
                let p = by_name[instance.as_str()];
                pin_center(tech, p.cell, pin, p.origin)
            }
            NetConnection::Port(n) | NetConnection::Global(n) => {
                port_pos.iter().find(|(m, _)| m == n).unwrap().1
            }
        }
    };
    let route = |conns: &[NetConnection]| -> (Vec<WireSegment>, Vec<Via>) {
        let a = loc(&conns[0]);
        let mut segs = Vec::new();
        let mut vias = Vec::new();
        for c in &conns[1..] {
            let b = loc(c);
            if a.x != b.x {
                segs.push(segment("metal2", a, Point::new(b.x, a.y), w2));
            }
            vias.push(Via {
                name: "via2_0".into(),
                at: Point::new(b.x, a.y),
                layer: "metal2".into(),
            });
            if a.y != b.y {
                segs.push(segment("metal3", Point::new(b.x, a.y), b, w3));
            }
        }
        (segs, vias)
    };

    let mut nets = Vec::new();
    let clk_conns = vec![
        NetConnection::Port("clk".into()),
        NetConnection::Instance {
            instance: "cb0".into(),
            pin: "A".into(),
        },
    ];
    let mut ck = vec![NetConnection::Instance {
        instance: "cb0".into(),
        pin: "Z".into(),
    }];
    ck.extend(ck_sinks);
    nets.push(("clk".to_string(), SignalUse::Clock, clk_conns));
    if ck.len() > 1 {
        nets.push(("ck_buf".to_string(), SignalUse::Clock, ck));
    }
    for (d, drv) in drivers.iter().enumerate() {
        if sinks[d].is_empty() {
            continue;
        }
        let (name, head) = match drv {
            Drv::Port(i) => (format!("n_in{i}"), NetConnection::Port(format!("in{i}"))),
            Drv::Gate(gi, pin) => {
                let out_port = sinks[d].iter().find_map(|c| match c {
                    NetConnection::Port(n) => Some(n.replace("out", "n_out")),
                    _ => None,
                });
                (
                    out_port.unwrap_or_else(|| format!("n_{}", placed[*gi].name)),
                    NetConnection::Instance {
                        instance: placed[*gi].name.clone(),
                        pin: pin.clone(),
                    },
                )
            }
        };
        let mut conns = vec![head];
        conns.extend(sinks[d].iter().cloned());
        nets.push((name, SignalUse::Signal, conns));
    }

    let components: Vec<Component> = placed
        .iter()
        .map(|p| Component {
            name: p.name.clone(),
            cell: p.cell.to_string(),
            status: PlacementStatus::Placed,
            origin: Some(p.origin),
            orient: Orient::N,
        })
        .collect();
    let rows_v: Vec<Row> = (0..rows)
        .map(|r| Row {
            name: format!("ROW_{r}"),
            site: "core".into(),
            origin: Point::new(MARGIN, MARGIN + r * ROW_H),
            orient: Orient::N,
            num_x: (row_w / SITE_W) as u32,
            num_y: 1,
            step_x: SITE_W,
            step_y: 0,
        })
        .collect();

    let mut special = Vec::new();
    for (name, use_, x0) in [
        ("VDD", SignalUse::Power, core.x0 + 6000),
        ("VSS", SignalUse::Ground, core.x0 + 30000),
    ] {
        let mut segs = Vec::new();
        let mut sx = x0;
        while sx < core.x1 {
            segs.push(WireSegment {
                layer: "metal4".into(),
                start: Point::new(sx, core.y0),
                end: Point::new(sx, core.y1),
                width: 1600,
                start_ext: 0,
                end_ext: 0,
            });
            sx += 112_000;
        }
        special.push(RoutedNet {
            name: name.into(),
            is_special: true,
            signal_use: Some(use_),
            connections: vec![NetConnection::Global(name.into())],
            segments: segs,
            vias: Vec::new(),
        });
    }

    let mut placed_nets = Vec::new();
    let mut routed_nets = Vec::new();
    for (name, use_, conns) in &nets {
        let base = RoutedNet {
            name: name.clone(),
            is_special: false,
            signal_use: Some(*use_),
            connections: conns.clone(),
            segments: Vec::new(),
            vias: Vec::new(),
        };
        let (segs, vias) = route(conns);
        routed_nets.push(RoutedNet {
            segments: segs,
            vias,
            ..base.clone()
        });
        placed_nets.push(base);
    }
    placed_nets.extend(special.iter().cloned());
    routed_nets.extend(special);

    let def = PhysicalNetlist {
        design: format!("synth{n_gates}"),
        dbu_per_micron: tech.dbu_per_micron,
        die_box: die,
        core_box: core,
        rows: rows_v,
        components,
        ports,
        nets: placed_nets,
    };
    let routed = PhysicalNetlist {
        nets: routed_nets,
        ..def.clone()
    };

    let mut spef = ParasiticSet {
        design: def.design.clone(),
        ..Default::default()
    };
    for n in routed.nets.iter().filter(|n| !n.is_special) {
        let len = n.routed_length() as f64 / tech.dbu_per_micron as f64;
        spef.nets.insert(
            n.name.clone(),
            NetParasitics {
                total_resistance: (len * 3.5 * 1e4).round() / 1e4,
                total_capacitance: (len * 0.08 * 1e4).round() / 1e4 + 0.5,
                total_coupling_capacitance: (rng.gen_range(0.0..0.2f64) * 1e4).round() / 1e4,
            },
        );
    }

    let sta = timing_paths(&placed, &nets, &mut rng);
    SynthDesign {
        def,
        routed,
        spef,
        sta,
    }
}

fn timing_paths(
    placed: &[Placed],
    nets: &[(String, SignalUse, Vec<NetConnection>)],
    rng: &mut ChaCha8Rng,
) -> Vec<TimingPathRecord> {
    let mut out = Vec::new();
    let mut starts: Vec<&(String, SignalUse, Vec<NetConnection>)> =
        nets.iter().filter(|n| n.1 == SignalUse::Signal).collect();
    starts.shuffle(rng);
    let period = 0.2;
    for net in starts.into_iter().take(64) {
        let head = &net.2[0];
        let mut points = Vec::new();
        let (start_name, start_cell, start_kind) = match head {
            NetConnection::Port(p) => (p.clone(), "in".to_string(), PointKind::Startpoint),
            NetConnection::Instance { instance, pin } => {
                let cell = placed.iter().find(|q| &q.name == instance).unwrap().cell;
                (
                    format!("{instance}/{pin}"),
                    cell.to_string(),
                    PointKind::Startpoint,
                )
            }
            NetConnection::Global(_) => continue,
        };
        let mut t = 0.0f64;
        points.push(TimingPoint {
            pin: start_name.clone(),
            cell: start_cell,
            kind: start_kind,
            edge: Edge::Rise,
            delay: 0.0,
            arrival: 0.0,
            slew: Some(0.01),
            capacitance: None,
            fanout: None,
        });
        let sink = &net.2[1 + rng.gen_range(0..net.2.len() - 1)];
        let (pin, cell) = match sink {
            NetConnection::Port(p) => (p.clone(), "out".to_string()),
            NetConnection::Instance { instance, pin } => {
                let cell = placed.iter().find(|q| &q.name == instance).unwrap().cell;
                (format!("{instance}/{pin}"), cell.to_string())
            }
            NetConnection::Global(_) => continue,
        };
        let d = (rng.gen_range(0.001..0.2f64) * 1e4).round() / 1e4;
        t = ((t + d) * 1e4).round() / 1e4;
        points.push(TimingPoint {
            pin,
            cell,
            kind: PointKind::NetArc,
            edge: Edge::Rise,
            delay: d,
            arrival: t,
            slew: Some(0.02),
            capacitance: None,
            fanout: None,
        });
        let required = period - 0.05;
        let slack = ((required - t) * 1e4).round() / 1e4;
        out.push(TimingPathRecord {
            startpoint: start_name.split('/').next().unwrap().to_string(),
            endpoint: points
                .last()
                .unwrap()
                .pin
                .split('/')
                .next()
                .unwrap()
                .to_string(),
            path_group: "clk".into(),
            check_type: CheckType::Setup,
            arrival_time: t,
            required_time: required,
            slack,
            points,
            check: SlackCheck::Consistent,
        });
    }
    out
}

/// Snapshot of a synthetic design at `stage`, keeping at most `max_maps` maps.
pub fn snapshot(
    d: &SynthDesign,
    tech: &TechLibrary,
    catalog: &CellCatalog,
    stage: Stage,
    max_maps: usize,
) -> StageSnapshot {
    let routed = stage >= Stage::DetailedRoute;
    let art = StageArtifacts {
        def: if routed { &d.routed } else { &d.def },
        tech,
        catalog,
        parasitics: routed.then_some(&d.spef),
        timing: &d.sta,
        qor: None,
        pdn: PdnSamples::default(),
        clock_source: Some("clk"),
    };
    let opts = AssembleOptions {
        strap_pitch_um: Some(56.0),
        ..AssembleOptions::default()
    };
    let mut s = assemble_stage(stage, &art, &opts).unwrap_or_else(|e| panic!("{stage}: {e}"));
    keep_maps(&mut s, max_maps);
    s
}

/// Drop maps beyond the first `n`, scalar maps first.
pub fn keep_maps(s: &mut StageSnapshot, n: usize) {
    let scalar: Vec<String> = s.maps.scalar.keys().cloned().collect();
    for k in scalar.iter().skip(n) {
        s.maps.scalar.remove(k);
    }
    let left = n.saturating_sub(s.maps.scalar.len());
    let binary: Vec<String> = s.maps.binary.keys().cloned().collect();
    for k in binary.iter().skip(left) {
        s.maps.binary.remove(k);
    }
}
