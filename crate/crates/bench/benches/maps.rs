// SPDX-License-Identifier: Apache-2.0

//! Rasterization, map rendering and RUDY on a synthetic routed design.

#[path = "../../core/tests/common/synth.rs"]
mod synth;

use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eda_schema::interchange::{parse_lef, parse_liberty};
use eda_schema::raster::{make_grid, rasterize_rects, render_netlist_maps, MapRequest};
use eda_schema::routability::{compute_rudy_maps, rudy_nets_from_graph, RudyOptions};
use eda_schema::Stage;

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn maps(c: &mut Criterion) {
    let tech = parse_lef(&fixture("mini45.lef")).expect("lef");
    let catalog = parse_liberty(&fixture("mini45.lib")).expect("lib");
    let design = synth::generate(&tech, 2000, 1);
    let snap = synth::snapshot(&design, &tech, &catalog, Stage::DetailedRoute, 0);
    let g = &snap.netlist;
    let area = g.context.core_box;
    let pixel = make_grid(&area, g.context.w_m1, 1).expect("grid");
    let gate_boxes: Vec<_> = g.gates.iter().filter_map(|x| x.bbox).collect();

    c.bench_function("rasterize_gate_boxes", |b| {
        b.iter(|| rasterize_rects("cells", black_box(gate_boxes.iter()), &pixel))
    });
    c.bench_function("render_netlist_maps", |b| {
        b.iter(|| {
            render_netlist_maps(black_box(g), &pixel, Stage::DetailedRoute, &MapRequest::All)
                .expect("render")
        })
    });

    let nets = rudy_nets_from_graph(g);
    let opts = RudyOptions::for_grid(&pixel, g.context.dbu_per_micron);
    let mut group = c.benchmark_group("rudy");
    for k in [10u32, 50] {
        let grid = make_grid(&area, g.context.w_m1, k).expect("grid");
        group.bench_with_input(BenchmarkId::from_parameter(k), &grid, |b, grid| {
            b.iter(|| compute_rudy_maps(black_box(&nets), grid, &opts))
        });
    }
    group.finish();
}

criterion_group!(benches, maps);
criterion_main!(benches);
