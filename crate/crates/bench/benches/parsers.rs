// SPDX-License-Identifier: Apache-2.0

//! Parser throughput on the bundled fixtures and on a larger synthetic design.

#[path = "../../core/tests/common/synth.rs"]
mod synth;

use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use eda_schema::interchange::{
    parse_def, parse_lef, parse_liberty, parse_spef, parse_sta_report, write_def, write_spef,
    write_sta_report, TechLibrary,
};

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn bench_text(c: &mut Criterion, group: &str, inputs: &[(&str, &str)], parse: impl Fn(&str)) {
    let mut g = c.benchmark_group(group);
    for (name, text) in inputs {
        g.throughput(Throughput::Bytes(text.len() as u64));
        g.bench_function(*name, |b| b.iter(|| parse(black_box(text))));
    }
    g.finish();
}

fn parsers(c: &mut Criterion) {
    let lef = fixture("mini45.lef");
    let tech: TechLibrary = parse_lef(&lef).expect("lef");
    let lib = fixture("mini45.lib");
    let design = synth::generate(&tech, 2000, 1);
    let big_def = write_def(&design.routed);
    let big_spef = write_spef(&design.spef);
    let big_sta = write_sta_report(&design.sta);
    let (placed, routed) = (fixture("mini_placed.def"), fixture("mini_routed.def"));
    let (spef, sta) = (fixture("mini.spef"), fixture("mini_sta.rpt"));

    bench_text(c, "lef", &[("fixture", &lef)], |t| {
        parse_lef(t).expect("lef");
    });
    bench_text(c, "liberty", &[("fixture", &lib)], |t| {
        parse_liberty(t).expect("lib");
    });
    bench_text(
        c,
        "def",
        &[
            ("fixture_placed", &placed),
            ("fixture_routed", &routed),
            ("synthetic_2k", &big_def),
        ],
        |t| {
            parse_def(t, &tech).expect("def");
        },
    );
    bench_text(
        c,
        "spef",
        &[("fixture", &spef), ("synthetic_2k", &big_spef)],
        |t| {
            parse_spef(t).expect("spef");
        },
    );
    bench_text(
        c,
        "sta",
        &[("fixture", &sta), ("synthetic_2k", &big_sta)],
        |t| {
            parse_sta_report(t).expect("sta");
        },
    );
}

criterion_group!(benches, parsers);
criterion_main!(benches);
