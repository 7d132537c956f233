// SPDX-License-Identifier: Apache-2.0

mod common;

use std::fs;
use std::time::Instant;

use common::{synth, Inputs};
use eda_schema::raster::Anchor;
use eda_schema::schema::DesignConstraint;
use eda_schema::store::{
    export_tables, read_dataset, read_instance, write_instance, EntityKind, InstanceSpec,
    StoreError,
};
use eda_schema::Stage;

fn spec(design: &str) -> InstanceSpec {
    InstanceSpec {
        design: design.into(),
        pdk: "NG45".into(),
        constraint: Some(DesignConstraint {
            clock_period: 1.2,
            clock_uncertainty: 0.05,
            clock_latency: 0.0,
            clock_transition: 0.01,
            input_delay: 0.24,
            output_delay: 0.24,
            aspect_ratio: 1.0,
            utilization: 0.5,
            placement_density: 1.0,
        }),
        anchor: Anchor::Core,
        k: 50,
    }
}

#[test]
fn fixture_instance_roundtrip_is_field_identical() {
    let inp = Inputs::load();
    let snaps: Vec<_> = [
        Stage::Floorplan,
        Stage::Cts,
        Stage::DetailedRoute,
        Stage::Final,
    ]
    .into_iter()
    .map(|s| inp.snapshot(s))
    .collect();
    let dir = tempfile::tempdir().unwrap();
    let entry = write_instance(dir.path(), &spec("mini"), &snaps).unwrap();
    let b = read_instance(dir.path(), &entry.id).unwrap();
    assert_eq!(
        b.stages(),
        vec![
            Stage::Floorplan,
            Stage::Cts,
            Stage::DetailedRoute,
            Stage::Final
        ]
    );
    for s in &snaps {
        let back = b.load_stage(s.stage).unwrap();
        assert_eq!(&back, s, "{}", s.stage);
    }
}

#[test]
fn synthetic_5k_roundtrip() {
    let inp = Inputs::load();
    let d = synth::generate(&inp.tech, 5000, 7);
    let snaps: Vec<_> = [Stage::GlobalPlace, Stage::Cts, Stage::DetailedRoute]
        .into_iter()
        .map(|s| synth::snapshot(&d, &inp.tech, &inp.catalog, s, 4))
        .collect();
    for s in &snaps {
        assert!(s.netlist.gates.len() >= 5000);
    }
    assert_eq!(snaps.iter().map(|s| s.maps.len()).sum::<usize>(), 12);
    let dir = tempfile::tempdir().unwrap();
    let t0 = Instant::now();
    let entry = write_instance(dir.path(), &spec("synth"), &snaps).unwrap();
    let b = read_instance(dir.path(), &entry.id).unwrap();
    let back: Vec<_> = b
        .stages()
        .into_iter()
        .map(|s| b.load_stage(s).unwrap())
        .collect();
    let elapsed = t0.elapsed();
    assert_eq!(back, snaps);
    println!("store roundtrip of 3 x 5k-gate stages: {elapsed:?}");
}

#[test]
fn tampered_file_is_a_digest_mismatch() {
    let inp = Inputs::load();
    let dir = tempfile::tempdir().unwrap();
    let entry = write_instance(
        dir.path(),
        &spec("mini"),
        &[inp.snapshot(Stage::DetailedRoute)],
    )
    .unwrap();
    let st = &entry.stages[0];
    let target = dir.path().join(&st.path).join("maps").join("rudy_net.npy");
    let mut bytes = fs::read(&target).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x55;
    fs::write(&target, bytes).unwrap();
    let b = read_instance(dir.path(), &entry.id).unwrap();
    assert!(matches!(
        b.load_stage(Stage::DetailedRoute),
        Err(StoreError::DigestMismatch { .. })
    ));

    fs::remove_file(&target).unwrap();
    assert!(matches!(
        read_instance(dir.path(), &entry.id),
        Err(StoreError::MissingArtifact(_))
    ));
}

#[test]
fn collisions_and_invalid_snapshots_are_rejected() {
    let inp = Inputs::load();
    let dir = tempfile::tempdir().unwrap();
    let s = inp.snapshot(Stage::Cts);
    write_instance(dir.path(), &spec("mini"), std::slice::from_ref(&s)).unwrap();
    assert!(matches!(
        write_instance(dir.path(), &spec("mini"), std::slice::from_ref(&s)),
        Err(StoreError::PathCollision(_))
    ));
    let mut bad = inp.snapshot(Stage::Final);
    bad.timing_paths[0].slack += 1.0;
    assert!(matches!(
        write_instance(dir.path(), &spec("mini"), &[bad]),
        Err(StoreError::Validation { .. })
    ));
    let out_of_order = vec![
        inp.snapshot(Stage::DetailedRoute),
        inp.snapshot(Stage::GlobalPlace),
    ];
    assert!(matches!(
        write_instance(dir.path(), &spec("other"), &out_of_order),
        Err(StoreError::StageOrder)
    ));
}

#[test]
fn partial_instance_and_stage_merge() {
    let inp = Inputs::load();
    let dir = tempfile::tempdir().unwrap();
    let early: Vec<_> = [Stage::Floorplan, Stage::GlobalPlace, Stage::Cts]
        .into_iter()
        .map(|s| inp.snapshot(s))
        .collect();
    let e = write_instance(dir.path(), &spec("mini"), &early).unwrap();
    let b = read_instance(dir.path(), &e.id).unwrap();
    assert_eq!(b.stages().last(), Some(&Stage::Cts));
    let ds = b.load_all().unwrap();
    assert_eq!(ds.snapshots.len(), 3);
    assert!(matches!(
        b.load_stage(Stage::DetailedRoute),
        Err(StoreError::StageNotFound { .. })
    ));

    write_instance(
        dir.path(),
        &spec("mini"),
        &[inp.snapshot(Stage::DetailedRoute)],
    )
    .unwrap();
    let b = read_instance(dir.path(), &e.id).unwrap();
    assert_eq!(b.stages().len(), 4);
}

#[test]
fn export_prepends_keys_and_respects_windows() {
    let inp = Inputs::load();
    let dir = tempfile::tempdir().unwrap();
    write_instance(
        dir.path(),
        &spec("mini"),
        &[inp.snapshot(Stage::Cts), inp.snapshot(Stage::DetailedRoute)],
    )
    .unwrap();
    write_instance(dir.path(), &spec("mini2"), &[inp.snapshot(Stage::Cts)]).unwrap();
    let all = read_dataset(dir.path()).unwrap();
    assert_eq!(all.len(), 2);

    let gates = export_tables(&all, Stage::Cts, EntityKind::Gates).unwrap();
    assert_eq!(gates.num_rows(), 24);
    let names: Vec<&str> = gates
        .columns
        .iter()
        .take(4)
        .map(|(n, _)| n.as_str())
        .collect();
    assert_eq!(names, ["design", "pdk", "instance_id", "stage"]);
    assert!(gates
        .strs("stage")
        .unwrap()
        .iter()
        .all(|s| s.as_deref() == Some("cts")));

    let wires = export_tables(&all, Stage::Cts, EntityKind::Wires).unwrap();
    assert_eq!(wires.num_rows(), 0);
    let wires_dr = export_tables(&all, Stage::DetailedRoute, EntityKind::Wires).unwrap();
    assert!(wires_dr.num_rows() > 0);
    // the second instance lacks DR and is skipped
    let dr_gates = export_tables(&all, Stage::DetailedRoute, EntityKind::Gates).unwrap();
    assert_eq!(dr_gates.num_rows(), 12);
}
