// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

pub mod synth;

use std::path::PathBuf;

use eda_schema::interchange::{
    parse_def, parse_gridded_csv, parse_lef, parse_liberty, parse_qor, parse_spef,
    parse_sta_report, CellCatalog, GridSamples, ParasiticSet, PhysicalNetlist, QorValues,
    TechLibrary, TimingPathRecord,
};
use eda_schema::schema::{assemble_stage, AssembleOptions, PdnSamples, StageArtifacts};
use eda_schema::{Stage, StageSnapshot};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every parsed fixture input.
pub struct Inputs {
    pub tech: TechLibrary,
    pub catalog: CellCatalog,
    pub placed: PhysicalNetlist,
    pub routed: PhysicalNetlist,
    pub spef: ParasiticSet,
    pub sta: Vec<TimingPathRecord>,
    pub qor: QorValues,
    pub ir_vdd: GridSamples,
    pub ir_vss: GridSamples,
    pub em_vdd: GridSamples,
}

impl Inputs {
    pub fn load() -> Inputs {
        let tech = parse_lef(&fixture("mini45.lef")).expect("lef");
        Inputs {
            catalog: parse_liberty(&fixture("mini45.lib")).expect("lib"),
            placed: parse_def(&fixture("mini_placed.def"), &tech).expect("placed def"),
            routed: parse_def(&fixture("mini_routed.def"), &tech).expect("routed def"),
            spef: parse_spef(&fixture("mini.spef")).expect("spef"),
            sta: parse_sta_report(&fixture("mini_sta.rpt")).expect("sta"),
            qor: parse_qor(&fixture("qor_final.json")).expect("qor"),
            ir_vdd: parse_gridded_csv(&fixture("ir_drop_vdd.csv")).expect("ir vdd"),
            ir_vss: parse_gridded_csv(&fixture("ir_drop_vss.csv")).expect("ir vss"),
            em_vdd: parse_gridded_csv(&fixture("em_vdd.csv")).expect("em vdd"),
            tech,
        }
    }

    /// Snapshot at `stage` using the inputs a flow would have by then.
    pub fn snapshot(&self, stage: Stage) -> StageSnapshot {
        let routed = stage >= Stage::DetailedRoute;
        let art = StageArtifacts {
            def: if routed { &self.routed } else { &self.placed },
            tech: &self.tech,
            catalog: &self.catalog,
            parasitics: routed.then_some(&self.spef),
            timing: &self.sta,
            qor: Some(&self.qor),
            pdn: if routed {
                PdnSamples {
                    ir_drop_vdd: Some(&self.ir_vdd),
                    ir_drop_vss: Some(&self.ir_vss),
                    em_vdd: Some(&self.em_vdd),
                    em_vss: None,
                }
            } else {
                PdnSamples::default()
            },
            clock_source: Some("clk"),
        };
        let opts = AssembleOptions {
            strap_pitch_um: Some(56.0),
            ..AssembleOptions::default()
        };
        assemble_stage(stage, &art, &opts).unwrap_or_else(|e| panic!("{stage}: {e}"))
    }
}
