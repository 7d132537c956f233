// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use eda_schema::interchange::{
    parse_def_diag, parse_gridded_csv, parse_lef_diag, parse_lef_into, parse_liberty_diag,
    parse_qor, parse_spef_diag, parse_sta_report_with, CellCatalog, Format, GridSamples, LayerKind,
    ParseError, ParseWarning, StaOptions, TechLibrary,
};
use eda_schema::schema::{
    assemble_stage, AssembleOptions, DesignConstraint, PdnSamples, StageArtifacts,
};
use eda_schema::store::{write_instance, InstanceSpec};
use eda_schema::Stage;

use crate::config::RunConfig;
use crate::exit::{say, usage};
use crate::parse_stage;

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Technology LEF first, then any cell LEFs.
    #[arg(long, required = true, num_args = 1..)]
    pub lef: Vec<PathBuf>,
    #[arg(long)]
    pub def: PathBuf,
    #[arg(long)]
    pub spef: Option<PathBuf>,
    #[arg(long, required = true, num_args = 1..)]
    pub lib: Vec<PathBuf>,
    #[arg(long)]
    pub sta: Option<PathBuf>,
    #[arg(long)]
    pub qor: Option<PathBuf>,
    /// Dataset root.
    #[arg(long, env = "EDA_SCHEMA_ROOT")]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_stage)]
    pub stage: Stage,
    /// Design name; defaults to the DEF design.
    #[arg(long)]
    pub design: Option<String>,
    /// JSON design constraint of this instance.
    #[arg(long)]
    pub constraint: Option<PathBuf>,
    /// Clock port or pin; detected when absent.
    #[arg(long)]
    pub clock: Option<String>,
    /// PDN strap pitch in µm, locating voltage sources.
    #[arg(long)]
    pub strap_pitch: Option<f64>,
    #[arg(long)]
    pub ir_drop_vdd: Option<PathBuf>,
    #[arg(long)]
    pub ir_drop_vss: Option<PathBuf>,
    #[arg(long)]
    pub em_vdd: Option<PathBuf>,
    #[arg(long)]
    pub em_vss: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    if !path.is_file() {
        return Err(usage(format!(
            "input file {} does not exist",
            path.display()
        )));
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Under strict parsing the first warning becomes an error.
fn strict_check(strict: bool, format: Format, warnings: &[ParseWarning]) -> Result<(), ParseError> {
    match warnings.first() {
        Some(w) if strict => Err(ParseError::new(format, w.line, w.message.clone())),
        _ => {
            for w in warnings {
                log::debug!("{format} line {}: {}", w.line, w.message);
            }
            Ok(())
        }
    }
}

fn at(path: &Path) -> String {
    format!("parsing {}", path.display())
}

fn load_tech(args: &IngestArgs, cfg: &RunConfig) -> anyhow::Result<TechLibrary> {
    let (first, rest) = args.lef.split_first().expect("clap requires one LEF");
    let (mut tech, warnings) = parse_lef_diag(&read(first)?).with_context(|| at(first))?;
    strict_check(cfg.strict, Format::Lef, &warnings).with_context(|| at(first))?;
    for p in rest {
        let warnings = parse_lef_into(&mut tech, &read(p)?).with_context(|| at(p))?;
        strict_check(cfg.strict, Format::Lef, &warnings).with_context(|| at(p))?;
    }
    if let Some(w_um) = cfg.w_m1 {
        let dbu = tech.dbu_per_micron;
        let m1 = tech
            .layers
            .iter_mut()
            .find(|l| l.kind == LayerKind::Routing)
            .ok_or_else(|| usage("w_m1 override given but the LEF has no routing layer"))?;
        m1.min_width = Some((w_um * dbu as f64).round() as i64);
    }
    Ok(tech)
}

fn load_catalog(args: &IngestArgs, cfg: &RunConfig) -> anyhow::Result<CellCatalog> {
    let mut catalog = CellCatalog::default();
    for p in &args.lib {
        let (lib, warnings) = parse_liberty_diag(&read(p)?).with_context(|| at(p))?;
        strict_check(cfg.strict, Format::Liberty, &warnings).with_context(|| at(p))?;
        if catalog.library.is_empty() {
            catalog.library = lib.library.clone();
        }
        catalog.cells.extend(lib.cells);
    }
    Ok(catalog)
}

fn load_csv(path: Option<&PathBuf>) -> anyhow::Result<Option<GridSamples>> {
    path.map(|p| parse_gridded_csv(&read(p)?).with_context(|| at(p)))
        .transpose()
}

pub fn run(args: &IngestArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let pdk = cfg.pdk()?;
    let tech = load_tech(args, cfg)?;
    let catalog = load_catalog(args, cfg)?;
    let (def, warnings) =
        parse_def_diag(&read(&args.def)?, &tech).with_context(|| at(&args.def))?;
    strict_check(cfg.strict, Format::Def, &warnings).with_context(|| at(&args.def))?;
    let spef = match &args.spef {
        Some(p) => {
            let (set, warnings) = parse_spef_diag(&read(p)?).with_context(|| at(p))?;
            strict_check(cfg.strict, Format::Spef, &warnings).with_context(|| at(p))?;
            Some(set)
        }
        None => None,
    };
    let timing = match &args.sta {
        Some(p) => {
            let opts = StaOptions {
                strict: cfg.strict,
                ..StaOptions::default()
            };
            let (recs, warnings) = parse_sta_report_with(&read(p)?, opts).with_context(|| at(p))?;
            strict_check(cfg.strict, Format::Sta, &warnings).with_context(|| at(p))?;
            recs
        }
        None => Vec::new(),
    };
    let qor = args
        .qor
        .as_ref()
        .map(|p| parse_qor(&read(p)?).with_context(|| at(p)))
        .transpose()?;
    let constraint: Option<DesignConstraint> = args
        .constraint
        .as_ref()
        .map(|p| -> anyhow::Result<DesignConstraint> {
            let c: DesignConstraint = serde_json::from_str(&read(p)?)
                .map_err(|e| usage(format!("constraint {}: {e}", p.display())))?;
            c.validate()?;
            Ok(c)
        })
        .transpose()?;
    let (ir_vdd, ir_vss) = (
        load_csv(args.ir_drop_vdd.as_ref())?,
        load_csv(args.ir_drop_vss.as_ref())?,
    );
    let (em_vdd, em_vss) = (
        load_csv(args.em_vdd.as_ref())?,
        load_csv(args.em_vss.as_ref())?,
    );

    let art = StageArtifacts {
        def: &def,
        tech: &tech,
        catalog: &catalog,
        parasitics: spef.as_ref(),
        timing: &timing,
        qor: qor.as_ref(),
        pdn: PdnSamples {
            ir_drop_vdd: ir_vdd.as_ref(),
            ir_drop_vss: ir_vss.as_ref(),
            em_vdd: em_vdd.as_ref(),
            em_vss: em_vss.as_ref(),
        },
        clock_source: args.clock.as_deref(),
    };
    let opts = AssembleOptions {
        k: cfg.k,
        anchor: cfg.anchor,
        strap_pitch_um: args.strap_pitch,
        ..AssembleOptions::default()
    };
    let snapshot = assemble_stage(args.stage, &art, &opts)?;
    let spec = InstanceSpec {
        design: args.design.clone().unwrap_or_else(|| def.design.clone()),
        pdk: pdk.as_str().to_string(),
        constraint,
        anchor: cfg.anchor,
        k: cfg.k,
    };
    let entry = write_instance(&args.out, &spec, std::slice::from_ref(&snapshot))?;
    say(&format!("{} {}\n", entry.id, args.stage.as_str()))
}
