// SPDX-License-Identifier: Apache-2.0

//! Map export, RUDY recomputation and grayscale previews.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use eda_schema::raster::{make_grid, Anchor, GridSpec, RasterError, ScalarMap, SpatialMap};
use eda_schema::routability::{compute_rudy_maps, rudy_nets_from_graph, RudyOptions};
use eda_schema::schema::availability::{check, map_window};
use eda_schema::store::{read_instance, write_binary, write_scalar};
use eda_schema::{Stage, StageSnapshot};

use crate::exit::{say, usage};
use crate::parse_stage;

#[derive(Debug, Args)]
pub struct MapsArgs {
    #[arg(long, env = "EDA_SCHEMA_ROOT")]
    pub dataset: PathBuf,
    #[arg(long)]
    pub instance: String,
    #[arg(long, value_parser = parse_stage)]
    pub stage: Stage,
    /// `all`, or a comma-separated list of map names.
    #[arg(long, default_value = "all")]
    pub which: String,
    /// Also write 8-bit grayscale PNG previews.
    #[arg(long)]
    pub png: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RudyArgs {
    #[arg(long, env = "EDA_SCHEMA_ROOT")]
    pub dataset: PathBuf,
    #[arg(long)]
    pub instance: String,
    #[arg(long, value_parser = parse_stage)]
    pub stage: Stage,
    /// Downsampling factor; the run configuration's `k` when absent.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub png: bool,
    #[arg(long)]
    pub out: PathBuf,
}

enum Map<'a> {
    Binary(&'a SpatialMap),
    Scalar(&'a ScalarMap),
}

fn load(dataset: &Path, instance: &str, stage: Stage) -> anyhow::Result<(Anchor, StageSnapshot)> {
    let bundle = read_instance(dataset, instance)?;
    let snap = bundle.load_stage(stage)?;
    Ok((bundle.entry.anchor, snap))
}

fn selected<'a>(snap: &'a StageSnapshot, which: &str) -> anyhow::Result<Vec<Map<'a>>> {
    if which == "all" {
        let mut out: Vec<(&String, Map)> = snap
            .maps
            .binary
            .iter()
            .map(|(n, m)| (n, Map::Binary(m)))
            .collect();
        out.extend(snap.maps.scalar.iter().map(|(n, m)| (n, Map::Scalar(m))));
        out.sort_by(|a, b| a.0.cmp(b.0));
        return Ok(out.into_iter().map(|(_, m)| m).collect());
    }
    let mut out = Vec::new();
    for name in which.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let window = map_window(name).ok_or_else(|| usage(format!("unknown map `{name}`")))?;
        if !window.contains(snap.stage) {
            return Err(RasterError::Unavailable {
                map: name.to_string(),
                stage: snap.stage,
                window,
            }
            .into());
        }
        let m = match (snap.maps.binary.get(name), snap.maps.scalar.get(name)) {
            (Some(b), _) => Map::Binary(b),
            (None, Some(s)) => Map::Scalar(s),
            (None, None) => {
                return Err(eda_schema::store::StoreError::Corrupt(format!(
                    "map `{name}` was not stored at {}",
                    snap.stage
                ))
                .into())
            }
        };
        out.push(m);
    }
    if out.is_empty() {
        return Err(usage("--which names no maps"));
    }
    Ok(out)
}

/// Grayscale pixels with the top image row holding the highest grid row.
fn gray(grid: &GridSpec, value: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let mut px = Vec::with_capacity(grid.len());
    for iy in (0..grid.ny).rev() {
        for ix in 0..grid.nx {
            px.push(value(ix, iy));
        }
    }
    px
}

fn write_png(path: &Path, grid: &GridSpec, pixels: &[u8]) -> anyhow::Result<()> {
    let w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    let mut enc = png::Encoder::new(w, grid.nx as u32, grid.ny as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::Eight);
    enc.write_header()?.write_image_data(pixels)?;
    Ok(())
}

pub fn binary_pixels(m: &SpatialMap) -> Vec<u8> {
    gray(&m.grid, |ix, iy| if m.get(ix, iy) { 255 } else { 0 })
}

/// Values scaled so the map maximum is white; unsampled tiles are black.
pub fn scalar_pixels(m: &ScalarMap) -> Vec<u8> {
    let max = m
        .values
        .iter()
        .zip(&m.mask)
        .filter(|(v, &ok)| ok && v.is_finite())
        .map(|(v, _)| *v)
        .fold(0.0f64, f64::max);
    gray(&m.grid, |ix, iy| {
        let i = m.grid.index(ix, iy);
        if !m.mask[i] || max <= 0.0 {
            0
        } else {
            (m.values[i].max(0.0) / max * 255.0).round() as u8
        }
    })
}

fn export(maps: &[Map], out: &Path, png: bool) -> anyhow::Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut listing = String::new();
    for m in maps {
        let (name, grid, pixels) = match m {
            Map::Binary(b) => {
                write_binary(out, b)?;
                (&b.name, b.grid, png.then(|| binary_pixels(b)))
            }
            Map::Scalar(s) => {
                write_scalar(out, s)?;
                (&s.name, s.grid, png.then(|| scalar_pixels(s)))
            }
        };
        if let Some(px) = pixels {
            write_png(&out.join(format!("{name}.png")), &grid, &px)?;
        }
        listing.push_str(&format!("{name} {}x{}\n", grid.nx, grid.ny));
    }
    say(&listing)
}

pub fn run_maps(args: &MapsArgs) -> anyhow::Result<()> {
    let (_, snap) = load(&args.dataset, &args.instance, args.stage)?;
    let maps = selected(&snap, &args.which)?;
    export(&maps, &args.out, args.png)
}

pub fn run_rudy(args: &RudyArgs, default_k: u32) -> anyhow::Result<()> {
    let k = args.k.unwrap_or(default_k);
    if k < 1 {
        return Err(usage("k must be at least 1"));
    }
    check("routability.rudy_net", args.stage)?;
    let (anchor, snap) = load(&args.dataset, &args.instance, args.stage)?;
    let ctx = &snap.netlist.context;
    let area = match anchor {
        Anchor::Core => ctx.core_box,
        Anchor::Die => ctx.die_box,
    };
    let pixel = make_grid(&area, ctx.w_m1, 1)?;
    let grid = make_grid(&area, ctx.w_m1, k)?;
    let rudy = compute_rudy_maps(
        &rudy_nets_from_graph(&snap.netlist),
        &grid,
        &RudyOptions::for_grid(&pixel, ctx.dbu_per_micron),
    );
    let maps = rudy.into_vec();
    export(
        &maps.iter().map(Map::Scalar).collect::<Vec<_>>(),
        &args.out,
        args.png,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use eda_schema::Rect;

    #[test]
    fn previews_put_row_zero_at_the_bottom() {
        let grid = make_grid(&Rect::new(0, 0, 200, 300), 100, 1).unwrap();
        let mut m = SpatialMap::empty("m", grid);
        m.fill_rect(&Rect::new(0, 0, 100, 100));
        let px = binary_pixels(&m);
        assert_eq!(px.len(), 6);
        // bottom-left tile lands in the last image row
        assert_eq!(px, vec![0, 0, 0, 0, 255, 0]);
    }

    #[test]
    fn scalar_previews_scale_to_the_maximum() {
        let grid = make_grid(&Rect::new(0, 0, 200, 100), 100, 1).unwrap();
        let mut m = ScalarMap::zeros("s", grid, "u");
        m.values = vec![1.0, 4.0];
        m.mask = vec![true, true];
        assert_eq!(scalar_pixels(&m), vec![64, 255]);
        m.values = vec![0.0, 0.0];
        assert_eq!(scalar_pixels(&m), vec![0, 0]);
    }
}
