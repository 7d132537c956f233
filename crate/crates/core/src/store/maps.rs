// SPDX-License-Identifier: Apache-2.0

//! Map files: NPY arrays (row 0 = bottom), bit-packed grids and JSON sidecars.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use npyz::WriterBuilder;
use serde::{Deserialize, Serialize};

use super::StoreError;
use crate::raster::{GridSpec, ScalarMap, SpatialMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Binary,
    Scalar,
}

/// Sidecar describing one stored map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSidecar {
    pub name: String,
    pub kind: MapKind,
    pub grid: GridSpec,
    pub unit: Option<String>,
    pub dtype: String,
    pub layout: String,
}

const LAYOUT: &str = "row-major, row 0 = bottom";

fn write_npy<T: npyz::AutoSerialize + Clone>(
    path: &Path,
    shape: [u64; 2],
    data: &[T],
) -> Result<(), StoreError> {
    let mut w = npyz::WriteOptions::new()
        .default_dtype()
        .shape(&shape)
        .writer(BufWriter::new(File::create(path)?))
        .begin_nd()?;
    w.extend(data.iter().cloned())?;
    w.finish()?;
    Ok(())
}

fn read_npy<T: npyz::Deserialize>(path: &Path, expect: [u64; 2]) -> Result<Vec<T>, StoreError> {
    let f = npyz::NpyFile::new(BufReader::new(File::open(path)?))?;
    if f.shape() != expect {
        return Err(StoreError::Corrupt(format!(
            "{} has shape {:?}, expected {:?}",
            path.display(),
            f.shape(),
            expect
        )));
    }
    Ok(f.into_vec()?)
}

fn shape(g: &GridSpec) -> [u64; 2] {
    [g.ny as u64, g.nx as u64]
}

fn write_sidecar(path: &Path, s: &MapSidecar) -> Result<(), StoreError> {
    fs::write(path, serde_json::to_vec_pretty(s)?)?;
    Ok(())
}

/// Files written for a map, relative to `dir`.
pub fn write_binary(dir: &Path, m: &SpatialMap) -> Result<Vec<String>, StoreError> {
    let n = &m.name;
    write_npy(&dir.join(format!("{n}.npy")), shape(&m.grid), &m.bits)?;
    fs::write(dir.join(format!("{n}.bits")), m.pack())?;
    write_sidecar(
        &dir.join(format!("{n}.json")),
        &MapSidecar {
            name: n.clone(),
            kind: MapKind::Binary,
            grid: m.grid,
            unit: None,
            dtype: "|b1".into(),
            layout: LAYOUT.into(),
        },
    )?;
    Ok(vec![
        format!("{n}.npy"),
        format!("{n}.bits"),
        format!("{n}.json"),
    ])
}

pub fn write_scalar(dir: &Path, m: &ScalarMap) -> Result<Vec<String>, StoreError> {
    let n = &m.name;
    write_npy(&dir.join(format!("{n}.npy")), shape(&m.grid), &m.values)?;
    write_npy(&dir.join(format!("{n}.mask.npy")), shape(&m.grid), &m.mask)?;
    write_sidecar(
        &dir.join(format!("{n}.json")),
        &MapSidecar {
            name: n.clone(),
            kind: MapKind::Scalar,
            grid: m.grid,
            unit: Some(m.unit.clone()),
            dtype: "<f8".into(),
            layout: LAYOUT.into(),
        },
    )?;
    Ok(vec![
        format!("{n}.npy"),
        format!("{n}.mask.npy"),
        format!("{n}.json"),
    ])
}

pub fn read_sidecar(dir: &Path, name: &str) -> Result<MapSidecar, StoreError> {
    Ok(serde_json::from_slice(&fs::read(
        dir.join(format!("{name}.json")),
    )?)?)
}

/// Binary map from its bit-packed file, cross-checked against the NPY copy.
pub fn read_binary(dir: &Path, s: &MapSidecar) -> Result<SpatialMap, StoreError> {
    let bytes = fs::read(dir.join(format!("{}.bits", s.name)))?;
    let m = SpatialMap::unpack(s.name.clone(), s.grid, &bytes)
        .ok_or_else(|| StoreError::Corrupt(format!("{}.bits has the wrong length", s.name)))?;
    let npy: Vec<bool> = read_npy(&dir.join(format!("{}.npy", s.name)), shape(&s.grid))?;
    if npy != m.bits {
        return Err(StoreError::Corrupt(format!(
            "{}: NPY and bit-packed copies differ",
            s.name
        )));
    }
    Ok(m)
}

pub fn read_scalar(dir: &Path, s: &MapSidecar) -> Result<ScalarMap, StoreError> {
    Ok(ScalarMap {
        name: s.name.clone(),
        grid: s.grid,
        unit: s.unit.clone().unwrap_or_default(),
        values: read_npy(&dir.join(format!("{}.npy", s.name)), shape(&s.grid))?,
        mask: read_npy(&dir.join(format!("{}.mask.npy", s.name)), shape(&s.grid))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, Rect};
    use crate::raster::make_grid;

    #[test]
    fn npy_header_and_orientation() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(&Rect::new(0, 0, 300, 200), 10, 10).unwrap();
        let mut m = SpatialMap::empty("m", g);
        m.mark_point(Point::new(5, 5));
        write_binary(dir.path(), &m).unwrap();
        let raw = fs::read(dir.path().join("m.npy")).unwrap();
        assert_eq!(&raw[..8], b"\x93NUMPY\x01\x00");
        let header = String::from_utf8_lossy(&raw[10..80]).to_string();
        assert!(header.contains("(2, 3"), "{header}");
        // first data byte is the bottom-left pixel
        let data_start = raw.len() - 6;
        assert_eq!(raw[data_start], 1);
        let back = read_binary(dir.path(), &read_sidecar(dir.path(), "m").unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
