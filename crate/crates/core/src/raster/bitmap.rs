// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::GridSpec;
use crate::geom::{Point, Rect};

/// Binary occupancy map, row-major with row 0 at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialMap {
    pub name: String,
    pub grid: GridSpec,
    pub bits: Vec<bool>,
}

impl SpatialMap {
    pub fn empty(name: impl Into<String>, grid: GridSpec) -> SpatialMap {
        SpatialMap {
            name: name.into(),
            grid,
            bits: vec![false; grid.len()],
        }
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.bits[self.grid.index(ix, iy)]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Set every pixel that meets `r` with positive area.
    pub fn fill_rect(&mut self, r: &Rect) {
        if let Some((x0, x1, y0, y1)) = self.grid.covered_range(r) {
            for iy in y0..y1 {
                let row = iy * self.grid.nx;
                self.bits[row + x0..row + x1].fill(true);
            }
        }
    }

    /// Set the pixel holding `pt` (lower-left inclusive).
    pub fn mark_point(&mut self, pt: Point) {
        if let Some((ix, iy)) = self.grid.tile_of(pt) {
            let i = self.grid.index(ix, iy);
            self.bits[i] = true;
        }
    }

    /// Rectangles with area are filled; degenerate ones mark their center pixel.
    pub fn mark_shape(&mut self, r: &Rect) {
        if r.has_area() {
            self.fill_rect(r);
        } else {
            self.mark_point(r.center());
        }
    }

    pub fn or_assign(&mut self, other: &SpatialMap) {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn is_subset_of(&self, other: &SpatialMap) -> bool {
        self.grid == other.grid && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    pub fn intersects(&self, other: &SpatialMap) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| *a && *b)
    }

    /// Bit-packed row-major bytes, MSB first within each byte.
    pub fn pack(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, _) in self.bits.iter().enumerate().filter(|(_, b)| **b) {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    pub fn unpack(name: impl Into<String>, grid: GridSpec, bytes: &[u8]) -> Option<SpatialMap> {
        let n = grid.len();
        if bytes.len() != n.div_ceil(8) {
            return None;
        }
        let bits = (0..n)
            .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
            .collect();
        Some(SpatialMap {
            name: name.into(),
            grid,
            bits,
        })
    }
}

/// Binary map with a pixel set iff some rectangle meets it with positive area.
pub fn rasterize_rects<'a, I>(name: impl Into<String>, rects: I, grid: &GridSpec) -> SpatialMap
where
    I: IntoIterator<Item = &'a Rect>,
{
    let mut m = SpatialMap::empty(name, *grid);
    for r in rects {
        m.fill_rect(r);
    }
    m
}
