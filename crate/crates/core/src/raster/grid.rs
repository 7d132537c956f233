// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::RasterError;
use crate::geom::{Dbu, Point, Rect};

/// Which layout box the grid is anchored to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    #[default]
    Core,
    Die,
}

/// Square-pixel grid of side `k * w_m1` anchored at `origin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point,
    /// Extent along x (L) and y (W), DBU.
    pub l: Dbu,
    pub w: Dbu,
    pub w_m1: Dbu,
    pub k: u32,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn pitch(&self) -> Dbu {
        self.k as Dbu * self.w_m1
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, row 0 at the bottom.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn tile_rect(&self, ix: usize, iy: usize) -> Rect {
        let p = self.pitch();
        let x0 = self.origin.x + ix as Dbu * p;
        let y0 = self.origin.y + iy as Dbu * p;
        Rect::new(x0, y0, x0 + p, y0 + p)
    }

    /// Covered region, which may exceed `l` x `w` on the last row/column.
    pub fn extent(&self) -> Rect {
        let p = self.pitch();
        Rect::new(
            self.origin.x,
            self.origin.y,
            self.origin.x + self.nx as Dbu * p,
            self.origin.y + self.ny as Dbu * p,
        )
    }

    /// Half-open pixel ranges `[x_lo, x_hi) x [y_lo, y_hi)` whose cells meet
    /// `r` with positive area; `None` when there are none.
    pub fn covered_range(&self, r: &Rect) -> Option<(usize, usize, usize, usize)> {
        if !r.has_area() {
            return None;
        }
        let p = self.pitch();
        let lo = |v: Dbu, o: Dbu| (v - o).div_euclid(p);
        let hi = |v: Dbu, o: Dbu| -((o - v).div_euclid(p));
        let clamp = |v: Dbu, n: usize| v.clamp(0, n as Dbu) as usize;
        let x_lo = clamp(lo(r.x0, self.origin.x), self.nx);
        let x_hi = clamp(hi(r.x1, self.origin.x), self.nx);
        let y_lo = clamp(lo(r.y0, self.origin.y), self.ny);
        let y_hi = clamp(hi(r.y1, self.origin.y), self.ny);
        (x_lo < x_hi && y_lo < y_hi).then_some((x_lo, x_hi, y_lo, y_hi))
    }

    /// Tile holding `pt`, lower-left inclusive; `None` outside the grid.
    pub fn tile_of(&self, pt: Point) -> Option<(usize, usize)> {
        let p = self.pitch();
        let ix = (pt.x - self.origin.x).div_euclid(p);
        let iy = (pt.y - self.origin.y).div_euclid(p);
        (ix >= 0 && iy >= 0 && (ix as usize) < self.nx && (iy as usize) < self.ny)
            .then_some((ix as usize, iy as usize))
    }
}

/// Grid over `area` with pixel side `k * w_m1`, sized by ceiling division.
pub fn make_grid(area: &Rect, w_m1: Dbu, k: u32) -> Result<GridSpec, RasterError> {
    if w_m1 <= 0 || k == 0 {
        return Err(RasterError::InvalidPitch { w_m1, k });
    }
    if !area.has_area() {
        return Err(RasterError::DegenerateArea(*area));
    }
    let p = k as Dbu * w_m1;
    let ceil = |v: Dbu| ((v + p - 1) / p) as usize;
    Ok(GridSpec {
        origin: Point::new(area.x0, area.y0),
        l: area.width(),
        w: area.height(),
        w_m1,
        k,
        nx: ceil(area.width()),
        ny: ceil(area.height()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceiling_resolution() {
        let g = make_grid(&Rect::new(0, 0, 100 * 140, 100 * 140), 140, 1).unwrap();
        assert_eq!((g.nx, g.ny), (100, 100));
        let g = make_grid(&Rect::new(0, 0, 101 * 140, 100 * 140), 140, 1).unwrap();
        assert_eq!(g.nx, 101);
        let g = make_grid(&Rect::new(0, 0, 1000 * 140, 1000 * 140), 140, 50).unwrap();
        assert_eq!((g.nx, g.ny), (20, 20));
        let g = make_grid(&Rect::new(0, 0, 141, 1), 140, 1).unwrap();
        assert_eq!((g.nx, g.ny), (2, 1));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(make_grid(&Rect::new(0, 0, 0, 10), 1, 1).is_err());
        assert!(make_grid(&Rect::new(0, 0, 10, 10), 0, 1).is_err());
        assert!(make_grid(&Rect::new(0, 0, 10, 10), 1, 0).is_err());
    }

    #[test]
    fn covered_range_uses_positive_overlap() {
        let g = make_grid(&Rect::new(0, 0, 100, 100), 10, 1).unwrap();
        assert_eq!(
            g.covered_range(&Rect::new(0, 0, 10, 10)),
            Some((0, 1, 0, 1))
        );
        assert_eq!(
            g.covered_range(&Rect::new(9, 0, 11, 10)),
            Some((0, 2, 0, 1))
        );
        assert_eq!(g.covered_range(&Rect::new(-50, -50, 0, 0)), None);
        assert_eq!(
            g.covered_range(&Rect::new(95, 95, 500, 500)),
            Some((9, 10, 9, 10))
        );
        assert_eq!(g.tile_of(Point::new(10, 0)), Some((1, 0)));
        assert_eq!(g.tile_of(Point::new(100, 0)), None);
    }
}
