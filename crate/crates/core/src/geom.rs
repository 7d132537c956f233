// SPDX-License-Identifier: Apache-2.0

//! Integer layout geometry in database units (DBU).

use serde::{Deserialize, Serialize};

/// Database unit. All stored geometry uses this integer type.
pub type Dbu = i64;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Point {
    pub x: Dbu,
    pub y: Dbu,
}

impl Point {
    pub const fn new(x: Dbu, y: Dbu) -> Self {
        Point { x, y }
    }
}

/// Axis-aligned rectangle, normalized so that `x0 <= x1` and `y0 <= y1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: Dbu,
    pub y0: Dbu,
    pub x1: Dbu,
    pub y1: Dbu,
}

impl Rect {
    pub fn new(xa: Dbu, ya: Dbu, xb: Dbu, yb: Dbu) -> Self {
        Rect {
            x0: xa.min(xb),
            y0: ya.min(yb),
            x1: xa.max(xb),
            y1: ya.max(yb),
        }
    }

    pub fn from_points(a: Point, b: Point) -> Self {
        Rect::new(a.x, a.y, b.x, b.y)
    }

    pub fn width(&self) -> Dbu {
        self.x1 - self.x0
    }

    pub fn height(&self) -> Dbu {
        self.y1 - self.y0
    }

    /// Area as `i128` so that large dies cannot overflow.
    pub fn area(&self) -> i128 {
        self.width() as i128 * self.height() as i128
    }

    pub fn has_area(&self) -> bool {
        self.x1 > self.x0 && self.y1 > self.y0
    }

    /// Center point, rounded toward negative infinity on odd extents.
    pub fn center(&self) -> Point {
        Point::new(
            (self.x0 + self.x1).div_euclid(2),
            (self.y0 + self.y1).div_euclid(2),
        )
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.y0 >= self.y0 && other.x1 <= self.x1 && other.y1 <= self.y1
    }

    pub fn translate(&self, dx: Dbu, dy: Dbu) -> Rect {
        Rect {
            x0: self.x0 + dx,
            y0: self.y0 + dy,
            x1: self.x1 + dx,
            y1: self.y1 + dy,
        }
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }

    /// Intersection, `None` when the overlap has no positive area.
    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let r = Rect {
            x0: self.x0.max(other.x0),
            y0: self.y0.max(other.y0),
            x1: self.x1.min(other.x1),
            y1: self.y1.min(other.y1),
        };
        r.has_area().then_some(r)
    }

    /// Bounding box of a point set; `None` for an empty set.
    pub fn bounding<I: IntoIterator<Item = Point>>(points: I) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first.x, first.y, first.x, first.y);
        for p in it {
            r.x0 = r.x0.min(p.x);
            r.y0 = r.y0.min(p.y);
            r.x1 = r.x1.max(p.x);
            r.y1 = r.y1.max(p.y);
        }
        Some(r)
    }
}

/// Cell and pin orientation as used by DEF placements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orient {
    #[default]
    N,
    S,
    E,
    W,
    FN,
    FS,
    FE,
    FW,
}

impl Orient {
    pub fn parse(token: &str) -> Option<Orient> {
        Some(match token {
            "N" | "R0" => Orient::N,
            "S" | "R180" => Orient::S,
            "E" | "R270" => Orient::E,
            "W" | "R90" => Orient::W,
            "FN" | "MY" => Orient::FN,
            "FS" | "MX" => Orient::FS,
            "FE" | "MYR90" => Orient::FE,
            "FW" | "MXR90" => Orient::FW,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Orient::N => "N",
            Orient::S => "S",
            Orient::E => "E",
            Orient::W => "W",
            Orient::FN => "FN",
            Orient::FS => "FS",
            Orient::FE => "FE",
            Orient::FW => "FW",
        }
    }

    fn swaps_axes(&self) -> bool {
        matches!(self, Orient::E | Orient::W | Orient::FE | Orient::FW)
    }

    /// Transform a rectangle given in a cell's local frame (cell size `w` x `h`)
    /// and place it so that the oriented cell's lower-left corner lands on `origin`.
    pub fn place_rect(&self, r: &Rect, w: Dbu, h: Dbu, origin: Point) -> Rect {
        let map = |x: Dbu, y: Dbu| -> (Dbu, Dbu) {
            match self {
                Orient::N => (x, y),
                Orient::S => (w - x, h - y),
                Orient::W => (h - y, x),
                Orient::E => (y, w - x),
                Orient::FN => (w - x, y),
                Orient::FS => (x, h - y),
                Orient::FW => (y, x),
                Orient::FE => (h - y, w - x),
            }
        };
        let (ax, ay) = map(r.x0, r.y0);
        let (bx, by) = map(r.x1, r.y1);
        Rect::new(ax, ay, bx, by).translate(origin.x, origin.y)
    }

    /// Rotate/mirror a rectangle about the origin (used for DEF I/O pin shapes,
    /// which are given relative to the pin's placement point).
    pub fn rotate_rect(&self, r: &Rect) -> Rect {
        let map = |x: Dbu, y: Dbu| -> (Dbu, Dbu) {
            match self {
                Orient::N => (x, y),
                Orient::S => (-x, -y),
                Orient::W => (-y, x),
                Orient::E => (y, -x),
                Orient::FN => (-x, y),
                Orient::FS => (x, -y),
                Orient::FW => (y, x),
                Orient::FE => (-y, -x),
            }
        };
        let (ax, ay) = map(r.x0, r.y0);
        let (bx, by) = map(r.x1, r.y1);
        Rect::new(ax, ay, bx, by)
    }

    /// Footprint of a `w` x `h` cell placed at `origin` with this orientation.
    pub fn footprint(&self, w: Dbu, h: Dbu, origin: Point) -> Rect {
        let (fw, fh) = if self.swaps_axes() { (h, w) } else { (w, h) };
        Rect::new(origin.x, origin.y, origin.x + fw, origin.y + fh)
    }
}

/// Convert a micron value to DBU, rounding to the nearest unit.
pub fn um_to_dbu(um: f64, dbu_per_micron: u32) -> Dbu {
    (um * dbu_per_micron as f64).round() as Dbu
}

pub fn dbu_to_um(v: Dbu, dbu_per_micron: u32) -> f64 {
    v as f64 / dbu_per_micron as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_normalizes_and_intersects() {
        let a = Rect::new(10, 10, 0, 0);
        assert_eq!(a, Rect::new(0, 0, 10, 10));
        let b = Rect::new(5, 5, 15, 15);
        assert_eq!(a.intersection(&b), Some(Rect::new(5, 5, 10, 10)));
        // edge contact has no area
        assert_eq!(a.intersection(&Rect::new(10, 0, 20, 10)), None);
    }

    #[test]
    fn orientations_keep_footprint() {
        let (w, h) = (40, 10);
        let cell = Rect::new(0, 0, w, h);
        for o in [
            Orient::N,
            Orient::S,
            Orient::E,
            Orient::W,
            Orient::FN,
            Orient::FS,
            Orient::FE,
            Orient::FW,
        ] {
            let placed = o.place_rect(&cell, w, h, Point::new(100, 200));
            assert_eq!(placed, o.footprint(w, h, Point::new(100, 200)), "{o:?}");
        }
    }

    #[test]
    fn orientation_moves_pin() {
        // pin in the lower-left corner of a 40x10 cell
        let pin = Rect::new(0, 0, 2, 2);
        assert_eq!(Orient::N.place_rect(&pin, 40, 10, Point::default()), pin);
        assert_eq!(
            Orient::S.place_rect(&pin, 40, 10, Point::default()),
            Rect::new(38, 8, 40, 10)
        );
        assert_eq!(
            Orient::FN.place_rect(&pin, 40, 10, Point::default()),
            Rect::new(38, 0, 40, 2)
        );
        assert_eq!(
            Orient::FS.place_rect(&pin, 40, 10, Point::default()),
            Rect::new(0, 8, 2, 10)
        );
    }

    #[test]
    fn micron_conversion() {
        assert_eq!(um_to_dbu(1.4, 2000), 2800);
        assert_eq!(dbu_to_um(2800, 2000), 1.4);
    }
}
