// SPDX-License-Identifier: Apache-2.0

//! RUDY routing-demand maps (net, pin, long-range and short-range).

use serde::{Deserialize, Serialize};

use crate::geom::{Dbu, Point, Rect};
use crate::graphs::NetlistGraph;
use crate::raster::{GridSpec, ScalarMap};

/// One net as seen by RUDY: bounding box and pin locations, DBU.
#[derive(Clone, Debug, PartialEq)]
pub struct RudyNet {
    pub bbox: Rect,
    pub pins: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetSpan {
    Long,
    Short,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RudyOptions {
    /// Smallest allowed bbox side, DBU. Degenerate boxes grow to it.
    pub min_side: Dbu,
    pub dbu_per_micron: u32,
}

impl RudyOptions {
    /// Clamp to one binary-map pixel (w_M1).
    pub fn for_grid(grid: &GridSpec, dbu_per_micron: u32) -> RudyOptions {
        RudyOptions {
            min_side: grid.w_m1,
            dbu_per_micron,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RudyMaps {
    pub rudy_net: ScalarMap,
    pub rudy_pin: ScalarMap,
    pub rudy_net_long: ScalarMap,
    pub rudy_net_short: ScalarMap,
}

impl RudyMaps {
    pub fn into_vec(self) -> Vec<ScalarMap> {
        vec![
            self.rudy_net,
            self.rudy_net_long,
            self.rudy_net_short,
            self.rudy_pin,
        ]
    }
}

/// `(w + h) / (w * h)` with both sides first raised to `min_side`.
pub fn net_density(w: f64, h: f64, min_side: f64) -> f64 {
    let w = w.max(min_side);
    let h = h.max(min_side);
    (w + h) / (w * h)
}

/// Grow each side of `b` to at least `min_side`, keeping it centered.
pub fn clamp_box(b: &Rect, min_side: Dbu) -> Rect {
    let grow = |lo: Dbu, hi: Dbu| {
        let d = min_side - (hi - lo);
        if d > 0 {
            let lo2 = lo - d / 2;
            (lo2, lo2 + min_side)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = grow(b.x0, b.x1);
    let (y0, y1) = grow(b.y0, b.y1);
    Rect { x0, y0, x1, y1 }
}

/// Long iff the box meets at least two tiles with positive area.
pub fn classify_net_span(bbox: &Rect, grid: &GridSpec) -> NetSpan {
    match grid.covered_range(bbox) {
        Some((x0, x1, y0, y1)) if (x1 - x0) * (y1 - y0) >= 2 => NetSpan::Long,
        Some(_) => NetSpan::Short,
        None => {
            log::warn!("net box {bbox:?} lies outside the grid");
            NetSpan::Short
        }
    }
}

/// Net-RUDY and pin-RUDY per tile, split into long and short nets.
///
/// `rudy_net` is formed as `long + short` tile by tile, so the partition
/// identity is exact.
pub fn compute_rudy_maps(nets: &[RudyNet], grid: &GridSpec, opts: &RudyOptions) -> RudyMaps {
    let s = opts.dbu_per_micron as f64;
    let um2 = s * s;
    let mut long = ScalarMap::zeros("rudy_net_long", *grid, "um");
    let mut short = ScalarMap::zeros("rudy_net_short", *grid, "um");
    let mut pin = ScalarMap::zeros("rudy_pin", *grid, "1/um");
    for net in nets {
        let b = clamp_box(&net.bbox, opts.min_side);
        let density = net_density(b.width() as f64 / s, b.height() as f64 / s, 0.0);
        let target = match classify_net_span(&b, grid) {
            NetSpan::Long => &mut long,
            NetSpan::Short => &mut short,
        };
        if let Some((x0, x1, y0, y1)) = grid.covered_range(&b) {
            for iy in y0..y1 {
                for ix in x0..x1 {
                    if let Some(ov) = grid.tile_rect(ix, iy).intersection(&b) {
                        let i = grid.index(ix, iy);
                        target.values[i] += density * (ov.area() as f64 / um2);
                        target.mask[i] = true;
                    }
                }
            }
        }
        for p in &net.pins {
            if let Some((ix, iy)) = grid.tile_of(*p) {
                let i = grid.index(ix, iy);
                pin.values[i] += density;
                pin.mask[i] = true;
            }
        }
    }
    let mut net = ScalarMap::zeros("rudy_net", *grid, "um");
    for i in 0..grid.len() {
        net.values[i] = long.values[i] + short.values[i];
        net.mask[i] = long.mask[i] || short.mask[i];
    }
    RudyMaps {
        rudy_net: net,
        rudy_pin: pin,
        rudy_net_long: long,
        rudy_net_short: short,
    }
}

/// Signal nets with at least one placed endpoint; bbox is the union of pin
/// centers and port locations.
pub fn rudy_nets_from_graph(g: &NetlistGraph) -> Vec<RudyNet> {
    (0..g.nets.len())
        .filter(|&i| !g.nets[i].is_special)
        .filter_map(|i| {
            let pins = g.net_points(crate::graphs::NetId(i as u32));
            Rect::bounding(pins.iter().copied()).map(|bbox| RudyNet { bbox, pins })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::make_grid;

    #[test]
    fn density_values() {
        assert_eq!(net_density(2.0, 2.0, 0.0), 1.0);
        assert!((net_density(10.0, 1.0, 0.0) - 1.1).abs() < 1e-15);
        let (p, h) = (0.5, 4.0);
        assert_eq!(net_density(0.0, h, p), (p + h) / (p * h));
    }

    #[test]
    fn single_tile_net() {
        let grid = make_grid(&Rect::new(0, 0, 4000, 4000), 100, 10).unwrap();
        let opts = RudyOptions {
            min_side: 100,
            dbu_per_micron: 1000,
        };
        let n = RudyNet {
            bbox: Rect::new(1000, 1000, 2000, 2000),
            pins: vec![Point::new(1000, 1000), Point::new(2000, 2000)],
        };
        let m = compute_rudy_maps(&[n], &grid, &opts);
        // side s = 1 µm: (s + s) / s² * s² = 2
        assert!((m.rudy_net.get(1, 1) - 2.0).abs() < 1e-12);
        assert_eq!(m.rudy_net_long.sum(), 0.0);
        assert_eq!(m.rudy_net_short.values, m.rudy_net.values);
        assert_eq!(m.rudy_pin.get(1, 1), 2.0);
        assert_eq!(m.rudy_pin.get(2, 2), 2.0);
    }

    #[test]
    fn span_classification() {
        let grid = make_grid(&Rect::new(0, 0, 4000, 4000), 100, 10).unwrap();
        assert_eq!(
            classify_net_span(&Rect::new(100, 100, 900, 900), &grid),
            NetSpan::Short
        );
        assert_eq!(
            classify_net_span(&Rect::new(900, 100, 1100, 900), &grid),
            NetSpan::Long
        );
        assert_eq!(
            classify_net_span(&Rect::new(9000, 9000, 9100, 9100), &grid),
            NetSpan::Short
        );
        assert_eq!(
            clamp_box(&Rect::new(50, 50, 50, 50), 100),
            Rect::new(0, 0, 100, 100)
        );
    }
}
