// SPDX-License-Identifier: Apache-2.0

//! Binary spatial maps and scalar tile maps on metal-1-derived grids.
//!
//! Pixel side is `k * w_M1` (k = 1 for binary maps). Resolutions use ceiling
//! division so the grid always covers the anchored box.

mod bitmap;
mod grid;
mod render;
mod scalar;

use thiserror::Error;

use crate::geom::{Dbu, Rect};
use crate::schema::{Stage, Window};

pub use self::bitmap::{rasterize_rects, SpatialMap};
pub use self::grid::{make_grid, Anchor, GridSpec};
pub use self::render::{render_clock_maps, render_netlist_maps, render_pdn_maps, MapRequest};
pub use self::scalar::{grid_samples_to_scalar_map, Aggregator, ScalarMap};

/// Default downsampling factor for scalar maps.
pub const DEFAULT_K: u32 = 50;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("degenerate layout box {0:?}")]
    DegenerateArea(Rect),
    #[error("invalid pixel pitch: w_M1 = {w_m1}, k = {k}")]
    InvalidPitch { w_m1: Dbu, k: u32 },
    #[error("map `{map}` is available only at {window}, not at {stage}")]
    Unavailable {
        map: String,
        stage: Stage,
        window: Window,
    },
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("design has no special (power) nets")]
    NoSpecialNets,
    #[error("all {0} samples fall outside the grid")]
    NoSamplesInRange(usize),
}
