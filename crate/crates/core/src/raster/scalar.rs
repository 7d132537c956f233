// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{GridSpec, RasterError};
use crate::interchange::GridSamples;

/// Real-valued tile map. `mask[i]` is true where at least one value landed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarMap {
    pub name: String,
    pub grid: GridSpec,
    pub unit: String,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ScalarMap {
    pub fn zeros(name: impl Into<String>, grid: GridSpec, unit: impl Into<String>) -> ScalarMap {
        ScalarMap {
            name: name.into(),
            grid,
            unit: unit.into(),
            values: vec![0.0; grid.len()],
            mask: vec![false; grid.len()],
        }
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    #[default]
    Mean,
    Max,
}

/// Bin µm samples into tiles (lower-left inclusive) and aggregate per tile.
pub fn grid_samples_to_scalar_map(
    name: impl Into<String>,
    samples: &GridSamples,
    grid: &GridSpec,
    dbu_per_micron: u32,
    agg: Aggregator,
) -> Result<ScalarMap, RasterError> {
    let mut m = ScalarMap::zeros(name, *grid, samples.value_unit.clone());
    let mut counts = vec![0u32; grid.len()];
    let p = grid.pitch() as f64;
    let scale = dbu_per_micron as f64;
    let mut landed = 0usize;
    for s in &samples.samples {
        let fx = ((s.x * scale - grid.origin.x as f64) / p).floor();
        let fy = ((s.y * scale - grid.origin.y as f64) / p).floor();
        if fx < 0.0 || fy < 0.0 || fx >= grid.nx as f64 || fy >= grid.ny as f64 {
            continue;
        }
        let i = grid.index(fx as usize, fy as usize);
        landed += 1;
        let v = &mut m.values[i];
        *v = match (agg, counts[i]) {
            (_, 0) => s.value,
            (Aggregator::Mean, _) => *v + s.value,
            (Aggregator::Max, _) => v.max(s.value),
        };
        counts[i] += 1;
        m.mask[i] = true;
    }
    if landed == 0 && !samples.samples.is_empty() {
        return Err(RasterError::NoSamplesInRange(samples.samples.len()));
    }
    if agg == Aggregator::Mean {
        for (v, c) in m.values.iter_mut().zip(&counts) {
            if *c > 1 {
                *v /= *c as f64;
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::interchange::GridSample;
    use crate::raster::make_grid;

    fn samples(v: &[(f64, f64, f64)]) -> GridSamples {
        GridSamples {
            value_name: "ir".into(),
            value_unit: "mV".into(),
            coord_unit: "um".into(),
            samples: v
                .iter()
                .map(|&(x, y, value)| GridSample { x, y, value })
                .collect(),
        }
    }

    #[test]
    fn mean_and_max() {
        let g = make_grid(&Rect::new(0, 0, 2000, 2000), 100, 10).unwrap();
        let s = samples(&[(0.1, 0.1, 2.0), (0.5, 0.5, 4.0), (1.5, 1.5, 7.0)]);
        let m = grid_samples_to_scalar_map("ir", &s, &g, 1000, Aggregator::Mean).unwrap();
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 1), 7.0);
        assert!(!m.mask[g.index(1, 0)]);
        let m = grid_samples_to_scalar_map("ir", &s, &g, 1000, Aggregator::Max).unwrap();
        assert_eq!(m.get(0, 0), 4.0);
        assert_eq!(m.unit, "mV");
    }

    #[test]
    fn all_outside_is_an_error() {
        let g = make_grid(&Rect::new(0, 0, 2000, 2000), 100, 10).unwrap();
        let s = samples(&[(50.0, 50.0, 1.0)]);
        assert!(grid_samples_to_scalar_map("ir", &s, &g, 1000, Aggregator::Mean).is_err());
        let e = samples(&[]);
        assert!(grid_samples_to_scalar_map("ir", &e, &g, 1000, Aggregator::Mean).is_ok());
    }
}
