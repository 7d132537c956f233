// SPDX-License-Identifier: Apache-2.0

//! Parameter sweep generation per PDK.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::schema::DesignConstraint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pdk {
    Ng45,
    Sky130,
    Ihp130,
    Asap7,
}

/// Per-PDK flow settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdkParams {
    pub utilizations: [f64; 3],
    /// µm.
    pub core_margin: f64,
    /// ns.
    pub clock_transition: f64,
    pub routing_layers: u32,
    /// µm.
    pub strap_pitch: f64,
    pub rail_pitch: f64,
}

impl Pdk {
    pub const ALL: [Pdk; 4] = [Pdk::Ng45, Pdk::Sky130, Pdk::Ihp130, Pdk::Asap7];

    pub fn as_str(&self) -> &'static str {
        match self {
            Pdk::Ng45 => "NG45",
            Pdk::Sky130 => "SKY130",
            Pdk::Ihp130 => "IHP130",
            Pdk::Asap7 => "ASAP7",
        }
    }

    pub fn params(&self) -> PdkParams {
        match self {
            Pdk::Ng45 => PdkParams {
                utilizations: [0.3, 0.4, 0.5],
                core_margin: 5.72,
                clock_transition: 0.05,
                routing_layers: 10,
                strap_pitch: 28.0,
                rail_pitch: 1.4,
            },
            Pdk::Sky130 => PdkParams {
                utilizations: [0.2, 0.3, 0.4],
                core_margin: 22.4,
                clock_transition: 0.1875,
                routing_layers: 5,
                strap_pitch: 54.4,
                rail_pitch: 2.72,
            },
            Pdk::Ihp130 => PdkParams {
                utilizations: [0.2, 0.3, 0.4],
                core_margin: 22.72,
                clock_transition: 0.1875,
                routing_layers: 7,
                strap_pitch: 75.6,
                rail_pitch: 3.78,
            },
            Pdk::Asap7 => PdkParams {
                utilizations: [0.3, 0.4, 0.5],
                core_margin: 2.29,
                clock_transition: 0.02375,
                routing_layers: 9,
                strap_pitch: 5.4,
                rail_pitch: 0.27,
            },
        }
    }
}

impl fmt::Display for Pdk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pdk {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Pdk, AnalysisError> {
        Pdk::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| AnalysisError::UnknownPdk(s.to_string()))
    }
}

pub const ASPECT_RATIOS: [f64; 3] = [0.5, 1.0, 1.5];
pub const PLACEMENT_DENSITIES: [f64; 3] = [1.0, 1.25, 1.5];
/// Clock latency cap, ns.
pub const LATENCY_CAP: f64 = 0.05;
/// Clock uncertainty caps, ns: the prose value (default) and the table value.
pub const UNCERTAINTY_CAP_TEXT: f64 = 0.25;
pub const UNCERTAINTY_CAP_TABLE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub uncertainty_cap: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            uncertainty_cap: UNCERTAINTY_CAP_TEXT,
        }
    }
}

/// Constraint set for one clock period.
pub fn derive_constraint(
    period: f64,
    aspect_ratio: f64,
    utilization: f64,
    density: f64,
    pdk: Pdk,
    opts: &SweepOptions,
) -> DesignConstraint {
    DesignConstraint {
        clock_period: period,
        clock_uncertainty: (0.05 * period).min(opts.uncertainty_cap),
        clock_latency: (0.01 * period).min(LATENCY_CAP),
        clock_transition: pdk.params().clock_transition,
        input_delay: 0.2 * period,
        output_delay: 0.2 * period,
        aspect_ratio,
        utilization,
        placement_density: density,
    }
}

/// Clock periods {0.8·BF, BF, BP, 1.2·BP}, duplicates removed, ascending.
pub fn sweep_clocks(bp_period: f64, bf_period: f64) -> Result<Vec<f64>, AnalysisError> {
    if !(bf_period > 0.0) || bp_period < bf_period {
        return Err(AnalysisError::InvertedPeriods {
            bp: bp_period,
            bf: bf_period,
        });
    }
    let mut v = vec![0.8 * bf_period, bf_period, bp_period, 1.2 * bp_period];
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(b.abs()));
    Ok(v)
}

/// Cross product of clocks, aspect ratios, utilizations and placement densities.
pub fn sweep_manifest(
    bp_period: f64,
    bf_period: f64,
    pdk: Pdk,
    opts: &SweepOptions,
) -> Result<Vec<DesignConstraint>, AnalysisError> {
    let clocks = sweep_clocks(bp_period, bf_period)?;
    let params = pdk.params();
    let mut out = Vec::with_capacity(clocks.len() * 27);
    for &c in &clocks {
        for &ar in &ASPECT_RATIOS {
            for &u in &params.utilizations {
                for &d in &PLACEMENT_DENSITIES {
                    out.push(derive_constraint(c, ar, u, d, pdk, opts));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ng45_sweep_size() {
        let m = sweep_manifest(0.6, 0.5, Pdk::Ng45, &SweepOptions::default()).unwrap();
        assert_eq!(m.len(), 108);
        assert!(m.iter().all(|c| c.validate().is_ok()));
    }

    #[test]
    fn degenerate_and_inverted() {
        assert_eq!(sweep_clocks(1.0, 1.0).unwrap().len(), 3);
        assert!(sweep_clocks(0.5, 0.6).is_err());
        assert!(sweep_clocks(0.5, 0.0).is_err());
    }

    #[test]
    fn derived_rules() {
        let o = SweepOptions::default();
        let c = derive_constraint(10.0, 1.0, 0.3, 1.0, Pdk::Sky130, &o);
        assert_eq!(c.clock_latency, 0.05);
        assert_eq!(c.clock_uncertainty, 0.25);
        assert_eq!(c.input_delay, 2.0);
        assert_eq!(c.clock_transition, 0.1875);
        let t = SweepOptions {
            uncertainty_cap: UNCERTAINTY_CAP_TABLE,
        };
        assert_eq!(
            derive_constraint(10.0, 1.0, 0.3, 1.0, Pdk::Sky130, &t).clock_uncertainty,
            0.05
        );
        let c = derive_constraint(0.6, 1.0, 0.3, 1.0, Pdk::Ng45, &o);
        assert!((c.clock_uncertainty - 0.03).abs() < 1e-15);
        assert!((c.clock_latency - 0.006).abs() < 1e-15);
    }
}
