// SPDX-License-Identifier: Apache-2.0

//! Run configuration: TOML file values overridden by command-line flags.

use std::path::Path;
use std::str::FromStr;

use eda_schema::analysis::{
    Averaging, Pdk, SweepOptions, UNCERTAINTY_CAP_TABLE, UNCERTAINTY_CAP_TEXT,
};
use eda_schema::raster::{Anchor, DEFAULT_K};
use serde::Deserialize;

use crate::exit::usage;

/// Which clock-uncertainty cap the sweep applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertaintyCap {
    #[default]
    Text,
    Table,
}

impl UncertaintyCap {
    pub fn ns(&self) -> f64 {
        match self {
            UncertaintyCap::Text => UNCERTAINTY_CAP_TEXT,
            UncertaintyCap::Table => UNCERTAINTY_CAP_TABLE,
        }
    }
}

impl FromStr for UncertaintyCap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(UncertaintyCap::Text),
            "table" => Ok(UncertaintyCap::Table),
            other => Err(format!(
                "uncertainty cap must be `text` or `table`, got `{other}`"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pdk: Option<String>,
    /// Metal-1 width override, µm.
    pub w_m1: Option<f64>,
    pub k: u32,
    pub anchor: Anchor,
    pub strict: bool,
    pub uncertainty_cap: UncertaintyCap,
    pub averaging: Averaging,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pdk: None,
            w_m1: None,
            k: DEFAULT_K,
            anchor: Anchor::Core,
            strict: false,
            uncertainty_cap: UncertaintyCap::Text,
            averaging: Averaging::Pooled,
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub pdk: Option<String>,
    pub w_m1: Option<f64>,
    pub anchor: Option<Anchor>,
    pub strict: bool,
    pub uncertainty_cap: Option<UncertaintyCap>,
    pub averaging: Option<Averaging>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, o: Overrides) -> anyhow::Result<RunConfig> {
        let mut c = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        c.pdk = o.pdk.or(c.pdk);
        c.w_m1 = o.w_m1.or(c.w_m1);
        c.anchor = o.anchor.unwrap_or(c.anchor);
        c.strict |= o.strict;
        c.uncertainty_cap = o.uncertainty_cap.unwrap_or(c.uncertainty_cap);
        c.averaging = o.averaging.unwrap_or(c.averaging);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.k < 1 {
            return Err(usage("k must be at least 1"));
        }
        if let Some(w) = self.w_m1 {
            if !(w > 0.0 && w.is_finite()) {
                return Err(usage(format!("w_m1 must be a positive length, got {w}")));
            }
        }
        if let Some(p) = &self.pdk {
            Pdk::from_str(p).map_err(|e| usage(e.to_string()))?;
        }
        Ok(())
    }

    /// Canonical PDK name; required by commands that create instances.
    pub fn pdk(&self) -> anyhow::Result<Pdk> {
        let name = self
            .pdk
            .as_deref()
            .ok_or_else(|| usage("a PDK is required (--pdk or `pdk` in the config)"))?;
        Pdk::from_str(name).map_err(|e| usage(e.to_string()))
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            uncertainty_cap: self.uncertainty_cap.ns(),
        }
    }
}

pub fn parse_anchor(s: &str) -> Result<Anchor, String> {
    match s {
        "core" => Ok(Anchor::Core),
        "die" => Ok(Anchor::Die),
        other => Err(format!("anchor must be `core` or `die`, got `{other}`")),
    }
}

pub fn parse_averaging(s: &str) -> Result<Averaging, String> {
    s.parse::<Averaging>()
        .map_err(|_| format!("averaging must be `pooled` or `macro`, got `{s}`"))
}
