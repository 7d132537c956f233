// SPDX-License-Identifier: Apache-2.0

//! Readers (and canonical writers) for the interchange files a physical
//! design flow emits: LEF, DEF, SPEF, Liberty, STA path reports, QoR
//! summaries and gridded CSV samples.
//!
//! Every reader accepts only the statements needed to populate the data
//! model. Anything else is skipped and counted as a warning.

mod csv;
mod def;
mod lef;
pub(crate) mod lexer;
mod liberty;
mod qor;
mod spef;
mod sta;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::csv::{parse_gridded_csv, GridSample, GridSamples};
pub use self::def::{
    parse_def, parse_def_diag, write_def, Component, NetConnection, PhysicalNetlist,
    PlacementStatus, PortPin, RoutedNet, Row, Via, WireSegment,
};
pub use self::lef::{
    parse_lef, parse_lef_diag, parse_lef_into, write_lef, Layer, LayerKind, LayerRect, Macro,
    MacroPin, PinDirection, RouteDirection, SignalUse, Site, TechLibrary,
};
pub use self::liberty::{parse_liberty, parse_liberty_diag, CellCatalog, StandardCell};
pub use self::qor::{parse_qor, QorValues};
pub use self::spef::{parse_spef, parse_spef_diag, write_spef, NetParasitics, ParasiticSet};
pub use self::sta::{
    parse_sta_report, parse_sta_report_with, write_sta_report, CheckType, Edge, PointKind,
    SlackCheck, StaOptions, TimingPathRecord, TimingPoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Lef,
    Def,
    Spef,
    Liberty,
    Sta,
    Qor,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Format::Lef => "LEF",
            Format::Def => "DEF",
            Format::Spef => "SPEF",
            Format::Liberty => "Liberty",
            Format::Sta => "STA report",
            Format::Qor => "QoR report",
            Format::Csv => "CSV",
        };
        f.write_str(s)
    }
}

/// A hard parse failure, always carrying the 1-based line it was detected on.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("{format} line {line}: {message}")]
pub struct ParseError {
    pub format: Format,
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(format: Format, line: usize, message: impl Into<String>) -> Self {
        ParseError {
            format,
            line,
            message: message.into(),
        }
    }
}

/// Non-fatal diagnostic, e.g. a skipped vendor extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

/// Format a float so that parsing it back yields the identical value.
pub(crate) fn fmt_f64(v: f64) -> String {
    let s = format!("{v}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}
