// SPDX-License-Identifier: Apache-2.0

//! Parsers, a multimodal stage-snapshot data model, spatial maps, RUDY,
//! baseline analyses and a columnar dataset store for physical-design flows.

pub mod analysis;
pub mod geom;
pub mod graphs;
pub mod interchange;
pub mod raster;
pub mod routability;
pub mod schema;
pub mod store;

use thiserror::Error;

pub use crate::geom::{Dbu, Point, Rect};
pub use crate::schema::{Stage, StageSnapshot};

/// Any library error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] interchange::ParseError),
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error(transparent)]
    Raster(#[from] raster::RasterError),
    #[error(transparent)]
    Schema(#[from] schema::SchemaError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Store(#[from] store::StoreError),
}

impl Error {
    /// True for input-syntax failures, as opposed to semantic ones.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
