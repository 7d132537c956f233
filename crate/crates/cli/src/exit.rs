// SPDX-License-Identifier: Apache-2.0

//! Process exit codes and the mapping from library errors onto them.

use std::fmt;

use eda_schema::analysis::AnalysisError;
use eda_schema::graphs::GraphError;
use eda_schema::interchange::ParseError;
use eda_schema::raster::RasterError;
use eda_schema::schema::SchemaError;
use eda_schema::store::StoreError;

pub const OK: u8 = 0;
/// I/O failures outside the categories below.
pub const FAILURE: u8 = 1;
pub const PARSE: u8 = 2;
pub const VALIDATION: u8 = 3;
pub const USAGE: u8 = 64;

/// Malformed invocation: bad flag values, missing inputs, unknown names.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Write to standard output; a closed pipe ends output quietly.
pub fn say(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn store_code(e: &StoreError) -> u8 {
    match e {
        StoreError::Io(_) => FAILURE,
        _ => VALIDATION,
    }
}

/// Exit code for the first recognized error in the cause chain.
pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return USAGE;
        }
        if cause.is::<ParseError>() {
            return PARSE;
        }
        if let Some(e) = cause.downcast_ref::<eda_schema::Error>() {
            return match e {
                eda_schema::Error::Parse(_) => PARSE,
                eda_schema::Error::Store(s) => store_code(s),
                _ => VALIDATION,
            };
        }
        if let Some(e) = cause.downcast_ref::<StoreError>() {
            return store_code(e);
        }
        if cause.is::<SchemaError>()
            || cause.is::<RasterError>()
            || cause.is::<AnalysisError>()
            || cause.is::<GraphError>()
        {
            return VALIDATION;
        }
    }
    FAILURE
}

#[cfg(test)]
mod tests {
    use super::*;
    use eda_schema::interchange::Format;
    use eda_schema::Stage;

    #[test]
    fn codes_follow_the_cause() {
        assert_eq!(code_for(&usage("x")), USAGE);
        let pe =
            anyhow::Error::new(ParseError::new(Format::Def, 3, "bad")).context("reading a.def");
        assert_eq!(code_for(&pe), PARSE);
        let se = anyhow::Error::new(StoreError::StageNotFound {
            id: "a".into(),
            stage: Stage::Final,
        });
        assert_eq!(code_for(&se), VALIDATION);
        let io = anyhow::Error::new(StoreError::Io(std::io::Error::other("disk")));
        assert_eq!(code_for(&io), FAILURE);
        assert_eq!(code_for(&anyhow::anyhow!("plain")), FAILURE);
    }
}
