// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{Format, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    /// µm.
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridSamples {
    pub value_name: String,
    /// Unit token from the header, e.g. `mV`; empty when the header has none.
    pub value_unit: String,
    pub coord_unit: String,
    pub samples: Vec<GridSample>,
}

impl GridSamples {
    /// `(x_min, y_min, x_max, y_max)` over all samples.
    pub fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let first = self.samples.first()?;
        let init = (first.x, first.y, first.x, first.y);
        Some(self.samples.iter().fold(init, |(a, b, c, d), s| {
            (a.min(s.x), b.min(s.y), c.max(s.x), d.max(s.y))
        }))
    }

    /// Index of the first sample outside `[x0, x1] x [y0, y1]` (µm).
    pub fn first_outside(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> Option<usize> {
        self.samples
            .iter()
            .position(|s| s.x < x0 || s.x > x1 || s.y < y0 || s.y > y1)
    }
}

/// Split `ir_drop(mV)`, `ir_drop [mV]` or `ir_drop_mV`-free names into (name, unit).
fn split_unit(h: &str) -> (String, String) {
    let h = h.trim();
    for (open, close) in [('(', ')'), ('[', ']')] {
        if let (Some(i), true) = (h.find(open), h.ends_with(close)) {
            return (
                h[..i].trim().to_string(),
                h[i + 1..h.len() - 1].trim().to_string(),
            );
        }
    }
    (h.to_string(), String::new())
}

pub fn parse_gridded_csv(text: &str) -> Result<GridSamples, ParseError> {
    let err = |line: u64, msg: String| ParseError::new(Format::Csv, line as usize, msg);
    let mut rdr = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if headers.len() != 3 {
        return Err(err(
            1,
            format!("expected 3 header columns, found {}", headers.len()),
        ));
    }
    let (_, x_unit) = split_unit(&headers[0]);
    let (value_name, value_unit) = split_unit(&headers[2]);
    let mut out = GridSamples {
        value_name,
        value_unit,
        coord_unit: x_unit,
        samples: Vec::new(),
    };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 3 {
            return Err(err(
                line,
                format!("inconsistent column count: expected 3, found {}", rec.len()),
            ));
        }
        let mut v = [0.0; 3];
        for (k, cell) in rec.iter().enumerate() {
            let n: f64 = cell
                .parse()
                .map_err(|_| err(line, format!("non-numeric cell `{cell}`")))?;
            if !n.is_finite() {
                return Err(err(line, format!("non-finite cell `{cell}`")));
            }
            v[k] = n;
        }
        out.samples.push(GridSample {
            x: v[0],
            y: v[1],
            value: v[2],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_units() {
        let g = parse_gridded_csv("x(um),y(um),ir_drop(mV)\n1.0,2.0,0.5\n").unwrap();
        assert_eq!(g.samples.len(), 1);
        assert_eq!(g.value_unit, "mV");
        assert_eq!(g.value_name, "ir_drop");
        assert_eq!(g.coord_unit, "um");
    }

    #[test]
    fn empty_body() {
        let g = parse_gridded_csv("x,y,value\n").unwrap();
        assert!(g.samples.is_empty());
        assert_eq!(g.bounds(), None);
    }

    #[test]
    fn bad_rows() {
        let e = parse_gridded_csv("x,y,value\n1,2,3\n1,2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_gridded_csv("x,y,value\n1,2,abc\n").unwrap_err();
        assert!(e.message.contains("non-numeric"));
    }
}
