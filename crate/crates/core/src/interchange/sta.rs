// SPDX-License-Identifier: Apache-2.0

//! Path-style static timing reports in the OpenSTA text layout.
//!
//! ```text
//! Startpoint: a (input port clocked by clk)
//! Endpoint: U3 (rising edge-triggered flip-flop clocked by clk)
//! Path Group: clk
//! Path Type: max
//!
//! Fanout     Cap    Slew   Delay    Time   Description
//! ---------------------------------------------------------------
//!                           0.00    0.00   clock clk (rise edge)
//!                    0.01   0.02    0.02 v a (in)
//!      1    1.20                           a (net)
//!                    0.01   0.00    0.02 v U1/A (INV_X1)
//! ...
//!                                   0.13   data arrival time
//! ...
//!                                   0.82   slack (MET)
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{fmt_f64, Format, ParseError, ParseWarning};

/// Slack mismatches above this are reported as inconsistent rather than rounding.
const INCONSISTENT_NS: f64 = 1e-3;
const SLACK_TOL_NS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckType {
    Setup,
    Hold,
}

impl CheckType {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckType::Setup => "setup",
            CheckType::Hold => "hold",
        }
    }

    pub fn parse(s: &str) -> Option<CheckType> {
        match s {
            "setup" | "max" => Some(CheckType::Setup),
            "hold" | "min" => Some(CheckType::Hold),
            _ => None,
        }
    }

    /// Slack implied by arrival and required times.
    pub fn slack(&self, arrival: f64, required: f64) -> f64 {
        match self {
            CheckType::Setup => required - arrival,
            CheckType::Hold => arrival - required,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    Rise,
    Fall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointKind {
    Startpoint,
    CellArc,
    NetArc,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::Startpoint => "startpoint",
            PointKind::CellArc => "cell_arc",
            PointKind::NetArc => "net_arc",
        }
    }
}

/// One pin along a data path. The delay, slew and capacitance describe the arc
/// that ends at this pin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingPoint {
    /// `inst/pin` for cell pins, bare name for ports.
    pub pin: String,
    /// Cell master, or `in`/`out` for ports.
    pub cell: String,
    pub kind: PointKind,
    pub edge: Edge,
    pub delay: f64,
    pub arrival: f64,
    pub slew: Option<f64>,
    /// fF, net arcs only.
    pub capacitance: Option<f64>,
    pub fanout: Option<u32>,
}

impl TimingPoint {
    /// Instance part of the pin name, `None` for ports.
    pub fn instance(&self) -> Option<&str> {
        if self.cell == "in" || self.cell == "out" || self.cell == "inout" {
            None
        } else {
            self.pin.rsplit_once('/').map(|(i, _)| i)
        }
    }
}

/// Outcome of checking the reported slack against arrival and required times.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SlackCheck {
    Consistent,
    /// Off by more than 1e-6 ns but at most 1e-3 ns.
    Rounding(f64),
    Inconsistent(f64),
}

impl SlackCheck {
    pub fn is_warning(&self) -> bool {
        !matches!(self, SlackCheck::Consistent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingPathRecord {
    pub startpoint: String,
    pub endpoint: String,
    pub path_group: String,
    pub check_type: CheckType,
    pub arrival_time: f64,
    pub required_time: f64,
    pub slack: f64,
    pub points: Vec<TimingPoint>,
    pub check: SlackCheck,
}

impl TimingPathRecord {
    pub fn slack_check(
        check_type: CheckType,
        arrival: f64,
        required: f64,
        slack: f64,
    ) -> SlackCheck {
        let diff = slack - check_type.slack(arrival, required);
        if diff.abs() <= SLACK_TOL_NS {
            SlackCheck::Consistent
        } else if diff.abs() <= INCONSISTENT_NS {
            SlackCheck::Rounding(diff)
        } else {
            SlackCheck::Inconsistent(diff)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaOptions {
    /// Multiplier from the report's capacitance unit to fF.
    pub cap_unit_ff: f64,
    /// Reject lines that match no known shape instead of skipping them.
    pub strict: bool,
}

impl Default for StaOptions {
    fn default() -> Self {
        StaOptions {
            cap_unit_ff: 1.0,
            strict: false,
        }
    }
}

pub fn parse_sta_report(text: &str) -> Result<Vec<TimingPathRecord>, ParseError> {
    parse_sta_report_with(text, StaOptions::default()).map(|(r, _)| r)
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(Format::Sta, line, msg)
}

#[derive(Default)]
struct Pending {
    start_line: usize,
    startpoint: String,
    endpoint: Option<String>,
    group: String,
    check: Option<CheckType>,
    arrival: Option<f64>,
    required: Option<f64>,
    points: Vec<TimingPoint>,
    net_fanout: Option<u32>,
    net_cap: Option<f64>,
    in_required: bool,
}

impl Pending {
    fn finish(self, slack: f64, line: usize) -> Result<TimingPathRecord, ParseError> {
        let check_type = self
            .check
            .ok_or_else(|| err(self.start_line, "path without `Path Type`"))?;
        let arrival_time = self
            .arrival
            .ok_or_else(|| err(line, "slack line before `data arrival time`"))?;
        let required_time = self
            .required
            .ok_or_else(|| err(line, "slack line before `data required time`"))?;
        Ok(TimingPathRecord {
            startpoint: self.startpoint,
            endpoint: self
                .endpoint
                .ok_or_else(|| err(self.start_line, "path without `Endpoint`"))?,
            path_group: self.group,
            check_type,
            arrival_time,
            required_time,
            slack,
            points: self.points,
            check: TimingPathRecord::slack_check(check_type, arrival_time, required_time, slack),
        })
    }
}

fn header_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key).map(|rest| {
        let rest = rest.trim();
        // drop the parenthesized description
        match rest.find(" (") {
            Some(i) => &rest[..i],
            None => rest,
        }
    })
}

fn parse_num(tok: &str, line: usize) -> Result<f64, ParseError> {
    tok.parse::<f64>()
        .map_err(|_| err(line, format!("expected a number, found `{tok}`")))
}

/// Description lines that carry timing but no pin.
const KNOWN_DESCRIPTIONS: &[&str] = &[
    "clock ",
    "input external delay",
    "output external delay",
    "library setup time",
    "library hold time",
    "clock network delay",
    "clock reconvergence pessimism",
    "clock uncertainty",
    "time borrowed",
    "time given",
    "max_delay",
    "min_delay",
];

pub fn parse_sta_report_with(
    text: &str,
    opts: StaOptions,
) -> Result<(Vec<TimingPathRecord>, Vec<ParseWarning>), ParseError> {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    let mut cur: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.chars().all(|c| c == '-') {
            continue;
        }
        if let Some(sp) = header_value(t, "Startpoint:") {
            if let Some(p) = cur.take() {
                return Err(err(
                    p.start_line,
                    format!("path from `{}` has no slack line", p.startpoint),
                ));
            }
            cur = Some(Pending {
                start_line: line,
                startpoint: sp.to_string(),
                ..Default::default()
            });
            continue;
        }
        let Some(p) = cur.as_mut() else {
            if opts.strict {
                return Err(err(line, format!("unexpected line outside a path: `{t}`")));
            }
            warnings.push(ParseWarning {
                line,
                message: "skipped line outside a path".into(),
            });
            continue;
        };
        if let Some(ep) = header_value(t, "Endpoint:") {
            p.endpoint = Some(ep.to_string());
            continue;
        }
        if let Some(g) = header_value(t, "Path Group:") {
            p.group = g.to_string();
            continue;
        }
        if let Some(ty) = header_value(t, "Path Type:") {
            p.check = Some(
                CheckType::parse(ty)
                    .ok_or_else(|| err(line, format!("unknown path type `{ty}`")))?,
            );
            continue;
        }
        if t.split_whitespace().any(|w| w == "Description") {
            continue;
        }

        let toks: Vec<&str> = t.split_whitespace().collect();
        let n_num = toks.iter().take_while(|s| s.parse::<f64>().is_ok()).count();
        let desc = toks[n_num..].join(" ");

        if desc.starts_with("slack") {
            if n_num != 1 {
                return Err(err(line, "slack line needs exactly one value"));
            }
            let slack = parse_num(toks[0], line)?;
            let pending = cur.take().expect("checked above");
            let rec = pending.finish(slack, line)?;
            if rec.check.is_warning() {
                warnings.push(ParseWarning {
                    line,
                    message: format!(
                        "slack {} disagrees with arrival/required by {:?}",
                        rec.slack, rec.check
                    ),
                });
            }
            out.push(rec);
            continue;
        }
        if desc == "data arrival time" {
            if p.arrival.is_none() {
                p.arrival = Some(parse_num(toks[n_num.saturating_sub(1)], line)?);
            }
            p.in_required = true;
            continue;
        }
        if desc == "data required time" {
            let v = parse_num(toks[n_num.saturating_sub(1)], line)?;
            match p.required {
                None => p.required = Some(v),
                Some(r) if (r - v).abs() > INCONSISTENT_NS => {
                    warnings.push(ParseWarning {
                        line,
                        message: format!("required time restated as {v}, first seen {r}"),
                    });
                }
                Some(_) => {}
            }
            continue;
        }
        if desc.ends_with("(net)") {
            if !p.in_required {
                let nums: Vec<f64> = toks[..n_num]
                    .iter()
                    .map(|s| parse_num(s, line))
                    .collect::<Result<_, _>>()?;
                match nums.as_slice() {
                    [f, c] => {
                        p.net_fanout = Some(*f as u32);
                        p.net_cap = Some(c * opts.cap_unit_ff);
                    }
                    [v] if toks[0].contains(['.', 'e']) => p.net_cap = Some(v * opts.cap_unit_ff),
                    [f] => p.net_fanout = Some(*f as u32),
                    _ => return Err(err(line, "malformed net line")),
                }
            }
            continue;
        }
        let edge_tok = toks.get(n_num).copied();
        let edge = match edge_tok {
            Some("^") | Some("r") => Some(Edge::Rise),
            Some("v") | Some("f") => Some(Edge::Fall),
            _ => None,
        };
        let pin_shape = toks.len() == n_num + 3
            && toks[n_num + 2].starts_with('(')
            && toks[n_num + 2].ends_with(')');
        if let (Some(edge), true) = (edge, pin_shape) {
            if p.in_required {
                continue;
            }
            let nums: Vec<f64> = toks[..n_num]
                .iter()
                .map(|s| parse_num(s, line))
                .collect::<Result<_, _>>()?;
            let (cap, slew, delay, arrival) = match nums.as_slice() {
                [c, s, d, a] => (Some(*c), Some(*s), *d, *a),
                [s, d, a] => (None, Some(*s), *d, *a),
                [d, a] => (None, None, *d, *a),
                _ => return Err(err(line, format!("malformed path point `{t}`"))),
            };
            let pin = toks[n_num + 1].to_string();
            let cell = toks[n_num + 2]
                .trim_start_matches('(')
                .trim_end_matches(')')
                .to_string();
            let mut point = TimingPoint {
                pin,
                cell,
                kind: PointKind::Startpoint,
                edge,
                delay,
                arrival,
                slew,
                capacitance: cap.map(|c| c * opts.cap_unit_ff),
                fanout: None,
            };
            if let Some(prev) = p.points.last() {
                let same_inst =
                    matches!((prev.instance(), point.instance()), (Some(a), Some(b)) if a == b);
                if same_inst {
                    point.kind = PointKind::CellArc;
                } else {
                    point.kind = PointKind::NetArc;
                    if point.capacitance.is_none() {
                        point.capacitance = p.net_cap;
                    }
                    point.fanout = p.net_fanout;
                }
                p.net_cap = None;
                p.net_fanout = None;
            }
            p.points.push(point);
            continue;
        }
        let bare = match edge {
            Some(_) => toks[n_num + 1..].join(" "),
            None => desc.clone(),
        };
        if n_num >= 1 && KNOWN_DESCRIPTIONS.iter().any(|k| bare.starts_with(k)) {
            continue;
        }
        if opts.strict {
            return Err(err(line, format!("unrecognized line `{t}`")));
        }
        warnings.push(ParseWarning {
            line,
            message: format!("skipped line `{t}`"),
        });
    }
    if let Some(p) = cur {
        return Err(err(
            p.start_line,
            format!("path from `{}` has no slack line", p.startpoint),
        ));
    }
    Ok((out, warnings))
}

fn col_dec(v: Option<f64>) -> String {
    match v {
        Some(x) => format!(" {:>9}", format!("{x:?}")),
        None => " ".repeat(10),
    }
}

fn col(v: Option<f64>) -> String {
    match v {
        Some(x) => format!(" {:>9}", fmt_f64(x)),
        None => " ".repeat(10),
    }
}

/// Canonical report text with `Fanout Cap Slew Delay Time` columns.
pub fn write_sta_report(records: &[TimingPathRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let _ = writeln!(s, "Startpoint: {}", r.startpoint);
        let _ = writeln!(s, "Endpoint: {}", r.endpoint);
        let _ = writeln!(s, "Path Group: {}", r.path_group);
        let ty = match r.check_type {
            CheckType::Setup => "max",
            CheckType::Hold => "min",
        };
        let _ = writeln!(s, "Path Type: {ty}\n");
        let _ = writeln!(
            s,
            "{:>6}{:>10}{:>10}{:>10}{:>10}   Description",
            "Fanout", "Cap", "Slew", "Delay", "Time"
        );
        let rule = "-".repeat(72);
        let _ = writeln!(s, "{rule}");
        for p in &r.points {
            let edge = match p.edge {
                Edge::Rise => "^",
                Edge::Fall => "v",
            };
            let net_cap = if p.kind == PointKind::NetArc {
                p.capacitance
            } else {
                None
            };
            if p.kind == PointKind::NetArc && (p.fanout.is_some() || net_cap.is_some()) {
                let fanout = p.fanout.map_or(" ".repeat(6), |f| format!("{f:>6}"));
                let _ = writeln!(
                    s,
                    "{fanout}{}{}{}{}   (net)",
                    col_dec(net_cap),
                    col(None),
                    col(None),
                    col(None)
                );
            }
            // net caps live on the net line; cell-arc caps are written inline
            let inline_cap =
                if p.kind == PointKind::NetArc && (p.fanout.is_some() || net_cap.is_some()) {
                    None
                } else {
                    p.capacitance
                };
            match (inline_cap, p.slew) {
                (Some(_), None) => {
                    // a lone cap cannot be told apart from a slew; keep both columns
                    let _ = writeln!(
                        s,
                        "{:>6}{}{}{}{} {edge} {} ({})",
                        "",
                        col(inline_cap),
                        col(Some(0.0)),
                        col(Some(p.delay)),
                        col(Some(p.arrival)),
                        p.pin,
                        p.cell
                    );
                }
                _ => {
                    let _ = writeln!(
                        s,
                        "{:>6}{}{}{}{} {edge} {} ({})",
                        "",
                        col(inline_cap),
                        col(p.slew),
                        col(Some(p.delay)),
                        col(Some(p.arrival)),
                        p.pin,
                        p.cell
                    );
                }
            }
        }
        let _ = writeln!(s, "{:>46}   data arrival time\n", fmt_f64(r.arrival_time));
        let _ = writeln!(s, "{:>46}   data required time", fmt_f64(r.required_time));
        let _ = writeln!(s, "{rule}");
        let verdict = if r.slack < 0.0 { "VIOLATED" } else { "MET" };
        let _ = writeln!(s, "{:>46}   slack ({verdict})\n\n", fmt_f64(r.slack));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "\
Startpoint: a (input port clocked by clk)
Endpoint: y (output port clocked by clk)
Path Group: clk
Path Type: max

  Delay    Time   Description
---------------------------------------------------------
   0.00    0.00   clock clk (rise edge)
   0.00    0.00   clock network delay (ideal)
   0.20    0.20 ^ input external delay
   0.00    0.20 ^ a (in)
   0.05    0.25 ^ U1/A (BUF_X1)
   0.70    0.95 ^ U1/Z (BUF_X1)
   0.00    0.95 ^ y (out)
           0.95   data arrival time

   1.20    1.20   clock clk (rise edge)
   0.00    1.20   clock network delay (ideal)
  -0.20    1.00   output external delay
           1.00   data required time
---------------------------------------------------------
           1.00   data required time
          -0.95   data arrival time
---------------------------------------------------------
           0.05   slack (MET)
";

    #[test]
    fn single_path() {
        let recs = parse_sta_report(ONE).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(
            (r.arrival_time, r.required_time, r.slack),
            (0.95, 1.0, 0.05)
        );
        assert_eq!(r.check, SlackCheck::Consistent);
        let kinds: Vec<_> = r.points.iter().map(|p| p.kind).collect();
        assert_eq!(
            kinds,
            [
                PointKind::Startpoint,
                PointKind::NetArc,
                PointKind::CellArc,
                PointKind::NetArc
            ]
        );
        assert_eq!(r.startpoint, "a");
        assert_eq!(r.endpoint, "y");
    }

    #[test]
    fn missing_slack_is_an_error() {
        let cut = ONE.lines().take(20).collect::<Vec<_>>().join("\n");
        let e = parse_sta_report(&cut).unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn inconsistent_slack_is_a_warning_record() {
        let bad = ONE.replace("0.05   slack", "0.25   slack");
        let (recs, warns) = parse_sta_report_with(&bad, StaOptions::default()).unwrap();
        assert!(matches!(recs[0].check, SlackCheck::Inconsistent(_)));
        assert_eq!(warns.len(), 1);
    }

    #[test]
    fn strict_rejects_unknown_lines() {
        let odd = ONE.replace(
            "   0.00    0.20 ^ a (in)",
            "   0.00    0.20 ^ a (in)\nmystery line",
        );
        assert!(parse_sta_report(&odd).is_ok());
        let e = parse_sta_report_with(
            &odd,
            StaOptions {
                strict: true,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert_eq!(e.line, 12);
    }

    #[test]
    fn writer_round_trips() {
        let recs = parse_sta_report(ONE).unwrap();
        let again = parse_sta_report(&write_sta_report(&recs)).unwrap();
        assert_eq!(again, recs);
    }
}
