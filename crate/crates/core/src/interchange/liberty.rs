// SPDX-License-Identifier: Apache-2.0

//! Liberty reader for the cell-level attributes the schema stores.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::lef::{PinDirection, TechLibrary};
use super::{Format, ParseError, ParseWarning};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LibPin {
    pub name: String,
    pub direction: PinDirection,
    /// fF.
    pub capacitance: Option<f64>,
    pub function: Option<String>,
    pub is_clock: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StandardCell {
    pub name: String,
    /// Function of the first output pin, when declared.
    pub function: Option<String>,
    /// µm², as declared by `area`.
    pub area: f64,
    /// µm; filled from the LEF macro of the same name.
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub drive_strength: Option<u32>,
    /// fF.
    pub input_capacitance_min: Option<f64>,
    pub input_capacitance_max: Option<f64>,
    pub output_capacitance_min: Option<f64>,
    pub output_capacitance_max: Option<f64>,
    /// µW.
    pub leakage_power_min: Option<f64>,
    pub leakage_power_max: Option<f64>,
    pub is_sequential: bool,
    pub is_inverter: bool,
    pub is_buffer: bool,
    pub is_filler: bool,
    pub is_diode: bool,
    pub is_tap: bool,
    pub pins: Vec<LibPin>,
}

impl StandardCell {
    pub fn pin(&self, name: &str) -> Option<&LibPin> {
        self.pins.iter().find(|p| p.name == name)
    }

    pub fn input_pins(&self) -> impl Iterator<Item = &LibPin> {
        self.pins
            .iter()
            .filter(|p| matches!(p.direction, PinDirection::Input | PinDirection::InOut))
    }

    pub fn output_pins(&self) -> impl Iterator<Item = &LibPin> {
        self.pins
            .iter()
            .filter(|p| matches!(p.direction, PinDirection::Output | PinDirection::InOut))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellCatalog {
    pub library: String,
    pub cells: IndexMap<String, StandardCell>,
}

impl CellCatalog {
    pub fn get(&self, name: &str) -> Option<&StandardCell> {
        self.cells.get(name)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Copy macro footprints (µm) from a technology library.
    pub fn attach_geometry(&mut self, tech: &TechLibrary) {
        let dbu = tech.dbu_per_micron as f64;
        for cell in self.cells.values_mut() {
            if let Some(m) = tech.macros.get(&cell.name) {
                cell.width = Some(m.width as f64 / dbu);
                cell.height = Some(m.height as f64 / dbu);
            }
        }
    }
}

#[derive(Debug)]
enum Stmt {
    Attr {
        name: String,
        value: String,
        line: usize,
    },
    Group(Group),
}

#[derive(Debug)]
struct Group {
    kind: String,
    args: Vec<String>,
    body: Vec<Stmt>,
    line: usize,
}

impl Group {
    fn attr(&self, name: &str) -> Option<&str> {
        self.body.iter().find_map(|s| match s {
            Stmt::Attr { name: n, value, .. } if n == name => Some(value.as_str()),
            _ => None,
        })
    }

    fn attr_line(&self, name: &str) -> Option<(&str, usize)> {
        self.body.iter().find_map(|s| match s {
            Stmt::Attr {
                name: n,
                value,
                line,
            } if n == name => Some((value.as_str(), *line)),
            _ => None,
        })
    }

    fn groups<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Group> + 'a {
        self.body.iter().filter_map(move |s| match s {
            Stmt::Group(g) if g.kind == kind => Some(g),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Str(&'a str),
    Punct(char),
}

fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line) = (0usize, 1usize);
    while i < b.len() {
        let c = b[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            b'\\' if b.get(i + 1) == Some(&b'\n') => {
                line += 1;
                i += 2;
            }
            b'\\' if b.get(i + 1) == Some(&b'\r') => i += 1,
            _ if c.is_ascii_whitespace() => i += 1,
            b'/' if b.get(i + 1) == Some(&b'*') => {
                let start = line;
                i += 2;
                loop {
                    if i + 1 >= b.len() {
                        return Err(ParseError::new(
                            Format::Liberty,
                            start,
                            "unterminated comment",
                        ));
                    }
                    if b[i] == b'\n' {
                        line += 1;
                    }
                    if b[i] == b'*' && b[i + 1] == b'/' {
                        i += 2;
                        break;
                    }
                    i += 1;
                }
            }
            b'/' if b.get(i + 1) == Some(&b'/') => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'"' => {
                let start = i + 1;
                let l0 = line;
                i += 1;
                while i < b.len() && b[i] != b'"' {
                    if b[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if i >= b.len() {
                    return Err(ParseError::new(Format::Liberty, l0, "unterminated string"));
                }
                out.push((Tok::Str(&text[start..i]), l0));
                i += 1;
            }
            b'{' | b'}' | b'(' | b')' | b';' | b':' | b',' => {
                out.push((Tok::Punct(c as char), line));
                i += 1;
            }
            _ => {
                let start = i;
                while i < b.len() {
                    let d = b[i];
                    if d.is_ascii_whitespace() || b"{}();:,\"".contains(&d) {
                        break;
                    }
                    i += 1;
                }
                out.push((Tok::Word(&text[start..i]), line));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(Format::Liberty, self.line(), msg)
    }

    fn next(&mut self) -> Result<Tok<'a>, ParseError> {
        let t = self
            .peek()
            .ok_or_else(|| self.err("unexpected end of input (unbalanced braces)"))?;
        self.pos += 1;
        Ok(t)
    }

    fn text(t: Tok<'_>) -> String {
        match t {
            Tok::Word(s) | Tok::Str(s) => s.to_string(),
            Tok::Punct(c) => c.to_string(),
        }
    }

    /// Parse statements until `}` (consumed) or end of input when `top`.
    fn body(&mut self, top: bool, open_line: usize) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        loop {
            let line = self.line();
            let t = match self.peek() {
                None if top => return Ok(out),
                None => {
                    return Err(ParseError::new(
                        Format::Liberty,
                        open_line,
                        "unbalanced braces: group is never closed",
                    ))
                }
                Some(t) => t,
            };
            self.pos += 1;
            let name = match t {
                Tok::Punct('}') if !top => return Ok(out),
                Tok::Punct('}') => {
                    return Err(ParseError::new(
                        Format::Liberty,
                        line,
                        "unbalanced braces: unexpected `}`",
                    ))
                }
                Tok::Punct(';') => continue,
                Tok::Word(w) => w.to_string(),
                other => {
                    return Err(ParseError::new(
                        Format::Liberty,
                        line,
                        format!("unexpected `{}`", Self::text(other)),
                    ))
                }
            };
            match self.next()? {
                Tok::Punct(':') => {
                    let mut parts = Vec::new();
                    loop {
                        match self.peek() {
                            Some(Tok::Punct(';')) => {
                                self.pos += 1;
                                break;
                            }
                            Some(Tok::Punct('}')) | None => break,
                            Some(_) if self.toks[self.pos].1 != line && !parts.is_empty() => break,
                            Some(t) => {
                                parts.push(Self::text(t));
                                self.pos += 1;
                            }
                        }
                    }
                    out.push(Stmt::Attr {
                        name,
                        value: parts.join(" "),
                        line,
                    });
                }
                Tok::Punct('(') => {
                    let mut args = Vec::new();
                    let mut cur = String::new();
                    loop {
                        match self.next()? {
                            Tok::Punct(')') => break,
                            Tok::Punct(',') => args.push(std::mem::take(&mut cur)),
                            t => {
                                if !cur.is_empty() {
                                    cur.push(' ');
                                }
                                cur.push_str(&Self::text(t));
                            }
                        }
                    }
                    if !cur.is_empty() || !args.is_empty() {
                        args.push(cur);
                    }
                    match self.peek() {
                        Some(Tok::Punct('{')) => {
                            self.pos += 1;
                            let body = self.body(false, line)?;
                            out.push(Stmt::Group(Group {
                                kind: name,
                                args,
                                body,
                                line,
                            }));
                        }
                        _ => {
                            if self.peek() == Some(Tok::Punct(';')) {
                                self.pos += 1;
                            }
                            out.push(Stmt::Attr {
                                name,
                                value: args.join(", "),
                                line,
                            });
                        }
                    }
                }
                other => {
                    return Err(ParseError::new(
                        Format::Liberty,
                        line,
                        format!(
                            "expected `:` or `(` after `{name}`, found `{}`",
                            Self::text(other)
                        ),
                    ))
                }
            }
        }
    }
}

pub fn parse_liberty(text: &str) -> Result<CellCatalog, ParseError> {
    parse_liberty_diag(text).map(|(c, _)| c)
}

fn unit_factor(spec: &str, base: &[(&str, f64)]) -> Option<f64> {
    // "1nW", "1ff", "1, pf"
    let s: String = spec
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',' && *c != '"')
        .collect::<String>()
        .to_ascii_lowercase();
    let split = s.find(|c: char| c.is_ascii_alphabetic())?;
    let (num, unit) = s.split_at(split);
    let n: f64 = if num.is_empty() {
        1.0
    } else {
        num.parse().ok()?
    };
    base.iter().find(|(u, _)| *u == unit).map(|(_, f)| n * f)
}

fn drive_strength(name: &str) -> Option<u32> {
    let tail = name.rsplit('_').next()?;
    let digits = tail.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    if digits.is_empty() || digits.len() == tail.len() && name.find('_').is_none() {
        return None;
    }
    digits.parse().ok()
}

/// Reduce a boolean function to `Some(true)` for identity of `input`,
/// `Some(false)` for its negation, `None` otherwise.
fn single_input_polarity(function: &str, input: &str) -> Option<bool> {
    let mut f: String = function.chars().filter(|c| !c.is_whitespace()).collect();
    let mut positive = true;
    loop {
        if f.starts_with('(') && f.ends_with(')') && balanced(&f[1..f.len() - 1]) {
            f = f[1..f.len() - 1].to_string();
        } else if let Some(rest) = f.strip_prefix('!') {
            positive = !positive;
            f = rest.to_string();
        } else if let Some(rest) = f.strip_suffix('\'') {
            positive = !positive;
            f = rest.to_string();
        } else {
            break;
        }
    }
    (f == input).then_some(positive)
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

fn minmax(vals: &[f64]) -> (Option<f64>, Option<f64>) {
    let min = vals.iter().copied().reduce(f64::min);
    let max = vals.iter().copied().reduce(f64::max);
    (min, max)
}

pub fn parse_liberty_diag(text: &str) -> Result<(CellCatalog, Vec<ParseWarning>), ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let top = p.body(true, 1)?;
    let mut warnings = Vec::new();
    let lib = top
        .iter()
        .find_map(|s| match s {
            Stmt::Group(g) if g.kind == "library" => Some(g),
            _ => None,
        })
        .ok_or_else(|| ParseError::new(Format::Liberty, 1, "no library group"))?;

    let num = |v: &str, line: usize| -> Result<f64, ParseError> {
        v.trim().parse::<f64>().map_err(|_| {
            ParseError::new(
                Format::Liberty,
                line,
                format!("expected a number, found `{v}`"),
            )
        })
    };

    let cap_to_ff = match lib.attr("capacitive_load_unit") {
        Some(u) => unit_factor(u, &[("ff", 1.0), ("pf", 1e3)]).ok_or_else(|| {
            ParseError::new(
                Format::Liberty,
                lib.line,
                format!("bad capacitive_load_unit `{u}`"),
            )
        })?,
        None => 1e3,
    };
    let leak_to_uw = match lib.attr("leakage_power_unit") {
        Some(u) => unit_factor(
            u,
            &[
                ("pw", 1e-6),
                ("nw", 1e-3),
                ("uw", 1.0),
                ("mw", 1e3),
                ("w", 1e6),
            ],
        )
        .ok_or_else(|| {
            ParseError::new(
                Format::Liberty,
                lib.line,
                format!("bad leakage_power_unit `{u}`"),
            )
        })?,
        None => 1e-3,
    };

    let mut catalog = CellCatalog {
        library: lib.args.first().cloned().unwrap_or_default(),
        cells: IndexMap::new(),
    };
    for cell in lib.groups("cell") {
        let name = cell.args.first().cloned().unwrap_or_default();
        let area = match cell.attr_line("area") {
            Some((v, line)) => num(v, line)?,
            None => {
                return Err(ParseError::new(
                    Format::Liberty,
                    cell.line,
                    format!("cell `{name}` has no area attribute"),
                ))
            }
        };
        let mut pins = Vec::new();
        let mut pin_groups: Vec<&Group> = cell.groups("pin").collect();
        for bus in cell.groups("bus") {
            pin_groups.extend(bus.groups("pin"));
        }
        let mut has_supply_only = true;
        for pg in pin_groups {
            let direction = match pg.attr("direction") {
                Some(d) => PinDirection::parse(&d.to_ascii_uppercase()).unwrap_or_else(|| {
                    warnings.push(ParseWarning {
                        line: pg.line,
                        message: format!("unknown pin direction `{d}`"),
                    });
                    PinDirection::Input
                }),
                None => PinDirection::Input,
            };
            let capacitance = match pg.attr_line("capacitance") {
                Some((v, line)) => Some(num(v, line)? * cap_to_ff),
                None => None,
            };
            for arg in &pg.args {
                has_supply_only = false;
                pins.push(LibPin {
                    name: arg.clone(),
                    direction,
                    capacitance,
                    function: pg.attr("function").map(str::to_string),
                    is_clock: pg.attr("clock") == Some("true"),
                });
            }
        }

        let mut leak = Vec::new();
        if let Some((v, line)) = cell.attr_line("cell_leakage_power") {
            leak.push(num(v, line)? * leak_to_uw);
        }
        for lp in cell.groups("leakage_power") {
            if let Some((v, line)) = lp.attr_line("value") {
                leak.push(num(v, line)? * leak_to_uw);
            }
        }
        let in_caps: Vec<f64> = pins
            .iter()
            .filter(|p| p.direction == PinDirection::Input)
            .filter_map(|p| p.capacitance)
            .collect();
        let out_caps: Vec<f64> = pins
            .iter()
            .filter(|p| p.direction == PinDirection::Output)
            .filter_map(|p| p.capacitance)
            .collect();

        let inputs: Vec<&LibPin> = pins
            .iter()
            .filter(|p| p.direction == PinDirection::Input)
            .collect();
        let outputs: Vec<&LibPin> = pins
            .iter()
            .filter(|p| p.direction == PinDirection::Output)
            .collect();
        let function = outputs.iter().find_map(|p| p.function.clone());

        let is_sequential = ["ff", "latch", "ff_bank", "latch_bank", "statetable"]
            .iter()
            .any(|k| cell.groups(k).next().is_some());
        let upper = name.to_ascii_uppercase();
        let is_tap = has_supply_only && upper.contains("TAP");
        let is_filler = !is_tap
            && (cell.attr("is_filler") == Some("true")
                || has_supply_only
                || (pins.is_empty() && upper.contains("FILL")));
        let is_diode = !is_filler
            && !is_tap
            && (cell.attr("antenna_diode_type").is_some()
                || (outputs.is_empty()
                    && inputs.len() == 1
                    && (upper.contains("ANTENNA") || upper.contains("DIODE"))));
        let polarity = if !is_sequential && inputs.len() == 1 && outputs.len() == 1 {
            outputs[0]
                .function
                .as_deref()
                .and_then(|f| single_input_polarity(f, &inputs[0].name))
        } else {
            None
        };
        let (input_capacitance_min, input_capacitance_max) = minmax(&in_caps);
        let (output_capacitance_min, output_capacitance_max) = minmax(&out_caps);
        let (leakage_power_min, leakage_power_max) = minmax(&leak);
        let sc = StandardCell {
            drive_strength: drive_strength(&name),
            name: name.clone(),
            function,
            area,
            width: None,
            height: None,
            input_capacitance_min,
            input_capacitance_max,
            output_capacitance_min,
            output_capacitance_max,
            leakage_power_min,
            leakage_power_max,
            is_sequential,
            is_inverter: polarity == Some(false),
            is_buffer: polarity == Some(true),
            is_filler,
            is_diode,
            is_tap,
            pins,
        };
        if catalog.cells.insert(name.clone(), sc).is_some() {
            warnings.push(ParseWarning {
                line: cell.line,
                message: format!("cell `{name}` redefined; last definition kept"),
            });
        }
    }
    Ok((catalog, warnings))
}
