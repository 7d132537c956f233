// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{fmt_f64, Format, ParseError, ParseWarning};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NetParasitics {
    /// Ohm.
    pub total_resistance: f64,
    /// Ground capacitance, fF.
    pub total_capacitance: f64,
    /// Coupling capacitance, fF.
    pub total_coupling_capacitance: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParasiticSet {
    pub design: String,
    pub nets: IndexMap<String, NetParasitics>,
}

impl ParasiticSet {
    pub fn get(&self, net: &str) -> Option<&NetParasitics> {
        self.nets.get(net)
    }
}

pub fn parse_spef(text: &str) -> Result<ParasiticSet, ParseError> {
    parse_spef_diag(text).map(|(p, _)| p)
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(Format::Spef, line, msg)
}

fn unit_scale(
    line: usize,
    value: &str,
    unit: &str,
    table: &[(&str, f64)],
) -> Result<f64, ParseError> {
    let v: f64 = value
        .parse()
        .map_err(|_| err(line, format!("bad unit multiplier `{value}`")))?;
    let u = unit.to_ascii_uppercase();
    table
        .iter()
        .find(|(name, _)| *name == u)
        .map(|(_, s)| v * s)
        .ok_or_else(|| err(line, format!("unknown unit `{unit}`")))
}

fn normalize(name: &str) -> String {
    name.replace('\\', "")
}

#[derive(PartialEq)]
enum Block {
    None,
    Conn,
    Cap,
    Res,
    Other,
}

pub fn parse_spef_diag(text: &str) -> Result<(ParasiticSet, Vec<ParseWarning>), ParseError> {
    let mut set = ParasiticSet::default();
    let mut warnings = Vec::new();
    let mut name_map: HashMap<String, String> = HashMap::new();
    let mut c_scale: Option<f64> = None;
    let mut r_scale: Option<f64> = None;
    let mut current: Option<(String, NetParasitics)> = None;
    let mut block = Block::None;
    let mut in_name_map = false;

    let resolve = |tok: &str, map: &HashMap<String, String>| -> String {
        // `*12:A` -> `<name of 12>:A`
        let (head, tail) = match tok.find(':') {
            Some(i) => (&tok[..i], &tok[i..]),
            None => (tok, ""),
        };
        let head = match map.get(head) {
            Some(n) => n.as_str(),
            None => head,
        };
        normalize(&format!("{head}{tail}"))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find("//") {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };

        if first.starts_with('*') && !first[1..].starts_with(|c: char| c.is_ascii_digit()) {
            in_name_map = false;
            match first {
                "*C_UNIT" | "*R_UNIT" if toks.len() < 3 => {
                    return Err(err(line, format!("{first} needs a value and a unit")))
                }
                "*C_UNIT" => {
                    c_scale = Some(unit_scale(
                        line,
                        toks[1],
                        toks[2],
                        &[("FF", 1.0), ("PF", 1e3), ("NF", 1e6), ("F", 1e15)],
                    )?)
                }
                "*R_UNIT" => {
                    r_scale = Some(unit_scale(
                        line,
                        toks[1],
                        toks[2],
                        &[("OHM", 1.0), ("KOHM", 1e3), ("MOHM", 1e6)],
                    )?)
                }
                "*DESIGN" => {
                    set.design = toks
                        .get(1)
                        .map(|s| s.trim_matches('"').to_string())
                        .unwrap_or_default()
                }
                "*NAME_MAP" => in_name_map = true,
                "*D_NET" | "*R_NET" => {
                    if current.is_some() {
                        return Err(err(line, "nested net section (missing *END)"));
                    }
                    let name = toks
                        .get(1)
                        .map(|t| resolve(t, &name_map))
                        .ok_or_else(|| err(line, "net section without a name"))?;
                    if set.nets.contains_key(&name) {
                        return Err(err(line, format!("duplicate net section `{name}`")));
                    }
                    if c_scale.is_none() || r_scale.is_none() {
                        return Err(err(line, "missing header units (*C_UNIT / *R_UNIT)"));
                    }
                    current = Some((name, NetParasitics::default()));
                    block = Block::None;
                }
                "*CONN" => block = Block::Conn,
                "*CAP" => block = Block::Cap,
                "*RES" => block = Block::Res,
                "*INDUC" | "*DRIVER" | "*CELL" | "*LOADS" => block = Block::Other,
                "*C2_R1" => {
                    // reduced net driver model: C2 R1 C1
                    let Some((_, p)) = current.as_mut() else {
                        return Err(err(line, "*C2_R1 outside a net section"));
                    };
                    let vals = numbers(line, &toks[1..])?;
                    if vals.len() != 3 {
                        return Err(err(line, "*C2_R1 needs three values"));
                    }
                    p.total_capacitance += (vals[0] + vals[2]) * c_scale.unwrap_or(1.0);
                    p.total_resistance += vals[1] * r_scale.unwrap_or(1.0);
                }
                "*RC" => block = Block::Other,
                "*END" => {
                    let Some((name, p)) = current.take() else {
                        return Err(err(line, "*END without a net section"));
                    };
                    set.nets.insert(name, p);
                    block = Block::None;
                }
                "*SPEF" | "*DATE" | "*VENDOR" | "*PROGRAM" | "*VERSION" | "*DESIGN_FLOW"
                | "*DIVIDER" | "*DELIMITER" | "*BUS_DELIMITER" | "*T_UNIT" | "*L_UNIT"
                | "*PORTS" | "*POWER_NETS" | "*GROUND_NETS" | "*I" | "*P" => {}
                other => warnings.push(ParseWarning {
                    line,
                    message: format!("skipped `{other}`"),
                }),
            }
            continue;
        }

        if in_name_map {
            if toks.len() >= 2 {
                name_map.insert(toks[0].to_string(), normalize(toks[1]));
            }
            continue;
        }

        let Some((_, p)) = current.as_mut() else {
            // port declarations and similar header content
            continue;
        };
        match block {
            Block::Cap => {
                let vals = numbers(line, &toks[toks.len() - 1..])?;
                let v = vals[0] * c_scale.unwrap_or(1.0);
                match toks.len() {
                    3 => p.total_capacitance += v,
                    4 => p.total_coupling_capacitance += v,
                    _ => return Err(err(line, "malformed *CAP entry")),
                }
            }
            Block::Res => {
                if toks.len() != 4 {
                    return Err(err(line, "malformed *RES entry"));
                }
                p.total_resistance += numbers(line, &toks[3..])?[0] * r_scale.unwrap_or(1.0);
            }
            Block::Conn | Block::Other | Block::None => {}
        }
    }
    if let Some((name, _)) = current {
        return Err(err(
            text.lines().count(),
            format!("net section `{name}` lacks *END"),
        ));
    }
    if c_scale.is_none() || r_scale.is_none() {
        return Err(err(1, "missing header units (*C_UNIT / *R_UNIT)"));
    }
    Ok((set, warnings))
}

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<f64>, ParseError> {
    toks.iter()
        .map(|t| {
            let v: f64 = t
                .parse()
                .map_err(|_| err(line, format!("expected a number, found `{t}`")))?;
            if !v.is_finite() {
                return Err(err(line, format!("non-finite value `{t}`")));
            }
            if v < 0.0 {
                return Err(err(line, format!("negative element value {t}")));
            }
            Ok(v)
        })
        .collect()
}

/// Canonical SPEF carrying one lumped element per kind and net (units fF/ohm).
pub fn write_spef(set: &ParasiticSet) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "*SPEF \"IEEE 1481-1998\"");
    let _ = writeln!(s, "*DESIGN \"{}\"", set.design);
    s.push_str("*DIVIDER /\n*DELIMITER :\n*BUS_DELIMITER [ ]\n");
    s.push_str("*T_UNIT 1 NS\n*C_UNIT 1 FF\n*R_UNIT 1 OHM\n*L_UNIT 1 HENRY\n\n");
    for (name, p) in &set.nets {
        let _ = writeln!(
            s,
            "*D_NET {name} {}",
            fmt_f64(p.total_capacitance + p.total_coupling_capacitance)
        );
        s.push_str("*CAP\n");
        let _ = writeln!(s, "1 {name}:1 {}", fmt_f64(p.total_capacitance));
        if p.total_coupling_capacitance != 0.0 {
            let _ = writeln!(
                s,
                "2 {name}:1 coupled:1 {}",
                fmt_f64(p.total_coupling_capacitance)
            );
        }
        s.push_str("*RES\n");
        let _ = writeln!(s, "1 {name}:1 {name}:2 {}", fmt_f64(p.total_resistance));
        s.push_str("*END\n\n");
    }
    s
}
