// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::lexer::Cursor;
use super::{fmt_f64, Format, ParseError, ParseWarning};
use crate::geom::{um_to_dbu, Dbu, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    Routing,
    Cut,
    Masterslice,
    Overlap,
    Implant,
}

impl LayerKind {
    fn parse(tok: &str) -> Option<LayerKind> {
        Some(match tok {
            "ROUTING" => LayerKind::Routing,
            "CUT" => LayerKind::Cut,
            "MASTERSLICE" => LayerKind::Masterslice,
            "OVERLAP" => LayerKind::Overlap,
            "IMPLANT" => LayerKind::Implant,
            _ => return None,
        })
    }

    fn as_str(&self) -> &'static str {
        match self {
            LayerKind::Routing => "ROUTING",
            LayerKind::Cut => "CUT",
            LayerKind::Masterslice => "MASTERSLICE",
            LayerKind::Overlap => "OVERLAP",
            LayerKind::Implant => "IMPLANT",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RouteDirection {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub name: String,
    pub kind: LayerKind,
    pub direction: Option<RouteDirection>,
    /// Minimum (default) wire width; always present and positive on routing layers.
    pub min_width: Option<Dbu>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub name: String,
    pub class: Option<String>,
    pub width: Dbu,
    pub height: Dbu,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PinDirection {
    #[default]
    Input,
    Output,
    InOut,
    Feedthru,
}

impl PinDirection {
    pub fn parse(tok: &str) -> Option<PinDirection> {
        Some(match tok.to_ascii_uppercase().as_str() {
            "INPUT" => PinDirection::Input,
            "OUTPUT" => PinDirection::Output,
            "INOUT" => PinDirection::InOut,
            "FEEDTHRU" => PinDirection::Feedthru,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PinDirection::Input => "INPUT",
            PinDirection::Output => "OUTPUT",
            PinDirection::InOut => "INOUT",
            PinDirection::Feedthru => "FEEDTHRU",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignalUse {
    #[default]
    Signal,
    Clock,
    Power,
    Ground,
    Analog,
    Scan,
    Reset,
    Tieoff,
}

impl SignalUse {
    pub fn parse(tok: &str) -> Option<SignalUse> {
        Some(match tok {
            "SIGNAL" => SignalUse::Signal,
            "CLOCK" => SignalUse::Clock,
            "POWER" => SignalUse::Power,
            "GROUND" => SignalUse::Ground,
            "ANALOG" => SignalUse::Analog,
            "SCAN" => SignalUse::Scan,
            "RESET" => SignalUse::Reset,
            "TIEOFF" => SignalUse::Tieoff,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SignalUse::Signal => "SIGNAL",
            SignalUse::Clock => "CLOCK",
            SignalUse::Power => "POWER",
            SignalUse::Ground => "GROUND",
            SignalUse::Analog => "ANALOG",
            SignalUse::Scan => "SCAN",
            SignalUse::Reset => "RESET",
            SignalUse::Tieoff => "TIEOFF",
        }
    }

    pub fn is_supply(&self) -> bool {
        matches!(self, SignalUse::Power | SignalUse::Ground)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRect {
    pub layer: String,
    pub rect: Rect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MacroPin {
    pub name: String,
    pub direction: PinDirection,
    pub signal_use: SignalUse,
    pub shapes: Vec<LayerRect>,
}

impl MacroPin {
    /// Bounding box of all port shapes in the macro frame.
    pub fn bbox(&self) -> Option<Rect> {
        self.shapes
            .iter()
            .map(|s| s.rect)
            .reduce(|a, b| a.union(&b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Macro {
    pub name: String,
    /// Full class string, e.g. `CORE`, `CORE SPACER`, `BLOCK`.
    pub class: Option<String>,
    pub width: Dbu,
    pub height: Dbu,
    pub site: Option<String>,
    pub pins: IndexMap<String, MacroPin>,
}

/// Technology and cell abstracts read from one or more LEF files.
/// Lengths are stored in LEF database units.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TechLibrary {
    pub dbu_per_micron: u32,
    pub layers: Vec<Layer>,
    pub sites: IndexMap<String, Site>,
    /// Fixed vias by name, with the layers they touch in declaration order.
    pub vias: IndexMap<String, Vec<String>>,
    pub macros: IndexMap<String, Macro>,
}

impl TechLibrary {
    pub fn layer(&self, name: &str) -> Option<&Layer> {
        self.layers.iter().find(|l| l.name == name)
    }

    pub fn routing_layers(&self) -> impl Iterator<Item = &Layer> {
        self.layers.iter().filter(|l| l.kind == LayerKind::Routing)
    }

    /// Minimum width of the first routing layer (metal 1), in LEF DBU.
    pub fn w_m1(&self) -> Option<Dbu> {
        self.routing_layers().next().and_then(|l| l.min_width)
    }

    pub fn w_m1_um(&self) -> Option<f64> {
        self.w_m1().map(|w| w as f64 / self.dbu_per_micron as f64)
    }

    /// Convert a LEF length into another DBU scale (e.g. the DEF's).
    pub fn rescale(&self, v: Dbu, target_dbu_per_micron: u32) -> Dbu {
        if target_dbu_per_micron == self.dbu_per_micron {
            v
        } else {
            (v as i128 * target_dbu_per_micron as i128 / self.dbu_per_micron as i128) as Dbu
        }
    }
}

pub fn parse_lef(text: &str) -> Result<TechLibrary, ParseError> {
    parse_lef_diag(text).map(|(lib, warnings)| {
        for w in &warnings {
            log::debug!("LEF line {}: {}", w.line, w.message);
        }
        lib
    })
}

/// Parse a self-contained LEF (one that declares `UNITS`), returning skipped
/// statements as warnings.
pub fn parse_lef_diag(text: &str) -> Result<(TechLibrary, Vec<ParseWarning>), ParseError> {
    let dbu = scan_units(text)?
        .ok_or_else(|| ParseError::new(Format::Lef, 1, "missing UNITS DATABASE MICRONS"))?;
    let mut lib = TechLibrary {
        dbu_per_micron: dbu,
        ..Default::default()
    };
    let warnings = LefReader::new(text).read_into(&mut lib)?;
    Ok((lib, warnings))
}

/// Merge an additional LEF (typically a cell library without `UNITS`) into an
/// existing technology.
pub fn parse_lef_into(lib: &mut TechLibrary, text: &str) -> Result<Vec<ParseWarning>, ParseError> {
    if let Some(dbu) = scan_units(text)? {
        if lib.dbu_per_micron == 0 {
            lib.dbu_per_micron = dbu;
        }
    }
    if lib.dbu_per_micron == 0 {
        return Err(ParseError::new(
            Format::Lef,
            1,
            "missing UNITS DATABASE MICRONS",
        ));
    }
    LefReader::new(text).read_into(lib)
}

fn scan_units(text: &str) -> Result<Option<u32>, ParseError> {
    let mut cur = Cursor::new(text, Format::Lef);
    while !cur.at_end() {
        let line = cur.line();
        let tok = cur.next()?;
        if tok == "DATABASE" && cur.peek() == Some("MICRONS") {
            cur.next()?;
            let v: f64 = cur.number()?;
            if v <= 0.0 || v.fract() != 0.0 {
                return Err(ParseError::new(
                    Format::Lef,
                    line,
                    format!("invalid DATABASE MICRONS value {v}"),
                ));
            }
            return Ok(Some(v as u32));
        }
    }
    Ok(None)
}

struct LefReader<'a> {
    cur: Cursor<'a>,
}

impl<'a> LefReader<'a> {
    fn new(text: &'a str) -> Self {
        LefReader {
            cur: Cursor::new(text, Format::Lef),
        }
    }

    fn um(&mut self, dbu: u32) -> Result<Dbu, ParseError> {
        let v: f64 = self.cur.number()?;
        Ok(um_to_dbu(v, dbu))
    }

    fn read_into(mut self, lib: &mut TechLibrary) -> Result<Vec<ParseWarning>, ParseError> {
        while !self.cur.at_end() {
            let line = self.cur.line();
            let kw = self.cur.next()?;
            match kw {
                "VERSION" | "BUSBITCHARS" | "DIVIDERCHAR" | "NAMESCASESENSITIVE"
                | "MANUFACTURINGGRID" | "CLEARANCEMEASURE" | "USEMINSPACING" => {
                    self.cur.skip_statement()?
                }
                "UNITS" => self.cur.skip_block("UNITS")?,
                "LAYER" => {
                    let layer = self.layer(lib.dbu_per_micron)?;
                    if lib.layer(&layer.name).is_some() {
                        return Err(ParseError::new(
                            Format::Lef,
                            line,
                            format!("duplicate layer `{}`", layer.name),
                        ));
                    }
                    lib.layers.push(layer);
                }
                "SITE" => {
                    let site = self.site(lib.dbu_per_micron)?;
                    lib.sites.insert(site.name.clone(), site);
                }
                "MACRO" => {
                    let m = self.macro_def(lib.dbu_per_micron)?;
                    lib.macros.insert(m.name.clone(), m);
                }
                "END" => {
                    // END LIBRARY
                    if self.cur.peek() == Some("LIBRARY") {
                        self.cur.next()?;
                    }
                }
                "VIA" => {
                    let name = self.cur.next()?.to_string();
                    let layers = self.via_layers(&name)?;
                    lib.vias.insert(name, layers);
                }
                "VIARULE" | "NONDEFAULTRULE" => {
                    let name = self.cur.next()?;
                    self.cur.warn(line, format!("skipped {kw} {name}"));
                    self.cur.skip_block(name)?;
                }
                "PROPERTYDEFINITIONS" | "SPACING" | "ARRAY" | "BEGINEXT" => {
                    self.cur.warn(line, format!("skipped {kw} block"));
                    let end = if kw == "BEGINEXT" { "ENDEXT" } else { kw };
                    if kw == "BEGINEXT" {
                        while self.cur.next()? != end {}
                    } else {
                        self.cur.skip_block(end)?;
                    }
                }
                other => {
                    self.cur.warn(line, format!("skipped statement `{other}`"));
                    self.cur.skip_statement()?;
                }
            }
        }
        Ok(self.cur.warnings)
    }

    fn layer(&mut self, dbu: u32) -> Result<Layer, ParseError> {
        let start = self.cur.line();
        let name = self.cur.next()?.to_string();
        let mut kind = None;
        let mut direction = None;
        let mut min_width = None;
        loop {
            let line = self.cur.line();
            let kw = self.cur.next()?;
            match kw {
                "END" => {
                    self.cur.expect(&name)?;
                    break;
                }
                "TYPE" => {
                    let t = self.cur.next()?;
                    kind = Some(LayerKind::parse(t).ok_or_else(|| {
                        ParseError::new(Format::Lef, line, format!("unknown layer TYPE `{t}`"))
                    })?);
                    self.cur.skip_statement()?;
                }
                "DIRECTION" => {
                    direction = match self.cur.next()? {
                        "HORIZONTAL" => Some(RouteDirection::Horizontal),
                        "VERTICAL" => Some(RouteDirection::Vertical),
                        t => {
                            self.cur.warn(line, format!("unknown DIRECTION `{t}`"));
                            None
                        }
                    };
                    self.cur.skip_statement()?;
                }
                "WIDTH" => {
                    let w = self.um(dbu)?;
                    if w <= 0 {
                        return Err(ParseError::new(
                            Format::Lef,
                            line,
                            format!("layer `{name}` has non-positive WIDTH"),
                        ));
                    }
                    min_width = Some(w);
                    self.cur.skip_statement()?;
                }
                _ => self.cur.skip_statement()?,
            }
        }
        let kind = kind.ok_or_else(|| {
            ParseError::new(Format::Lef, start, format!("layer `{name}` has no TYPE"))
        })?;
        if kind == LayerKind::Routing && min_width.is_none() {
            return Err(ParseError::new(
                Format::Lef,
                start,
                format!("routing layer `{name}` has no WIDTH"),
            ));
        }
        Ok(Layer {
            name,
            kind,
            direction,
            min_width,
        })
    }

    fn via_layers(&mut self, name: &str) -> Result<Vec<String>, ParseError> {
        let mut layers: Vec<String> = Vec::new();
        while self.cur.peek() != Some(";") && self.cur.peek() != Some("LAYER") {
            // DEFAULT / GENERATED qualifiers
            if self.cur.peek() == Some("END") {
                break;
            }
            self.cur.next()?;
        }
        loop {
            match self.cur.next()? {
                "END" => {
                    self.cur.expect(name)?;
                    return Ok(layers);
                }
                "LAYER" => {
                    let l = self.cur.next()?.to_string();
                    if !layers.contains(&l) {
                        layers.push(l);
                    }
                    self.cur.skip_statement()?;
                }
                ";" => {}
                _ => self.cur.skip_statement()?,
            }
        }
    }

    fn site(&mut self, dbu: u32) -> Result<Site, ParseError> {
        let name = self.cur.next()?.to_string();
        let mut site = Site {
            name: name.clone(),
            class: None,
            width: 0,
            height: 0,
        };
        loop {
            match self.cur.next()? {
                "END" => {
                    self.cur.expect(&name)?;
                    return Ok(site);
                }
                "CLASS" => {
                    site.class = Some(self.cur.next()?.to_string());
                    self.cur.skip_statement()?;
                }
                "SIZE" => {
                    site.width = self.um(dbu)?;
                    self.cur.expect("BY")?;
                    site.height = self.um(dbu)?;
                    self.cur.skip_statement()?;
                }
                _ => self.cur.skip_statement()?,
            }
        }
    }

    fn macro_def(&mut self, dbu: u32) -> Result<Macro, ParseError> {
        let name = self.cur.next()?.to_string();
        let mut m = Macro {
            name: name.clone(),
            class: None,
            width: 0,
            height: 0,
            site: None,
            pins: IndexMap::new(),
        };
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => {
                    self.cur.expect(&name)?;
                    return Ok(m);
                }
                "CLASS" => {
                    let mut parts = Vec::new();
                    while self.cur.peek() != Some(";") {
                        parts.push(self.cur.next()?);
                    }
                    self.cur.next()?;
                    m.class = Some(parts.join(" "));
                }
                "SIZE" => {
                    m.width = self.um(dbu)?;
                    self.cur.expect("BY")?;
                    m.height = self.um(dbu)?;
                    self.cur.skip_statement()?;
                }
                "SITE" => {
                    m.site = Some(self.cur.next()?.to_string());
                    self.cur.skip_statement()?;
                }
                "PIN" => {
                    let pin = self.pin(dbu)?;
                    m.pins.insert(pin.name.clone(), pin);
                }
                "OBS" => self.skip_obs()?,
                "FOREIGN" | "ORIGIN" | "SYMMETRY" | "SOURCE" | "EEQ" | "PROPERTY" => {
                    self.cur.skip_statement()?
                }
                other => {
                    self.cur
                        .warn(line, format!("skipped MACRO statement `{other}`"));
                    self.cur.skip_statement()?;
                }
            }
        }
    }

    fn skip_obs(&mut self) -> Result<(), ParseError> {
        loop {
            if self.cur.next()? == "END" {
                return Ok(());
            }
            self.cur.skip_statement()?;
        }
    }

    fn pin(&mut self, dbu: u32) -> Result<MacroPin, ParseError> {
        let name = self.cur.next()?.to_string();
        let mut pin = MacroPin {
            name: name.clone(),
            direction: PinDirection::Input,
            signal_use: SignalUse::Signal,
            shapes: Vec::new(),
        };
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => {
                    self.cur.expect(&name)?;
                    return Ok(pin);
                }
                "DIRECTION" => {
                    let t = self.cur.next()?;
                    pin.direction = PinDirection::parse(t).ok_or_else(|| {
                        ParseError::new(Format::Lef, line, format!("unknown pin DIRECTION `{t}`"))
                    })?;
                    self.cur.skip_statement()?;
                }
                "USE" => {
                    let t = self.cur.next()?;
                    pin.signal_use = SignalUse::parse(t).unwrap_or_else(|| {
                        self.cur.warn(line, format!("unknown pin USE `{t}`"));
                        SignalUse::Signal
                    });
                    self.cur.skip_statement()?;
                }
                "PORT" => self.port(dbu, &mut pin.shapes)?,
                _ => self.cur.skip_statement()?,
            }
        }
    }

    fn port(&mut self, dbu: u32, shapes: &mut Vec<LayerRect>) -> Result<(), ParseError> {
        let mut layer: Option<String> = None;
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => return Ok(()),
                "LAYER" => {
                    layer = Some(self.cur.next()?.to_string());
                    self.cur.skip_statement()?;
                }
                kw @ ("RECT" | "POLYGON") => {
                    if self.cur.peek() == Some("MASK") {
                        self.cur.next()?;
                        self.cur.next()?;
                    }
                    let mut coords = Vec::new();
                    while self.cur.peek() != Some(";") {
                        coords.push(self.um(dbu)?);
                    }
                    self.cur.next()?;
                    if coords.len() < 4
                        || coords.len() % 2 != 0
                        || (kw == "RECT" && coords.len() != 4)
                    {
                        return Err(ParseError::new(
                            Format::Lef,
                            line,
                            format!("malformed {kw} with {} coordinates", coords.len()),
                        ));
                    }
                    let layer = layer.clone().ok_or_else(|| {
                        ParseError::new(Format::Lef, line, format!("{kw} before LAYER"))
                    })?;
                    let pts = coords
                        .chunks(2)
                        .map(|c| crate::geom::Point::new(c[0], c[1]));
                    let rect = Rect::bounding(pts).expect("at least two points");
                    shapes.push(LayerRect { layer, rect });
                }
                _ => self.cur.skip_statement()?,
            }
        }
    }
}

/// Canonical LEF text for the supported subset. Parsing the output yields an
/// equal [`TechLibrary`].
pub fn write_lef(lib: &TechLibrary) -> String {
    let um = |v: Dbu| fmt_f64(v as f64 / lib.dbu_per_micron as f64);
    let mut s = String::new();
    s.push_str("VERSION 5.8 ;\nBUSBITCHARS \"[]\" ;\nDIVIDERCHAR \"/\" ;\n\n");
    let _ = writeln!(
        s,
        "UNITS\n  DATABASE MICRONS {} ;\nEND UNITS\n",
        lib.dbu_per_micron
    );
    for l in &lib.layers {
        let _ = writeln!(s, "LAYER {}\n  TYPE {} ;", l.name, l.kind.as_str());
        if let Some(d) = l.direction {
            let d = match d {
                RouteDirection::Horizontal => "HORIZONTAL",
                RouteDirection::Vertical => "VERTICAL",
            };
            let _ = writeln!(s, "  DIRECTION {d} ;");
        }
        if let Some(w) = l.min_width {
            let _ = writeln!(s, "  WIDTH {} ;", um(w));
        }
        let _ = writeln!(s, "END {}\n", l.name);
    }
    for site in lib.sites.values() {
        let _ = writeln!(s, "SITE {}", site.name);
        if let Some(c) = &site.class {
            let _ = writeln!(s, "  CLASS {c} ;");
        }
        let _ = writeln!(
            s,
            "  SIZE {} BY {} ;\nEND {}\n",
            um(site.width),
            um(site.height),
            site.name
        );
    }
    for (name, layers) in &lib.vias {
        let _ = writeln!(s, "VIA {name}");
        for l in layers {
            let _ = writeln!(s, "  LAYER {l} ;");
        }
        let _ = writeln!(s, "END {name}\n");
    }
    for m in lib.macros.values() {
        let _ = writeln!(s, "MACRO {}", m.name);
        if let Some(c) = &m.class {
            let _ = writeln!(s, "  CLASS {c} ;");
        }
        let _ = writeln!(s, "  SIZE {} BY {} ;", um(m.width), um(m.height));
        if let Some(site) = &m.site {
            let _ = writeln!(s, "  SITE {site} ;");
        }
        for p in m.pins.values() {
            let _ = writeln!(
                s,
                "  PIN {}\n    DIRECTION {} ;\n    USE {} ;",
                p.name,
                p.direction.as_str(),
                p.signal_use.as_str()
            );
            if !p.shapes.is_empty() {
                s.push_str("    PORT\n");
                for sh in &p.shapes {
                    let _ = writeln!(
                        s,
                        "      LAYER {} ;\n        RECT {} {} {} {} ;",
                        sh.layer,
                        um(sh.rect.x0),
                        um(sh.rect.y0),
                        um(sh.rect.x1),
                        um(sh.rect.y1)
                    );
                }
                s.push_str("    END\n");
            }
            let _ = writeln!(s, "  END {}", p.name);
        }
        let _ = writeln!(s, "END {}\n", m.name);
    }
    s.push_str("END LIBRARY\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "UNITS\n DATABASE MICRONS 2000 ;\nEND UNITS\n\
        LAYER metal1\n TYPE ROUTING ;\n DIRECTION HORIZONTAL ;\n WIDTH 0.14 ;\nEND metal1\nEND LIBRARY\n";

    #[test]
    fn minimal_single_layer() {
        let lib = parse_lef(MINIMAL).unwrap();
        assert_eq!(lib.layers.len(), 1);
        assert_eq!(lib.layers[0].name, "metal1");
        assert_eq!(lib.w_m1(), Some(280));
        assert_eq!(lib.w_m1_um(), Some(0.14));
    }

    #[test]
    fn missing_units_is_an_error() {
        let text = "LAYER metal1\n TYPE ROUTING ;\n WIDTH 0.14 ;\nEND metal1\n";
        let err = parse_lef(text).unwrap_err();
        assert!(err.message.contains("UNITS"), "{err}");
    }

    #[test]
    fn zero_width_layer_is_an_error() {
        let text = MINIMAL.replace("WIDTH 0.14", "WIDTH 0");
        let err = parse_lef(&text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("WIDTH"));
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = MINIMAL.replace("END metal1", "END metal2");
        let err = parse_lef(&text).unwrap_err();
        assert_eq!(err.line, 8);
    }

    #[test]
    fn unknown_statements_are_warnings() {
        let text = MINIMAL.replace(
            "END LIBRARY",
            "VENDOREXT foo bar ;\nVIARULE gen GENERATE\n LAYER via1 ;\nEND gen\nEND LIBRARY",
        );
        let (lib, warnings) = parse_lef_diag(&text).unwrap();
        assert_eq!(lib.layers.len(), 1);
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn cell_lef_merges_into_tech() {
        let mut lib = parse_lef(MINIMAL).unwrap();
        let cells = "MACRO INV\n CLASS CORE ;\n SIZE 0.38 BY 1.4 ;\n PIN A\n  DIRECTION INPUT ;\n  PORT\n   LAYER metal1 ;\n   RECT 0 0 0.1 0.2 ;\n  END\n END A\nEND INV\n";
        parse_lef_into(&mut lib, cells).unwrap();
        let inv = &lib.macros["INV"];
        assert_eq!((inv.width, inv.height), (760, 2800));
        assert_eq!(inv.pins["A"].shapes[0].rect, Rect::new(0, 0, 200, 400));
    }
}
