// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::lef::{LayerRect, PinDirection, SignalUse, TechLibrary};
use super::lexer::Cursor;
use super::{Format, ParseError, ParseWarning};
use crate::geom::{Dbu, Orient, Point, Rect};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementStatus {
    #[default]
    Unplaced,
    Placed,
    Fixed,
    Cover,
}

impl PlacementStatus {
    fn parse(tok: &str) -> Option<Self> {
        Some(match tok {
            "UNPLACED" => PlacementStatus::Unplaced,
            "PLACED" => PlacementStatus::Placed,
            "FIXED" => PlacementStatus::Fixed,
            "COVER" => PlacementStatus::Cover,
            _ => return None,
        })
    }

    fn as_str(&self) -> &'static str {
        match self {
            PlacementStatus::Unplaced => "UNPLACED",
            PlacementStatus::Placed => "PLACED",
            PlacementStatus::Fixed => "FIXED",
            PlacementStatus::Cover => "COVER",
        }
    }

    pub fn is_placed(&self) -> bool {
        !matches!(self, PlacementStatus::Unplaced)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub cell: String,
    pub status: PlacementStatus,
    /// Lower-left corner of the oriented footprint; `None` when unplaced.
    pub origin: Option<Point>,
    pub orient: Orient,
}

/// A design-level I/O pin (DEF `PINS` entry).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortPin {
    pub name: String,
    pub net: Option<String>,
    pub direction: PinDirection,
    pub signal_use: SignalUse,
    pub status: PlacementStatus,
    pub position: Option<Point>,
    pub orient: Orient,
    /// Shapes relative to `position`, before orientation.
    pub shapes: Vec<LayerRect>,
}

impl PortPin {
    /// Absolute pin shapes (orientation applied), empty when unplaced.
    pub fn placed_shapes(&self) -> Vec<LayerRect> {
        match self.position {
            Some(p) => self
                .shapes
                .iter()
                .map(|s| LayerRect {
                    layer: s.layer.clone(),
                    rect: self.orient.rotate_rect(&s.rect).translate(p.x, p.y),
                })
                .collect(),
            None => Vec::new(),
        }
    }

    /// Location used for wirelength: center of the placed shape box, else the
    /// placement point.
    pub fn location(&self) -> Option<Point> {
        let shapes = self.placed_shapes();
        match shapes.iter().map(|s| s.rect).reduce(|a, b| a.union(&b)) {
            Some(r) => Some(r.center()),
            None => self.position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NetConnection {
    Instance {
        instance: String,
        pin: String,
    },
    Port(String),
    /// `( * PIN )` wildcard, used by special nets.
    Global(String),
}

/// One center-line wire piece of a routed net.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSegment {
    pub layer: String,
    pub start: Point,
    pub end: Point,
    pub width: Dbu,
    pub start_ext: Dbu,
    pub end_ext: Dbu,
}

impl WireSegment {
    /// Center-line length.
    pub fn length(&self) -> Dbu {
        (self.end.x - self.start.x).abs() + (self.end.y - self.start.y).abs()
    }

    /// The metal rectangle covered by this segment.
    pub fn rect(&self) -> Rect {
        let hw = self.width / 2;
        let (a, b) = (self.start, self.end);
        if a.y == b.y {
            let (lo, hi, lo_ext, hi_ext) = if a.x <= b.x {
                (a.x, b.x, self.start_ext, self.end_ext)
            } else {
                (b.x, a.x, self.end_ext, self.start_ext)
            };
            Rect::new(lo - lo_ext, a.y - hw, hi + hi_ext, a.y + self.width - hw)
        } else {
            let (lo, hi, lo_ext, hi_ext) = if a.y <= b.y {
                (a.y, b.y, self.start_ext, self.end_ext)
            } else {
                (b.y, a.y, self.end_ext, self.start_ext)
            };
            Rect::new(a.x - hw, lo - lo_ext, a.x + self.width - hw, hi + hi_ext)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Via {
    pub name: String,
    pub at: Point,
    /// Routing layer the path was on when the via was placed.
    pub layer: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedNet {
    pub name: String,
    pub is_special: bool,
    pub signal_use: Option<SignalUse>,
    pub connections: Vec<NetConnection>,
    pub segments: Vec<WireSegment>,
    pub vias: Vec<Via>,
}

impl RoutedNet {
    /// Sum of routed center-line lengths, vias excluded.
    pub fn routed_length(&self) -> Dbu {
        self.segments.iter().map(WireSegment::length).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    pub site: String,
    pub origin: Point,
    pub orient: Orient,
    pub num_x: u32,
    pub num_y: u32,
    pub step_x: Dbu,
    pub step_y: Dbu,
}

/// Placed-and-routed design read from DEF. Coordinates are in this file's DBU.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhysicalNetlist {
    pub design: String,
    pub dbu_per_micron: u32,
    pub die_box: Rect,
    /// Union of the placement rows; equals `die_box` when the DEF has no rows.
    pub core_box: Rect,
    pub rows: Vec<Row>,
    pub components: Vec<Component>,
    pub ports: Vec<PortPin>,
    /// Regular nets first (file order), then special nets not also listed as regular.
    pub nets: Vec<RoutedNet>,
}

impl PhysicalNetlist {
    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn net(&self, name: &str) -> Option<&RoutedNet> {
        self.nets.iter().find(|n| n.name == name)
    }
}

pub fn parse_def(text: &str, tech: &TechLibrary) -> Result<PhysicalNetlist, ParseError> {
    parse_def_diag(text, tech).map(|(pn, warnings)| {
        for w in &warnings {
            log::debug!("DEF line {}: {}", w.line, w.message);
        }
        pn
    })
}

pub fn parse_def_diag(
    text: &str,
    tech: &TechLibrary,
) -> Result<(PhysicalNetlist, Vec<ParseWarning>), ParseError> {
    let mut reader = DefReader {
        cur: Cursor::new(text, Format::Def),
        tech,
        pn: PhysicalNetlist::default(),
        def_vias: HashMap::new(),
    };
    reader.read()?;
    Ok((reader.pn, reader.cur.warnings))
}

struct DefReader<'a, 't> {
    cur: Cursor<'a>,
    tech: &'t TechLibrary,
    pn: PhysicalNetlist,
    def_vias: HashMap<String, Vec<String>>,
}

impl DefReader<'_, '_> {
    fn err(&self, line: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(Format::Def, line, msg)
    }

    fn read(&mut self) -> Result<(), ParseError> {
        let mut saw_units = false;
        let mut die: Option<Rect> = None;
        let mut special: Vec<RoutedNet> = Vec::new();
        while !self.cur.at_end() {
            let line = self.cur.line();
            let kw = self.cur.next()?;
            match kw {
                "VERSION" | "DIVIDERCHAR" | "BUSBITCHARS" | "TECHNOLOGY" | "HISTORY" | "TRACKS"
                | "GCELLGRID" => self.cur.skip_statement()?,
                "DESIGN" => {
                    self.pn.design = self.cur.next()?.to_string();
                    self.cur.skip_statement()?;
                }
                "UNITS" => {
                    self.cur.expect("DISTANCE")?;
                    self.cur.expect("MICRONS")?;
                    let v: u32 = self.cur.number()?;
                    if v == 0 {
                        return Err(self.err(line, "UNITS DISTANCE MICRONS must be positive"));
                    }
                    self.pn.dbu_per_micron = v;
                    saw_units = true;
                    self.cur.skip_statement()?;
                }
                "DIEAREA" => {
                    let mut pts = Vec::new();
                    while self.cur.peek() == Some("(") {
                        pts.push(self.point(None)?);
                    }
                    self.cur.expect(";")?;
                    if pts.len() < 2 {
                        return Err(self.err(line, "DIEAREA needs at least two points"));
                    }
                    die = Rect::bounding(pts);
                }
                "ROW" => self.row()?,
                "VIAS" => self.vias_section()?,
                "COMPONENTS" => self.components()?,
                "PINS" => self.pins()?,
                "NETS" => {
                    let nets = self.nets("NETS", false)?;
                    self.pn.nets.extend(nets);
                }
                "SPECIALNETS" => special = self.nets("SPECIALNETS", true)?,
                "END" => {
                    if self.cur.peek() == Some("DESIGN") {
                        self.cur.next()?;
                    }
                }
                "PROPERTYDEFINITIONS"
                | "NONDEFAULTRULES"
                | "REGIONS"
                | "GROUPS"
                | "BLOCKAGES"
                | "FILLS"
                | "SCANCHAINS"
                | "STYLES"
                | "PINPROPERTIES" => {
                    self.cur.warn(line, format!("skipped {kw} section"));
                    self.cur.skip_block(kw)?;
                }
                other => {
                    self.cur.warn(line, format!("skipped statement `{other}`"));
                    self.cur.skip_statement()?;
                }
            }
        }
        if !saw_units {
            return Err(self.err(1, "missing UNITS DISTANCE MICRONS"));
        }
        self.pn.die_box = die.ok_or_else(|| self.err(1, "missing DIEAREA"))?;
        let regular: HashSet<String> = self.pn.nets.iter().map(|n| n.name.clone()).collect();
        for s in special {
            if regular.contains(&s.name) {
                // keep a single node per name; the special routing is attached to it
                let net = self
                    .pn
                    .nets
                    .iter_mut()
                    .find(|n| n.name == s.name)
                    .expect("name present");
                net.is_special = true;
                net.segments.extend(s.segments);
                net.vias.extend(s.vias);
                if net.signal_use.is_none() {
                    net.signal_use = s.signal_use;
                }
            } else {
                self.pn.nets.push(s);
            }
        }
        self.pn.core_box = self.core_from_rows();
        Ok(())
    }

    fn core_from_rows(&mut self) -> Rect {
        let mut core: Option<Rect> = None;
        let dbu = self.pn.dbu_per_micron;
        for row in &self.pn.rows {
            let Some(site) = self.tech.sites.get(&row.site) else {
                self.cur.warn(
                    0,
                    format!("row `{}` uses unknown site `{}`", row.name, row.site),
                );
                continue;
            };
            let sw = self.tech.rescale(site.width, dbu);
            let sh = self.tech.rescale(site.height, dbu);
            let w = (row.num_x as Dbu - 1) * row.step_x + sw;
            let h = (row.num_y as Dbu - 1) * row.step_y + sh;
            let r = Rect::new(
                row.origin.x,
                row.origin.y,
                row.origin.x + w,
                row.origin.y + h,
            );
            core = Some(core.map_or(r, |c| c.union(&r)));
        }
        core.unwrap_or(self.pn.die_box)
    }

    /// `( x y [ext] )`; `*` reuses the coordinate of `prev`.
    fn point(&mut self, prev: Option<Point>) -> Result<Point, ParseError> {
        self.point_ext(prev).map(|(p, _)| p)
    }

    fn point_ext(&mut self, prev: Option<Point>) -> Result<(Point, Option<Dbu>), ParseError> {
        let line = self.cur.line();
        self.cur.expect("(")?;
        let coord = |prev: Option<Dbu>, this: &mut Self| -> Result<Dbu, ParseError> {
            let tok = this.cur.next()?;
            if tok == "*" {
                prev.ok_or_else(|| this.err(line, "`*` without a previous point"))
            } else {
                tok.parse::<f64>()
                    .map(|v| v.round() as Dbu)
                    .map_err(|_| this.err(line, format!("malformed coordinate `{tok}`")))
            }
        };
        let x = coord(prev.map(|p| p.x), self)?;
        let y = coord(prev.map(|p| p.y), self)?;
        let ext = if self.cur.peek() != Some(")") {
            let tok = self.cur.next()?;
            Some(
                tok.parse::<Dbu>()
                    .map_err(|_| self.err(line, format!("malformed point extension `{tok}`")))?,
            )
        } else {
            None
        };
        self.cur.expect(")")?;
        Ok((Point::new(x, y), ext))
    }

    fn row(&mut self) -> Result<(), ParseError> {
        let name = self.cur.next()?.to_string();
        let site = self.cur.next()?.to_string();
        let x: f64 = self.cur.number()?;
        let y: f64 = self.cur.number()?;
        let orient_tok = self.cur.next()?;
        let orient = Orient::parse(orient_tok).ok_or_else(|| {
            self.cur
                .error(format!("bad row orientation `{orient_tok}`"))
        })?;
        let (mut num_x, mut num_y, mut step_x, mut step_y) = (1, 1, 0, 0);
        if self.cur.eat("DO") {
            num_x = self.cur.number()?;
            self.cur.expect("BY")?;
            num_y = self.cur.number()?;
            if self.cur.eat("STEP") {
                step_x = self.cur.number::<f64>()? as Dbu;
                step_y = self.cur.number::<f64>()? as Dbu;
            }
        }
        self.cur.skip_statement()?;
        self.pn.rows.push(Row {
            name,
            site,
            origin: Point::new(x as Dbu, y as Dbu),
            orient,
            num_x,
            num_y,
            step_x,
            step_y,
        });
        Ok(())
    }

    fn vias_section(&mut self) -> Result<(), ParseError> {
        self.cur.skip_statement()?;
        loop {
            match self.cur.next()? {
                "END" => {
                    self.cur.expect("VIAS")?;
                    return Ok(());
                }
                "-" => {
                    let name = self.cur.next()?.to_string();
                    let mut layers = Vec::new();
                    loop {
                        match self.cur.next()? {
                            ";" => break,
                            "RECT" | "POLYGON" => {
                                let l = self.cur.next()?.to_string();
                                if !layers.contains(&l) {
                                    layers.push(l);
                                }
                            }
                            "LAYERS" => {
                                for _ in 0..3 {
                                    layers.push(self.cur.next()?.to_string());
                                }
                            }
                            _ => {}
                        }
                    }
                    self.def_vias.insert(name, layers);
                }
                other => return Err(self.cur.error(format!("unexpected `{other}` in VIAS"))),
            }
        }
    }

    fn components(&mut self) -> Result<(), ParseError> {
        let declared: usize = self.cur.number()?;
        self.cur.expect(";")?;
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => {
                    self.cur.expect("COMPONENTS")?;
                    break;
                }
                "-" => {
                    let name = self.cur.next()?.to_string();
                    let cell = self.cur.next()?.to_string();
                    if !self.tech.macros.contains_key(&cell) {
                        return Err(self.err(
                            line,
                            format!("component `{name}` references unknown cell `{cell}`"),
                        ));
                    }
                    let mut comp = Component {
                        name,
                        cell,
                        status: PlacementStatus::Unplaced,
                        origin: None,
                        orient: Orient::N,
                    };
                    loop {
                        match self.cur.next()? {
                            ";" => break,
                            "+" => {
                                let attr = self.cur.next()?;
                                if let Some(st) = PlacementStatus::parse(attr) {
                                    comp.status = st;
                                    if st != PlacementStatus::Unplaced {
                                        comp.origin = Some(self.point(None)?);
                                        let o = self.cur.next()?;
                                        comp.orient = Orient::parse(o).ok_or_else(|| {
                                            self.cur.error(format!("bad orientation `{o}`"))
                                        })?;
                                    }
                                }
                            }
                            _ => {}
                        }
                    }
                    self.pn.components.push(comp);
                }
                other => return Err(self.err(line, format!("unexpected `{other}` in COMPONENTS"))),
            }
        }
        if declared != self.pn.components.len() {
            let line = self.cur.line();
            self.cur.warn(
                line,
                format!(
                    "COMPONENTS declares {declared}, found {}",
                    self.pn.components.len()
                ),
            );
        }
        Ok(())
    }

    fn pins(&mut self) -> Result<(), ParseError> {
        let declared: usize = self.cur.number()?;
        self.cur.expect(";")?;
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => {
                    self.cur.expect("PINS")?;
                    break;
                }
                "-" => {
                    let name = self.cur.next()?.to_string();
                    let mut pin = PortPin {
                        name,
                        net: None,
                        direction: PinDirection::Input,
                        signal_use: SignalUse::Signal,
                        status: PlacementStatus::Unplaced,
                        position: None,
                        orient: Orient::N,
                        shapes: Vec::new(),
                    };
                    let mut seen_port = false;
                    loop {
                        match self.cur.next()? {
                            ";" => break,
                            "+" => {
                                let attr = self.cur.next()?;
                                match attr {
                                    "NET" => pin.net = Some(self.cur.next()?.to_string()),
                                    "DIRECTION" => {
                                        let d = self.cur.next()?;
                                        pin.direction =
                                            PinDirection::parse(d).ok_or_else(|| {
                                                self.cur.error(format!("bad pin direction `{d}`"))
                                            })?;
                                    }
                                    "USE" => {
                                        let u = self.cur.next()?;
                                        pin.signal_use = SignalUse::parse(u).unwrap_or_default();
                                    }
                                    "PORT" => {
                                        if seen_port {
                                            self.cur.warn(line, "only the first PORT is kept");
                                            // skip the remaining ports of this pin
                                            while self.cur.peek() != Some(";") {
                                                self.cur.next()?;
                                            }
                                        }
                                        seen_port = true;
                                    }
                                    "LAYER" => {
                                        let layer = self.cur.next()?.to_string();
                                        while self.cur.peek() != Some("(") {
                                            // MASK n / SPACING d / DESIGNRULEWIDTH d
                                            self.cur.next()?;
                                        }
                                        let a = self.point(None)?;
                                        let b = self.point(None)?;
                                        pin.shapes.push(LayerRect {
                                            layer,
                                            rect: Rect::from_points(a, b),
                                        });
                                    }
                                    st if PlacementStatus::parse(st).is_some() => {
                                        pin.status = PlacementStatus::parse(st).unwrap();
                                        if pin.status != PlacementStatus::Unplaced {
                                            pin.position = Some(self.point(None)?);
                                            let o = self.cur.next()?;
                                            pin.orient = Orient::parse(o).ok_or_else(|| {
                                                self.cur.error(format!("bad orientation `{o}`"))
                                            })?;
                                        }
                                    }
                                    _ => {}
                                }
                            }
                            _ => {}
                        }
                    }
                    self.pn.ports.push(pin);
                }
                other => return Err(self.err(line, format!("unexpected `{other}` in PINS"))),
            }
        }
        if declared != self.pn.ports.len() {
            let line = self.cur.line();
            self.cur.warn(
                line,
                format!("PINS declares {declared}, found {}", self.pn.ports.len()),
            );
        }
        Ok(())
    }

    fn nets(&mut self, section: &str, special: bool) -> Result<Vec<RoutedNet>, ParseError> {
        let declared: usize = self.cur.number()?;
        self.cur.expect(";")?;
        let mut nets = Vec::new();
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                "END" => {
                    self.cur.expect(section)?;
                    break;
                }
                "-" => nets.push(self.net(special)?),
                other => return Err(self.err(line, format!("unexpected `{other}` in {section}"))),
            }
        }
        if declared != nets.len() {
            let line = self.cur.line();
            self.cur.warn(
                line,
                format!("{section} declares {declared}, found {}", nets.len()),
            );
        }
        Ok(nets)
    }

    fn net(&mut self, special: bool) -> Result<RoutedNet, ParseError> {
        let mut net = RoutedNet {
            name: self.cur.next()?.to_string(),
            is_special: special,
            ..Default::default()
        };
        loop {
            let line = self.cur.line();
            match self.cur.next()? {
                ";" => break,
                "(" => {
                    let owner = self.cur.next()?.to_string();
                    let pin = self.cur.next()?.to_string();
                    // optional + SYNTHESIZED etc. live inside the parentheses
                    while self.cur.next()? != ")" {}
                    let conn = if owner == "PIN" {
                        NetConnection::Port(pin)
                    } else if owner == "*" {
                        NetConnection::Global(pin)
                    } else {
                        if self.pn.component(&owner).is_none() {
                            return Err(self.err(
                                line,
                                format!(
                                    "net `{}` connects to undeclared instance `{owner}`",
                                    net.name
                                ),
                            ));
                        }
                        NetConnection::Instance {
                            instance: owner,
                            pin,
                        }
                    };
                    net.connections.push(conn);
                }
                "+" => {
                    let attr = self.cur.next()?;
                    match attr {
                        "ROUTED" | "FIXED" | "COVER" | "NOSHIELD" => {
                            self.routing(&mut net, special)?
                        }
                        "USE" => {
                            let u = self.cur.next()?;
                            net.signal_use = SignalUse::parse(u);
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        for conn in &net.connections {
            if let NetConnection::Port(p) = conn {
                if !self.pn.ports.iter().any(|port| &port.name == p) {
                    return Err(self.cur.error(format!(
                        "net `{}` connects to undeclared pin `{p}`",
                        net.name
                    )));
                }
            }
        }
        Ok(net)
    }

    fn wire_width(&self, layer: &str, line: usize) -> Result<Dbu, ParseError> {
        let l = self
            .tech
            .layer(layer)
            .ok_or_else(|| self.err(line, format!("routing on unknown layer `{layer}`")))?;
        let w = l
            .min_width
            .ok_or_else(|| self.err(line, format!("layer `{layer}` has no width")))?;
        Ok(self.tech.rescale(w, self.pn.dbu_per_micron))
    }

    fn via_other_layer(&self, via: &str, current: &str) -> Option<String> {
        let layers = self.def_vias.get(via).or_else(|| self.tech.vias.get(via))?;
        layers
            .iter()
            .filter(|l| {
                self.tech
                    .layer(l)
                    .is_some_and(|x| x.kind == super::lef::LayerKind::Routing)
            })
            .find(|l| l.as_str() != current)
            .cloned()
    }

    /// Parse one `ROUTED ... [NEW ...]` wiring statement.
    fn routing(&mut self, net: &mut RoutedNet, special: bool) -> Result<(), ParseError> {
        loop {
            let line = self.cur.line();
            let mut layer = self.cur.next()?.to_string();
            if self.tech.layer(&layer).is_none() {
                return Err(self.err(line, format!("malformed routing: unknown layer `{layer}`")));
            }
            let mut width = if special {
                let w: f64 = self.cur.number()?;
                w.round() as Dbu
            } else {
                self.wire_width(&layer, line)?
            };
            let default_ext = if special { 0 } else { width / 2 };
            let mut prev: Option<(Point, Dbu)> = None;
            loop {
                let line = self.cur.line();
                match self.cur.peek() {
                    Some("(") => {
                        let (p, ext) = self.point_ext(prev.map(|(p, _)| p))?;
                        let ext = ext.unwrap_or(default_ext);
                        if let Some((q, qext)) = prev {
                            if q.x != p.x && q.y != p.y {
                                return Err(self.err(
                                    line,
                                    format!(
                                        "malformed routing point list: diagonal step ({} {}) -> ({} {})",
                                        q.x, q.y, p.x, p.y
                                    ),
                                ));
                            }
                            if q != p {
                                net.segments.push(WireSegment {
                                    layer: layer.clone(),
                                    start: q,
                                    end: p,
                                    width,
                                    start_ext: qext,
                                    end_ext: ext,
                                });
                            }
                        }
                        prev = Some((p, ext));
                    }
                    Some("+") => {
                        // special-net qualifiers that precede or interleave the points
                        match self.cur.peek_at(1) {
                            Some("SHAPE" | "STYLE" | "MASK") if special => {
                                self.cur.next()?;
                                self.cur.next()?;
                                self.cur.next()?;
                            }
                            _ => return Ok(()),
                        }
                    }
                    Some(";") => return Ok(()),
                    Some("NEW") => {
                        self.cur.next()?;
                        break;
                    }
                    Some("TAPER") => {
                        self.cur.next()?;
                    }
                    Some("TAPERRULE" | "STYLE" | "MASK") => {
                        self.cur.next()?;
                        self.cur.next()?;
                    }
                    Some("VIRTUAL") => {
                        return Err(
                            self.err(line, "malformed routing point list: VIRTUAL unsupported")
                        )
                    }
                    Some("RECT") => {
                        self.cur.next()?;
                        self.point(None)?;
                        self.point(None)?;
                    }
                    Some(tok) => {
                        let Some((at, _)) = prev else {
                            return Err(self.err(
                                line,
                                format!("malformed routing point list: `{tok}` before first point"),
                            ));
                        };
                        if tok.parse::<f64>().is_ok() {
                            return Err(self.err(
                                line,
                                format!("malformed routing point list: stray number `{tok}`"),
                            ));
                        }
                        let name = self.cur.next()?.to_string();
                        if let Some(o) = self.cur.peek() {
                            if Orient::parse(o).is_some() {
                                self.cur.next()?;
                            }
                        }
                        net.vias.push(Via {
                            name: name.clone(),
                            at,
                            layer: layer.clone(),
                        });
                        match self.via_other_layer(&name, &layer) {
                            Some(next) => {
                                if !special {
                                    width = self.wire_width(&next, line)?;
                                }
                                layer = next;
                            }
                            None => self
                                .cur
                                .warn(line, format!("via `{name}` not defined; layer kept")),
                        }
                    }
                    None => return Err(self.cur.error("unterminated routing statement")),
                }
            }
        }
    }
}

fn fmt_point(p: Point) -> String {
    format!("( {} {} )", p.x, p.y)
}

/// Canonical DEF text for the supported subset.
pub fn write_def(pn: &PhysicalNetlist) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "VERSION 5.8 ;\nDIVIDERCHAR \"/\" ;\nBUSBITCHARS \"[]\" ;"
    );
    let _ = writeln!(s, "DESIGN {} ;", pn.design);
    let _ = writeln!(s, "UNITS DISTANCE MICRONS {} ;", pn.dbu_per_micron);
    let d = pn.die_box;
    let _ = writeln!(s, "DIEAREA ( {} {} ) ( {} {} ) ;", d.x0, d.y0, d.x1, d.y1);
    for r in &pn.rows {
        let _ = writeln!(
            s,
            "ROW {} {} {} {} {} DO {} BY {} STEP {} {} ;",
            r.name,
            r.site,
            r.origin.x,
            r.origin.y,
            r.orient.as_str(),
            r.num_x,
            r.num_y,
            r.step_x,
            r.step_y
        );
    }
    let _ = writeln!(s, "COMPONENTS {} ;", pn.components.len());
    for c in &pn.components {
        let _ = write!(s, "- {} {}", c.name, c.cell);
        match c.origin {
            Some(o) if c.status.is_placed() => {
                let _ = write!(
                    s,
                    " + {} {} {}",
                    c.status.as_str(),
                    fmt_point(o),
                    c.orient.as_str()
                );
            }
            _ => s.push_str(" + UNPLACED"),
        }
        s.push_str(" ;\n");
    }
    s.push_str("END COMPONENTS\n");
    let _ = writeln!(s, "PINS {} ;", pn.ports.len());
    for p in &pn.ports {
        let _ = write!(s, "- {}", p.name);
        if let Some(n) = &p.net {
            let _ = write!(s, " + NET {n}");
        }
        let _ = write!(
            s,
            " + DIRECTION {} + USE {}",
            p.direction.as_str(),
            p.signal_use.as_str()
        );
        for sh in &p.shapes {
            let r = sh.rect;
            let _ = write!(
                s,
                "\n  + LAYER {} ( {} {} ) ( {} {} )",
                sh.layer, r.x0, r.y0, r.x1, r.y1
            );
        }
        if let (Some(pos), true) = (p.position, p.status.is_placed()) {
            let _ = write!(
                s,
                "\n  + {} {} {}",
                p.status.as_str(),
                fmt_point(pos),
                p.orient.as_str()
            );
        }
        s.push_str(" ;\n");
    }
    s.push_str("END PINS\n");
    let (special, regular): (Vec<_>, Vec<_>) = pn.nets.iter().partition(|n| n.is_special);
    if !special.is_empty() {
        let _ = writeln!(s, "SPECIALNETS {} ;", special.len());
        for n in &special {
            write_net(&mut s, n, true);
        }
        s.push_str("END SPECIALNETS\n");
    }
    let _ = writeln!(s, "NETS {} ;", regular.len());
    for n in &regular {
        write_net(&mut s, n, false);
    }
    s.push_str("END NETS\nEND DESIGN\n");
    s
}

fn write_net(s: &mut String, n: &RoutedNet, special: bool) {
    let _ = write!(s, "- {}", n.name);
    for c in &n.connections {
        match c {
            NetConnection::Instance { instance, pin } => {
                let _ = write!(s, " ( {instance} {pin} )");
            }
            NetConnection::Port(p) => {
                let _ = write!(s, " ( PIN {p} )");
            }
            NetConnection::Global(p) => {
                let _ = write!(s, " ( * {p} )");
            }
        }
    }
    if let Some(u) = n.signal_use {
        let _ = write!(s, " + USE {}", u.as_str());
    }
    let mut first = true;
    let mut emit = |s: &mut String, body: String| {
        s.push_str(if first { "\n  + ROUTED " } else { "\n    NEW " });
        s.push_str(&body);
        first = false;
    };
    for seg in &n.segments {
        let width = if special {
            format!(" {}", seg.width)
        } else {
            String::new()
        };
        let default_ext = if special { 0 } else { seg.width / 2 };
        let pt = |p: Point, ext: Dbu| {
            if ext == default_ext {
                fmt_point(p)
            } else {
                format!("( {} {} {} )", p.x, p.y, ext)
            }
        };
        emit(
            s,
            format!(
                "{}{} {} {}",
                seg.layer,
                width,
                pt(seg.start, seg.start_ext),
                pt(seg.end, seg.end_ext)
            ),
        );
    }
    for via in &n.vias {
        let width = if special { " 0" } else { "" };
        emit(
            s,
            format!("{}{} {} {}", via.layer, width, fmt_point(via.at), via.name),
        );
    }
    s.push_str(" ;\n");
    let _ = special;
}
