//! Line-oriented text format for tangle diagrams.
//!
//! ```text
//! mode: unoriented             # optional; default is oriented
//! boundary: + - + -            # CCW signs; "boundary:" alone = closed diagram
//! vertex v1 sink               # ports implicitly 0,1,2 CCW
//! vertex v2 source
//! cross  c1                    # ports 0..3 CCW, under-strand 0-2
//! circle k1 ccw                # free loop; unoriented mode omits the direction
//! edge e1: b0 -> v1.0          # tail -> head; bK = boundary point K; name.P = port P
//! edge e2: v1.1 -> v2.2
//! contain componentOf(v2) in face(v1, 2)
//! contain circle(k1) in inside(k2)
//! outerface v2.1               # outward face of the closed component containing v2
//! ```
//!
//! Unoriented files render boundary points as dots and edge ends with `--`.

use std::collections::BTreeMap;

use super::{
    CircleDir, CircleId, Dart, Diagram, DiagramError, ItemRef, Region, Sign, VertId, VertexKind,
};

impl Diagram {
    /// Parse and validate a diagram from the text format.
    pub fn parse(input: &str) -> Result<Diagram, DiagramError> {
        let parsed = parse_inner(input)?;
        parsed.ensure_valid()?;
        Ok(parsed)
    }

    /// Deterministic text serialization; `parse` round-trips it.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        if !self.oriented {
            lines.push("mode: unoriented".to_string());
        }
        let signs: Vec<&str> = self
            .boundary
            .iter()
            .map(|s| {
                if !self.oriented {
                    "."
                } else if *s == Sign::Plus {
                    "+"
                } else {
                    "-"
                }
            })
            .collect();
        if signs.is_empty() {
            lines.push("boundary:".to_string());
        } else {
            lines.push(format!("boundary: {}", signs.join(" ")));
        }

        let mut named: Vec<(&str, String)> = Vec::new();
        for (_, v) in self.verts() {
            match v.kind {
                VertexKind::Source => named.push((&v.name, format!("vertex {} source", v.name))),
                VertexKind::Sink => named.push((&v.name, format!("vertex {} sink", v.name))),
                VertexKind::Crossing => named.push((&v.name, format!("cross {}", v.name))),
                VertexKind::Boundary(_) => {}
            }
        }
        named.sort();
        lines.extend(named.into_iter().map(|(_, l)| l));

        let mut circs: Vec<String> = self
            .circles()
            .map(|(_, c)| match c.dir {
                None => format!("circle {}", c.name),
                Some(CircleDir::Cw) => format!("circle {} cw", c.name),
                Some(CircleDir::Ccw) => format!("circle {} ccw", c.name),
            })
            .collect();
        circs.sort();
        lines.extend(circs);

        let arrow = if self.oriented { "->" } else { "--" };
        let mut edges: Vec<String> = self
            .edges()
            .map(|(_, e)| {
                format!(
                    "edge {}: {} {} {}",
                    e.name,
                    self.end_ref(e.tail),
                    arrow,
                    self.end_ref(e.head)
                )
            })
            .collect();
        edges.sort();
        lines.extend(edges);

        let mut contains: Vec<String> = Vec::new();
        for (item, region) in self.placements() {
            let item_s = match item {
                ItemRef::Component(rep) => {
                    format!("componentOf({})", self.vertex(rep).unwrap().name)
                }
                ItemRef::Circle(c) => format!("circle({})", self.circle(c).unwrap().name),
            };
            let region_s = match region {
                Region::Outer => "outer".to_string(),
                Region::Inside(c) => format!("inside({})", self.circle(c).unwrap().name),
                Region::Face { anchor } => {
                    let a = self.orbit_of(anchor).first().copied().unwrap_or(anchor);
                    format!("face({}, {})", self.vertex(a.vert).unwrap().name, a.port)
                }
            };
            contains.push(format!("contain {} in {}", item_s, region_s));
        }
        contains.sort();
        lines.extend(contains);

        let mut outer_lines: Vec<String> = Vec::new();
        for comp in self.components() {
            if self.comp_is_closed(&comp) {
                if let Some(anchor) = self.outer_anchor(&comp) {
                    let a = self.orbit_of(anchor).first().copied().unwrap_or(anchor);
                    outer_lines.push(format!(
                        "outerface {}.{}",
                        self.vertex(a.vert).unwrap().name,
                        a.port
                    ));
                }
            }
        }
        outer_lines.sort();
        lines.extend(outer_lines);

        lines.push(String::new());
        lines.join("\n")
    }

    fn end_ref(&self, d: Dart) -> String {
        let v = self.vertex(d.vert).unwrap();
        match v.kind {
            VertexKind::Boundary(_) => v.name.clone(),
            _ => format!("{}.{}", v.name, d.port),
        }
    }
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        })
    }
}

fn parse_inner(input: &str) -> Result<Diagram, DiagramError> {
    let mut oriented = true;
    let mut boundary: Option<Vec<Sign>> = None;
    let mut diagram: Option<Diagram> = None;
    let mut names: BTreeMap<String, VertId> = BTreeMap::new();
    let mut circle_names: BTreeMap<String, CircleId> = BTreeMap::new();
    let mut pending_outer: Vec<(usize, String, u8)> = Vec::new();
    let mut pending_contain: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in input.lines().enumerate() {
        let ctx = LineCtx { line: lineno + 1 };
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "mode:" => {
                if diagram.is_some() || boundary.is_some() {
                    return ctx.err(0, "mode line must come first");
                }
                match tokens.get(1) {
                    Some(&"unoriented") => oriented = false,
                    Some(&"oriented") => oriented = true,
                    _ => return ctx.err(0, "mode must be 'oriented' or 'unoriented'"),
                }
            }
            "boundary:" => {
                if boundary.is_some() {
                    return ctx.err(0, "duplicate boundary line");
                }
                let mut signs = Vec::new();
                for t in &tokens[1..] {
                    match *t {
                        "+" => signs.push(Sign::Plus),
                        "-" => signs.push(Sign::Minus),
                        "." => {
                            if oriented {
                                return ctx.err(0, "'.' boundary points need unoriented mode");
                            }
                            signs.push(Sign::Plus);
                        }
                        other => return ctx.err(0, format!("bad boundary sign '{}'", other)),
                    }
                }
                boundary = Some(signs.clone());
                let d = Diagram::new(oriented, signs);
                for (id, v) in d.verts() {
                    names.insert(v.name.clone(), id);
                }
                diagram = Some(d);
            }
            "vertex" | "cross" | "circle" | "edge" | "contain" | "outerface" => {
                let d = match diagram.as_mut() {
                    Some(d) => d,
                    None => return ctx.err(0, "boundary line must come before diagram elements"),
                };
                match tokens[0] {
                    "vertex" => {
                        let (name, kind) = match (tokens.get(1), tokens.get(2)) {
                            (Some(n), Some(&"source")) => (*n, VertexKind::Source),
                            (Some(n), Some(&"sink")) => (*n, VertexKind::Sink),
                            _ => return ctx.err(0, "expected 'vertex <name> source|sink'"),
                        };
                        check_name(&ctx, name, &names, &circle_names)?;
                        names.insert(name.to_string(), d.add_vertex(name, kind));
                    }
                    "cross" => {
                        let name = match tokens.get(1) {
                            Some(n) => *n,
                            None => return ctx.err(0, "expected 'cross <name>'"),
                        };
                        check_name(&ctx, name, &names, &circle_names)?;
                        names.insert(name.to_string(), d.add_vertex(name, VertexKind::Crossing));
                    }
                    "circle" => {
                        let name = match tokens.get(1) {
                            Some(n) => *n,
                            None => return ctx.err(0, "expected 'circle <name> [cw|ccw]'"),
                        };
                        check_name(&ctx, name, &names, &circle_names)?;
                        let dir = match tokens.get(2) {
                            Some(&"cw") => Some(CircleDir::Cw),
                            Some(&"ccw") => Some(CircleDir::Ccw),
                            None => None,
                            Some(other) => {
                                return ctx.err(0, format!("bad circle direction '{}'", other))
                            }
                        };
                        circle_names.insert(name.to_string(), d.add_circle(name, dir));
                    }
                    "edge" => {
                        // edge <name>: <end> -> <end>   (or --)
                        if tokens.len() != 5 {
                            return ctx.err(0, "expected 'edge <name>: <end> -> <end>'");
                        }
                        let name = tokens[1].trim_end_matches(':');
                        if tokens[3] != "->" && tokens[3] != "--" {
                            return ctx.err(0, "expected '->' or '--' between edge ends");
                        }
                        let tail = parse_end(&ctx, tokens[2], &names, d)?;
                        let head = parse_end(&ctx, tokens[4], &names, d)?;
                        d.add_edge(name, tail, head);
                    }
                    "contain" => {
                        pending_contain.push((ctx.line, line.to_string()));
                    }
                    "outerface" => {
                        let arg = match tokens.get(1) {
                            Some(a) => *a,
                            None => return ctx.err(0, "expected 'outerface <vertex>.<port>'"),
                        };
                        let (vname, port) = match arg.rsplit_once('.') {
                            Some((v, p)) => (
                                v.to_string(),
                                p.parse::<u8>()
                                    .map_err(|_| DiagramError::Syntax {
                                        line: ctx.line,
                                        col: 0,
                                        msg: "bad port number".into(),
                                    })?,
                            ),
                            None => return ctx.err(0, "expected 'outerface <vertex>.<port>'"),
                        };
                        pending_outer.push((ctx.line, vname, port));
                    }
                    _ => unreachable!(),
                }
            }
            other => return ctx.err(0, format!("unknown directive '{}'", other)),
        }
    }

    let mut d = match diagram {
        Some(d) => d,
        None => return Err(DiagramError::Syntax {
            line: input.lines().count() + 1,
            col: 0,
            msg: "missing boundary line".into(),
        }),
    };

    for (line, text) in pending_contain {
        let ctx = LineCtx { line };
        parse_contain(&ctx, &text, &names, &circle_names, &mut d)?;
    }
    for (line, vname, port) in pending_outer {
        let ctx = LineCtx { line };
        let vid = match names.get(&vname) {
            Some(v) => *v,
            None => return ctx.err(0, format!("unknown vertex '{}'", vname)),
        };
        let rep = d.comp_rep_of(vid);
        d.set_outer_mark(rep, Dart::new(vid, port));
    }
    Ok(d)
}

fn check_name(
    ctx: &LineCtx,
    name: &str,
    names: &BTreeMap<String, VertId>,
    circle_names: &BTreeMap<String, CircleId>,
) -> Result<(), DiagramError> {
    if names.contains_key(name) || circle_names.contains_key(name) {
        return ctx.err(0, format!("duplicate name '{}'", name));
    }
    if name.starts_with('b') && name[1..].chars().all(|c| c.is_ascii_digit()) && name.len() > 1 {
        return ctx.err(0, format!("'{}' is reserved for boundary points", name));
    }
    Ok(())
}

fn parse_end(
    ctx: &LineCtx,
    token: &str,
    names: &BTreeMap<String, VertId>,
    d: &Diagram,
) -> Result<Dart, DiagramError> {
    match token.rsplit_once('.') {
        Some((vname, port)) => {
            let vid = match names.get(vname) {
                Some(v) => *v,
                None => return ctx.err(0, format!("unknown vertex '{}'", vname)),
            };
            let p: u8 = match port.parse() {
                Ok(p) => p,
                Err(_) => return ctx.err(0, format!("bad port '{}'", port)),
            };
            let arity = d.vertex(vid).unwrap().kind.arity();
            if p >= arity {
                return ctx.err(0, format!("port {} out of range for '{}'", p, vname));
            }
            Ok(Dart::new(vid, p))
        }
        None => match names.get(token) {
            Some(vid) if matches!(d.vertex(*vid).unwrap().kind, VertexKind::Boundary(_)) => {
                Ok(Dart::new(*vid, 0))
            }
            Some(_) => ctx.err(0, format!("'{}' needs an explicit port", token)),
            None => ctx.err(0, format!("unknown end '{}'", token)),
        },
    }
}

fn parse_contain(
    ctx: &LineCtx,
    line: &str,
    names: &BTreeMap<String, VertId>,
    circle_names: &BTreeMap<String, CircleId>,
    d: &mut Diagram,
) -> Result<(), DiagramError> {
    // contain componentOf(v) in face(w, p) | inside(k) | outer
    let rest = line.trim_start_matches("contain").trim();
    let (item_s, region_s) = match rest.split_once(" in ") {
        Some(x) => x,
        None => return ctx.err(0, "expected 'contain <item> in <region>'"),
    };
    let item = if let Some(arg) = strip_call(item_s.trim(), "componentOf") {
        let vid = match names.get(arg) {
            Some(v) => *v,
            None => return ctx.err(0, format!("unknown vertex '{}'", arg)),
        };
        ItemRef::Component(d.comp_rep_of(vid))
    } else if let Some(arg) = strip_call(item_s.trim(), "circle") {
        match circle_names.get(arg) {
            Some(c) => ItemRef::Circle(*c),
            None => return ctx.err(0, format!("unknown circle '{}'", arg)),
        }
    } else {
        return ctx.err(0, "item must be componentOf(..) or circle(..)");
    };
    let region_s = region_s.trim();
    let region = if region_s == "outer" {
        Region::Outer
    } else if let Some(arg) = strip_call(region_s, "inside") {
        match circle_names.get(arg) {
            Some(c) => Region::Inside(*c),
            None => return ctx.err(0, format!("unknown circle '{}'", arg)),
        }
    } else if let Some(arg) = strip_call(region_s, "face") {
        let (vname, port) = match arg.split_once(',') {
            Some((v, p)) => (v.trim(), p.trim()),
            None => return ctx.err(0, "expected face(<vertex>, <port>)"),
        };
        let vid = match names.get(vname) {
            Some(v) => *v,
            None => return ctx.err(0, format!("unknown vertex '{}'", vname)),
        };
        let p: u8 = match port.parse() {
            Ok(p) => p,
            Err(_) => return ctx.err(0, format!("bad port '{}'", port)),
        };
        Region::Face {
            anchor: Dart::new(vid, p),
        }
    } else {
        return ctx.err(0, "region must be outer, face(..) or inside(..)");
    };
    d.place(item, region);
    Ok(())
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)
        .and_then(|r| r.trim_start().strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .map(|r| r.trim())
}
