//! Planar combinatorial-map representation of tangle diagrams in an
//! oriented marked disk.
//!
//! A diagram is a rotation system: vertices carry their incident darts in
//! counterclockwise order, and an edge pairs two darts. Faces are the orbits
//! of `next = sigma . alpha`, which walks each face counterclockwise with the
//! face on the left. Vertex-less circle components carry no darts, so they
//! are stored separately and positioned by the containment forest, which
//! records which face every floating component lives in.

mod surgery;
mod text;

pub use surgery::{End, Surgery, SurgeryOutcome};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error at line {line}, col {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("diagram validation failed: {}", render_violations(.0))]
    Validation(Vec<Violation>),
    #[error("operation requires a crossing-free diagram")]
    HasCrossings,
    #[error("no such crossing: {0}")]
    NoSuchCrossing(String),
    #[error("surgery error: {0}")]
    Surgery(String),
}

fn render_violations(vs: &[Violation]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    parts.join("; ")
}

/// A single validation failure, carrying the location it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub at: String,
    pub msg: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.at, self.msg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleId(pub u32);

/// A dart (half-edge): one port of one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub vert: VertId,
    pub port: u8,
}

impl Dart {
    pub fn new(vert: VertId, port: u8) -> Self {
        Dart { vert, port }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircleDir {
    Cw,
    Ccw,
}

impl CircleDir {
    pub fn flip(self) -> CircleDir {
        match self {
            CircleDir::Cw => CircleDir::Ccw,
            CircleDir::Ccw => CircleDir::Cw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Source,
    Sink,
    Crossing,
    /// Monovalent vertex sitting at the given marked boundary point.
    Boundary(u32),
}

impl VertexKind {
    pub fn arity(self) -> u8 {
        match self {
            VertexKind::Source | VertexKind::Sink => 3,
            VertexKind::Crossing => 4,
            VertexKind::Boundary(_) => 1,
        }
    }

    pub fn is_trivalent(self) -> bool {
        matches!(self, VertexKind::Source | VertexKind::Sink)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub kind: VertexKind,
}

/// An edge, oriented tail -> head. In unoriented (Kauffman) mode the order
/// is storage only and carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: Dart,
    pub head: Dart,
}

impl Edge {
    pub fn other_end(&self, d: Dart) -> Dart {
        if self.tail == d {
            self.head
        } else {
            self.tail
        }
    }
}

/// A vertex-less circle component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub name: String,
    pub dir: Option<CircleDir>,
}

/// A floating item of the containment forest: a connected dart-bearing
/// component (identified by its minimal vertex id) or a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ItemRef {
    Component(VertId),
    Circle(CircleId),
}

/// Where a floating item lives: the outer (boundary) region, a specific
/// face of another component, or the inside of a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Outer,
    Face { anchor: Dart },
    Inside(CircleId),
}

/// Direction of an edge at a dart: `Out` means the dart is the tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortDir {
    Out,
    In,
}

impl PortDir {
    pub fn flip(self) -> PortDir {
        match self {
            PortDir::Out => PortDir::In,
            PortDir::In => PortDir::Out,
        }
    }
}

/// A face of the diagram, reported from the rotation-system face traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Minimal dart of the orbit; stable identifier of the face.
    pub anchor: Dart,
    /// The full orbit, in traversal order starting at `anchor`.
    pub darts: Vec<Dart>,
    pub sides: usize,
    /// True when no side of the face touches the disk boundary: the face is
    /// neither incident to a boundary vertex nor the outward region of its
    /// component.
    pub interior: bool,
    /// True when no floating component is contained in this face.
    pub empty: bool,
    /// Representative (minimal vertex) of the component this face belongs to.
    pub component: VertId,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub oriented: bool,
    pub boundary: Vec<Sign>,
    verts: BTreeMap<VertId, Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    circles: BTreeMap<CircleId, Circle>,
    placements: BTreeMap<ItemRef, Region>,
    outer_marks: BTreeMap<VertId, Dart>,
    next_vert: u32,
    next_edge: u32,
    next_circle: u32,
}

/// Lookup from a dart to its edge and end.
pub struct EdgeIndex {
    map: BTreeMap<Dart, (EdgeId, bool)>,
}

impl EdgeIndex {
    pub fn at(&self, d: Dart) -> Option<(EdgeId, bool)> {
        self.map.get(&d).copied()
    }
}

impl Diagram {
    pub fn new(oriented: bool, boundary: Vec<Sign>) -> Self {
        let mut d = Diagram {
            oriented,
            boundary: boundary.clone(),
            ..Default::default()
        };
        for (i, _) in boundary.iter().enumerate() {
            let id = VertId(d.next_vert);
            d.next_vert += 1;
            d.verts.insert(
                id,
                Vertex {
                    name: format!("b{}", i),
                    kind: VertexKind::Boundary(i as u32),
                },
            );
        }
        d
    }

    pub fn empty(oriented: bool) -> Self {
        Diagram::new(oriented, Vec::new())
    }

    // --- construction ---------------------------------------------------

    /// Append a marked point to the boundary, returning its vertex.
    pub fn push_boundary_point(&mut self, sign: Sign) -> VertId {
        let index = self.boundary.len() as u32;
        self.boundary.push(sign);
        self.add_vertex(&format!("b{}", index), VertexKind::Boundary(index))
    }

    pub fn add_vertex(&mut self, name: &str, kind: VertexKind) -> VertId {
        let id = VertId(self.next_vert);
        self.next_vert += 1;
        self.verts.insert(
            id,
            Vertex {
                name: name.to_string(),
                kind,
            },
        );
        id
    }

    pub fn fresh_vertex(&mut self, kind: VertexKind) -> VertId {
        let name = self.fresh_name("_g");
        self.add_vertex(&name, kind)
    }

    fn fresh_name(&self, prefix: &str) -> String {
        let mut n = 0;
        loop {
            let name = format!("{}{}", prefix, n);
            let clash = self.verts.values().any(|v| v.name == name)
                || self.edges.values().any(|e| e.name == name)
                || self.circles.values().any(|c| c.name == name);
            if !clash {
                return name;
            }
            n += 1;
        }
    }

    pub fn add_edge(&mut self, name: &str, tail: Dart, head: Dart) -> EdgeId {
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(
            id,
            Edge {
                name: name.to_string(),
                tail,
                head,
            },
        );
        id
    }

    pub fn fresh_edge(&mut self, tail: Dart, head: Dart) -> EdgeId {
        let name = self.fresh_name("_e");
        self.add_edge(&name, tail, head)
    }

    pub fn add_circle(&mut self, name: &str, dir: Option<CircleDir>) -> CircleId {
        let id = CircleId(self.next_circle);
        self.next_circle += 1;
        self.circles.insert(
            id,
            Circle {
                name: name.to_string(),
                dir,
            },
        );
        id
    }

    pub fn fresh_circle(&mut self, dir: Option<CircleDir>) -> CircleId {
        let name = self.fresh_name("_k");
        self.add_circle(&name, dir)
    }

    pub fn remove_circle(&mut self, id: CircleId) -> Option<Circle> {
        self.placements.remove(&ItemRef::Circle(id));
        self.circles.remove(&id)
    }

    pub fn place(&mut self, item: ItemRef, region: Region) {
        if region == Region::Outer {
            self.placements.remove(&item);
        } else {
            self.placements.insert(item, region);
        }
    }

    pub fn set_outer_mark(&mut self, comp_rep: VertId, anchor: Dart) {
        self.outer_marks.insert(comp_rep, anchor);
    }

    // --- access ----------------------------------------------------------

    pub fn vertex(&self, id: VertId) -> Option<&Vertex> {
        self.verts.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn circle(&self, id: CircleId) -> Option<&Circle> {
        self.circles.get(&id)
    }

    pub fn verts(&self) -> impl Iterator<Item = (VertId, &Vertex)> {
        self.verts.iter().map(|(k, v)| (*k, v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().map(|(k, v)| (*k, v))
    }

    pub fn circles(&self) -> impl Iterator<Item = (CircleId, &Circle)> {
        self.circles.iter().map(|(k, v)| (*k, v))
    }

    pub fn placements(&self) -> impl Iterator<Item = (ItemRef, Region)> + '_ {
        self.placements.iter().map(|(k, v)| (*k, *v))
    }

    pub fn placement_of(&self, item: ItemRef) -> Region {
        self.placements.get(&item).copied().unwrap_or(Region::Outer)
    }

    pub fn vert_by_name(&self, name: &str) -> Option<VertId> {
        self.verts
            .iter()
            .find(|(_, v)| v.name == name)
            .map(|(id, _)| *id)
    }

    pub fn crossing_count(&self) -> usize {
        self.verts
            .values()
            .filter(|v| v.kind == VertexKind::Crossing)
            .count()
    }

    pub fn trivalent_count(&self) -> usize {
        self.verts.values().filter(|v| v.kind.is_trivalent()).count()
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn crossings(&self) -> Vec<VertId> {
        self.verts
            .iter()
            .filter(|(_, v)| v.kind == VertexKind::Crossing)
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn boundary_dart(&self, index: usize) -> Option<Dart> {
        self.verts.iter().find_map(|(id, v)| match v.kind {
            VertexKind::Boundary(i) if i as usize == index => Some(Dart::new(*id, 0)),
            _ => None,
        })
    }

    pub fn darts(&self) -> Vec<Dart> {
        let mut out = Vec::new();
        for (id, v) in &self.verts {
            for p in 0..v.kind.arity() {
                out.push(Dart::new(*id, p));
            }
        }
        out
    }

    /// Next dart counterclockwise around the vertex.
    pub fn sigma(&self, d: Dart) -> Dart {
        let arity = self.verts[&d.vert].kind.arity();
        Dart::new(d.vert, (d.port + 1) % arity)
    }

    pub fn edge_index(&self) -> EdgeIndex {
        let mut map = BTreeMap::new();
        for (id, e) in &self.edges {
            map.insert(e.tail, (*id, true));
            map.insert(e.head, (*id, false));
        }
        EdgeIndex { map }
    }

    /// The other end of the edge at this dart.
    pub fn alpha(&self, idx: &EdgeIndex, d: Dart) -> Option<Dart> {
        let (eid, _) = idx.at(d)?;
        Some(self.edges[&eid].other_end(d))
    }

    /// Direction of the edge at this dart (`Out` if the dart is the tail).
    pub fn dir_at(&self, idx: &EdgeIndex, d: Dart) -> Option<PortDir> {
        let (_, is_tail) = idx.at(d)?;
        Some(if is_tail { PortDir::Out } else { PortDir::In })
    }

    /// Sign of a crossing in an oriented diagram. With coherent strands the
    /// crossing is positive exactly when ports 0 and 1 have equal direction.
    pub fn crossing_sign(&self, idx: &EdgeIndex, v: VertId) -> Option<i8> {
        if self.verts.get(&v)?.kind != VertexKind::Crossing || !self.oriented {
            return None;
        }
        let d0 = self.dir_at(idx, Dart::new(v, 0))?;
        let d1 = self.dir_at(idx, Dart::new(v, 1))?;
        Some(if d0 == d1 { 1 } else { -1 })
    }

    /// Sum of crossing signs (the writhe) of an oriented diagram.
    pub fn writhe(&self) -> i64 {
        let idx = self.edge_index();
        self.crossings()
            .iter()
            .filter_map(|c| self.crossing_sign(&idx, *c))
            .map(|s| s as i64)
            .sum()
    }

    // --- components -------------------------------------------------------

    /// Connected components of the dart-bearing part, each keyed by its
    /// minimal vertex id; vertex lists are sorted.
    pub fn components(&self) -> Vec<Vec<VertId>> {
        let ids: Vec<VertId> = self.verts.keys().copied().collect();
        let index: BTreeMap<VertId, usize> =
            ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for e in self.edges.values() {
            let a = find(&mut parent, index[&e.tail.vert]);
            let b = find(&mut parent, index[&e.head.vert]);
            if a != b {
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertId>> = BTreeMap::new();
        for (i, v) in ids.iter().enumerate() {
            groups.entry(find(&mut parent, i)).or_default().push(*v);
        }
        let mut comps: Vec<Vec<VertId>> = groups.into_values().collect();
        for c in &mut comps {
            c.sort();
        }
        comps.sort();
        comps
    }

    /// Representative (minimal vertex id) of the component containing `v`.
    pub fn comp_rep_of(&self, v: VertId) -> VertId {
        for comp in self.components() {
            if comp.contains(&v) {
                return comp[0];
            }
        }
        v
    }

    pub fn comp_is_closed(&self, comp: &[VertId]) -> bool {
        comp.iter()
            .all(|v| !matches!(self.verts[v].kind, VertexKind::Boundary(_)))
    }

    /// Outward-facing orbit anchor for a closed component: the recorded mark
    /// if it survives, otherwise the orbit of the component's minimal dart.
    pub fn outer_anchor(&self, comp: &[VertId]) -> Option<Dart> {
        if !self.comp_is_closed(comp) {
            return None;
        }
        let rep = comp[0];
        if let Some(d) = self.outer_marks.get(&rep) {
            if self.verts.contains_key(&d.vert) && comp.contains(&d.vert) {
                return Some(*d);
            }
        }
        Some(Dart::new(rep, 0))
    }

    // --- faces -------------------------------------------------------------

    /// All face orbits of the rotation system, each listed in traversal order
    /// starting from its minimal dart; orbits sorted by that anchor.
    pub fn face_orbits(&self) -> Vec<Vec<Dart>> {
        let idx = self.edge_index();
        let mut seen: BTreeSet<Dart> = BTreeSet::new();
        let mut orbits = Vec::new();
        for d in self.darts() {
            if seen.contains(&d) {
                continue;
            }
            let mut orbit = vec![d];
            seen.insert(d);
            let mut cur = d;
            // an unwired port ends the walk; validation reports it
            while let Some(a) = self.alpha(&idx, cur) {
                let next = self.sigma(a);
                if next == d {
                    break;
                }
                orbit.push(next);
                seen.insert(next);
                cur = next;
            }
            // rotate so the minimal dart is first
            let min_pos = orbit
                .iter()
                .enumerate()
                .min_by_key(|(_, d)| **d)
                .map(|(i, _)| i)
                .unwrap();
            orbit.rotate_left(min_pos);
            orbits.push(orbit);
        }
        orbits.sort_by_key(|o| o[0]);
        orbits
    }

    /// The face orbit containing the given dart.
    pub fn orbit_of(&self, d: Dart) -> Vec<Dart> {
        self.face_orbits()
            .into_iter()
            .find(|o| o.contains(&d))
            .unwrap_or_default()
    }

    /// Complete face list with interior and empty flags. Free circles are
    /// not faces; they are separate features queried via `circles()`.
    pub fn faces(&self) -> Vec<Face> {
        let comps = self.components();
        let comp_of: BTreeMap<VertId, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |v| (*v, i)))
            .collect();
        let outer_anchors: Vec<Option<Dart>> =
            comps.iter().map(|c| self.outer_anchor(c)).collect();
        let orbits = self.face_orbits();
        // resolve outer anchors to orbit anchors
        let orbit_anchor_of = |d: Dart| -> Dart {
            orbits
                .iter()
                .find(|o| o.contains(&d))
                .map(|o| o[0])
                .unwrap_or(d)
        };
        let outer_orbit_anchor: Vec<Option<Dart>> = outer_anchors
            .iter()
            .map(|oa| oa.map(orbit_anchor_of))
            .collect();
        let occupied: BTreeSet<Dart> = self
            .placements
            .values()
            .filter_map(|r| match r {
                Region::Face { anchor } => Some(orbit_anchor_of(*anchor)),
                _ => None,
            })
            .collect();
        orbits
            .into_iter()
            .map(|orbit| {
                let anchor = orbit[0];
                let ci = comp_of[&anchor.vert];
                let touches_boundary = orbit
                    .iter()
                    .any(|d| matches!(self.verts[&d.vert].kind, VertexKind::Boundary(_)));
                let is_outward = outer_orbit_anchor[ci] == Some(anchor);
                let sides = orbit.len();
                Face {
                    anchor,
                    sides,
                    interior: !touches_boundary && !is_outward,
                    empty: !occupied.contains(&anchor),
                    component: comps[ci][0],
                    darts: orbit,
                }
            })
            .collect()
    }

    /// Regions of the marked disk. Unlike face orbits, the walk continues
    /// along the disk boundary at marked points (clockwise to the previous
    /// point, keeping the region on the right), and regions are merged
    /// across the containment forest, so two strand-sides bound a common
    /// region exactly when they appear in the same dart set.
    pub fn regions(&self) -> Vec<Vec<Dart>> {
        let idx = self.edge_index();
        let n = self.boundary.len();
        let boundary_vert: BTreeMap<u32, VertId> = self
            .verts
            .iter()
            .filter_map(|(id, v)| match v.kind {
                VertexKind::Boundary(i) => Some((i, *id)),
                _ => None,
            })
            .collect();
        let step = |d: Dart| -> Option<Dart> {
            let a = self.alpha(&idx, d)?;
            match self.verts[&a.vert].kind {
                VertexKind::Boundary(i) => {
                    let j = (i + n as u32 - 1) % n as u32;
                    Some(Dart::new(boundary_vert[&j], 0))
                }
                _ => Some(self.sigma(a)),
            }
        };
        let mut seen: BTreeSet<Dart> = BTreeSet::new();
        let mut regions: Vec<Vec<Dart>> = Vec::new();
        for d in self.darts() {
            if seen.contains(&d) {
                continue;
            }
            let mut walk = vec![d];
            seen.insert(d);
            let mut cur = d;
            while let Some(next) = step(cur) {
                if next == d {
                    break;
                }
                walk.push(next);
                seen.insert(next);
                cur = next;
            }
            regions.push(walk);
        }
        // merge across containment: a floating component's outward region
        // coincides with the region it is placed in
        let comps = self.components();
        let region_of = |dart: Dart, regions: &[Vec<Dart>]| -> usize {
            regions
                .iter()
                .position(|r| r.contains(&dart))
                .expect("every dart lies in a region")
        };
        let mut parent: Vec<usize> = (0..regions.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for (item, region) in &self.placements {
            let rep = match item {
                ItemRef::Component(rep) => *rep,
                ItemRef::Circle(_) => continue,
            };
            let comp = match comps.iter().find(|c| c[0] == rep) {
                Some(c) => c,
                None => continue,
            };
            let anchor = match self.outer_anchor(comp) {
                Some(a) => a,
                None => continue,
            };
            let target = match region {
                Region::Face { anchor } => Some(*anchor),
                Region::Outer => self
                    .boundary_dart(0)
                    .or(None),
                Region::Inside(_) => None,
            };
            if let Some(t) = target {
                let a = find(&mut parent, region_of(anchor, &regions));
                let b = find(&mut parent, region_of(t, &regions));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        // closed items placed in the outer region of a boundary-less disk
        // merge with each other
        if self.boundary.is_empty() {
            let outer_anchors: Vec<Dart> = comps
                .iter()
                .filter(|c| self.placement_of(ItemRef::Component(c[0])) == Region::Outer)
                .filter_map(|c| self.outer_anchor(c))
                .collect();
            for pair in outer_anchors.windows(2) {
                let a = find(&mut parent, region_of(pair[0], &regions));
                let b = find(&mut parent, region_of(pair[1], &regions));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut merged: BTreeMap<usize, Vec<Dart>> = BTreeMap::new();
        for (i, r) in regions.iter().enumerate() {
            let root = find(&mut parent, i);
            merged.entry(root).or_default().extend(r.iter().copied());
        }
        merged.into_values().collect()
    }

    /// Non-elliptic check: every interior face has at least six sides, and
    /// there are no vertex-less circles.
    pub fn is_non_elliptic_web(&self) -> bool {
        self.circles.is_empty()
            && self.crossing_count() == 0
            && self.faces().iter().all(|f| !f.interior || f.sides >= 6)
    }

    // --- involutions -------------------------------------------------------

    /// Reverse every edge orientation, flip every boundary sign and circle
    /// direction, and exchange sources with sinks.
    pub fn adjoint(&self) -> Diagram {
        assert!(self.oriented, "adjoint requires an oriented diagram");
        let mut d = self.clone();
        for s in &mut d.boundary {
            *s = s.flip();
        }
        for v in d.verts.values_mut() {
            v.kind = match v.kind {
                VertexKind::Source => VertexKind::Sink,
                VertexKind::Sink => VertexKind::Source,
                k => k,
            };
        }
        for e in d.edges.values_mut() {
            std::mem::swap(&mut e.tail, &mut e.head);
        }
        for c in d.circles.values_mut() {
            c.dir = c.dir.map(CircleDir::flip);
        }
        d
    }

    fn mirror_port(kind: VertexKind, p: u8) -> u8 {
        match kind {
            VertexKind::Crossing => (4 - p) % 4,
            VertexKind::Source | VertexKind::Sink => (3 - p) % 3,
            VertexKind::Boundary(_) => 0,
        }
    }

    /// Reflect the disk: reverse all rotation orders and the boundary cyclic
    /// order. Over/under strands are carried along, so each crossing's
    /// handedness flips.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        let n = self.boundary.len();
        if n > 0 {
            let mut nb = self.boundary.clone();
            for (i, s) in self.boundary.iter().enumerate() {
                nb[(n - i) % n] = *s;
            }
            d.boundary = nb;
        }
        let remap = |dart: Dart| -> Dart {
            let kind = self.verts[&dart.vert].kind;
            Dart::new(dart.vert, Self::mirror_port(kind, dart.port))
        };
        for v in d.verts.values_mut() {
            if let VertexKind::Boundary(i) = v.kind {
                if n > 0 {
                    v.kind = VertexKind::Boundary(((n as u32) - i) % n as u32);
                }
            }
        }
        for e in d.edges.values_mut() {
            e.tail = remap(e.tail);
            e.head = remap(e.head);
        }
        for c in d.circles.values_mut() {
            c.dir = c.dir.map(CircleDir::flip);
        }
        let placements = std::mem::take(&mut d.placements);
        d.placements = placements
            .into_iter()
            .map(|(item, region)| {
                let region = match region {
                    Region::Face { anchor } => Region::Face {
                        anchor: remap(anchor),
                    },
                    r => r,
                };
                (item, region)
            })
            .collect();
        let marks = std::mem::take(&mut d.outer_marks);
        d.outer_marks = marks.into_iter().map(|(r, a)| (r, remap(a))).collect();
        d
    }

    /// Switch every crossing's over/under assignment by rotating its port
    /// labels one step.
    pub fn switch_crossings(&self) -> Diagram {
        let mut d = self.clone();
        let remap = |dart: Dart| -> Dart {
            if self.verts[&dart.vert].kind == VertexKind::Crossing {
                Dart::new(dart.vert, (dart.port + 1) % 4)
            } else {
                dart
            }
        };
        for e in d.edges.values_mut() {
            e.tail = remap(e.tail);
            e.head = remap(e.head);
        }
        let placements = std::mem::take(&mut d.placements);
        d.placements = placements
            .into_iter()
            .map(|(item, region)| {
                let region = match region {
                    Region::Face { anchor } => Region::Face {
                        anchor: remap(anchor),
                    },
                    r => r,
                };
                (item, region)
            })
            .collect();
        let marks = std::mem::take(&mut d.outer_marks);
        d.outer_marks = marks.into_iter().map(|(r, a)| (r, remap(a))).collect();
        d
    }

    // --- validation ---------------------------------------------------------

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        fn viol(out: &mut Vec<Violation>, at: &str, msg: String) {
            out.push(Violation {
                at: at.to_string(),
                msg,
            })
        }

        // boundary vertices vs marked points
        let mut seen_idx: BTreeSet<u32> = BTreeSet::new();
        for v in self.verts.values() {
            if let VertexKind::Boundary(i) = v.kind {
                if i as usize >= self.boundary.len() {
                    viol(&mut out, &v.name, format!("boundary index {} out of range", i));
                } else if !seen_idx.insert(i) {
                    viol(&mut out, &v.name, format!("boundary index {} used twice", i));
                }
            }
        }
        if seen_idx.len() != self.boundary.len() {
            viol(&mut out, 
                "boundary",
                format!(
                    "{} marked points but {} boundary vertices",
                    self.boundary.len(),
                    seen_idx.len()
                ),
            );
        }

        // every dart used exactly once by an edge end
        let mut ends: BTreeMap<Dart, usize> = BTreeMap::new();
        for e in self.edges.values() {
            for d in [e.tail, e.head] {
                *ends.entry(d).or_insert(0) += 1;
                match self.verts.get(&d.vert) {
                    None => viol(&mut out, &e.name, format!("edge references missing vertex {:?}", d.vert)),
                    Some(v) => {
                        if d.port >= v.kind.arity() {
                            viol(&mut out, &e.name, format!("port {} out of range on {}", d.port, v.name));
                        }
                    }
                }
            }
            if e.tail == e.head {
                viol(&mut out, &e.name, "edge joins a dart to itself".to_string());
            }
        }
        for d in self.darts() {
            match ends.get(&d) {
                None => viol(&mut out, 
                    &self.verts[&d.vert].name,
                    format!("port {} is not attached to any edge", d.port),
                ),
                Some(1) => {}
                Some(k) => viol(&mut out, 
                    &self.verts[&d.vert].name,
                    format!("port {} attached to {} edge ends", d.port, k),
                ),
            }
        }
        if !out.is_empty() {
            return out; // structural failures make the rest unreliable
        }

        let idx = self.edge_index();

        // mode constraints
        if !self.oriented {
            for v in self.verts.values() {
                if v.kind.is_trivalent() {
                    viol(&mut out, &v.name, "trivalent vertices are forbidden in unoriented mode".into());
                }
            }
            for c in self.circles.values() {
                if c.dir.is_some() {
                    viol(&mut out, &c.name, "unoriented circles must not carry a direction".into());
                }
            }
        } else {
            for c in self.circles.values() {
                if c.dir.is_none() {
                    viol(&mut out, &c.name, "oriented circles must carry a direction".into());
                }
            }
            for (id, v) in &self.verts {
                match v.kind {
                    VertexKind::Source | VertexKind::Sink => {
                        let want = if v.kind == VertexKind::Source {
                            PortDir::Out
                        } else {
                            PortDir::In
                        };
                        for p in 0..3 {
                            let dir = self.dir_at(&idx, Dart::new(*id, p)).unwrap();
                            if dir != want {
                                viol(&mut out, 
                                    &v.name,
                                    format!(
                                        "port {} of {} must point {}",
                                        p,
                                        if v.kind == VertexKind::Source {
                                            "source"
                                        } else {
                                            "sink"
                                        },
                                        if want == PortDir::Out { "out" } else { "in" }
                                    ),
                                );
                            }
                        }
                    }
                    VertexKind::Crossing => {
                        let dirs: Vec<PortDir> = (0..4)
                            .map(|p| self.dir_at(&idx, Dart::new(*id, p)).unwrap())
                            .collect();
                        if dirs[0] == dirs[2] || dirs[1] == dirs[3] {
                            viol(&mut out, &v.name, "crossing strands are not coherently oriented".into());
                        }
                    }
                    VertexKind::Boundary(i) => {
                        let dir = self.dir_at(&idx, Dart::new(*id, 0)).unwrap();
                        let sign = self.boundary[i as usize];
                        let ok = match sign {
                            Sign::Plus => dir == PortDir::Out,
                            Sign::Minus => dir == PortDir::In,
                        };
                        if !ok {
                            viol(&mut out, 
                                &v.name,
                                format!(
                                    "boundary point {} signed {} but edge points {}",
                                    i,
                                    if sign == Sign::Plus { "+" } else { "-" },
                                    if dir == PortDir::Out {
                                        "into the disk"
                                    } else {
                                        "out of the disk"
                                    }
                                ),
                            );
                        }
                    }
                }
            }
        }

        // planarity: V - E + F = 2 per component
        let comps = self.components();
        let orbits = self.face_orbits();
        for comp in &comps {
            let comp_set: BTreeSet<VertId> = comp.iter().copied().collect();
            let v = comp.len() as i64;
            let e = self
                .edges
                .values()
                .filter(|e| comp_set.contains(&e.tail.vert))
                .count() as i64;
            let f = orbits
                .iter()
                .filter(|o| comp_set.contains(&o[0].vert))
                .count() as i64;
            if v - e + f != 2 {
                viol(&mut out, 
                    &self.verts[&comp[0]].name,
                    format!(
                        "component is not planar: V - E + F = {} - {} + {} != 2",
                        v, e, f
                    ),
                );
            }
        }

        // containment forest
        let comp_rep: BTreeMap<VertId, VertId> = comps
            .iter()
            .flat_map(|c| c.iter().map(move |v| (*v, c[0])))
            .collect();
        let faces = if out.is_empty() { self.faces() } else { Vec::new() };
        for (item, region) in &self.placements {
            match item {
                ItemRef::Component(rep) => {
                    if comp_rep.get(rep) != Some(rep) {
                        viol(&mut out, "contain", format!("{:?} is not a component representative", rep));
                        continue;
                    }
                    let comp = comps.iter().find(|c| c[0] == *rep).unwrap();
                    if !self.comp_is_closed(comp) {
                        viol(&mut out, 
                            "contain",
                            "a boundary-attached component cannot float in a face".into(),
                        );
                    }
                }
                ItemRef::Circle(c) => {
                    if !self.circles.contains_key(c) {
                        viol(&mut out, "contain", format!("unknown circle {:?}", c));
                    }
                }
            }
            match region {
                Region::Outer => {}
                Region::Inside(c) => {
                    if !self.circles.contains_key(c) {
                        viol(&mut out, "contain", format!("containing circle {:?} missing", c));
                    }
                }
                Region::Face { anchor } => {
                    match faces.iter().find(|f| f.darts.contains(anchor)) {
                        None => viol(&mut out, "contain", format!("face anchor {:?} missing", anchor)),
                        Some(f) => {
                            if !f.interior {
                                viol(&mut out, 
                                    "contain",
                                    "components may only float in interior faces".into(),
                                );
                            }
                        }
                    }
                }
            }
        }
        // acyclicity
        let parent_item = |item: ItemRef| -> Option<ItemRef> {
            match self.placements.get(&item)? {
                Region::Outer => None,
                Region::Inside(c) => Some(ItemRef::Circle(*c)),
                Region::Face { anchor } => comp_rep.get(&anchor.vert).map(|r| ItemRef::Component(*r)),
            }
        };
        for item in self.placements.keys() {
            let mut seen = vec![*item];
            let mut cur = *item;
            while let Some(p) = parent_item(cur) {
                if seen.contains(&p) {
                    viol(&mut out, "contain", "containment forest has a cycle".into());
                    break;
                }
                seen.push(p);
                cur = p;
            }
        }

        // interior faces of a crossing-free oriented diagram have evenly many sides
        if self.oriented && self.crossing_count() == 0 && out.is_empty() {
            for f in &faces {
                if f.interior && f.sides % 2 != 0 {
                    viol(&mut out, 
                        &self.verts[&f.anchor.vert].name,
                        format!("interior face with odd side count {}", f.sides),
                    );
                }
            }
        }

        out
    }

    pub fn ensure_valid(&self) -> Result<(), DiagramError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(DiagramError::Validation(v))
        }
    }

    // --- canonical key -------------------------------------------------------

    /// Canonical isotopy-class key of a crossing-free diagram rel boundary.
    ///
    /// Equal keys exactly when the decorated combinatorial data (rotation
    /// system, orientations, boundary attachment, containment forest, and
    /// outward faces of closed components) agree under renaming.
    pub fn canonical_key(&self) -> Result<String, DiagramError> {
        if self.crossing_count() > 0 {
            return Err(DiagramError::HasCrossings);
        }
        Ok(self.iso_key())
    }

    /// Whether two diagrams carry the same decorated combinatorial data up
    /// to renaming. Unlike `canonical_key` this also handles crossings.
    pub fn equivalent(&self, other: &Diagram) -> bool {
        self.oriented == other.oriented
            && self.boundary == other.boundary
            && self.iso_key() == other.iso_key()
    }

    /// Canonical relabeling-invariant encoding; crossings are encoded with
    /// the entry-port parity so the under-strand assignment is preserved.
    pub fn iso_key(&self) -> String {
        let idx = self.edge_index();
        let comps = self.components();

        // encode a component from a root dart; also return face numbering
        let encode = |comp: &[VertId], root: Dart| -> (String, BTreeMap<Dart, usize>) {
            let mut visit: BTreeMap<VertId, (usize, u8)> = BTreeMap::new();
            let mut order: Vec<VertId> = Vec::new();
            let mut queue: Vec<Dart> = vec![root];
            while let Some(d) = queue.pop() {
                if visit.contains_key(&d.vert) {
                    continue;
                }
                visit.insert(d.vert, (order.len(), d.port));
                order.push(d.vert);
                let arity = self.verts[&d.vert].kind.arity();
                for off in (0..arity).rev() {
                    let here = Dart::new(d.vert, (d.port + off) % arity);
                    if let Some(opp) = self.alpha(&idx, here) {
                        queue.push(opp);
                    }
                }
            }
            let mut s = String::new();
            for vid in &order {
                let v = &self.verts[vid];
                let (_, entry) = visit[vid];
                match v.kind {
                    VertexKind::Source => s.push('S'),
                    VertexKind::Sink => s.push('T'),
                    VertexKind::Boundary(i) => s.push_str(&format!("B{}", i)),
                    // parity pins which strand is under across relabelings
                    VertexKind::Crossing => s.push_str(&format!("X{}", entry % 2)),
                }
                let arity = v.kind.arity();
                s.push('(');
                for off in 0..arity {
                    let here = Dart::new(*vid, (entry + off) % arity);
                    let opp = self.alpha(&idx, here).expect("validated diagram");
                    let (ovis, oentry) = visit[&opp.vert];
                    let oarity = self.verts[&opp.vert].kind.arity();
                    let rel = (opp.port + oarity - oentry) % oarity;
                    let orient = if !self.oriented {
                        '-'
                    } else if self.dir_at(&idx, here) == Some(PortDir::Out) {
                        '>'
                    } else {
                        '<'
                    };
                    s.push(orient);
                    s.push_str(&format!("{}:{}", ovis, rel));
                    if off + 1 < arity {
                        s.push(',');
                    }
                }
                s.push(')');
                let _ = comp;
            }
            // face numbering relative to this labeling
            let mut face_no: BTreeMap<Dart, usize> = BTreeMap::new();
            let mut orbits: Vec<(Vec<(usize, u8)>, Dart)> = Vec::new();
            for orbit in self.face_orbits() {
                if !orbit.iter().any(|d| visit.contains_key(&d.vert)) {
                    continue;
                }
                let mut labels: Vec<(usize, u8)> = orbit
                    .iter()
                    .map(|d| {
                        let (vi, entry) = visit[&d.vert];
                        let arity = self.verts[&d.vert].kind.arity();
                        (vi, (d.port + arity - entry) % arity)
                    })
                    .collect();
                labels.sort();
                orbits.push((labels, orbit[0]));
            }
            orbits.sort();
            for (i, (_, anchor)) in orbits.iter().enumerate() {
                face_no.insert(*anchor, i);
            }
            (s, face_no)
        };

        // canonical encoding per component
        struct CompKey {
            text: String,
            face_no: BTreeMap<Dart, usize>,
            rep: VertId,
            boundary_attached: bool,
            min_boundary: u32,
        }
        let mut comp_keys: Vec<CompKey> = Vec::new();
        for comp in &comps {
            let boundary_pts: Vec<u32> = comp
                .iter()
                .filter_map(|v| match self.verts[v].kind {
                    VertexKind::Boundary(i) => Some(i),
                    _ => None,
                })
                .collect();
            if let Some(min_b) = boundary_pts.iter().min() {
                let root = self.boundary_dart(*min_b as usize).unwrap();
                let (text, face_no) = encode(comp, root);
                comp_keys.push(CompKey {
                    text,
                    face_no,
                    rep: comp[0],
                    boundary_attached: true,
                    min_boundary: *min_b,
                });
            } else {
                // closed: minimize over all roots, including outward-face data
                let outer = self.outer_anchor(comp).unwrap();
                let mut best: Option<(String, BTreeMap<Dart, usize>)> = None;
                for v in comp {
                    for p in 0..self.verts[v].kind.arity() {
                        let root = Dart::new(*v, p);
                        let (text, face_no) = encode(comp, root);
                        let orbit_anchor = self
                            .face_orbits()
                            .into_iter()
                            .find(|o| o.contains(&outer))
                            .map(|o| o[0])
                            .unwrap();
                        let full = format!("{}out{}", text, face_no[&orbit_anchor]);
                        if best.as_ref().map(|(b, _)| full < *b).unwrap_or(true) {
                            best = Some((full, face_no));
                        }
                    }
                }
                let (text, face_no) = best.unwrap();
                comp_keys.push(CompKey {
                    text,
                    face_no,
                    rep: comp[0],
                    boundary_attached: false,
                    min_boundary: u32::MAX,
                });
            }
        }

        // containment tree keys, built bottom-up
        let rep_to_key: BTreeMap<VertId, usize> =
            comp_keys.iter().enumerate().map(|(i, c)| (c.rep, i)).collect();
        let children_of = |item: ItemRef| -> Vec<(String, ItemRef)> {
            let mut kids = Vec::new();
            for (child, region) in &self.placements {
                let slot = match (item, region) {
                    (ItemRef::Component(rep), Region::Face { anchor }) => {
                        if self.comp_rep_of(anchor.vert) == rep {
                            let ck = &comp_keys[rep_to_key[&rep]];
                            format!("f{}", ck.face_no.get(anchor).copied().unwrap_or(usize::MAX))
                        } else {
                            continue;
                        }
                    }
                    (ItemRef::Circle(c), Region::Inside(c2)) if *c2 == c => "in".to_string(),
                    _ => continue,
                };
                kids.push((slot, *child));
            }
            kids
        };
        fn item_key(
            item: ItemRef,
            self_text: &dyn Fn(ItemRef) -> String,
            children_of: &dyn Fn(ItemRef) -> Vec<(String, ItemRef)>,
        ) -> String {
            let mut kids: Vec<String> = children_of(item)
                .into_iter()
                .map(|(slot, child)| format!("{}@{}", slot, item_key(child, self_text, children_of)))
                .collect();
            kids.sort();
            if kids.is_empty() {
                self_text(item)
            } else {
                format!("{}[{}]", self_text(item), kids.join(" "))
            }
        }
        let self_text = |item: ItemRef| -> String {
            match item {
                ItemRef::Component(rep) => comp_keys[rep_to_key[&rep]].text.clone(),
                ItemRef::Circle(c) => match self.circles[&c].dir {
                    None => "O".to_string(),
                    Some(CircleDir::Ccw) => "O+".to_string(),
                    Some(CircleDir::Cw) => "O-".to_string(),
                },
            }
        };

        let mut sections: Vec<String> = Vec::new();
        if self.oriented {
            let signs: String = self
                .boundary
                .iter()
                .map(|s| if *s == Sign::Plus { '+' } else { '-' })
                .collect();
            sections.push(format!("bnd:{}", signs));
        } else {
            sections.push(format!("bnd:{}", self.boundary.len()));
        }
        // boundary-attached components in boundary order, with their subtrees
        let mut attached: Vec<&CompKey> = comp_keys.iter().filter(|c| c.boundary_attached).collect();
        attached.sort_by_key(|c| c.min_boundary);
        for ck in attached {
            sections.push(item_key(
                ItemRef::Component(ck.rep),
                &self_text,
                &children_of,
            ));
        }
        // root-level floating items (placement Outer), sorted by subtree key
        let mut roots: Vec<String> = Vec::new();
        for ck in comp_keys.iter().filter(|c| !c.boundary_attached) {
            if self.placement_of(ItemRef::Component(ck.rep)) == Region::Outer {
                roots.push(item_key(ItemRef::Component(ck.rep), &self_text, &children_of));
            }
        }
        for cid in self.circles.keys() {
            if self.placement_of(ItemRef::Circle(*cid)) == Region::Outer {
                roots.push(item_key(ItemRef::Circle(*cid), &self_text, &children_of));
            }
        }
        roots.sort();
        sections.extend(roots);
        sections.join(";")
    }
}
