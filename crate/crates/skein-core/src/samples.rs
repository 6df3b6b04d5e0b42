//! Hand-built reference diagrams used by tests, the acceptance suite, and
//! the bundled example files.
//!
//! Crossing boxes come in two chiralities. Box A puts the under-strand on
//! the SW-NE diagonal: port 0 = SW, 1 = SE, 2 = NE, 3 = NW (counterclockwise,
//! under-strand on ports 0-2). Box B puts it on the SE-NW diagonal:
//! port 0 = SE, 1 = NE, 2 = NW, 3 = SW.

use crate::diagram::{CircleDir, Dart, Diagram, Sign, VertexKind};

fn signs(s: &str) -> Vec<Sign> {
    s.chars()
        .map(|c| match c {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            _ => panic!("bad sign char"),
        })
        .collect()
}

/// A closed unoriented circle.
pub fn unknot() -> Diagram {
    let mut d = Diagram::new(false, vec![]);
    d.add_circle("k0", None);
    d
}

pub fn circle_oriented(dir: CircleDir) -> Diagram {
    let mut d = Diagram::new(true, vec![]);
    d.add_circle("k0", Some(dir));
    d
}

/// Two marked points joined by one arc.
pub fn single_arc_unoriented() -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 2]);
    let b0 = d.boundary_dart(0).unwrap();
    let b1 = d.boundary_dart(1).unwrap();
    d.add_edge("e0", b0, b1);
    d
}

pub fn single_arc_oriented() -> Diagram {
    let mut d = Diagram::new(true, signs("+-"));
    let b0 = d.boundary_dart(0).unwrap();
    let b1 = d.boundary_dart(1).unwrap();
    d.add_edge("e0", b0, b1);
    d
}

/// Four marked points (CCW: bottom-left, bottom-right, top-right, top-left)
/// joined by two vertical strands.
pub fn vertical_strands_unoriented() -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 4]);
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    d.add_edge("e0", b[0], b[3]);
    d.add_edge("e1", b[1], b[2]);
    d
}

pub fn horizontal_strands_unoriented() -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 4]);
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    d.add_edge("e0", b[0], b[1]);
    d.add_edge("e1", b[2], b[3]);
    d
}

/// Both strands flowing upward: bottom points are sources of the tangle.
pub fn vertical_strands_oriented() -> Diagram {
    let mut d = Diagram::new(true, signs("++--"));
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    d.add_edge("e0", b[0], b[3]);
    d.add_edge("e1", b[1], b[2]);
    d
}

/// One box-A crossing wired to four boundary points.
pub fn crossing_tangle_unoriented() -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 4]);
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    let c = d.add_vertex("c0", VertexKind::Crossing);
    d.add_edge("e0", b[0], Dart::new(c, 0));
    d.add_edge("e1", b[1], Dart::new(c, 1));
    d.add_edge("e2", Dart::new(c, 2), b[2]);
    d.add_edge("e3", Dart::new(c, 3), b[3]);
    d
}

/// An oriented crossing with both strands flowing upward. `positive` selects
/// the crossing sign (box A is positive for this orientation).
pub fn crossing_tangle_oriented(positive: bool) -> Diagram {
    let mut d = Diagram::new(true, signs("++--"));
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    let c = d.add_vertex("c0", VertexKind::Crossing);
    if positive {
        // box A: 0=SW, 1=SE, 2=NE, 3=NW
        d.add_edge("e0", b[0], Dart::new(c, 0));
        d.add_edge("e1", b[1], Dart::new(c, 1));
        d.add_edge("e2", Dart::new(c, 2), b[2]);
        d.add_edge("e3", Dart::new(c, 3), b[3]);
    } else {
        // box B: 0=SE, 1=NE, 2=NW, 3=SW
        d.add_edge("e0", b[0], Dart::new(c, 3));
        d.add_edge("e1", b[1], Dart::new(c, 0));
        d.add_edge("e2", Dart::new(c, 1), b[2]);
        d.add_edge("e3", Dart::new(c, 2), b[3]);
    }
    d
}

/// An arc from boundary point 0 to 1 carrying one kink.
pub fn kink_arc_unoriented(positive: bool) -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 2]);
    let b0 = d.boundary_dart(0).unwrap();
    let b1 = d.boundary_dart(1).unwrap();
    let c = d.add_vertex("c0", VertexKind::Crossing);
    if positive {
        // loop on ports (1,2); strand passes 0 -> 2 -> loop -> 1 -> 3
        d.add_edge("e0", b0, Dart::new(c, 0));
        d.add_edge("l", Dart::new(c, 2), Dart::new(c, 1));
        d.add_edge("e1", Dart::new(c, 3), b1);
    } else {
        // loop on ports (0,1); strand passes 2 -> 0 -> loop -> 1 -> 3
        d.add_edge("e0", b0, Dart::new(c, 2));
        d.add_edge("l", Dart::new(c, 0), Dart::new(c, 1));
        d.add_edge("e1", Dart::new(c, 3), b1);
    }
    d
}

/// An oriented strand (bottom +, top -) with one kink of the given sign.
pub fn kink_arc_oriented(positive: bool) -> Diagram {
    let mut d = Diagram::new(true, signs("+-"));
    let b0 = d.boundary_dart(0).unwrap();
    let b1 = d.boundary_dart(1).unwrap();
    let c = d.add_vertex("c0", VertexKind::Crossing);
    if positive {
        d.add_edge("e0", b0, Dart::new(c, 0));
        d.add_edge("l", Dart::new(c, 2), Dart::new(c, 1));
        d.add_edge("e1", Dart::new(c, 3), b1);
    } else {
        d.add_edge("e0", b0, Dart::new(c, 2));
        d.add_edge("l", Dart::new(c, 0), Dart::new(c, 1));
        d.add_edge("e1", Dart::new(c, 3), b1);
    }
    d
}

/// The second Reidemeister move's left side: two strands crossing twice,
/// the right strand passing over at both crossings.
pub fn rii_tangle_unoriented() -> Diagram {
    let mut d = Diagram::new(false, vec![Sign::Plus; 4]);
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    let c1 = d.add_vertex("c1", VertexKind::Crossing); // box A
    let c2 = d.add_vertex("c2", VertexKind::Crossing); // box B
    d.add_edge("e0", b[0], Dart::new(c1, 0));
    d.add_edge("e1", b[1], Dart::new(c1, 1));
    d.add_edge("m0", Dart::new(c1, 2), Dart::new(c2, 0));
    d.add_edge("m1", Dart::new(c1, 3), Dart::new(c2, 3));
    d.add_edge("e2", Dart::new(c2, 1), b[2]);
    d.add_edge("e3", Dart::new(c2, 2), b[3]);
    d
}

/// Closure of the two-strand braid with `n` box-A crossings.
fn braid_closure(n: usize) -> Diagram {
    let mut d = Diagram::new(false, vec![]);
    let cs: Vec<_> = (0..n)
        .map(|i| d.add_vertex(&format!("c{}", i), VertexKind::Crossing))
        .collect();
    for i in 0..n - 1 {
        d.add_edge(
            &format!("r{}", i),
            Dart::new(cs[i], 2),
            Dart::new(cs[i + 1], 1),
        );
        d.add_edge(
            &format!("l{}", i),
            Dart::new(cs[i], 3),
            Dart::new(cs[i + 1], 0),
        );
    }
    d.add_edge("wr", Dart::new(cs[n - 1], 2), Dart::new(cs[0], 1));
    d.add_edge("wl", Dart::new(cs[n - 1], 3), Dart::new(cs[0], 0));
    d
}

/// Closed positive Hopf link (two-crossing braid closure).
pub fn hopf_link() -> Diagram {
    braid_closure(2)
}

/// Closed right trefoil (three-crossing braid closure).
pub fn trefoil() -> Diagram {
    braid_closure(3)
}

/// The closed theta web: source and sink joined by three parallel edges.
pub fn theta_web() -> Diagram {
    let mut d = Diagram::new(true, vec![]);
    let v1 = d.add_vertex("v1", VertexKind::Source);
    let v2 = d.add_vertex("v2", VertexKind::Sink);
    // v1 ports CCW: 0 = bottom, 1 = middle, 2 = top; v2: 0 = top, 1 = middle,
    // 2 = bottom
    d.add_edge("top", Dart::new(v1, 2), Dart::new(v2, 0));
    d.add_edge("mid", Dart::new(v1, 1), Dart::new(v2, 1));
    d.add_edge("bot", Dart::new(v1, 0), Dart::new(v2, 2));
    d.set_outer_mark(v1, Dart::new(v1, 0));
    d
}

/// The H-web on (+,+,-,-): a sink fed by the two plus points, a source
/// feeding the two minus points, and a bar between them.
pub fn h_web() -> Diagram {
    let mut d = Diagram::new(true, signs("++--"));
    let b: Vec<Dart> = (0..4).map(|i| d.boundary_dart(i).unwrap()).collect();
    let t = d.add_vertex("t", VertexKind::Sink);
    let s = d.add_vertex("s", VertexKind::Source);
    d.add_edge("e0", b[0], Dart::new(t, 0));
    d.add_edge("e1", b[1], Dart::new(t, 1));
    d.add_edge("mid", Dart::new(s, 2), Dart::new(t, 2));
    d.add_edge("e2", Dart::new(s, 0), b[2]);
    d.add_edge("e3", Dart::new(s, 1), b[3]);
    d
}

/// A cycle of `n` trivalent vertices (alternating sink/source), each with a
/// leg to the boundary. `n = 4` is the square web, `n = 6` the hexagonal one.
pub fn cycle_web(n: usize) -> Diagram {
    assert!(n >= 4 && n.is_multiple_of(2));
    let sgns: Vec<Sign> = (0..n)
        .map(|i| if i % 2 == 0 { Sign::Plus } else { Sign::Minus })
        .collect();
    let mut d = Diagram::new(true, sgns);
    let vs: Vec<_> = (0..n)
        .map(|i| {
            let kind = if i % 2 == 0 {
                VertexKind::Sink
            } else {
                VertexKind::Source
            };
            d.add_vertex(&format!("v{}", i), kind)
        })
        .collect();
    // ports: 0 = leg (outward), 1 = toward next vertex, 2 = toward previous
    for i in 0..n {
        let b = d.boundary_dart(i).unwrap();
        if i % 2 == 0 {
            d.add_edge(&format!("leg{}", i), b, Dart::new(vs[i], 0));
        } else {
            d.add_edge(&format!("leg{}", i), Dart::new(vs[i], 0), b);
        }
        let j = (i + 1) % n;
        if i % 2 == 1 {
            d.add_edge(
                &format!("cyc{}", i),
                Dart::new(vs[i], 1),
                Dart::new(vs[j], 2),
            );
        } else {
            d.add_edge(
                &format!("cyc{}", i),
                Dart::new(vs[j], 2),
                Dart::new(vs[i], 1),
            );
        }
    }
    d
}

pub fn square_web() -> Diagram {
    cycle_web(4)
}

pub fn hexagon_web() -> Diagram {
    cycle_web(6)
}

/// Builds tangles bottom-up from elementary rows: identities, cups, caps,
/// crossings of either chirality, and source/sink vertices. Planarity and
/// orientation coherence hold by construction.
///
/// Wires are open strand ends at the growing frontier, ordered left to
/// right. An oriented wire records whether its strand flows upward. Cups
/// introduce a vertex-less span whose two ends stay linked until both
/// attach; a cap joining two linked ends closes a circle.
pub struct Stacker {
    d: Diagram,
    wires: Vec<Wire>,
    next_wire: u32,
}

#[derive(Debug, Clone, Copy)]
struct Wire {
    id: u32,
    lower: LowerEnd,
    flow_up: bool,
}

#[derive(Debug, Clone, Copy)]
enum LowerEnd {
    Dart(Dart),
    CupMate(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxKind {
    /// Under-strand runs SW-NE: the bottom-left strand goes under.
    CrossUnderLeft,
    /// Under-strand runs SE-NW: the bottom-right strand goes under.
    CrossUnderRight,
    Cup {
        left_flow_up: bool,
    },
    Cap,
    /// Trivalent vertex consuming `legs_down` adjacent wires.
    Vertex {
        legs_down: u8,
    },
}

impl Stacker {
    pub fn new(oriented: bool, bottom_flows: &[bool]) -> Self {
        let mut d = Diagram::new(oriented, vec![]);
        let mut wires = Vec::new();
        let mut next_wire = 0u32;
        for up in bottom_flows {
            // a bottom point whose strand flows up has its edge pointing
            // into the disk
            let sign = if *up || !oriented { Sign::Plus } else { Sign::Minus };
            let v = d.push_boundary_point(sign);
            wires.push(Wire {
                id: next_wire,
                lower: LowerEnd::Dart(Dart::new(v, 0)),
                flow_up: *up,
            });
            next_wire += 1;
        }
        Stacker {
            d,
            wires,
            next_wire,
        }
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn wire_flow(&self, i: usize) -> bool {
        self.wires[i].flow_up
    }

    fn fresh_wire(&mut self, lower: LowerEnd, flow_up: bool) -> Wire {
        let id = self.next_wire;
        self.next_wire += 1;
        Wire { id, lower, flow_up }
    }

    /// Terminate a wire at a dart, materializing its edge when the lower
    /// attachment is known, or re-linking its cup mate otherwise.
    fn attach(&mut self, w: Wire, dart: Dart) {
        match w.lower {
            LowerEnd::Dart(low) => {
                if !self.d.oriented || w.flow_up {
                    self.d.fresh_edge(low, dart);
                } else {
                    self.d.fresh_edge(dart, low);
                }
            }
            LowerEnd::CupMate(mate) => {
                let m = self
                    .wires
                    .iter_mut()
                    .find(|x| x.id == mate)
                    .expect("cup mate is still open");
                m.lower = LowerEnd::Dart(dart);
            }
        }
    }

    pub fn apply(&mut self, pos: usize, kind: BoxKind) -> Result<(), String> {
        match kind {
            BoxKind::CrossUnderLeft | BoxKind::CrossUnderRight => {
                if pos + 1 >= self.wires.len() {
                    return Err("crossing needs two wires".into());
                }
                let c = self.d.fresh_vertex(VertexKind::Crossing);
                // box A: 0=SW 1=SE 2=NE 3=NW; box B: 0=SE 1=NE 2=NW 3=SW
                let (sw, se, ne, nw) = if kind == BoxKind::CrossUnderLeft {
                    (0u8, 1, 2, 3)
                } else {
                    (3, 0, 1, 2)
                };
                let (wl_flow, wr_flow) = (self.wires[pos].flow_up, self.wires[pos + 1].flow_up);
                // attach one at a time: the first attach may relink the
                // second wire's lower end
                let wl = self.wires[pos];
                self.attach(wl, Dart::new(c, sw));
                let wr = self.wires[pos + 1];
                self.attach(wr, Dart::new(c, se));
                // strands swap: SW exits NE (right slot), SE exits NW (left)
                let new_left = self.fresh_wire(LowerEnd::Dart(Dart::new(c, nw)), wr_flow);
                let new_right = self.fresh_wire(LowerEnd::Dart(Dart::new(c, ne)), wl_flow);
                self.wires.splice(pos..pos + 2, [new_left, new_right]);
                Ok(())
            }
            BoxKind::Cup { left_flow_up } => {
                if pos > self.wires.len() {
                    return Err("cup position out of range".into());
                }
                let idl = self.next_wire;
                let idr = self.next_wire + 1;
                self.next_wire += 2;
                let wl = Wire {
                    id: idl,
                    lower: LowerEnd::CupMate(idr),
                    flow_up: left_flow_up,
                };
                let wr = Wire {
                    id: idr,
                    lower: LowerEnd::CupMate(idl),
                    flow_up: !left_flow_up,
                };
                self.wires.splice(pos..pos, [wl, wr]);
                Ok(())
            }
            BoxKind::Cap => {
                if pos + 1 >= self.wires.len() {
                    return Err("cap needs two wires".into());
                }
                let wl = self.wires[pos];
                let wr = self.wires[pos + 1];
                if self.d.oriented && wl.flow_up == wr.flow_up {
                    return Err("cap needs opposite flows".into());
                }
                self.wires.drain(pos..pos + 2);
                match (wl.lower, wr.lower) {
                    (LowerEnd::Dart(a), LowerEnd::Dart(b)) => {
                        if !self.d.oriented || wl.flow_up {
                            self.d.fresh_edge(a, b);
                        } else {
                            self.d.fresh_edge(b, a);
                        }
                    }
                    (LowerEnd::Dart(a), LowerEnd::CupMate(m)) => {
                        self.relink(m, a);
                    }
                    (LowerEnd::CupMate(m), LowerEnd::Dart(b)) => {
                        self.relink(m, b);
                    }
                    (LowerEnd::CupMate(m1), LowerEnd::CupMate(m2)) => {
                        if m1 == wr.id && m2 == wl.id {
                            // the span closes on itself
                            let dir = if !self.d.oriented {
                                None
                            } else if wl.flow_up {
                                Some(CircleDir::Cw)
                            } else {
                                Some(CircleDir::Ccw)
                            };
                            self.d.fresh_circle(dir);
                        } else {
                            self.cross_link(m1, m2);
                        }
                    }
                }
                Ok(())
            }
            BoxKind::Vertex { legs_down } => {
                let k = legs_down as usize;
                if !self.d.oriented {
                    return Err("vertices need oriented mode".into());
                }
                if k == 0 || k > 3 || pos + k > self.wires.len() {
                    return Err("vertex legs out of range".into());
                }
                let up = self.wires[pos].flow_up;
                if self.wires[pos..pos + k].iter().any(|w| w.flow_up != up) {
                    return Err("vertex legs must flow the same way".into());
                }
                // wires flowing up feed a sink; wires flowing down hang off
                // a source
                let kind = if up {
                    VertexKind::Sink
                } else {
                    VertexKind::Source
                };
                let v = self.d.fresh_vertex(kind);
                // CCW ports: bottom legs left-to-right are ports 0..k-1,
                // top legs right-to-left continue the cycle; attach one at a
                // time since an attach may relink a later wire
                for j in 0..k {
                    let w = self.wires[pos + j];
                    self.attach(w, Dart::new(v, j as u8));
                }
                let emitted = 3 - k;
                let mut new_wires = Vec::new();
                for t in 0..emitted {
                    // leftmost top leg has the highest port number
                    let port = (2 - t) as u8;
                    new_wires.push(self.fresh_wire(LowerEnd::Dart(Dart::new(v, port)), !up));
                }
                self.wires.splice(pos..pos + k, new_wires);
                Ok(())
            }
        }
    }

    fn relink(&mut self, mate: u32, dart: Dart) {
        let m = self
            .wires
            .iter_mut()
            .find(|x| x.id == mate)
            .expect("cup mate is still open");
        m.lower = LowerEnd::Dart(dart);
    }

    fn cross_link(&mut self, m1: u32, m2: u32) {
        for w in self.wires.iter_mut() {
            if w.id == m1 {
                w.lower = LowerEnd::CupMate(m2);
            } else if w.id == m2 {
                w.lower = LowerEnd::CupMate(m1);
            }
        }
    }

    /// Attach the remaining wires to top boundary points and return the
    /// finished diagram. The top points continue the counterclockwise
    /// boundary order, so they are pushed right to left.
    pub fn finish_open(mut self) -> Diagram {
        while let Some(w) = self.wires.pop() {
            // a top point whose strand flows down has its edge pointing
            // into the disk; rightmost wires take the next boundary indices
            let sign = if !self.d.oriented || !w.flow_up {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let v = self.d.push_boundary_point(sign);
            self.attach(w, Dart::new(v, 0));
        }
        self.d
    }

    /// Close every remaining wire with caps (and, when flows force it,
    /// absorbing vertices). Fails when the parity cannot close.
    pub fn finish_closed(mut self) -> Result<Diagram, String> {
        loop {
            if self.wires.is_empty() {
                return Ok(self.d);
            }
            let cap_at = (0..self.wires.len().saturating_sub(1)).find(|i| {
                !self.d.oriented || self.wires[*i].flow_up != self.wires[*i + 1].flow_up
            });
            if let Some(i) = cap_at {
                self.apply(i, BoxKind::Cap)?;
                continue;
            }
            if self.d.oriented {
                let tri = (0..self.wires.len().saturating_sub(2)).find(|i| {
                    self.wires[*i].flow_up == self.wires[*i + 1].flow_up
                        && self.wires[*i].flow_up == self.wires[*i + 2].flow_up
                });
                if let Some(i) = tri {
                    self.apply(i, BoxKind::Vertex { legs_down: 3 })?;
                    continue;
                }
            }
            return Err("orientation parity cannot close the diagram".into());
        }
    }
}
