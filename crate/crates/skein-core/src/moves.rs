//! Reidemeister move site-finding and application, random diagram
//! generation, and the invariance test harness shared by both theories.
//!
//! Sites locate a move's left or right side as a local sub-configuration
//! with the relevant face empty. Applying a move is an excise-and-splice
//! surgery; insertion directions cut edges and rebuild them through fresh
//! crossings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{
    Dart, Diagram, DiagramError, EdgeId, End, PortDir, Surgery, VertId, VertexKind,
};
use crate::kauffman::{self, KauffmanError, KauffmanRules};
use crate::ring::LaurentPoly;
use crate::samples::{BoxKind, Stacker};
use crate::spider::{self, RuleSet, SpiderError};
use crate::state::StateVector;

#[derive(Debug, Error)]
pub enum MovesError {
    #[error("move site is stale: {0}")]
    StaleSite(String),
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Kauffman(#[from] KauffmanError),
    #[error(transparent)]
    Spider(#[from] SpiderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    R1,
    R2Parallel,
    R2Antiparallel,
    R3,
    /// The vertex slide trading two positive crossings for one negative.
    R41,
    /// The reversed orientation: two negative crossings for one positive.
    R41Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveDir {
    Insert,
    Remove,
}

#[derive(Debug, Clone)]
pub enum SiteData {
    /// Kink at a crossing, loop joining ports `(q, q+1)`.
    R1Remove { crossing: VertId, q: u8 },
    /// Insert a kink on an edge; `q` selects side and chirality.
    R1Insert { edge: EdgeId, q: u8 },
    /// Bigon between two crossings.
    R2Remove { anchor: Dart },
    /// Push `dart_a`'s edge across `dart_b`'s edge within a shared face.
    R2Insert {
        dart_a: Dart,
        dart_b: Dart,
        over_a: bool,
    },
    /// Triangle among three crossings.
    R3 { anchor: Dart },
    /// Triangle with one trivalent corner: strand crossing two legs.
    R41Remove { anchor: Dart },
    /// A leg piece joining a vertex directly to a crossing.
    R41Insert { leg: EdgeId },
}

#[derive(Debug, Clone)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub dir: MoveDir,
    pub data: SiteData,
}

fn parity_odd(p: u8) -> bool {
    p % 2 == 1
}

/// Whether the kink at loop corner `q` is the positive one.
fn kink_positive(q: u8) -> bool {
    parity_odd(q)
}

/// All sites where the move's left or right side occurs. Insert sites pair
/// distinct edge-sides of a common face (including an edge's own two sides);
/// remove sites demand the enclosed face empty.
pub fn find_move_sites(d: &Diagram, kind: MoveKind) -> Vec<MoveSite> {
    let idx = d.edge_index();
    let faces = d.faces();
    let mut out = Vec::new();
    let crossing_at =
        |dart: &Dart| d.vertex(dart.vert).map(|v| v.kind) == Some(VertexKind::Crossing);
    let trivalent_at =
        |dart: &Dart| d.vertex(dart.vert).map(|v| v.kind.is_trivalent()) == Some(true);
    match kind {
        MoveKind::R1 => {
            for c in d.crossings() {
                for q in 0..4u8 {
                    let dq = Dart::new(c, q);
                    let (eid, _) = idx.at(dq).unwrap();
                    if d.edge(eid).unwrap().other_end(dq) != Dart::new(c, (q + 1) % 4) {
                        continue;
                    }
                    // the loop's monogon face sits at the (q+1) corner
                    let monogon = faces
                        .iter()
                        .find(|f| f.darts.contains(&Dart::new(c, (q + 1) % 4)));
                    if monogon.map(|f| f.sides == 1 && f.empty) != Some(true) {
                        continue;
                    }
                    out.push(MoveSite {
                        kind,
                        dir: MoveDir::Remove,
                        data: SiteData::R1Remove { crossing: c, q },
                    });
                }
            }
            for (eid, _) in d.edges() {
                for q in 0..4u8 {
                    out.push(MoveSite {
                        kind,
                        dir: MoveDir::Insert,
                        data: SiteData::R1Insert { edge: eid, q },
                    });
                }
            }
        }
        MoveKind::R2Parallel | MoveKind::R2Antiparallel => {
            for f in &faces {
                if f.sides == 2 && f.darts.iter().all(crossing_at) && f.interior && f.empty {
                    let (d1, d2) = (f.darts[0], f.darts[1]);
                    if d1.vert == d2.vert {
                        continue;
                    }
                    let (e1, _) = idx.at(d1).unwrap();
                    let (e2, _) = idx.at(d2).unwrap();
                    let both = |eid: EdgeId, odd: bool| {
                        let e = d.edge(eid).unwrap();
                        parity_odd(e.tail.port) == odd && parity_odd(e.head.port) == odd
                    };
                    // one side rides over at both ends, the other under
                    let removable = (both(e1, true) && both(e2, false))
                        || (both(e1, false) && both(e2, true));
                    if !removable {
                        continue;
                    }
                    if d.oriented {
                        let runs_12 = |eid: EdgeId| {
                            let e = d.edge(eid).unwrap();
                            e.tail.vert == d1.vert
                        };
                        let parallel = runs_12(e1) == runs_12(e2);
                        let want_parallel = kind == MoveKind::R2Parallel;
                        if parallel != want_parallel {
                            continue;
                        }
                    } else if kind == MoveKind::R2Antiparallel {
                        // flavor needs orientations; unoriented sites are all
                        // reported under the parallel query
                        continue;
                    }
                    out.push(MoveSite {
                        kind,
                        dir: MoveDir::Remove,
                        data: SiteData::R2Remove { anchor: f.anchor },
                    });
                }
            }
            for region in d.regions() {
                for (i, da) in region.iter().enumerate() {
                    for db in region.iter().skip(i + 1) {
                        let (ea, _) = idx.at(*da).unwrap();
                        let (eb, _) = idx.at(*db).unwrap();
                        if ea == eb {
                            // pushing an edge across itself is left to the
                            // kink moves
                            continue;
                        }
                        if d.oriented {
                            let along = |dart: &Dart, e: EdgeId| d.edge(e).unwrap().tail == *dart;
                            let flavor_parallel = along(da, ea) != along(db, eb);
                            let want_parallel = kind == MoveKind::R2Parallel;
                            if flavor_parallel != want_parallel {
                                continue;
                            }
                        } else if kind == MoveKind::R2Antiparallel {
                            continue;
                        }
                        for over_a in [true, false] {
                            out.push(MoveSite {
                                kind,
                                dir: MoveDir::Insert,
                                data: SiteData::R2Insert {
                                    dart_a: *da,
                                    dart_b: *db,
                                    over_a,
                                },
                            });
                        }
                    }
                }
            }
        }
        MoveKind::R3 => {
            for f in &faces {
                if f.sides != 3 || !f.interior || !f.empty {
                    continue;
                }
                if !f.darts.iter().all(crossing_at) {
                    continue;
                }
                let mut verts: Vec<VertId> = f.darts.iter().map(|x| x.vert).collect();
                verts.sort();
                verts.dedup();
                if verts.len() != 3 {
                    continue;
                }
                // a strand must pass over both others or under both: some
                // side keeps one parity at both of its ends
                let slidable = f.darts.iter().any(|dk| {
                    let (e, _) = idx.at(*dk).unwrap();
                    let e = d.edge(e).unwrap();
                    parity_odd(e.tail.port) == parity_odd(e.head.port)
                });
                if !slidable {
                    continue;
                }
                out.push(MoveSite {
                    kind,
                    dir: MoveDir::Remove,
                    data: SiteData::R3 { anchor: f.anchor },
                });
            }
        }
        MoveKind::R41 | MoveKind::R41Reversed => {
            if !d.oriented {
                return out;
            }
            for f in &faces {
                if f.sides != 3 || !f.interior || !f.empty {
                    continue;
                }
                let vcount = f.darts.iter().filter(|x| trivalent_at(x)).count();
                let ccount = f.darts.iter().filter(|x| crossing_at(x)).count();
                if vcount != 1 || ccount != 2 {
                    continue;
                }
                let mut darts = f.darts.clone();
                while !trivalent_at(&darts[0]) {
                    darts.rotate_left(1);
                }
                if darts[1].vert == darts[2].vert {
                    continue;
                }
                let strand_edge = idx.at(darts[1]).unwrap().0;
                let se = d.edge(strand_edge).unwrap();
                if parity_odd(se.tail.port) != parity_odd(se.head.port) {
                    continue; // strand must ride over both legs or under both
                }
                // the third leg must not feed back into the site
                let v = darts[0].vert;
                let p3 = (darts[0].port + 1) % 3;
                let l3_dart = Dart::new(v, p3);
                let far = d.alpha(&idx, l3_dart).unwrap();
                if far.vert == darts[1].vert || far.vert == darts[2].vert {
                    continue;
                }
                let sign = d.crossing_sign(&idx, darts[1].vert).unwrap();
                let want = if kind == MoveKind::R41 { 1 } else { -1 };
                if sign != want {
                    continue;
                }
                out.push(MoveSite {
                    kind,
                    dir: MoveDir::Remove,
                    data: SiteData::R41Remove { anchor: f.anchor },
                });
            }
            // insert: a leg piece running from a vertex straight to a crossing
            for (eid, e) in d.edges() {
                let (vd, cd) = if trivalent_at(&e.tail) && crossing_at(&e.head) {
                    (e.tail, e.head)
                } else if trivalent_at(&e.head) && crossing_at(&e.tail) {
                    (e.head, e.tail)
                } else {
                    continue;
                };
                // the other two legs must not feed the same crossing
                let wa = d
                    .alpha(&idx, Dart::new(vd.vert, (vd.port + 1) % 3))
                    .unwrap();
                let wb = d
                    .alpha(&idx, Dart::new(vd.vert, (vd.port + 2) % 3))
                    .unwrap();
                if wa.vert == cd.vert || wb.vert == cd.vert {
                    continue;
                }
                // locality: the faces flanking the leg piece must be empty
                let flanks_empty = faces
                    .iter()
                    .filter(|f| f.darts.contains(&vd) || f.darts.contains(&cd))
                    .all(|f| f.empty);
                if !flanks_empty {
                    continue;
                }
                let sign = d.crossing_sign(&idx, cd.vert).unwrap();
                // expanding one negative crossing yields two positive ones
                let want = if kind == MoveKind::R41 { -1 } else { 1 };
                if sign != want {
                    continue;
                }
                out.push(MoveSite {
                    kind,
                    dir: MoveDir::Insert,
                    data: SiteData::R41Insert { leg: eid },
                });
            }
        }
    }
    out
}

/// Order a join so the `from` side is the tail of the spliced edge. A stub
/// continues its surviving piece, so flow arrives at it when the piece heads
/// into it; an exposed port keeps the direction its cut edge had.
fn flow_join(d: &Diagram, a: End, b: End) -> (End, End) {
    if !d.oriented {
        return (a, b);
    }
    let idx = d.edge_index();
    let is_tail_side = |end: &End| -> Option<bool> {
        match end {
            End::Stub(x) => d.dir_at(&idx, *x).map(|dir| dir == PortDir::In),
            End::Port(x) => d.dir_at(&idx, *x).map(|dir| dir == PortDir::Out),
            End::New { .. } => None,
        }
    };
    match (is_tail_side(&a), is_tail_side(&b)) {
        (Some(true), _) | (_, Some(false)) => (a, b),
        (Some(false), _) | (_, Some(true)) => (b, a),
        (None, None) => (a, b),
    }
}

/// Order an internal join along a strand whose forward flow is known.
fn oriented_pair(forward: bool, a: End, b: End) -> (End, End) {
    if forward {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn apply_move(d: &Diagram, site: &MoveSite) -> Result<Diagram, MovesError> {
    let stale = |msg: &str| MovesError::StaleSite(msg.to_string());
    let idx = d.edge_index();
    let mut out = d.clone();
    match &site.data {
        SiteData::R1Remove { crossing, q } => {
            let c = *crossing;
            match d.vertex(c) {
                Some(v) if v.kind == VertexKind::Crossing => {}
                _ => return Err(stale("crossing gone")),
            }
            let dq = Dart::new(c, *q);
            let (loop_edge, _) = idx.at(dq).ok_or_else(|| stale("loop edge gone"))?;
            if d.edge(loop_edge).unwrap().other_end(dq) != Dart::new(c, (q + 1) % 4) {
                return Err(stale("loop edge moved"));
            }
            let s_in = End::Stub(Dart::new(c, (q + 2) % 4));
            let s_out = End::Stub(Dart::new(c, (q + 3) % 4));
            out.apply_surgery(&Surgery {
                delete_verts: vec![c],
                delete_edges: vec![loop_edge],
                cut_edges: vec![],
                new_verts: vec![],
                joins: vec![flow_join(d, s_in, s_out)],
            })?;
        }
        SiteData::R1Insert { edge, q } => {
            let e = d.edge(*edge).ok_or_else(|| stale("edge gone"))?.clone();
            // strand passes in at q+2, loop runs q -> q+1, out at q+3
            let np = |port: u8| End::New {
                idx: 0,
                port: port % 4,
            };
            out.apply_surgery(&Surgery {
                delete_verts: vec![],
                delete_edges: vec![],
                cut_edges: vec![*edge],
                new_verts: vec![VertexKind::Crossing],
                joins: vec![
                    (End::Port(e.tail), np(q + 2)),
                    (np(*q), np(q + 1)),
                    (np(q + 3), End::Port(e.head)),
                ],
            })?;
        }
        SiteData::R2Remove { anchor } => {
            let orbit = d.orbit_of(*anchor);
            if orbit.len() != 2 {
                return Err(stale("bigon gone"));
            }
            let (d1, d2) = (orbit[0], orbit[1]);
            let (c1, c2) = (d1.vert, d2.vert);
            let (e1, _) = idx.at(d1).unwrap();
            let (e2, _) = idx.at(d2).unwrap();
            // each side edge's external continuation is two ports away
            let side_port = |eid: EdgeId, at: VertId| -> u8 {
                let e = d.edge(eid).unwrap();
                if e.tail.vert == at {
                    e.tail.port
                } else {
                    e.head.port
                }
            };
            let e1_at_c1 = Dart::new(c1, (side_port(e1, c1) + 2) % 4);
            let e1_at_c2 = Dart::new(c2, (side_port(e1, c2) + 2) % 4);
            let e2_at_c1 = Dart::new(c1, (side_port(e2, c1) + 2) % 4);
            let e2_at_c2 = Dart::new(c2, (side_port(e2, c2) + 2) % 4);
            out.apply_surgery(&Surgery {
                delete_verts: vec![c1, c2],
                delete_edges: vec![e1, e2],
                cut_edges: vec![],
                new_verts: vec![],
                joins: vec![
                    flow_join(d, End::Stub(e1_at_c1), End::Stub(e1_at_c2)),
                    flow_join(d, End::Stub(e2_at_c1), End::Stub(e2_at_c2)),
                ],
            })?;
        }
        SiteData::R2Insert {
            dart_a,
            dart_b,
            over_a,
        } => {
            let (ea, _) = idx.at(*dart_a).ok_or_else(|| stale("edge gone"))?;
            let (eb, _) = idx.at(*dart_b).ok_or_else(|| stale("edge gone"))?;
            if ea == eb {
                return Err(stale("edge sides coincide"));
            }
            let alpha_a = d.edge(ea).unwrap().other_end(*dart_a);
            let alpha_b = d.edge(eb).unwrap().other_end(*dart_b);
            // Strand A walks away from dart_a through the low crossing, a
            // U-turn, and the high crossing; strand B runs from dart_b's end
            // through high then low. Compass cycles, counterclockwise:
            //   low:  (E, N, W, S) = (A to U-turn, B to high, A in, B out)
            //   high: (E, N, W, S) = (A from U-turn, B in, A out, B to low)
            let (low, high) = (0usize, 1);
            let sl = if *over_a {
                [3u8, 0, 1, 2] // under = B on (N, S)
            } else {
                [0, 1, 2, 3] // under = A on (E, W)
            };
            let (pe, pn, pw, ps) = (sl[0], sl[1], sl[2], sl[3]);
            let np = |i: usize, port: u8| End::New { idx: i, port };
            let a_forward = !d.oriented || d.edge(ea).unwrap().tail == *dart_a;
            let b_forward = !d.oriented || d.edge(eb).unwrap().tail == *dart_b;
            let joins: Vec<(End, End)> = vec![
                flow_join(d, End::Port(*dart_a), np(low, pw)),
                oriented_pair(a_forward, np(low, pe), np(high, pe)),
                flow_join(d, np(high, pw), End::Port(alpha_a)),
                flow_join(d, End::Port(*dart_b), np(high, pn)),
                oriented_pair(b_forward, np(high, ps), np(low, pn)),
                flow_join(d, np(low, ps), End::Port(alpha_b)),
            ];
            out.apply_surgery(&Surgery {
                delete_verts: vec![],
                delete_edges: vec![],
                cut_edges: vec![ea, eb],
                new_verts: vec![VertexKind::Crossing, VertexKind::Crossing],
                joins,
            })?;
        }
        SiteData::R3 { anchor } => {
            let orbit = d.orbit_of(*anchor);
            if orbit.len() != 3 {
                return Err(stale("triangle gone"));
            }
            apply_r3(d, &mut out, &orbit)?;
        }
        SiteData::R41Remove { anchor } => {
            let mut orbit = d.orbit_of(*anchor);
            if orbit.len() != 3 {
                return Err(stale("triangle gone"));
            }
            let trivalent_at =
                |dart: &Dart| d.vertex(dart.vert).map(|v| v.kind.is_trivalent()) == Some(true);
            if !orbit.iter().any(trivalent_at) {
                return Err(stale("vertex gone"));
            }
            while !trivalent_at(&orbit[0]) {
                orbit.rotate_left(1);
            }
            apply_r41_remove(d, &mut out, &orbit)?;
        }
        SiteData::R41Insert { leg } => {
            apply_r41_insert(d, &mut out, *leg)?;
        }
    }
    debug_assert!(
        out.validate().is_empty(),
        "move produced invalid diagram: {:?}",
        out.validate()
    );
    Ok(out)
}

fn apply_r3(d: &Diagram, out: &mut Diagram, orbit: &[Dart]) -> Result<(), MovesError> {
    let idx = d.edge_index();
    let (d0, d1, d2) = (orbit[0], orbit[1], orbit[2]);
    let (c0, c1, c2) = (d0.vert, d1.vert, d2.vert);
    let side = |dk: Dart| idx.at(dk).unwrap().0;
    let (e0, e1, e2) = (side(d0), side(d1), side(d2));
    let alpha = |dk: Dart, e: EdgeId| d.edge(e).unwrap().other_end(dk);
    // The face walk visits the corners clockwise with the triangle on the
    // right. Strand k runs along side e_k; its externals sit two ports away
    // from the side's ends.
    let a0 = Dart::new(c0, (d0.port + 2) % 4);
    let b0 = Dart::new(c1, (alpha(d0, e0).port + 2) % 4);
    let a1 = Dart::new(c1, (d1.port + 2) % 4);
    let b1 = Dart::new(c2, (alpha(d1, e1).port + 2) % 4);
    let a2 = Dart::new(c2, (d2.port + 2) % 4);
    let b2 = Dart::new(c0, (alpha(d2, e2).port + 2) % 4);
    // over-parities per strand pair, read off the old crossings
    let o01 = parity_odd(alpha(d0, e0).port); // strand 0 over strand 1 at c1
    let o12 = parity_odd(alpha(d1, e1).port); // strand 1 over strand 2 at c2
    let o20 = parity_odd(alpha(d2, e2).port); // strand 2 over strand 0 at c0
    // Slide strand 0 across the far corner c2. New crossings: B = S0 x S1 on
    // S1's ray beyond c2, A = S0 x S2 on S2's ray beyond c2, M = S1 x S2 at
    // the old c2 spot. Slot tables put each under strand on even ports; the
    // tuples list counterclockwise cycles.
    let (b, a, m) = (0usize, 1, 2);
    // B: (toward M, S0 in from a0, toward b1, S0 out toward A)
    let (bn_m, bn_in, bn_b1, bn_out) = if o01 { (0u8, 1, 2, 3) } else { (1, 2, 3, 0) };
    // A: (S0 out toward b0, toward M, S0 in from B, toward a2)
    let (na_b0, na_m, na_nb, na_a2) = if o20 { (0u8, 1, 2, 3) } else { (1, 2, 3, 0) };
    // M: (toward A, toward a1, toward b2, toward B)
    let (mm_na, mm_a1, mm_b2, mm_nb) = if o12 { (0u8, 1, 2, 3) } else { (3, 0, 1, 2) };
    let np = |i: usize, port: u8| End::New { idx: i, port };
    // forward flags: does each strand's flow agree with the walk direction?
    let fwd = |ext_in: Dart| {
        !d.oriented || d.dir_at(&idx, ext_in) == Some(PortDir::In)
    };
    let (f0, f1, f2) = (fwd(a0), fwd(a1), fwd(b2));
    let joins = vec![
        flow_join(d, End::Stub(a0), np(b, bn_in)),
        oriented_pair(f0, np(b, bn_out), np(a, na_nb)),
        flow_join(d, np(a, na_b0), End::Stub(b0)),
        flow_join(d, End::Stub(a1), np(m, mm_a1)),
        oriented_pair(f1, np(m, mm_nb), np(b, bn_m)),
        flow_join(d, np(b, bn_b1), End::Stub(b1)),
        flow_join(d, End::Stub(b2), np(m, mm_b2)),
        oriented_pair(f2, np(m, mm_na), np(a, na_m)),
        flow_join(d, np(a, na_a2), End::Stub(a2)),
    ];
    out.apply_surgery(&Surgery {
        delete_verts: vec![c0, c1, c2],
        delete_edges: vec![e0, e1, e2],
        cut_edges: vec![],
        new_verts: vec![
            VertexKind::Crossing,
            VertexKind::Crossing,
            VertexKind::Crossing,
        ],
        joins,
    })?;
    Ok(())
}

fn apply_r41_remove(d: &Diagram, out: &mut Diagram, orbit: &[Dart]) -> Result<(), MovesError> {
    let idx = d.edge_index();
    let d0 = orbit[0]; // at the trivalent vertex
    let d1 = orbit[1]; // at crossing 1, along the strand side
    let d2 = orbit[2]; // at crossing 2, along the second leg piece
    let v = d0.vert;
    let (c1, c2) = (d1.vert, d2.vert);
    let e_leg1 = idx.at(d0).unwrap().0;
    let e_strand = idx.at(d1).unwrap().0;
    let alpha = |dk: Dart, e: EdgeId| d.edge(e).unwrap().other_end(dk);
    // strand externals
    let s_in = Dart::new(c1, (d1.port + 2) % 4);
    let s_out = Dart::new(c2, (alpha(d1, e_strand).port + 2) % 4);
    // legs continue beyond the crossings
    let leg1_beyond = Dart::new(c1, (alpha(d0, e_leg1).port + 2) % 4);
    let leg2_beyond = Dart::new(c2, (d2.port + 2) % 4);
    // the vertex's remaining leg, cut and re-crossed by the strand
    let p3 = (d0.port + 1) % 3;
    let l3_dart = Dart::new(v, p3);
    let (l3, _) = idx.at(l3_dart).unwrap();
    let w = alpha(l3_dart, l3);
    let strand_over = parity_odd(d1.port);
    // New crossing on the third leg; counterclockwise cycle is
    // (leg to v, strand in, leg to w, strand out), under strand on even
    // ports.
    let s = if strand_over {
        [0u8, 1, 2, 3] // slots for (to_v, s_in, to_w, s_out)
    } else {
        [3, 0, 1, 2]
    };
    let (slot_v, slot_in, slot_w, slot_out) = (s[0], s[1], s[2], s[3]);
    let np = |port: u8| End::New { idx: 0, port };
    let joins = vec![
        flow_join(d, End::Stub(s_in), np(slot_in)),
        flow_join(d, np(slot_out), End::Stub(s_out)),
        flow_join(d, End::Port(l3_dart), np(slot_v)),
        flow_join(d, np(slot_w), End::Port(w)),
        flow_join(d, End::Stub(alpha(d0, e_leg1)), End::Stub(leg1_beyond)),
        flow_join(d, End::Stub(d2), End::Stub(leg2_beyond)),
    ];
    out.apply_surgery(&Surgery {
        delete_verts: vec![c1, c2],
        delete_edges: vec![e_strand],
        cut_edges: vec![l3],
        new_verts: vec![VertexKind::Crossing],
        joins,
    })?;
    Ok(())
}

fn apply_r41_insert(d: &Diagram, out: &mut Diagram, leg: EdgeId) -> Result<(), MovesError> {
    let idx = d.edge_index();
    let e = d
        .edge(leg)
        .ok_or_else(|| MovesError::StaleSite("leg gone".into()))?
        .clone();
    let trivalent_at =
        |dart: &Dart| d.vertex(dart.vert).map(|v| v.kind.is_trivalent()) == Some(true);
    let (vd, cd) = if trivalent_at(&e.tail) {
        (e.tail, e.head)
    } else {
        (e.head, e.tail)
    };
    let v = vd.vert;
    let c = cd.vert;
    if d.vertex(c).map(|x| x.kind) != Some(VertexKind::Crossing) {
        return Err(MovesError::StaleSite("crossing gone".into()));
    }
    // Around the crossing, counterclockwise from the leg's dart: the strand
    // side the re-route enters first, the leg's continuation, and the strand
    // side it exits from.
    let s_first = Dart::new(c, (cd.port + 1) % 4);
    let leg_beyond = Dart::new(c, (cd.port + 2) % 4);
    let s_last = Dart::new(c, (cd.port + 3) % 4);
    let strand_over = parity_odd(s_first.port);
    // the vertex's other two legs, cut and re-crossed on the far side; the
    // strand meets the (vd.port + 2) leg first
    let la_dart = Dart::new(v, (vd.port + 2) % 3);
    let lb_dart = Dart::new(v, (vd.port + 1) % 3);
    let (la, _) = idx.at(la_dart).unwrap();
    let (lb, _) = idx.at(lb_dart).unwrap();
    let wa = d.edge(la).unwrap().other_end(la_dart);
    let wb = d.edge(lb).unwrap().other_end(lb_dart);
    // Crossing A on the first leg: counterclockwise cycle (leg beyond to wa,
    // strand in, leg to v, strand toward B). Crossing B on the second leg:
    // (leg beyond to wb, strand from A, leg to v, strand out).
    let (ca, cb) = (0usize, 1);
    let sa = if strand_over {
        [0u8, 1, 2, 3] // slots for (to_wa, s_in, to_v, to_cb)
    } else {
        [3, 0, 1, 2]
    };
    let (a_wa, a_in, a_v, a_out) = (sa[0], sa[1], sa[2], sa[3]);
    let sb = if strand_over {
        [0u8, 1, 2, 3] // slots for (to_wb, from_ca, to_v, s_out)
    } else {
        [3, 0, 1, 2]
    };
    let (b_wb, b_in, b_v, b_out) = (sb[0], sb[1], sb[2], sb[3]);
    let np = |i: usize, port: u8| End::New { idx: i, port };
    // does the strand's flow enter at the first-met side?
    let s_forward = !d.oriented || d.dir_at(&idx, s_first) == Some(PortDir::In);
    let joins = vec![
        // the crossed leg straightens out
        flow_join(d, End::Stub(cd), End::Stub(leg_beyond)),
        // strand re-routes through both new crossings
        flow_join(d, End::Stub(s_first), np(ca, a_in)),
        oriented_pair(s_forward, np(ca, a_out), np(cb, b_in)),
        flow_join(d, np(cb, b_out), End::Stub(s_last)),
        // the two cut legs pass through their new crossings
        flow_join(d, End::Port(la_dart), np(ca, a_v)),
        flow_join(d, np(ca, a_wa), End::Port(wa)),
        flow_join(d, End::Port(lb_dart), np(cb, b_v)),
        flow_join(d, np(cb, b_wb), End::Port(wb)),
    ];
    out.apply_surgery(&Surgery {
        delete_verts: vec![c],
        delete_edges: vec![],
        cut_edges: vec![la, lb],
        new_verts: vec![VertexKind::Crossing, VertexKind::Crossing],
        joins,
    })?;
    Ok(())
}

// --- random generation -------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub strands: usize,
    pub rows: usize,
    pub vertex_density: f64,
    pub crossing_density: f64,
    pub close: bool,
    pub oriented: bool,
    pub seed: u64,
}

/// Planar-by-construction random tangle, deterministic per seed: elementary
/// rows stacked on `strands` bottom wires.
pub fn random_tangle(spec: &RandomSpec) -> Result<Diagram, MovesError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let flows: Vec<bool> = (0..spec.strands).map(|_| rng.random_bool(0.5)).collect();
    let mut st = Stacker::new(spec.oriented, &flows);
    let cup_w = 0.15;
    let cap_w = 0.15;
    let vert_w = if spec.oriented {
        spec.vertex_density
    } else {
        0.0
    };
    let total = spec.crossing_density + vert_w + cup_w + cap_w;
    for _ in 0..spec.rows {
        let roll = rng.random_range(0.0..total.max(1e-9));
        let n = st.wire_count();
        if roll < spec.crossing_density {
            if n >= 2 {
                let pos = rng.random_range(0..n - 1);
                let kind = if rng.random_bool(0.5) {
                    BoxKind::CrossUnderLeft
                } else {
                    BoxKind::CrossUnderRight
                };
                let _ = st.apply(pos, kind);
            }
        } else if roll < spec.crossing_density + vert_w {
            if n >= 1 {
                let legs = if n >= 2 && rng.random_bool(0.5) { 2 } else { 1 };
                let pos = rng.random_range(0..=n - legs);
                let same_flow = (0..legs).all(|k| st.wire_flow(pos + k) == st.wire_flow(pos));
                if same_flow {
                    let _ = st.apply(
                        pos,
                        BoxKind::Vertex {
                            legs_down: legs as u8,
                        },
                    );
                }
            }
        } else if roll < spec.crossing_density + vert_w + cup_w {
            let pos = rng.random_range(0..=n);
            let _ = st.apply(
                pos,
                BoxKind::Cup {
                    left_flow_up: rng.random_bool(0.5),
                },
            );
        } else if n >= 2 {
            let pos = rng.random_range(0..n - 1);
            let _ = st.apply(pos, BoxKind::Cap);
        }
    }
    let d = if spec.close {
        st.finish_closed().map_err(MovesError::InfeasibleSpec)?
    } else {
        st.finish_open()
    };
    debug_assert!(d.validate().is_empty());
    Ok(d)
}

// --- invariance harness --------------------------------------------------------

pub enum Theory<'a> {
    Kauffman(&'a KauffmanRules),
    Su3(&'a RuleSet),
}

impl Theory<'_> {
    pub fn eval(&self, d: &Diagram) -> Result<StateVector, MovesError> {
        match self {
            Theory::Kauffman(rules) => Ok(kauffman::bracket_rewrite_with(d, rules)?),
            Theory::Su3(rs) => Ok(spider::su3_rewrite(d, rs)?),
        }
    }

    pub fn kink_factor(&self, positive: bool) -> LaurentPoly {
        match self {
            Theory::Kauffman(_) => {
                // one positive kink multiplies the bracket by -A^3
                -&LaurentPoly::var_pow("A", if positive { 3 } else { -3 })
            }
            Theory::Su3(rs) => {
                // a^-4 y^-8 for a positive kink, a^4 y^8 for a negative one
                let ay = &rs.a.pow(4) * &rs.y.pow(8);
                if positive {
                    ay.inverse_monomial().expect("unit parameters")
                } else {
                    ay
                }
            }
        }
    }
}

#[derive(Debug)]
pub struct SiteCheck {
    pub kind: MoveKind,
    pub dir: MoveDir,
    pub site: String,
    pub pass: bool,
    pub note: String,
}

#[derive(Debug)]
pub struct InvarianceReport {
    pub checks: Vec<SiteCheck>,
}

impl InvarianceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&SiteCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Evaluate before and after every applicable move site and compare exactly.
/// RII, RIII and the vertex slide must leave the value unchanged; RI must
/// scale it by exactly the kink factor.
pub fn invariance_report(
    d: &Diagram,
    theory: &Theory,
    kinds: &[MoveKind],
) -> Result<InvarianceReport, MovesError> {
    let mut checks = Vec::new();
    let base = theory.eval(d)?;
    for kind in kinds {
        for site in find_move_sites(d, *kind) {
            let moved = apply_move(d, &site)?;
            let after = theory.eval(&moved)?;
            let (pass, note) = match (&site.data, site.dir) {
                (SiteData::R1Remove { q, .. }, _) => {
                    let factor = theory.kink_factor(kink_positive(*q));
                    (
                        base == after.scale(&factor),
                        format!("kink factor {}", factor.to_canonical_text()),
                    )
                }
                (SiteData::R1Insert { q, .. }, _) => {
                    let factor = theory.kink_factor(kink_positive(*q));
                    (
                        after == base.scale(&factor),
                        format!("kink factor {}", factor.to_canonical_text()),
                    )
                }
                _ => (base == after, "exact invariance".to_string()),
            };
            checks.push(SiteCheck {
                kind: *kind,
                dir: site.dir,
                site: format!("{:?}", site.data),
                pass,
                note,
            });
        }
    }
    Ok(InvarianceReport { checks })
}
