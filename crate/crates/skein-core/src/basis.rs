//! State-space bases: crossingless matchings (Kauffman) and non-elliptic
//! webs (SU(3)), enumerated exhaustively with canonical indexing.
//!
//! Enumeration grows diagrams inward from the boundary. The first open point
//! of the active region either connects by an arc to another open point
//! (splitting the region in two) or feeds a fresh trivalent vertex whose
//! remaining legs join the region boundary. Each completed interior face is
//! checked against the six-side bound the moment it closes, which prunes the
//! search far below the vertex budget on the signatures that matter.

use std::collections::BTreeSet;

use crate::diagram::{Dart, Diagram, Sign, VertexKind};

/// Boundary data for a basis enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundarySignature {
    /// Unsigned marked points (Kauffman mode).
    Kauffman(usize),
    /// Signed marked points, counterclockwise (SU(3) mode).
    Su3(Vec<Sign>),
}

/// A canonical basis diagram together with its key.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub key: String,
    pub diagram: Diagram,
}

/// The nth Catalan number, exactly.
pub fn catalan(n: u32) -> u128 {
    // C(2n, n) / (n + 1), computed without intermediate overflow for the
    // sizes this crate meets.
    let mut binom: u128 = 1;
    for k in 1..=n as u128 {
        binom = binom * (n as u128 + k) / k;
    }
    binom / (n as u128 + 1)
}

#[derive(Debug, Clone, Copy)]
struct FPoint {
    /// `Plus` when the eventual edge flows from the slot into the region.
    sign: Sign,
    slot: Dart,
}

#[derive(Debug, Clone, Copy)]
struct Gap {
    real: bool,
    sides: u32,
}

#[derive(Debug, Clone)]
struct Frontier {
    points: Vec<FPoint>,
    /// `gaps[i]` sits between `points[i]` and `points[(i + 1) % len]`.
    gaps: Vec<Gap>,
}

struct Search {
    oriented: bool,
    out: Vec<Diagram>,
}

impl Search {
    fn viable(&self, worklist: &[Frontier], budget: u32) -> bool {
        let mut need = 0u32;
        for f in worklist {
            let plus = f.points.iter().filter(|p| p.sign == Sign::Plus).count() as i64;
            let minus = f.points.len() as i64 - plus;
            if self.oriented {
                let excess = plus - minus;
                if excess.rem_euclid(3) != 0 {
                    return false;
                }
                need += (excess.unsigned_abs() / 3) as u32;
            } else if f.points.len() % 2 != 0 {
                return false;
            }
        }
        need <= budget
    }

    fn run(&mut self, diagram: Diagram, worklist: Vec<Frontier>, budget: u32) {
        if !self.viable(&worklist, budget) {
            return;
        }
        let mut worklist = worklist;
        let frontier = loop {
            match worklist.first() {
                None => {
                    self.out.push(diagram);
                    return;
                }
                Some(f) if f.points.is_empty() => {
                    worklist.remove(0);
                }
                Some(_) => break worklist.remove(0),
            }
        };
        let n = frontier.points.len();
        let p0 = frontier.points[0];

        // arc moves: connect point 0 to a compatible point j
        for j in 1..n {
            let pj = frontier.points[j];
            if self.oriented && pj.sign == p0.sign {
                continue;
            }
            // faces completed by this arc: adjacent connections close off
            // an empty region whose sides are the flanking gap plus the arc
            let g = |i: usize| frontier.gaps[i];
            let f1_empty = j == 1;
            let f2_empty = j == n - 1;
            let mut elliptic = false;
            if f1_empty && !g(0).real && g(0).sides + 1 < 6 {
                elliptic = true;
            }
            if f2_empty && !g(n - 1).real && g(n - 1).sides + 1 < 6 {
                elliptic = true;
            }
            if self.oriented && elliptic {
                continue;
            }
            let mut d2 = diagram.clone();
            let (tail, head) = if !self.oriented || p0.sign == Sign::Plus {
                (p0.slot, pj.slot)
            } else {
                (pj.slot, p0.slot)
            };
            d2.fresh_edge(tail, head);
            let mut next: Vec<Frontier> = Vec::new();
            if !f1_empty {
                let points = frontier.points[1..j].to_vec();
                let mut gaps: Vec<Gap> = frontier.gaps[1..j - 1].to_vec();
                gaps.push(Gap {
                    real: g(j - 1).real || g(0).real,
                    sides: g(j - 1).sides + 1 + g(0).sides,
                });
                next.push(Frontier { points, gaps });
            }
            if !f2_empty {
                let points = frontier.points[j + 1..].to_vec();
                let mut gaps: Vec<Gap> = frontier.gaps[j + 1..n - 1].to_vec();
                gaps.push(Gap {
                    real: g(n - 1).real || g(j).real,
                    sides: g(n - 1).sides + 1 + g(j).sides,
                });
                next.push(Frontier { points, gaps });
            }
            next.extend(worklist.iter().cloned());
            self.run(d2, next, budget);
        }

        // vertex move: point 0 feeds a fresh trivalent vertex
        if self.oriented && budget > 0 {
            // single-point frontiers never pass the sign-balance prune
            debug_assert!(n >= 2);
            let kind = if p0.sign == Sign::Plus {
                VertexKind::Sink
            } else {
                VertexKind::Source
            };
            let mut d2 = diagram.clone();
            let v = d2.fresh_vertex(kind);
            let (tail, head) = if p0.sign == Sign::Plus {
                (p0.slot, Dart::new(v, 0))
            } else {
                (Dart::new(v, 0), p0.slot)
            };
            d2.fresh_edge(tail, head);
            let leg_sign = p0.sign.flip();
            let a = FPoint {
                sign: leg_sign,
                slot: Dart::new(v, 1),
            };
            let b = FPoint {
                sign: leg_sign,
                slot: Dart::new(v, 2),
            };
            let mut points = vec![a, b];
            points.extend_from_slice(&frontier.points[1..]);
            let mut gaps = vec![Gap {
                real: false,
                sides: 0,
            }];
            let g0 = frontier.gaps[0];
            gaps.push(Gap {
                real: g0.real,
                sides: g0.sides + 1,
            });
            gaps.extend_from_slice(&frontier.gaps[1..n - 1]);
            let glast = frontier.gaps[n - 1];
            gaps.push(Gap {
                real: glast.real,
                sides: glast.sides + 1,
            });
            let mut next = vec![Frontier { points, gaps }];
            next.extend(worklist.iter().cloned());
            self.run(d2, next, budget - 1);
        }
    }
}

fn enumerate(signature: &BoundarySignature, max_vertices: u32) -> Vec<BasisElement> {
    let (oriented, signs) = match signature {
        BoundarySignature::Kauffman(n) => (false, vec![Sign::Plus; *n]),
        BoundarySignature::Su3(signs) => (true, signs.clone()),
    };
    let diagram = Diagram::new(oriented, signs.clone());
    // frontier points follow the region walk, which keeps the region on the
    // right: clockwise along the disk boundary
    let n = signs.len();
    let points: Vec<FPoint> = (0..n)
        .map(|k| {
            let i = (n - k) % n;
            FPoint {
                sign: signs[i],
                slot: diagram.boundary_dart(i).unwrap(),
            }
        })
        .collect();
    let gaps = vec![
        Gap {
            real: true,
            sides: 0
        };
        points.len()
    ];
    let worklist = if points.is_empty() {
        Vec::new()
    } else {
        vec![Frontier { points, gaps }]
    };
    let mut search = Search {
        oriented,
        out: Vec::new(),
    };
    search.run(diagram, worklist, max_vertices);

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut elements: Vec<BasisElement> = Vec::new();
    for d in search.out {
        debug_assert!(d.validate().is_empty(), "enumerated diagram invalid");
        if oriented && !d.is_non_elliptic_web() {
            continue;
        }
        let key = d.canonical_key().expect("crossing-free by construction");
        if seen.insert(key.clone()) {
            elements.push(BasisElement { key, diagram: d });
        }
    }
    elements.sort_by(|a, b| a.key.cmp(&b.key));
    elements
}

/// All crossingless matchings of the signature, in canonical order. An odd
/// point count yields the empty list.
pub fn enumerate_matchings(signature: &BoundarySignature) -> Vec<BasisElement> {
    let n = match signature {
        BoundarySignature::Kauffman(n) => *n,
        BoundarySignature::Su3(signs) => signs.len(),
    };
    if n % 2 != 0 {
        return Vec::new();
    }
    enumerate(&BoundarySignature::Kauffman(n), 0)
}

/// All non-elliptic webs with at most `max_vertices` trivalent vertices
/// attaching to the signature, deduplicated and in canonical order.
///
/// Results are complete relative to the vertex budget; the signatures this
/// crate asserts on (sizes up to six) have all their webs within small
/// budgets, so the default of 12 is a wide margin.
pub fn enumerate_webs(signature: &BoundarySignature, max_vertices: u32) -> Vec<BasisElement> {
    let signs = match signature {
        BoundarySignature::Su3(signs) => signs.clone(),
        BoundarySignature::Kauffman(n) => vec![Sign::Plus; *n],
    };
    enumerate(&BoundarySignature::Su3(signs), max_vertices)
}
