//! The SU(3) state-function family: parameterized reduction rules, rewriting
//! to non-elliptic normal form, the symbolic identity suite, move expansion
//! checks, twisting operators, and the literature normalization adapters.

use rand::Rng;
use thiserror::Error;

use crate::diagram::{
    CircleId, Dart, Diagram, DiagramError, End, PortDir, Surgery, VertId, VertexKind,
};
use crate::ring::{Exponent, LaurentPoly, RingError, SignedMonomial, Var};
use crate::samples::{BoxKind, Stacker};
use crate::state::{Signature, StateVector};

#[derive(Debug, Error)]
pub enum SpiderError {
    #[error("state-function parameters must be nonzero")]
    ZeroParameter,
    #[error("state-function parameters must be invertible monomials, got {0}")]
    NonUnitParameter(String),
    #[error("no such crossing: {0:?}")]
    NoSuchCrossing(VertId),
    #[error("crossing strands are not coherently oriented")]
    IncoherentOrientation,
    #[error("feature is not reducible: {0}")]
    NotReducible(String),
    #[error("crossing twist needs c^3 = 1 or a vertex-free diagram")]
    IllegalCrossingTwist,
    #[error("the writhe normalization is defined for vertex-free diagrams only")]
    KhovanovRequiresVertexFree,
    #[error("operation requires an oriented diagram")]
    NotOriented,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The SU(3) parameters together with every derived rule coefficient.
///
/// A positive crossing resolves to `x * fourn + y * fourv`, a negative one
/// to `u * fourn + v * fourv`; an empty square face splits into its two leg
/// pairings each weighted `a`, a bubble contracts to `beta` times an edge,
/// and a free circle is worth `tau` times the empty diagram.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub a: LaurentPoly,
    pub y: LaurentPoly,
    pub x: LaurentPoly,
    pub u: LaurentPoly,
    pub v: LaurentPoly,
    pub beta: LaurentPoly,
    pub tau: LaurentPoly,
}

/// Build the rule set from the two parameters:
/// `x = 1/(y^2 a)`, `u = y^2 a`, `v = 1/(y a)`,
/// `beta = -1/(y^3 a) - y^3 a^2`, `tau = a^3 y^6 + 1 + a^-3 y^-6`.
pub fn su3_params(a: LaurentPoly, y: LaurentPoly) -> Result<RuleSet, SpiderError> {
    if a.is_zero() || y.is_zero() {
        return Err(SpiderError::ZeroParameter);
    }
    let unit_inv = |p: &LaurentPoly| -> Result<LaurentPoly, SpiderError> {
        p.inverse_monomial()
            .map_err(|_| SpiderError::NonUnitParameter(p.to_canonical_text()))
    };
    let y2a = &(&y * &y) * &a;
    let y3a = &(&(&y * &y) * &y) * &a;
    let x = unit_inv(&y2a)?;
    let u = y2a.clone();
    let v = unit_inv(&(&y * &a))?;
    let beta = -&(&unit_inv(&y3a)? + &(&y3a * &a));
    let a3y6 = &(&y3a * &y3a) * &a;
    let tau = &(&a3y6 + &LaurentPoly::one()) + &unit_inv(&a3y6)?;
    let rs = RuleSet {
        a,
        y,
        x,
        u,
        v,
        beta,
        tau,
    };
    // the defining identities hold by construction; keep them as hard checks
    assert!((&rs.x * &rs.u - LaurentPoly::one()).is_zero());
    assert!((&(&rs.y * &rs.v) * &rs.a - LaurentPoly::one()).is_zero());
    let xv_uy = &(&rs.x * &rs.v) + &(&rs.u * &rs.y);
    assert!((&(&rs.tau + &(&xv_uy * &rs.beta)) + &LaurentPoly::one()).is_zero());
    let sq = &(&(&rs.x * &rs.x) + &(&(&rs.x * &rs.y) * &rs.beta)) + &(&(&rs.y * &rs.y) * &rs.a);
    assert!(sq.is_zero());
    Ok(rs)
}

/// Fully symbolic rule set in the variables `a` and `y`.
pub fn symbolic_params() -> RuleSet {
    su3_params(LaurentPoly::var("a"), LaurentPoly::var("y")).expect("symbols are units")
}

/// The standard specialization `a = 1`: one free variable `y`.
pub fn standard_params() -> RuleSet {
    su3_params(LaurentPoly::one(), LaurentPoly::var("y")).expect("units")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleCoeff {
    X,
    U,
    V,
    Beta,
    Tau,
}

impl RuleCoeff {
    pub fn all() -> [RuleCoeff; 5] {
        [
            RuleCoeff::X,
            RuleCoeff::U,
            RuleCoeff::V,
            RuleCoeff::Beta,
            RuleCoeff::Tau,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleCoeff::X => "x",
            RuleCoeff::U => "u",
            RuleCoeff::V => "v",
            RuleCoeff::Beta => "beta",
            RuleCoeff::Tau => "tau",
        }
    }
}

/// A rule set with one coefficient bumped by 1, for falsification runs.
pub fn perturbed(base: &RuleSet, which: RuleCoeff) -> RuleSet {
    let mut rs = base.clone();
    let bump = |p: &LaurentPoly| p + &LaurentPoly::one();
    match which {
        RuleCoeff::X => rs.x = bump(&rs.x),
        RuleCoeff::U => rs.u = bump(&rs.u),
        RuleCoeff::V => rs.v = bump(&rs.v),
        RuleCoeff::Beta => rs.beta = bump(&rs.beta),
        RuleCoeff::Tau => rs.tau = bump(&rs.tau),
    }
    rs
}

/// The six named residuals of the identity suite, all identically zero in
/// `Q[a^(+-), y^(+-)]` for a well-formed rule set.
pub fn su3_identity_suite(rs: &RuleSet) -> Vec<(String, LaurentPoly)> {
    let one = LaurentPoly::one();
    let xv_uy = &(&rs.x * &rs.v) + &(&rs.u * &rs.y);
    vec![
        ("xu_minus_one".into(), &rs.x * &rs.u - one.clone()),
        (
            "yva_minus_one".into(),
            &(&rs.y * &rs.v) * &rs.a - one.clone(),
        ),
        (
            "yvbeta_plus_xv_plus_uy".into(),
            &(&(&rs.y * &rs.v) * &rs.beta) + &xv_uy,
        ),
        (
            "tau_plus_bubble_pair".into(),
            &(&rs.tau + &(&xv_uy * &rs.beta)) + &one,
        ),
        (
            "square_redundancy".into(),
            &(&(&rs.x * &rs.x) + &(&(&rs.x * &rs.y) * &rs.beta)) + &(&(&rs.y * &rs.y) * &rs.a),
        ),
        ("xy_minus_v".into(), &rs.x * &rs.y - rs.v.clone()),
    ]
}

fn port_dirs(d: &Diagram, c: VertId) -> Result<[PortDir; 4], SpiderError> {
    let idx = d.edge_index();
    let mut dirs = [PortDir::Out; 4];
    for (p, dir) in dirs.iter_mut().enumerate() {
        *dir = d
            .dir_at(&idx, Dart::new(c, p as u8))
            .ok_or(SpiderError::IncoherentOrientation)?;
    }
    if dirs[0] == dirs[2] || dirs[1] == dirs[3] {
        return Err(SpiderError::IncoherentOrientation);
    }
    Ok(dirs)
}

/// Resolve one crossing into its two weighted smoothings: the coherent
/// parallel resolution (`fourn`) and the two-vertex H resolution (`fourv`).
pub fn resolve_crossing(
    d: &Diagram,
    crossing: VertId,
    rs: &RuleSet,
) -> Result<Vec<(Diagram, LaurentPoly)>, SpiderError> {
    if !d.oriented {
        return Err(SpiderError::NotOriented);
    }
    match d.vertex(crossing) {
        Some(v) if v.kind == VertexKind::Crossing => {}
        _ => return Err(SpiderError::NoSuchCrossing(crossing)),
    }
    let dirs = port_dirs(d, crossing)?;
    let positive = dirs[0] == dirs[1];
    let (nc, vc) = if positive {
        (rs.x.clone(), rs.y.clone())
    } else {
        (rs.u.clone(), rs.v.clone())
    };
    let stub = |p: usize| End::Stub(Dart::new(crossing, (p % 4) as u8));
    // a corner join runs from the inward port to the outward port
    let corner = |p: usize| -> (End, End) {
        if dirs[p % 4] == PortDir::In {
            (stub(p), stub(p + 1))
        } else {
            (stub(p + 1), stub(p))
        }
    };
    let corners = if positive { [1usize, 3] } else { [0, 2] };
    let mut parallel = d.clone();
    parallel.apply_surgery(&Surgery {
        delete_verts: vec![crossing],
        delete_edges: vec![],
        cut_edges: vec![],
        new_verts: vec![],
        joins: vec![corner(corners[0]), corner(corners[1])],
    })?;

    // H resolution: the two inward strands feed a sink, the source feeds the
    // two outward strands, and the middle edge runs source -> sink
    let in_pair = (0..4)
        .find(|p| dirs[*p] == PortDir::In && dirs[(*p + 1) % 4] == PortDir::In)
        .expect("coherent crossing has an adjacent inward pair");
    let out_pair = (0..4)
        .find(|p| dirs[*p] == PortDir::Out && dirs[(*p + 1) % 4] == PortDir::Out)
        .expect("coherent crossing has an adjacent outward pair");
    let sink = 0usize;
    let source = 1usize;
    let mut hres = d.clone();
    hres.apply_surgery(&Surgery {
        delete_verts: vec![crossing],
        delete_edges: vec![],
        cut_edges: vec![],
        new_verts: vec![VertexKind::Sink, VertexKind::Source],
        joins: vec![
            (stub(in_pair), End::New { idx: sink, port: 1 }),
            (
                stub(in_pair + 1),
                End::New { idx: sink, port: 2 },
            ),
            (
                End::New {
                    idx: source,
                    port: 1,
                },
                stub(out_pair),
            ),
            (
                End::New {
                    idx: source,
                    port: 2,
                },
                stub(out_pair + 1),
            ),
            (
                End::New {
                    idx: source,
                    port: 0,
                },
                End::New { idx: sink, port: 0 },
            ),
        ],
    })?;
    Ok(vec![(parallel, nc), (hres, vc)])
}

/// A reducible local feature of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    /// An empty vertex-less circle.
    Circle(CircleId),
    /// An empty interior two-sided face between two trivalent vertices.
    Bubble(Dart),
    /// An empty interior four-sided face bounded by four trivalent vertices.
    Square(Dart),
}

/// All currently reducible features, in the engine's deterministic order:
/// circles, then bubbles, then squares.
pub fn reducible_features(d: &Diagram) -> Vec<Feature> {
    let mut out = Vec::new();
    let occupied: std::collections::BTreeSet<CircleId> = d
        .placements()
        .filter_map(|(_, region)| match region {
            crate::diagram::Region::Inside(c) => Some(c),
            _ => None,
        })
        .collect();
    for (id, _) in d.circles() {
        if !occupied.contains(&id) {
            out.push(Feature::Circle(id));
        }
    }
    let trivalent = |dart: &Dart| d.vertex(dart.vert).map(|v| v.kind.is_trivalent()) == Some(true);
    for f in d.faces() {
        if !f.interior || !f.empty {
            continue;
        }
        if !f.darts.iter().all(trivalent) {
            continue;
        }
        let mut verts: Vec<VertId> = f.darts.iter().map(|x| x.vert).collect();
        verts.sort();
        verts.dedup();
        if f.sides == 2 && verts.len() == 2 {
            out.push(Feature::Bubble(f.anchor));
        } else if f.sides == 4 && verts.len() == 4 {
            out.push(Feature::Square(f.anchor));
        }
    }
    out
}

/// Apply one face rule: bubble -> `beta` times an edge, square -> the two
/// leg pairings each weighted `a`, circle -> `tau` times the rest.
pub fn reduce_face(
    d: &Diagram,
    feature: Feature,
    rs: &RuleSet,
) -> Result<Vec<(Diagram, LaurentPoly)>, SpiderError> {
    if !d.oriented {
        return Err(SpiderError::NotOriented);
    }
    if !reducible_features(d).contains(&feature) {
        return Err(SpiderError::NotReducible(format!("{:?}", feature)));
    }
    match feature {
        Feature::Circle(id) => {
            let mut out = d.clone();
            out.remove_circle_reparent(id)?;
            Ok(vec![(out, rs.tau.clone())])
        }
        Feature::Bubble(anchor) => {
            let orbit = d.orbit_of(anchor);
            let idx = d.edge_index();
            let verts: Vec<VertId> = {
                let mut vs: Vec<VertId> = orbit.iter().map(|x| x.vert).collect();
                vs.sort();
                vs.dedup();
                vs
            };
            let bigon_edges: Vec<_> = orbit.iter().map(|x| idx.at(*x).unwrap().0).collect();
            // each vertex's remaining port is its leg
            let mut legs = Vec::new();
            for vtx in &verts {
                for p in 0..3u8 {
                    let dart = Dart::new(*vtx, p);
                    let (eid, _) = idx.at(dart).unwrap();
                    if !bigon_edges.contains(&eid) {
                        legs.push(dart);
                    }
                }
            }
            debug_assert_eq!(legs.len(), 2);
            let (from, to) = if d.vertex(legs[0].vert).unwrap().kind == VertexKind::Sink {
                (legs[0], legs[1])
            } else {
                (legs[1], legs[0])
            };
            let mut out = d.clone();
            out.apply_surgery(&Surgery {
                delete_verts: verts,
                delete_edges: bigon_edges,
                cut_edges: vec![],
                new_verts: vec![],
                joins: vec![(End::Stub(from), End::Stub(to))],
            })?;
            Ok(vec![(out, rs.beta.clone())])
        }
        Feature::Square(anchor) => {
            let orbit = d.orbit_of(anchor);
            let idx = d.edge_index();
            // the orbit walks the face, so its vertices are the square's
            // corners in cyclic order
            let corner_verts: Vec<VertId> = orbit.iter().map(|x| x.vert).collect();
            let side_edges: Vec<_> = orbit.iter().map(|x| idx.at(*x).unwrap().0).collect();
            let mut legs = Vec::new();
            for vtx in &corner_verts {
                for p in 0..3u8 {
                    let dart = Dart::new(*vtx, p);
                    let (eid, _) = idx.at(dart).unwrap();
                    if !side_edges.contains(&eid) {
                        legs.push(dart);
                    }
                }
            }
            debug_assert_eq!(legs.len(), 4);
            let ordered_join = |a: Dart, b: Dart| -> (End, End) {
                if d.vertex(a.vert).unwrap().kind == VertexKind::Sink {
                    (End::Stub(a), End::Stub(b))
                } else {
                    (End::Stub(b), End::Stub(a))
                }
            };
            let mut results = Vec::new();
            for pairing in [[(0usize, 1), (2, 3)], [(1, 2), (3, 0)]] {
                let mut out = d.clone();
                out.apply_surgery(&Surgery {
                    delete_verts: corner_verts.clone(),
                    delete_edges: side_edges.clone(),
                    cut_edges: vec![],
                    new_verts: vec![],
                    joins: pairing
                        .iter()
                        .map(|(i, j)| ordered_join(legs[*i], legs[*j]))
                        .collect(),
                })?;
                results.push((out, rs.a.clone()));
            }
            Ok(results)
        }
    }
}

fn measure(d: &Diagram) -> (usize, usize, usize) {
    (d.crossing_count(), d.trivalent_count(), d.circle_count())
}

enum Redex {
    Crossing(VertId),
    Face(Feature),
}

fn rewrite_inner<R: Rng>(
    d: &Diagram,
    rs: &RuleSet,
    mut rng: Option<&mut R>,
) -> Result<StateVector, SpiderError> {
    if !d.oriented {
        return Err(SpiderError::NotOriented);
    }
    let mut out = StateVector::new(Signature::of(d));
    let mut work: Vec<(Diagram, LaurentPoly)> = vec![(d.clone(), LaurentPoly::one())];
    while let Some((cur, coeff)) = work.pop() {
        let before = measure(&cur);
        // redexes in the deterministic schedule order: crossings first, then
        // circles, bubbles, squares
        let mut redexes: Vec<Redex> = cur.crossings().into_iter().map(Redex::Crossing).collect();
        redexes.extend(reducible_features(&cur).into_iter().map(Redex::Face));
        if redexes.is_empty() {
            debug_assert!(
                cur.circle_count() == 0
                    && cur.faces().iter().all(|f| !f.interior || f.sides >= 6),
                "normal form must be a non-elliptic web"
            );
            out.add(cur, coeff)?;
            continue;
        }
        let pick = match rng {
            Some(ref mut r) => r.random_range(0..redexes.len()),
            None => 0,
        };
        let branches = match &redexes[pick] {
            Redex::Crossing(c) => resolve_crossing(&cur, *c, rs)?,
            Redex::Face(f) => reduce_face(&cur, *f, rs)?,
        };
        for (next, factor) in branches {
            assert!(
                measure(&next) < before,
                "termination measure must strictly decrease"
            );
            work.push((next, &coeff * &factor));
        }
    }
    Ok(out)
}

/// Rewrite to non-elliptic normal form with the deterministic schedule.
pub fn su3_rewrite(d: &Diagram, rs: &RuleSet) -> Result<StateVector, SpiderError> {
    rewrite_inner::<rand::rngs::ThreadRng>(d, rs, None)
}

/// Rewrite choosing a uniformly random applicable redex at every step.
pub fn su3_rewrite_randomized<R: Rng>(
    d: &Diagram,
    rs: &RuleSet,
    rng: &mut R,
) -> Result<StateVector, SpiderError> {
    rewrite_inner(d, rs, Some(rng))
}

// --- move expansion checks -------------------------------------------------

/// Names and both sides of the moves the uniqueness argument expands: the
/// two oriented RII forms, RIII, the vertex slide in both
/// strand orientations, and every all-crossings-switched variant.
pub fn expand_moves() -> Vec<(String, Diagram, Diagram)> {
    let mut out = Vec::new();
    for switched in [false, true] {
        let cross = if switched {
            BoxKind::CrossUnderRight
        } else {
            BoxKind::CrossUnderLeft
        };
        let other = if switched {
            BoxKind::CrossUnderLeft
        } else {
            BoxKind::CrossUnderRight
        };
        let tag = if switched { "-switched" } else { "" };

        // RII parallel: both strands up; the pair is one crossing of each
        // chirality
        let mut lhs = Stacker::new(true, &[true, true]);
        lhs.apply(0, cross).unwrap();
        lhs.apply(0, other).unwrap();
        let rhs = Stacker::new(true, &[true, true]);
        out.push((
            format!("rii-parallel{}", tag),
            lhs.finish_open(),
            rhs.finish_open(),
        ));

        // RII antiparallel
        let mut lhs = Stacker::new(true, &[true, false]);
        lhs.apply(0, cross).unwrap();
        lhs.apply(0, other).unwrap();
        let rhs = Stacker::new(true, &[true, false]);
        out.push((
            format!("rii-antiparallel{}", tag),
            lhs.finish_open(),
            rhs.finish_open(),
        ));

        // RIII as the braid relation s1 s2 s1 = s2 s1 s2
        let mut lhs = Stacker::new(true, &[true, true, true]);
        lhs.apply(0, cross).unwrap();
        lhs.apply(1, cross).unwrap();
        lhs.apply(0, cross).unwrap();
        let mut rhs = Stacker::new(true, &[true, true, true]);
        rhs.apply(1, cross).unwrap();
        rhs.apply(0, cross).unwrap();
        rhs.apply(1, cross).unwrap();
        out.push((format!("riii{}", tag), lhs.finish_open(), rhs.finish_open()));

        // vertex slide: a strand crosses two legs of a vertex on one side,
        // the third leg on the other; both strand orientations
        for strand_up in [true, false] {
            let mut lhs = Stacker::new(true, &[strand_up, true, true]);
            lhs.apply(0, cross).unwrap();
            lhs.apply(1, cross).unwrap();
            lhs.apply(0, BoxKind::Vertex { legs_down: 2 }).unwrap();
            let mut rhs = Stacker::new(true, &[strand_up, true, true]);
            rhs.apply(1, BoxKind::Vertex { legs_down: 2 }).unwrap();
            rhs.apply(0, cross).unwrap();
            let dir = if strand_up { "up" } else { "down" };
            out.push((
                format!("vertex-slide-{}{}", dir, tag),
                lhs.finish_open(),
                rhs.finish_open(),
            ));
        }
    }
    out
}

/// Outcome of evaluating both sides of a move.
pub struct MoveCheck {
    pub name: String,
    pub pass: bool,
    pub residual: StateVector,
}

pub fn reidemeister_expand_check(
    name: &str,
    lhs: &Diagram,
    rhs: &Diagram,
    rs: &RuleSet,
) -> Result<MoveCheck, SpiderError> {
    let zl = su3_rewrite(lhs, rs)?;
    let zr = su3_rewrite(rhs, rs)?;
    let residual = zl.sub(&zr);
    Ok(MoveCheck {
        name: name.to_string(),
        pass: residual.is_zero(),
        residual,
    })
}

/// Run the whole expansion suite against a rule set.
pub fn check_all_moves(rs: &RuleSet) -> Result<Vec<MoveCheck>, SpiderError> {
    expand_moves()
        .iter()
        .map(|(name, lhs, rhs)| reidemeister_expand_check(name, lhs, rhs, rs))
        .collect()
}

// --- twisting ----------------------------------------------------------------

/// Diagram rescaling data: a factor applied per trivalent vertex and an
/// optional factor applied per signed crossing. A crossing factor is only
/// admissible when it cubes to one, or on vertex-free diagrams.
#[derive(Debug, Clone, Default)]
pub struct TwistSpec {
    pub vertex_factor: Option<LaurentPoly>,
    pub crossing_factor: Option<LaurentPoly>,
}

/// Conjugate a state-function value by the twist: given `Z(d)`, produce the
/// twisted state function's value on `d`. Each basis key `k` gains
/// `t^{r(d) - r(k)}`, and the crossing factor contributes `c^{writhe(d)}`
/// (basis keys are crossing-free).
pub fn twist_conjugate(
    z: &StateVector,
    d: &Diagram,
    ts: &TwistSpec,
) -> Result<StateVector, SpiderError> {
    let mut global = LaurentPoly::one();
    if let Some(c) = &ts.crossing_factor {
        let cube = &(c * c) * c;
        if !cube.is_one() && d.trivalent_count() > 0 {
            return Err(SpiderError::IllegalCrossingTwist);
        }
        global = &global
            * &c.pow_unit(d.writhe())
                .map_err(|_| SpiderError::IllegalCrossingTwist)?;
    }
    let r_input = d.trivalent_count() as i64;
    let mut out = StateVector::new(z.signature.clone());
    for (_, term) in z.terms() {
        let mut coeff = &term.coeff * &global;
        if let Some(t) = &ts.vertex_factor {
            let r_key = term.diagram.trivalent_count() as i64;
            coeff = &coeff * &t.pow_unit(r_input - r_key)?;
        }
        out.add(term.diagram.clone(), coeff)?;
    }
    Ok(out)
}

// --- normalization adapters ---------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Standard,
    Kuperberg,
    OhtsukiYamada,
    Sikora,
    Khovanov,
}

impl Normalization {
    pub fn parse(s: &str) -> Option<Normalization> {
        match s {
            "standard" => Some(Normalization::Standard),
            "kuperberg" => Some(Normalization::Kuperberg),
            "oy" => Some(Normalization::OhtsukiYamada),
            "sikora" => Some(Normalization::Sikora),
            "khovanov" => Some(Normalization::Khovanov),
            _ => None,
        }
    }
}

/// Evaluate the standard (`a = 1`) state function and re-express it in the
/// conventions of the literature: Kuperberg (`y = q^{1/6}`), Ohtsuki-Yamada
/// (`y = -q^{-1}`), Sikora (vertex twist `y^{9/2}`, then `y = -q^{-1/3}`),
/// or Khovanov (`y^{8 writhe}` prefactor, then `y = q^{1/3}`; vertex-free
/// diagrams only).
pub fn normalized_invariant(
    d: &Diagram,
    variant: Normalization,
) -> Result<StateVector, SpiderError> {
    let rs = standard_params();
    let z = su3_rewrite(d, &rs)?;
    let yv = Var::new("y");
    match variant {
        Normalization::Standard => Ok(z),
        Normalization::Kuperberg => {
            let image = SignedMonomial::power(false, "q", Exponent::new(1, 6));
            Ok(z.substitute_coeffs(&yv, &image)?)
        }
        Normalization::OhtsukiYamada => {
            let image = SignedMonomial::power(true, "q", Exponent::integer(-1));
            Ok(z.substitute_coeffs(&yv, &image)?)
        }
        Normalization::Sikora => {
            let ts = TwistSpec {
                vertex_factor: Some(LaurentPoly::from_term(
                    num_rational::BigRational::from_integer(1.into()),
                    crate::ring::Monomial::var_pow("y", Exponent::new(9, 2)),
                )),
                crossing_factor: None,
            };
            let twisted = twist_conjugate(&z, d, &ts)?;
            let image = SignedMonomial::power(true, "q", Exponent::new(-1, 3));
            Ok(twisted.substitute_coeffs(&yv, &image)?)
        }
        Normalization::Khovanov => {
            if d.trivalent_count() > 0 {
                return Err(SpiderError::KhovanovRequiresVertexFree);
            }
            let prefactor = LaurentPoly::var_pow("y", 8 * d.writhe());
            let image = SignedMonomial::power(false, "q", Exponent::new(1, 3));
            Ok(z.scale(&prefactor).substitute_coeffs(&yv, &image)?)
        }
    }
}

/// Substitute `y -> 1/(y a)` in a coefficient: the parameter change induced
/// by reflecting the disk.
pub fn mirror_substitution(p: &LaurentPoly) -> LaurentPoly {
    let image = SignedMonomial::positive(
        crate::ring::Monomial::var_pow("y", Exponent::integer(-1))
            .mul_var("a", Exponent::integer(-1)),
    );
    p.substitute(&Var::new("y"), &image).expect("sign-free image")
}
