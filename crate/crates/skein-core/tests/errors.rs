//! Error paths and edge cases named per operation: syntax and validation
//! failures, oracle guards, irreducible features, stale sites, and
//! infeasible generator specs.

use skein_core::basis::{enumerate_webs, BoundarySignature};
use skein_core::diagram::{Dart, Diagram, DiagramError, Sign, VertexKind};
use skein_core::kauffman::{self, KauffmanError};
use skein_core::moves::{self, MovesError, RandomSpec};
use skein_core::samples::{self, BoxKind, Stacker};
use skein_core::spider::{self, symbolic_params, Feature, SpiderError};

#[test]
fn parse_reports_line_and_column() {
    let err = Diagram::parse("boundary: + -\nvertex v1 sideways\n").unwrap_err();
    match err {
        DiagramError::Syntax { line, .. } => assert_eq!(line, 2),
        other => panic!("expected syntax error, got {}", other),
    }
}

#[test]
fn parse_requires_boundary_first() {
    let err = Diagram::parse("vertex v1 sink\n").unwrap_err();
    assert!(matches!(err, DiagramError::Syntax { line: 1, .. }));
}

#[test]
fn source_with_inward_edge_is_cited() {
    // b0 is signed '-' so its edge points out of the disk, which forces an
    // edge INTO the source vertex
    let text = "boundary: - + +\nvertex v1 source\nedge e0: b0 -> v1.0\nedge e1: b1 -> v1.1\nedge e2: b2 -> v1.2\n";
    let err = Diagram::parse(text).unwrap_err();
    match err {
        DiagramError::Validation(violations) => {
            assert!(
                violations.iter().any(|v| v.at == "v1"),
                "violation should cite the source vertex: {:?}",
                violations
            );
        }
        other => panic!("expected validation error, got {}", other),
    }
}

#[test]
fn genus_one_rotation_system_is_rejected() {
    // theta graph with the second rotation NOT reversed embeds on the torus
    let mut d = Diagram::new(true, vec![]);
    let v1 = d.add_vertex("v1", VertexKind::Source);
    let v2 = d.add_vertex("v2", VertexKind::Sink);
    d.add_edge("e0", Dart::new(v1, 0), Dart::new(v2, 0));
    d.add_edge("e1", Dart::new(v1, 1), Dart::new(v2, 1));
    d.add_edge("e2", Dart::new(v1, 2), Dart::new(v2, 2));
    let violations = d.validate();
    assert!(
        violations.iter().any(|v| v.msg.contains("not planar")),
        "expected a planarity violation: {:?}",
        violations
    );
}

#[test]
fn canonical_key_rejects_crossings() {
    let err = samples::trefoil().canonical_key().unwrap_err();
    assert!(matches!(err, DiagramError::HasCrossings));
}

#[test]
fn oracle_guards_large_diagrams() {
    let mut st = Stacker::new(false, &[true, true]);
    for _ in 0..17 {
        st.apply(0, BoxKind::CrossUnderLeft).unwrap();
    }
    let d = st.finish_open();
    assert_eq!(d.crossing_count(), 17);
    let err = kauffman::bracket_oracle(&d).unwrap_err();
    assert!(matches!(
        err,
        KauffmanError::TooManyCrossings { count: 17, max: 16 }
    ));
}

#[test]
fn smooth_needs_kauffman_mode_and_a_crossing() {
    let oriented = samples::crossing_tangle_oriented(true);
    let c = oriented.crossings()[0];
    assert!(matches!(
        kauffman::smooth(&oriented, c, true),
        Err(KauffmanError::NotKauffmanMode)
    ));
    let arc = samples::single_arc_unoriented();
    assert!(matches!(
        kauffman::smooth(&arc, c, true),
        Err(KauffmanError::NoSuchCrossing(_))
    ));
}

#[test]
fn resolve_crossing_errors() {
    let rs = symbolic_params();
    let arc = samples::single_arc_oriented();
    let fake = samples::crossing_tangle_oriented(true).crossings()[0];
    assert!(matches!(
        spider::resolve_crossing(&arc, fake, &rs),
        Err(SpiderError::NoSuchCrossing(_))
    ));
    let unoriented = samples::crossing_tangle_unoriented();
    let c = unoriented.crossings()[0];
    assert!(matches!(
        spider::resolve_crossing(&unoriented, c, &rs),
        Err(SpiderError::NotOriented)
    ));
}

#[test]
fn reduce_face_rejects_non_reducible_features() {
    let rs = symbolic_params();
    // a hexagon face is not a bubble or square
    let hex = samples::hexagon_web();
    let face = hex.faces().into_iter().find(|f| f.interior).unwrap();
    let err = spider::reduce_face(&hex, Feature::Bubble(face.anchor), &rs);
    assert!(matches!(err, Err(SpiderError::NotReducible(_))));
    // a circle with contents is not removable until it is empty
    let mut d = Diagram::new(true, vec![]);
    let outer = d.add_circle("k0", Some(skein_core::diagram::CircleDir::Ccw));
    let inner = d.add_circle("k1", Some(skein_core::diagram::CircleDir::Cw));
    d.place(
        skein_core::diagram::ItemRef::Circle(inner),
        skein_core::diagram::Region::Inside(outer),
    );
    let err = spider::reduce_face(&d, Feature::Circle(outer), &rs);
    assert!(matches!(err, Err(SpiderError::NotReducible(_))));
    // the inner one is removable, and afterwards so is the outer one
    let (d2, _) = spider::reduce_face(&d, Feature::Circle(inner), &rs)
        .unwrap()
        .pop()
        .unwrap();
    assert!(spider::reduce_face(&d2, Feature::Circle(outer), &rs).is_ok());
}

#[test]
fn nested_circles_reduce_inner_first() {
    // full rewrite of two nested circles is tau^2 regardless of nesting
    let rs = symbolic_params();
    let mut d = Diagram::new(true, vec![]);
    let outer = d.add_circle("k0", Some(skein_core::diagram::CircleDir::Ccw));
    let inner = d.add_circle("k1", Some(skein_core::diagram::CircleDir::Ccw));
    d.place(
        skein_core::diagram::ItemRef::Circle(inner),
        skein_core::diagram::Region::Inside(outer),
    );
    let sv = spider::su3_rewrite(&d, &rs).unwrap();
    let empty_key = Diagram::empty(true).canonical_key().unwrap();
    assert_eq!(sv.coeff(&empty_key), &rs.tau * &rs.tau);
}

#[test]
fn stale_sites_are_rejected() {
    let arc = samples::single_arc_unoriented();
    let site = moves::find_move_sites(&arc, moves::MoveKind::R1)
        .into_iter()
        .next()
        .unwrap();
    let kinked = moves::apply_move(&arc, &site).unwrap();
    // the original insert site's edge no longer exists in the kinked diagram
    assert!(matches!(
        moves::apply_move(&kinked, &site),
        Err(MovesError::StaleSite(_)) | Ok(_)
    ));
    let gone = moves::find_move_sites(&kinked, moves::MoveKind::R1)
        .into_iter()
        .find(|s| s.dir == moves::MoveDir::Remove)
        .unwrap();
    let flat = moves::apply_move(&kinked, &gone).unwrap();
    assert!(matches!(
        moves::apply_move(&flat, &gone),
        Err(MovesError::StaleSite(_))
    ));
}

#[test]
fn infeasible_close_is_reported() {
    let spec = RandomSpec {
        strands: 1,
        rows: 0,
        vertex_density: 0.0,
        crossing_density: 0.0,
        close: true,
        oriented: false,
        seed: 0,
    };
    assert!(matches!(
        moves::random_tangle(&spec),
        Err(MovesError::InfeasibleSpec(_))
    ));
}

#[test]
fn empty_diagram_is_valid_and_keyed() {
    let d = Diagram::empty(true);
    assert!(d.validate().is_empty());
    let key = d.canonical_key().unwrap();
    assert_eq!(key, "bnd:");
    let d = Diagram::empty(false);
    assert_eq!(d.canonical_key().unwrap(), "bnd:0");
}

#[test]
fn free_loops_are_circle_features_not_faces() {
    let d = samples::unknot();
    assert!(d.faces().is_empty());
    assert_eq!(d.circle_count(), 1);
}

#[test]
fn face_side_counts_sum_to_dart_count() {
    for d in [
        samples::theta_web(),
        samples::square_web(),
        samples::hexagon_web(),
        samples::h_web(),
        samples::trefoil(),
    ] {
        let total: usize = d.faces().iter().map(|f| f.sides).sum();
        assert_eq!(total, d.darts().len());
    }
}

#[test]
fn three_boundary_points_enumerate_quietly() {
    // the all-plus three-point signature has the single-sink web
    let sig = BoundarySignature::Su3(vec![Sign::Plus; 3]);
    let webs = enumerate_webs(&sig, 8);
    assert!(webs.iter().all(|w| w.diagram.is_non_elliptic_web()));
}
