//! Move site-finding and application behavior, including round trips and
//! value invariance on seeded corpora.

use skein_core::diagram::Diagram;
use skein_core::kauffman::{bracket_rewrite, KauffmanRules};
use skein_core::moves::*;
use skein_core::samples::{self, BoxKind, Stacker};
use skein_core::spider::{self, symbolic_params};

#[test]
fn r1_insert_remove_round_trip() {
    let arc = samples::single_arc_unoriented();
    let inserts = find_move_sites(&arc, MoveKind::R1);
    assert_eq!(inserts.len(), 4, "one insert per edge side and chirality");
    for site in &inserts {
        let kinked = apply_move(&arc, site).unwrap();
        assert_eq!(kinked.crossing_count(), 1);
        let removes: Vec<_> = find_move_sites(&kinked, MoveKind::R1)
            .into_iter()
            .filter(|s| s.dir == MoveDir::Remove)
            .collect();
        assert_eq!(removes.len(), 1);
        let back = apply_move(&kinked, &removes[0]).unwrap();
        assert!(back.equivalent(&arc));
    }
}

#[test]
fn r1_insert_on_oriented_strand() {
    let arc = samples::single_arc_oriented();
    for site in find_move_sites(&arc, MoveKind::R1) {
        let kinked = apply_move(&arc, site.as_ref()).unwrap();
        assert!(kinked.validate().is_empty());
        assert_eq!(kinked.writhe().abs(), 1);
    }
}

trait AsRefSite {
    fn as_ref(&self) -> &MoveSite;
}
impl AsRefSite for MoveSite {
    fn as_ref(&self) -> &MoveSite {
        self
    }
}

#[test]
fn r2_remove_straightens_the_rii_tangle() {
    let rii = samples::rii_tangle_unoriented();
    let removes: Vec<_> = find_move_sites(&rii, MoveKind::R2Parallel)
        .into_iter()
        .filter(|s| s.dir == MoveDir::Remove)
        .collect();
    assert_eq!(removes.len(), 1);
    let flat = apply_move(&rii, &removes[0]).unwrap();
    assert!(flat.equivalent(&samples::vertical_strands_unoriented()));
}

#[test]
fn r2_sites_on_triangle_free_diagram_are_empty() {
    let d = samples::vertical_strands_unoriented();
    assert!(find_move_sites(&d, MoveKind::R3).is_empty());
    let removes: Vec<_> = find_move_sites(&d, MoveKind::R2Parallel)
        .into_iter()
        .filter(|s| s.dir == MoveDir::Remove)
        .collect();
    assert!(removes.is_empty());
}

#[test]
fn r2_insert_remove_round_trip() {
    let two = samples::vertical_strands_unoriented();
    let inserts: Vec<_> = find_move_sites(&two, MoveKind::R2Parallel)
        .into_iter()
        .filter(|s| s.dir == MoveDir::Insert)
        .collect();
    assert!(!inserts.is_empty());
    for site in &inserts {
        let poked = apply_move(&two, site).unwrap();
        assert_eq!(poked.crossing_count(), 2);
        assert_eq!(
            bracket_rewrite(&poked).unwrap(),
            bracket_rewrite(&two).unwrap()
        );
        let backs: Vec<_> = find_move_sites(&poked, MoveKind::R2Parallel)
            .into_iter()
            .filter(|s| s.dir == MoveDir::Remove)
            .collect();
        assert!(
            backs
                .iter()
                .any(|b| apply_move(&poked, b).unwrap().equivalent(&two)),
            "inserted bigon is removable back to the original"
        );
    }
}

#[test]
fn r3_gives_the_braid_relation() {
    let build = |order: [usize; 3]| {
        let mut st = Stacker::new(false, &[true, true, true]);
        for pos in order {
            st.apply(pos, BoxKind::CrossUnderLeft).unwrap();
        }
        st.finish_open()
    };
    let lhs = build([0, 1, 0]);
    let rhs = build([1, 0, 1]);
    let tris = find_move_sites(&lhs, MoveKind::R3);
    assert_eq!(tris.len(), 1);
    let flipped = apply_move(&lhs, &tris[0]).unwrap();
    assert!(flipped.equivalent(&rhs));
    // and the flipped triangle flips back
    let back_tris = find_move_sites(&flipped, MoveKind::R3);
    assert_eq!(back_tris.len(), 1);
    let back = apply_move(&flipped, &back_tris[0]).unwrap();
    assert!(back.equivalent(&lhs));
}

#[test]
fn r41_matches_the_stacked_slide() {
    let rs = symbolic_params();
    let moves = spider::expand_moves();
    // entry 3 is the upward vertex slide: two crossings on the left side
    let (_, lhs, rhs) = &moves[3];
    let sites: Vec<_> = find_move_sites(lhs, MoveKind::R41)
        .into_iter()
        .filter(|s| s.dir == MoveDir::Remove)
        .collect();
    assert_eq!(sites.len(), 1);
    let slid = apply_move(lhs, &sites[0]).unwrap();
    assert_eq!(slid.crossing_count(), 1);
    assert!(slid.equivalent(rhs));
    let inserts: Vec<_> = find_move_sites(&slid, MoveKind::R41)
        .into_iter()
        .filter(|s| s.dir == MoveDir::Insert)
        .collect();
    assert_eq!(inserts.len(), 1);
    let back = apply_move(&slid, &inserts[0]).unwrap();
    assert_eq!(back.crossing_count(), 2);
    assert_eq!(
        spider::su3_rewrite(&back, &rs).unwrap(),
        spider::su3_rewrite(lhs, &rs).unwrap()
    );
}

#[test]
fn r41_crossing_count_deltas() {
    let moves = spider::expand_moves();
    let (_, lhs, _) = &moves[3];
    let site = &find_move_sites(lhs, MoveKind::R41)[0];
    let after = apply_move(lhs, site).unwrap();
    // two positive crossings trade for one negative
    assert_eq!(lhs.crossing_count(), 2);
    assert_eq!(after.crossing_count(), 1);
    assert_eq!(lhs.writhe(), 2);
    assert_eq!(after.writhe(), -1);
}

#[test]
fn random_tangle_is_seed_deterministic() {
    let spec = RandomSpec {
        strands: 3,
        rows: 9,
        vertex_density: 0.3,
        crossing_density: 0.5,
        close: false,
        oriented: true,
        seed: 42,
    };
    let a = random_tangle(&spec).unwrap();
    let b = random_tangle(&spec).unwrap();
    assert_eq!(a, b);
    assert!(a.validate().is_empty());
}

#[test]
fn random_tangle_without_boxes_is_a_matching() {
    let spec = RandomSpec {
        strands: 4,
        rows: 0,
        vertex_density: 0.0,
        crossing_density: 0.0,
        close: false,
        oriented: false,
        seed: 1,
    };
    let d = random_tangle(&spec).unwrap();
    assert_eq!(d.crossing_count(), 0);
    assert_eq!(d.trivalent_count(), 0);
    assert_eq!(d.boundary.len(), 8);
}

#[test]
fn random_tangle_can_close() {
    let spec = RandomSpec {
        strands: 0,
        rows: 12,
        vertex_density: 0.0,
        crossing_density: 0.6,
        close: true,
        oriented: false,
        seed: 7,
    };
    let d = random_tangle(&spec).unwrap();
    assert!(d.is_closed());
    assert!(d.validate().is_empty());
}

#[test]
fn kauffman_invariance_on_seeded_corpus() {
    let rules = KauffmanRules::default();
    for seed in 0..10u64 {
        let spec = RandomSpec {
            strands: 3,
            rows: 7,
            vertex_density: 0.0,
            crossing_density: 0.6,
            close: false,
            oriented: false,
            seed,
        };
        let d = random_tangle(&spec).unwrap();
        let report = invariance_report(
            &d,
            &Theory::Kauffman(&rules),
            &[MoveKind::R1, MoveKind::R2Parallel, MoveKind::R3],
        )
        .unwrap();
        assert!(
            report.all_pass(),
            "seed {}: {:?}",
            seed,
            report.failures().first().map(|f| &f.site)
        );
    }
}

#[test]
fn su3_invariance_on_seeded_corpus() {
    let rs = symbolic_params();
    for seed in 0..5u64 {
        let spec = RandomSpec {
            strands: 2,
            rows: 6,
            vertex_density: 0.3,
            crossing_density: 0.5,
            close: false,
            oriented: true,
            seed,
        };
        let d = random_tangle(&spec).unwrap();
        let report = invariance_report(
            &d,
            &Theory::Su3(&rs),
            &[
                MoveKind::R1,
                MoveKind::R2Parallel,
                MoveKind::R2Antiparallel,
                MoveKind::R3,
                MoveKind::R41,
                MoveKind::R41Reversed,
            ],
        )
        .unwrap();
        assert!(
            report.all_pass(),
            "seed {}: {:?}",
            seed,
            report.failures().first().map(|f| &f.site)
        );
    }
}

#[test]
fn perturbed_rules_fail_the_invariance_report() {
    // a corpus diagram with at least one crossing
    let spec = RandomSpec {
        strands: 2,
        rows: 6,
        vertex_density: 0.2,
        crossing_density: 0.7,
        close: false,
        oriented: true,
        seed: 2,
    };
    let d = random_tangle(&spec).unwrap();
    assert!(d.crossing_count() > 0);
    let base = symbolic_params();
    let broken = spider::perturbed(&base, spider::RuleCoeff::X);
    let report = invariance_report(
        &d,
        &Theory::Su3(&broken),
        &[MoveKind::R2Parallel, MoveKind::R2Antiparallel],
    )
    .unwrap();
    assert!(
        !report.checks.is_empty() && !report.failures().is_empty(),
        "a perturbed rule set must fail some move check"
    );
}

#[test]
fn move_application_preserves_signature() {
    let d = samples::rii_tangle_unoriented();
    for kind in [MoveKind::R1, MoveKind::R2Parallel, MoveKind::R3] {
        for site in find_move_sites(&d, kind) {
            let moved = apply_move(&d, &site).unwrap();
            assert_eq!(moved.boundary, d.boundary);
            assert!(moved.validate().is_empty());
        }
    }
}

#[test]
fn serialize_round_trip_on_random_corpus() {
    for seed in 0..12u64 {
        let spec = RandomSpec {
            strands: 3,
            rows: 8,
            vertex_density: if seed % 2 == 0 { 0.3 } else { 0.0 },
            crossing_density: 0.5,
            close: false,
            oriented: seed % 2 == 0,
            seed,
        };
        let d = random_tangle(&spec).unwrap();
        let text = d.to_text();
        let back = Diagram::parse(&text).unwrap();
        assert!(back.equivalent(&d), "round trip failed for seed {}", seed);
    }
}
