//! Cross-module consistency: the rewriting engines may only land on keys
//! the basis enumerator produces independently for the same signature.

use std::collections::BTreeSet;

use skein_core::basis::{enumerate_matchings, enumerate_webs, BoundarySignature};
use skein_core::kauffman;
use skein_core::moves::{random_tangle, RandomSpec};
use skein_core::spider::{self, symbolic_params};
use skein_core::state::Signature;

#[test]
fn bracket_normal_forms_are_enumerated_matchings() {
    let mut checked = 0usize;
    let mut seed = 100u64;
    while checked < 60 {
        let spec = RandomSpec {
            strands: 2 + (seed % 3) as usize,
            rows: 6,
            vertex_density: 0.0,
            crossing_density: 0.6,
            close: false,
            oriented: false,
            seed,
        };
        seed += 1;
        let d = random_tangle(&spec).unwrap();
        if d.boundary.len() > 8 || d.crossing_count() > 7 {
            continue;
        }
        let sv = kauffman::bracket_rewrite(&d).unwrap();
        let basis: BTreeSet<String> =
            enumerate_matchings(&BoundarySignature::Kauffman(d.boundary.len()))
                .into_iter()
                .map(|e| e.key)
                .collect();
        for key in sv.keys() {
            assert!(
                basis.contains(key),
                "seed {}: engine key {} is not an enumerated matching",
                seed,
                key
            );
        }
        checked += 1;
    }
}

#[test]
fn su3_normal_forms_are_enumerated_webs() {
    let rs = symbolic_params();
    let mut checked = 0usize;
    let mut seed = 300u64;
    while checked < 30 {
        let spec = RandomSpec {
            strands: 2,
            rows: 5,
            vertex_density: 0.35,
            crossing_density: 0.5,
            close: false,
            oriented: true,
            seed,
        };
        seed += 1;
        let d = random_tangle(&spec).unwrap();
        if d.boundary.len() > 6 || d.crossing_count() > 4 {
            continue;
        }
        let sv = spider::su3_rewrite(&d, &rs).unwrap();
        let sig = match Signature::of(&d) {
            Signature::Oriented(signs) => BoundarySignature::Su3(signs),
            _ => unreachable!(),
        };
        let basis: BTreeSet<String> = enumerate_webs(&sig, 12)
            .into_iter()
            .map(|e| e.key)
            .collect();
        for key in sv.keys() {
            assert!(
                basis.contains(key),
                "seed {}: engine key {} is not an enumerated web",
                seed,
                key
            );
        }
        checked += 1;
    }
}
