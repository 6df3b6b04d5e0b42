//! Acceptance suite: one test per criterion, each printing a PASS line once
//! every assertion at its stated tolerance has held. Everything is exact
//! ring arithmetic except the numeric twist checks, which use the stated
//! 1e-9 tolerance.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skein_core::basis::{catalan, enumerate_matchings, enumerate_webs, BoundarySignature};
use skein_core::diagram::{Diagram, Sign};
use skein_core::kauffman::{self, KauffmanRules};
use skein_core::moves::{self, MoveDir, MoveKind, RandomSpec, Theory};
use skein_core::ring::{Exponent, LaurentPoly, SignedMonomial, Var};
use skein_core::samples;
use skein_core::spider::{self, standard_params, symbolic_params, RuleCoeff};
use skein_core::state::{Signature, StateVector};

fn apow(e: i64) -> LaurentPoly {
    LaurentPoly::var_pow("A", e)
}

fn ypow(e: i64) -> LaurentPoly {
    LaurentPoly::var_pow("y", e)
}

fn qpow(num: i64, den: i64) -> LaurentPoly {
    LaurentPoly::from_term(
        num_rational::BigRational::from_integer(1.into()),
        skein_core::ring::Monomial::var_pow("q", Exponent::new(num, den)),
    )
}

/// Seeded unoriented diagrams with at most eight crossings.
fn kauffman_corpus(count: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let spec = RandomSpec {
            strands: 2 + (seed % 3) as usize,
            rows: 5 + (seed % 4) as usize,
            vertex_density: 0.0,
            crossing_density: 0.6,
            close: false,
            oriented: false,
            seed,
        };
        seed += 1;
        let d = moves::random_tangle(&spec).expect("open specs are feasible");
        if d.crossing_count() <= 8 {
            out.push(d);
        }
    }
    out
}

/// Seeded oriented web-tangles, kept small enough for symbolic evaluation.
fn su3_corpus(count: usize, max_crossings: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut seed = 1000u64;
    while out.len() < count {
        let spec = RandomSpec {
            strands: 2 + (seed % 2) as usize,
            rows: 5,
            vertex_density: 0.35,
            crossing_density: 0.5,
            close: false,
            oriented: true,
            seed,
        };
        seed += 1;
        let d = moves::random_tangle(&spec).expect("open specs are feasible");
        if d.crossing_count() <= max_crossings {
            out.push(d);
        }
    }
    out
}

#[test]
fn criterion_01_oracle_equivalence() {
    let empty_key = Diagram::empty(false).canonical_key().unwrap();
    // named diagrams with pinned values
    let trefoil = samples::trefoil();
    let sv = kauffman::bracket_oracle(&trefoil).unwrap();
    assert_eq!(sv.coeff(&empty_key), apow(7) + apow(3) + apow(-1) - apow(-9));
    let hopf = kauffman::bracket_oracle(&samples::hopf_link()).unwrap();
    assert_eq!(
        hopf.coeff(&empty_key),
        apow(6) + apow(2) + apow(-2) + apow(-6)
    );
    let unknot = kauffman::bracket_oracle(&samples::unknot()).unwrap();
    assert_eq!(unknot.coeff(&empty_key), -(apow(2) + apow(-2)));
    let kink = kauffman::bracket_oracle(&samples::kink_arc_unoriented(true)).unwrap();
    let arc_key = samples::single_arc_unoriented().canonical_key().unwrap();
    assert_eq!(kink.coeff(&arc_key), -apow(3));

    let mut named = vec![
        samples::unknot(),
        samples::kink_arc_unoriented(true),
        samples::hopf_link(),
        trefoil,
    ];
    named.extend(kauffman_corpus(200));
    for (i, d) in named.iter().enumerate() {
        let oracle = kauffman::bracket_oracle(d).unwrap();
        let rewrite = kauffman::bracket_rewrite(d).unwrap();
        assert_eq!(oracle, rewrite, "diagram {} disagrees", i);
    }
    println!("criterion 01 (oracle equivalence, 204 diagrams): PASS");
}

#[test]
fn criterion_02_reidemeister_invariance() {
    // site evaluation is pure, so the corpus fans out over worker threads
    fn run_parallel<F>(diagrams: Vec<Diagram>, check: F) -> usize
    where
        F: Fn(&Diagram) -> usize + Sync,
    {
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(4);
        let next = std::sync::atomic::AtomicUsize::new(0);
        let total = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= diagrams.len() {
                        break;
                    }
                    let n = check(&diagrams[i]);
                    total.fetch_add(n, std::sync::atomic::Ordering::Relaxed);
                });
            }
        });
        total.load(std::sync::atomic::Ordering::Relaxed)
    }

    // Kauffman: every RII/RIII site on the full corpus, and the exact RI
    // kink factor on a sub-corpus
    let rules = KauffmanRules::default();
    let kauffman_sites = run_parallel(kauffman_corpus(200), |d| {
        let report = moves::invariance_report(
            d,
            &Theory::Kauffman(&rules),
            &[MoveKind::R2Parallel, MoveKind::R3],
        )
        .unwrap();
        assert!(
            report.all_pass(),
            "kauffman failure: {:?}",
            report.failures().first().map(|f| &f.site)
        );
        report.checks.len()
    });
    let kauffman_sites = kauffman_sites
        + run_parallel(kauffman_corpus(40), |d| {
            let report =
                moves::invariance_report(d, &Theory::Kauffman(&rules), &[MoveKind::R1]).unwrap();
            assert!(report.all_pass(), "RI kink factor failed");
            report.checks.len()
        });
    // SU(3), symbolic parameters: RI factor plus RII/RIII/R41 invariance
    let rs = symbolic_params();
    let su3_sites = run_parallel(su3_corpus(25, 4), |d| {
        let report = moves::invariance_report(
            d,
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
            "su3 failure: {:?}",
            report.failures().first().map(|f| &f.site)
        );
        report.checks.len()
    });
    // kink factors are pinned inside the reports; double-check the exact
    // factors once more on fixed diagrams
    let pos = kauffman::bracket_rewrite(&samples::kink_arc_unoriented(true)).unwrap();
    let arc_key = samples::single_arc_unoriented().canonical_key().unwrap();
    assert_eq!(pos.coeff(&arc_key), -apow(3));
    let spos = spider::su3_rewrite(&samples::kink_arc_oriented(true), &rs).unwrap();
    let sarc = samples::single_arc_oriented().canonical_key().unwrap();
    assert_eq!(
        spos.coeff(&sarc),
        &LaurentPoly::var_pow("a", -4) * &ypow(-8)
    );
    println!(
        "criterion 02 (Reidemeister invariance, {} Kauffman + {} SU(3) site checks): PASS",
        kauffman_sites, su3_sites
    );
}

#[test]
fn criterion_03_uniqueness_falsification() {
    // Kauffman with B = A: the RII residuals are nonzero and an RII move
    // check fails
    let broken = KauffmanRules {
        neg: LaurentPoly::var("A"),
        ..KauffmanRules::default()
    };
    let residuals = kauffman::uniqueness_residuals(&broken);
    assert!(residuals.iter().any(|(_, r)| !r.is_zero()));
    let rii = samples::rii_tangle_unoriented();
    let before = kauffman::bracket_rewrite_with(&rii, &broken).unwrap();
    let site = moves::find_move_sites(&rii, MoveKind::R2Parallel)
        .into_iter()
        .find(|s| s.dir == MoveDir::Remove)
        .unwrap();
    let after = kauffman::bracket_rewrite_with(&moves::apply_move(&rii, &site).unwrap(), &broken)
        .unwrap();
    assert_ne!(before, after, "B = A must break RII invariance");

    // SU(3): every single-coefficient perturbation fails at least one move
    let base = symbolic_params();
    for which in RuleCoeff::all() {
        let rs = spider::perturbed(&base, which);
        let checks = spider::check_all_moves(&rs).unwrap();
        assert!(
            checks.iter().any(|mc| !mc.pass),
            "perturbing {} fooled every move",
            which.name()
        );
    }
    println!("criterion 03 (uniqueness falsification): PASS");
}

#[test]
fn criterion_04_identity_suite() {
    let suite = spider::su3_identity_suite(&symbolic_params());
    assert_eq!(suite.len(), 6);
    for (name, residual) in &suite {
        assert!(residual.is_zero(), "{} = {}", name, residual);
    }
    // the constructor asserts come with every parameter choice, including
    // numeric ones
    spider::su3_params(LaurentPoly::int(2), LaurentPoly::int(3)).unwrap();
    println!("criterion 04 (identity suite, 6 residuals): PASS");
}

#[test]
fn criterion_05_projection() {
    // Kauffman matchings up to six points
    for n in [0usize, 2, 4, 6] {
        for m in enumerate_matchings(&BoundarySignature::Kauffman(n)) {
            let once = kauffman::bracket_rewrite(&m.diagram).unwrap();
            assert_eq!(once.len(), 1);
            assert!(once.coeff(&m.key).is_one());
            let mut twice = StateVector::new(once.signature.clone());
            for (_, t) in once.terms() {
                twice
                    .add_all(&kauffman::bracket_rewrite(&t.diagram).unwrap().scale(&t.coeff))
                    .unwrap();
            }
            assert_eq!(once, twice);
        }
    }
    // SU(3) webs for every signature of size at most six
    let rs = symbolic_params();
    let mut webs = 0usize;
    for size in 0..=6usize {
        for mask in 0..(1u32 << size) {
            let sig: Vec<Sign> = (0..size)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            for w in enumerate_webs(&BoundarySignature::Su3(sig), 6) {
                let once = spider::su3_rewrite(&w.diagram, &rs).unwrap();
                assert_eq!(once.len(), 1, "web {} is not fixed", w.key);
                assert!(once.coeff(&w.key).is_one());
                webs += 1;
            }
        }
    }
    assert!(webs > 0);
    println!(
        "criterion 05 (projection on matchings and {} webs): PASS",
        webs
    );
}

#[test]
fn criterion_06_basis_counts() {
    for (n, expected) in [(0u32, 1u128), (1, 1), (2, 2), (3, 5), (4, 14)] {
        assert_eq!(catalan(n), expected);
        let got = enumerate_matchings(&BoundarySignature::Kauffman(2 * n as usize));
        assert_eq!(got.len() as u128, expected, "matchings of {} points", 2 * n);
    }
    let sig = |s: &str| {
        BoundarySignature::Su3(
            s.chars()
                .map(|c| if c == '+' { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    };
    for (s, expected) in [("+-", 1usize), ("+-+-", 2), ("++--", 2), ("++++-", 3)] {
        let got = enumerate_webs(&sig(s), 12);
        assert_eq!(got.len(), expected, "webs over {}", s);
    }
    println!("criterion 06 (basis counts): PASS");
}

#[test]
fn criterion_07_homfly_relation() {
    let rs = standard_params();
    let zp = spider::su3_rewrite(&samples::crossing_tangle_oriented(true), &rs).unwrap();
    let zn = spider::su3_rewrite(&samples::crossing_tangle_oriented(false), &rs).unwrap();
    let lhs = zp.scale(&ypow(-1)).sub(&zn.scale(&ypow(1)));
    let mut rhs = StateVector::new(lhs.signature.clone());
    rhs.add(samples::vertical_strands_oriented(), ypow(-3) - ypow(3))
        .unwrap();
    assert_eq!(lhs, rhs);
    println!("criterion 07 (HOMFLY relation at a = 1): PASS");
}

#[test]
fn criterion_08_adapter_skein_relations() {
    use spider::Normalization::*;
    let fourn = samples::vertical_strands_oriented().canonical_key().unwrap();
    let fourv = samples::h_web().canonical_key().unwrap();
    let pos = samples::crossing_tangle_oriented(true);
    let neg = samples::crossing_tangle_oriented(false);
    // (variant, left factor, right factor, expected fourn coefficient)
    let cases = [
        (Kuperberg, qpow(-1, 6), qpow(1, 6), qpow(-1, 2) - qpow(1, 2)),
        (OhtsukiYamada, qpow(1, 1), qpow(-1, 1), qpow(3, 1) - qpow(-3, 1)),
        (Sikora, qpow(1, 3), qpow(-1, 3), qpow(1, 1) - qpow(-1, 1)),
    ];
    for (variant, lf, rf, expected) in cases {
        let zp = spider::normalized_invariant(&pos, variant).unwrap();
        let zn = spider::normalized_invariant(&neg, variant).unwrap();
        let lhs = zp.scale(&lf).sub(&zn.scale(&rf));
        assert_eq!(
            lhs.coeff(&fourn),
            expected,
            "{:?} skein relation coefficient",
            variant
        );
        assert!(
            lhs.coeff(&fourv).is_zero(),
            "{:?} H-web coefficient must cancel",
            variant
        );
    }
    // Khovanov: invariant under RI on 50 seeded vertex-free tangles
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut checked = 0usize;
    let mut seed = 5000u64;
    while checked < 50 {
        let spec = RandomSpec {
            strands: 2,
            rows: 4,
            vertex_density: 0.0,
            crossing_density: 0.5,
            close: false,
            oriented: true,
            seed,
        };
        seed += 1;
        let d = moves::random_tangle(&spec).unwrap();
        if d.crossing_count() > 5 {
            continue;
        }
        let base = spider::normalized_invariant(&d, Khovanov).unwrap();
        let sites: Vec<_> = moves::find_move_sites(&d, MoveKind::R1)
            .into_iter()
            .filter(|s| s.dir == MoveDir::Insert)
            .collect();
        let site = &sites[rng.random_range(0..sites.len())];
        let kinked = moves::apply_move(&d, site).unwrap();
        let after = spider::normalized_invariant(&kinked, Khovanov).unwrap();
        assert_eq!(base, after, "Khovanov adapter moved under RI, seed {}", seed);
        checked += 1;
    }
    println!("criterion 08 (adapter skein relations + Khovanov RI on 50 tangles): PASS");
}

#[test]
fn criterion_09_confluence() {
    let rs = symbolic_params();
    // 20 diagrams mixing crossings, webs, and closed pieces
    let mut corpus: Vec<Diagram> = vec![
        samples::theta_web(),
        samples::square_web(),
        samples::kink_arc_oriented(true),
        samples::crossing_tangle_oriented(true),
    ];
    corpus.extend(su3_corpus(16, 3));
    assert_eq!(corpus.len(), 20);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (i, d) in corpus.iter().enumerate() {
        let reference = spider::su3_rewrite(d, &rs).unwrap();
        for _ in 0..1000 {
            let got = spider::su3_rewrite_randomized(d, &rs, &mut rng).unwrap();
            assert_eq!(got, reference, "diagram {} broke confluence", i);
        }
    }
    // the termination measure decrease is asserted inside the engine on
    // every step of each of the 20000 randomized runs above
    println!("criterion 09 (confluence, 20 diagrams x 1000 orders): PASS");
}

#[test]
fn criterion_10_adjoint_and_mirror() {
    let rs = symbolic_params();
    let corpus = su3_corpus(20, 4);
    for d in &corpus {
        // adjoint preservation: coefficients unchanged, keys adjointed
        let adj = d.adjoint();
        let lhs = spider::su3_rewrite(&adj, &rs).unwrap();
        let rhs = spider::su3_rewrite(d, &rs)
            .unwrap()
            .map_diagrams(Signature::of(&adj), |m| m.adjoint())
            .unwrap();
        assert_eq!(lhs, rhs, "adjoint preservation failed");

        // mirror property: reflecting the disk swaps the crossing rules,
        // which is the substitution y -> 1/(ya) on coefficients
        let m = d.mirror();
        let lhs = spider::su3_rewrite(&m, &rs).unwrap();
        let z = spider::su3_rewrite(d, &rs).unwrap();
        let mut rhs = StateVector::new(Signature::of(&m));
        for (_, t) in z.terms() {
            rhs.add(t.diagram.mirror(), spider::mirror_substitution(&t.coeff))
                .unwrap();
        }
        assert_eq!(lhs, rhs, "mirror property failed");

        // and the orientation-reversing map (mirror + switch) preserves
        // coefficients outright
        let u = d.mirror().switch_crossings();
        let lhs = spider::su3_rewrite(&u, &rs).unwrap();
        let rhs = spider::su3_rewrite(d, &rs)
            .unwrap()
            .map_diagrams(Signature::of(&u), |t| t.mirror())
            .unwrap();
        assert_eq!(lhs, rhs, "reflect-and-switch remark failed");
    }
    // Kauffman mirror: A -> A^-1 on coefficients with keys reflected
    for d in kauffman_corpus(40) {
        let lhs = kauffman::bracket_rewrite(&d.mirror()).unwrap();
        let image = SignedMonomial::power(false, "A", Exponent::integer(-1));
        let rhs = kauffman::bracket_rewrite(&d)
            .unwrap()
            .substitute_coeffs(&Var::new("A"), &image)
            .unwrap()
            .map_diagrams(Signature::of(&d.mirror()), |m| m.mirror())
            .unwrap();
        assert_eq!(lhs, rhs, "Kauffman mirror substitution failed");
    }
    println!("criterion 10 (adjoint and mirror on the corpus): PASS");
}

#[test]
fn criterion_11_twist_theorems() {
    let symbolic = symbolic_params();
    let standard = standard_params();
    let corpus = su3_corpus(20, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (av, yv) = (Var::new("a"), Var::new("y"));
    for d in &corpus {
        let z_sym = spider::su3_rewrite(d, &symbolic).unwrap();
        let z_std = spider::su3_rewrite(d, &standard).unwrap();
        let r_input = d.trivalent_count() as i32;
        for _ in 0..5 {
            let ta = rng.random_range(0.0..std::f64::consts::TAU);
            let ty = rng.random_range(0.0..std::f64::consts::TAU);
            let a0 = Complex64::from_polar(1.0, ta);
            let y0 = Complex64::from_polar(1.0, ty);
            let zeta = a0.powf(0.25);
            let y_prime = zeta * zeta * y0;
            let keys: Vec<String> = z_sym
                .keys()
                .chain(z_std.keys())
                .cloned()
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            for k in keys {
                let mut asg = BTreeMap::new();
                asg.insert(av.clone(), a0);
                asg.insert(yv.clone(), y0);
                let r_key = z_sym
                    .get(&k)
                    .or_else(|| z_std.get(&k))
                    .map(|t| t.diagram.trivalent_count() as i32)
                    .unwrap_or(0);
                // twisting by P = (1/zeta)^n scales each coefficient by
                // zeta^{r(key) - r(input)}
                let lhs = z_sym.coeff(&k).eval_complex(&asg).unwrap()
                    * zeta.powi(r_key - r_input);
                let mut asg2 = BTreeMap::new();
                asg2.insert(yv.clone(), y_prime);
                let rhs = z_std.coeff(&k).eval_complex(&asg2).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-9,
                    "twist mismatch {} vs {} on key {}",
                    lhs,
                    rhs,
                    k
                );
            }
        }
    }
    // crossing twist: the vertex-slide imbalance forces c^2 = c^-1, so only
    // cube roots of unity are admissible
    let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    assert!((omega.powi(3) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    assert!((omega.powi(2) - omega.powi(-1)).norm() < 1e-9);
    let c_bad = Complex64::new(2.0, 0.0);
    assert!((c_bad.powi(2) - c_bad.powi(-1)).norm() > 1e-9);
    // symbolically, a non-unit crossing factor is rejected on webs but legal
    // on vertex-free diagrams
    let theta = samples::theta_web();
    let z = spider::su3_rewrite(&theta, &symbolic).unwrap();
    let ts = spider::TwistSpec {
        vertex_factor: None,
        crossing_factor: Some(ypow(8)),
    };
    assert!(matches!(
        spider::twist_conjugate(&z, &theta, &ts),
        Err(spider::SpiderError::IllegalCrossingTwist)
    ));
    let kink = samples::kink_arc_oriented(true);
    let zk = spider::su3_rewrite(&kink, &symbolic).unwrap();
    assert!(spider::twist_conjugate(&zk, &kink, &ts).is_ok());
    println!("criterion 11 (twist theorems, 20 diagrams x 5 samples at 1e-9): PASS");
}
