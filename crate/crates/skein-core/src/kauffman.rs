//! The Kauffman bracket state function: brute-force state sum, rewriting
//! engine, and the uniqueness residuals from the RII expansion.

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, End, Surgery, VertId, VertexKind};
use crate::ring::LaurentPoly;
use crate::state::{Signature, StateVector};

#[derive(Debug, Error)]
pub enum KauffmanError {
    #[error("bracket oracle guard: {count} crossings exceeds the limit of {max}")]
    TooManyCrossings { count: usize, max: usize },
    #[error("no such crossing: {0:?}")]
    NoSuchCrossing(VertId),
    #[error("operation requires an unoriented (Kauffman-mode) diagram")]
    NotKauffmanMode,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Crossing and circle coefficients for the generic bracket
/// `sum A^p B^n d^c`. The default is the Kauffman specialization
/// `B = A^-1`, `d = -A^2 - A^-2`.
#[derive(Debug, Clone)]
pub struct KauffmanRules {
    pub pos: LaurentPoly,
    pub neg: LaurentPoly,
    pub circle: LaurentPoly,
}

impl Default for KauffmanRules {
    fn default() -> Self {
        KauffmanRules {
            pos: LaurentPoly::var("A"),
            neg: LaurentPoly::var_pow("A", -1),
            circle: -(LaurentPoly::var_pow("A", 2) + LaurentPoly::var_pow("A", -2)),
        }
    }
}

impl KauffmanRules {
    /// Fully generic rules in independent symbols `A`, `B`, `d`.
    pub fn generic() -> Self {
        KauffmanRules {
            pos: LaurentPoly::var("A"),
            neg: LaurentPoly::var("B"),
            circle: LaurentPoly::var("d"),
        }
    }
}

const ORACLE_MAX_CROSSINGS: usize = 16;

/// Replace one crossing by the smoothing of the given sign. The positive
/// smoothing joins the corner pairs (ports 1,2) and (ports 3,0).
pub fn smooth(d: &Diagram, crossing: VertId, positive: bool) -> Result<Diagram, KauffmanError> {
    if d.oriented {
        return Err(KauffmanError::NotKauffmanMode);
    }
    smooth_any_mode(d, crossing, positive)
}

pub(crate) fn smooth_any_mode(
    d: &Diagram,
    crossing: VertId,
    positive: bool,
) -> Result<Diagram, KauffmanError> {
    match d.vertex(crossing) {
        Some(v) if v.kind == VertexKind::Crossing => {}
        _ => return Err(KauffmanError::NoSuchCrossing(crossing)),
    }
    let stub = |p: u8| End::Stub(crate::diagram::Dart::new(crossing, p));
    let joins = if positive {
        vec![(stub(1), stub(2)), (stub(3), stub(0))]
    } else {
        vec![(stub(0), stub(1)), (stub(2), stub(3))]
    };
    let mut out = d.clone();
    out.apply_surgery(&Surgery {
        delete_verts: vec![crossing],
        delete_edges: vec![],
        cut_edges: vec![],
        new_verts: vec![],
        joins,
    })?;
    Ok(out)
}

/// Strip every vertex-less circle, returning how many were removed.
fn strip_circles(d: &mut Diagram) -> usize {
    let mut removed = 0;
    loop {
        let ids: Vec<_> = d.circles().map(|(id, _)| id).collect();
        if ids.is_empty() {
            return removed;
        }
        for id in ids {
            d.remove_circle_reparent(id).expect("circle exists");
            removed += 1;
        }
    }
}

/// Brute-force state sum over all `2^n` smoothings.
pub fn bracket_oracle(d: &Diagram) -> Result<StateVector, KauffmanError> {
    bracket_oracle_with(d, &KauffmanRules::default())
}

pub fn bracket_oracle_with(
    d: &Diagram,
    rules: &KauffmanRules,
) -> Result<StateVector, KauffmanError> {
    if d.oriented {
        return Err(KauffmanError::NotKauffmanMode);
    }
    let crossings = d.crossings();
    if crossings.len() > ORACLE_MAX_CROSSINGS {
        return Err(KauffmanError::TooManyCrossings {
            count: crossings.len(),
            max: ORACLE_MAX_CROSSINGS,
        });
    }
    let mut out = StateVector::new(Signature::of(d));
    for state in 0u32..(1 << crossings.len()) {
        let mut sd = d.clone();
        let mut p = 0u32;
        let mut n = 0u32;
        for (i, c) in crossings.iter().enumerate() {
            let positive = state & (1 << i) != 0;
            if positive {
                p += 1;
            } else {
                n += 1;
            }
            sd = smooth(&sd, *c, positive)?;
        }
        let c = strip_circles(&mut sd) as u32;
        let coeff = &(&rules.pos.pow(p) * &rules.neg.pow(n)) * &rules.circle.pow(c);
        out.add(sd, coeff)?;
    }
    Ok(out)
}

/// Normal form by resolving every crossing, then deleting every circle.
/// Crossingless matchings are fixed points.
pub fn bracket_rewrite(d: &Diagram) -> Result<StateVector, KauffmanError> {
    bracket_rewrite_with(d, &KauffmanRules::default())
}

pub fn bracket_rewrite_with(
    d: &Diagram,
    rules: &KauffmanRules,
) -> Result<StateVector, KauffmanError> {
    if d.oriented {
        return Err(KauffmanError::NotKauffmanMode);
    }
    let mut out = StateVector::new(Signature::of(d));
    let mut work: Vec<(Diagram, LaurentPoly)> = vec![(d.clone(), LaurentPoly::one())];
    while let Some((cur, coeff)) = work.pop() {
        match cur.crossings().first() {
            Some(c) => {
                work.push((smooth(&cur, *c, true)?, &coeff * &rules.pos));
                work.push((smooth(&cur, *c, false)?, &coeff * &rules.neg));
            }
            None => {
                let mut cur = cur;
                let k = strip_circles(&mut cur) as u32;
                out.add(cur, &coeff * &rules.circle.pow(k))?;
            }
        }
    }
    Ok(out)
}

/// The residuals forced by expanding the second Reidemeister move with
/// generic crossing and circle coefficients: the straight-through matching
/// must carry coefficient 1 and the other matching coefficient 0. With
/// `(A, B, d)` fully symbolic these are `AB - 1` and `A^2 + B^2 + ABd`.
pub fn uniqueness_residuals(rules: &KauffmanRules) -> Vec<(String, LaurentPoly)> {
    let rii = crate::samples::rii_tangle_unoriented();
    let sv = bracket_rewrite_with(&rii, rules).expect("RII tangle evaluates");
    let straight = crate::samples::vertical_strands_unoriented()
        .canonical_key()
        .unwrap();
    let crossed = crate::samples::horizontal_strands_unoriented()
        .canonical_key()
        .unwrap();
    vec![
        (
            "rii_straight_minus_one".to_string(),
            sv.coeff(&straight) - LaurentPoly::one(),
        ),
        ("rii_crossed".to_string(), sv.coeff(&crossed)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Exponent, SignedMonomial, Var};
    use crate::samples;

    fn apow(e: i64) -> LaurentPoly {
        LaurentPoly::var_pow("A", e)
    }

    fn delta() -> LaurentPoly {
        -(apow(2) + apow(-2))
    }

    #[test]
    fn unknot_is_delta_times_empty() {
        let d = samples::unknot();
        let sv = bracket_oracle(&d).unwrap();
        assert_eq!(sv.len(), 1);
        let empty_key = Diagram::empty(false).canonical_key().unwrap();
        assert_eq!(sv.coeff(&empty_key), delta());
    }

    #[test]
    fn trefoil_closed_value() {
        let d = samples::trefoil();
        let sv = bracket_oracle(&d).unwrap();
        let empty_key = Diagram::empty(false).canonical_key().unwrap();
        let expected = apow(7) + apow(3) + apow(-1) - apow(-9);
        assert_eq!(sv.coeff(&empty_key), expected);
    }

    #[test]
    fn hopf_link_closed_value() {
        let d = samples::hopf_link();
        let sv = bracket_oracle(&d).unwrap();
        let empty_key = Diagram::empty(false).canonical_key().unwrap();
        let expected = apow(6) + apow(2) + apow(-2) + apow(-6);
        assert_eq!(sv.coeff(&empty_key), expected);
    }

    #[test]
    fn positive_kink_scales_by_minus_a_cubed() {
        let d = samples::kink_arc_unoriented(true);
        let sv = bracket_oracle(&d).unwrap();
        let arc_key = samples::single_arc_unoriented().canonical_key().unwrap();
        assert_eq!(sv.coeff(&arc_key), -apow(3));
        let d = samples::kink_arc_unoriented(false);
        let sv = bracket_oracle(&d).unwrap();
        assert_eq!(sv.coeff(&arc_key), -apow(-3));
    }

    #[test]
    fn single_crossing_positive_smoothing_is_straight() {
        let d = samples::crossing_tangle_unoriented();
        let c = d.crossings()[0];
        let pos = smooth(&d, c, true).unwrap();
        assert_eq!(
            pos.canonical_key().unwrap(),
            samples::vertical_strands_unoriented().canonical_key().unwrap()
        );
        let neg = smooth(&d, c, false).unwrap();
        assert_eq!(
            neg.canonical_key().unwrap(),
            samples::horizontal_strands_unoriented().canonical_key().unwrap()
        );
    }

    #[test]
    fn kink_smoothings() {
        // positive kink: positive smoothing leaves strand + circle, negative
        // smoothing leaves a bare strand
        let d = samples::kink_arc_unoriented(true);
        let c = d.crossings()[0];
        let pos = smooth(&d, c, true).unwrap();
        assert_eq!(pos.circle_count(), 1);
        assert_eq!(pos.edges().count(), 1);
        let neg = smooth(&d, c, false).unwrap();
        assert_eq!(neg.circle_count(), 0);
        assert_eq!(neg.edges().count(), 1);
    }

    #[test]
    fn rewrite_agrees_with_oracle_on_fixtures() {
        for d in [
            samples::unknot(),
            samples::trefoil(),
            samples::hopf_link(),
            samples::kink_arc_unoriented(true),
            samples::crossing_tangle_unoriented(),
            samples::rii_tangle_unoriented(),
        ] {
            assert_eq!(
                bracket_rewrite(&d).unwrap(),
                bracket_oracle(&d).unwrap(),
                "oracle mismatch"
            );
        }
    }

    #[test]
    fn matchings_are_fixed_points() {
        use crate::basis::{enumerate_matchings, BoundarySignature};
        for m in enumerate_matchings(&BoundarySignature::Kauffman(6)) {
            let sv = bracket_rewrite(&m.diagram).unwrap();
            assert_eq!(sv.len(), 1);
            assert!(sv.coeff(&m.key).is_one());
        }
    }

    #[test]
    fn uniqueness_residuals_vanish_iff_kauffman() {
        // B = A^-1, d = -A^2 - A^-2: both residuals vanish
        for (name, r) in uniqueness_residuals(&KauffmanRules::default()) {
            assert!(r.is_zero(), "{} = {}", name, r);
        }
        // d = 0: the crossed residual is A^2 + A^-2
        let rules = KauffmanRules {
            circle: LaurentPoly::zero(),
            ..KauffmanRules::default()
        };
        let rs = uniqueness_residuals(&rules);
        assert!(rs[0].1.is_zero());
        assert_eq!(rs[1].1, apow(2) + apow(-2));
        // B = A: the straight residual is A^2 - 1
        let rules = KauffmanRules {
            neg: LaurentPoly::var("A"),
            circle: LaurentPoly::var("d"),
            ..KauffmanRules::default()
        };
        let rs = uniqueness_residuals(&rules);
        assert_eq!(rs[0].1, apow(2) - LaurentPoly::one());
        assert!(!rs[1].1.is_zero());
    }

    #[test]
    fn generic_residuals_match_paper_form() {
        let rs = uniqueness_residuals(&KauffmanRules::generic());
        let a = LaurentPoly::var("A");
        let b = LaurentPoly::var("B");
        let dd = LaurentPoly::var("d");
        assert_eq!(rs[0].1, &a * &b - LaurentPoly::one());
        assert_eq!(rs[1].1, &(&a * &a) + &(&b * &b) + &(&a * &b) * &dd);
    }

    #[test]
    fn mirror_is_a_inverse_substitution() {
        for d in [
            samples::trefoil(),
            samples::hopf_link(),
            samples::kink_arc_unoriented(true),
            samples::crossing_tangle_unoriented(),
        ] {
            let lhs = bracket_rewrite(&d.mirror()).unwrap();
            let image = SignedMonomial::power(false, "A", Exponent::integer(-1));
            let rhs = bracket_rewrite(&d)
                .unwrap()
                .substitute_coeffs(&Var::new("A"), &image)
                .unwrap()
                .map_diagrams(Signature::of(&d.mirror()), |m| m.mirror())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn projection_on_basis() {
        use crate::basis::{enumerate_matchings, BoundarySignature};
        for n in [0usize, 2, 4, 6] {
            for m in enumerate_matchings(&BoundarySignature::Kauffman(n)) {
                let once = bracket_rewrite(&m.diagram).unwrap();
                let mut twice = StateVector::new(once.signature.clone());
                for (_, t) in once.terms() {
                    let again = bracket_rewrite(&t.diagram).unwrap().scale(&t.coeff);
                    twice.add_all(&again).unwrap();
                }
                assert_eq!(once, twice);
            }
        }
    }

    #[test]
    fn locality_resolve_subset_first() {
        use rand::{Rng, SeedableRng};
        // evaluate a random subset of crossings inside a "sub-disk"
        // first, then evaluate the resulting combination globally
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let rules = KauffmanRules::default();
        for d in [samples::trefoil(), samples::hopf_link(), samples::rii_tangle_unoriented()] {
            let subset: Vec<_> = d
                .crossings()
                .into_iter()
                .filter(|_| rng.random_bool(0.5))
                .collect();
            let mut partial: Vec<(Diagram, LaurentPoly)> = vec![(d.clone(), LaurentPoly::one())];
            for c in subset {
                let mut next = Vec::new();
                for (cur, coeff) in partial {
                    next.push((smooth(&cur, c, true).unwrap(), &coeff * &rules.pos));
                    next.push((smooth(&cur, c, false).unwrap(), &coeff * &rules.neg));
                }
                partial = next;
            }
            let mut combined = StateVector::new(Signature::of(&d));
            for (cur, coeff) in partial {
                combined
                    .add_all(&bracket_rewrite(&cur).unwrap().scale(&coeff))
                    .unwrap();
            }
            assert_eq!(combined, bracket_rewrite(&d).unwrap());
        }
    }
}
