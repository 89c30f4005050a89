//! Randomized checks over quasi-homogeneous, finitely determined germs: the
//! closed-form slice classification against the Puiseux oracle, and the
//! structural identities the classification rests on.

use germslice::classifier::{classify_slice, milnor_gamma, semigroup_of, unified_k, SliceCase};
use germslice::doublepoint::{classify_components, lambda_of, ComponentKind};
use germslice::generate::seeded_germ;
use germslice::germ::{infer_qh_signature, restriction_to_axis, validate_normal_form, NormalForm, QHSignature};
use germslice::invariants::{local_dimension, truncated_colength, Dimension};
use germslice::oracle::{oracle_slice, OracleOptions};
use germslice::algebra::{MPoly, Rational};
use germslice::germ::XY;
use num_integer::Integer;
use proptest::prelude::*;

struct Sample {
    nf: NormalForm,
    sig: QHSignature,
    s: u8,
}

/// A random finitely determined germ with square-free `λ`, or `None` when
/// the draw has to be discarded.
fn draw(seed: u64) -> Option<Sample> {
    let (_, germ) = seeded_germ(seed);
    let nf = validate_normal_form(&germ).ok()?;
    let sig = infer_qh_signature(&nf)?;
    let curve = lambda_of(&nf, Some(&sig)).ok()?;
    if !curve.is_square_free {
        return None;
    }
    let s = restriction_to_axis(&nf).s;
    Some(Sample { nf, sig, s })
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        max_global_rejects: 4096,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn classifier_matches_oracle(seed in any::<u64>()) {
        let Some(Sample { nf, sig, s }) = draw(seed) else { return Err(TestCaseError::reject("not FD")) };
        let predicted = classify_slice(&sig, s).expect("classifier accepts FD QH germs");
        let opts = OracleOptions { samples: 3, ..OracleOptions::default() }.expecting(&predicted.exponents);
        let oracle = oracle_slice(&nf, &opts).expect("oracle decides");
        prop_assert_eq!(&oracle.exponents, &predicted.exponents, "{} {}", nf.germ, sig);
    }

    #[test]
    fn lambda_has_the_predicted_type(seed in any::<u64>()) {
        let Some(Sample { nf, sig, .. }) = draw(seed) else { return Err(TestCaseError::reject("not FD")) };
        let curve = lambda_of(&nf, Some(&sig)).unwrap();
        let w = [sig.a, sig.b];
        let degree = curve.lambda.weighted_degree(&w).unwrap();
        prop_assert_eq!(degree * sig.b, (sig.d2 - sig.b) * (sig.d3 - sig.b));
        let dec = curve.decomposition.as_ref().unwrap();
        prop_assert_eq!(
            dec.s as u64 * sig.a + dec.v as u64 * sig.b + dec.r * sig.a * sig.b,
            degree
        );
        prop_assert!(dec.s <= 1);
    }

    #[test]
    fn axis_component_is_a_fold_when_present(seed in any::<u64>()) {
        let Some(Sample { nf, sig, .. }) = draw(seed) else { return Err(TestCaseError::reject("not FD")) };
        let Some(m) = nf.m else { return Ok(()) };
        prop_assume!(nf.n > 2);
        let mut curve = lambda_of(&nf, Some(&sig)).unwrap();
        classify_components(&nf, &sig, &mut curve).unwrap();
        let s = curve.decomposition.as_ref().unwrap().s;
        // V(x) ⊂ D(f) iff gcd(n, m) = 2, and then it is a fold
        prop_assert_eq!(s == 1, nf.n.gcd(&m) == 2);
        if s == 1 {
            prop_assert!(sig.b == 1 && sig.a % 2 == 1, "{}", sig);
            let x = MPoly::var(XY, "x").unwrap();
            let axis = curve.components.iter().find(|c| c.factor == x).expect("V(x) listed");
            prop_assert_eq!(axis.kind, ComponentKind::Fold);
        }
    }

    #[test]
    fn two_exponent_identities(seed in any::<u64>()) {
        let Some(Sample { sig, s, .. }) = draw(seed) else { return Err(TestCaseError::reject("not FD")) };
        let bt = classify_slice(&sig, s).unwrap();
        prop_assert_eq!(bt.mu, milnor_gamma(&sig, s).unwrap());
        prop_assert_eq!(bt.mu, 2 * bt.gaps);
        prop_assert_eq!(bt.mu, bt.conductor);
        if bt.exponents.len() == 2 {
            let (e0, e1) = (bt.exponents[0], bt.exponents[1]);
            prop_assert_eq!(bt.mu, (e0 - 1) * (e1 - 1));
            prop_assert_eq!(unified_k(&sig, s).unwrap(), e1);
        } else {
            prop_assert_eq!(bt.case, Some(SliceCase::B));
        }
        let brute = semigroup_of(&bt.exponents).unwrap();
        prop_assert_eq!(brute.conductor, bt.conductor);
    }
}

fn small_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..5, 0u32..5), -3i64..=3), 1..5).prop_map(|terms| {
        let mut p = MPoly::zero(XY);
        for ((i, j), c) in terms {
            if i + j > 0 {
                p.add_term(vec![i, j], Rational::from_integer(c.into()));
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Adding the high powers `x^D, y^D` cannot change a colength below `D`,
    /// so the dense count in `K[x, y]/m^D` must agree whenever it is small.
    #[test]
    fn standard_basis_matches_dense_count(f in small_poly(), g in small_poly()) {
        let ideal = [f, g];
        let report = local_dimension(&ideal).unwrap();
        let dense = truncated_colength(&ideal, 12);
        match report.dimension {
            Dimension::Finite(d) if d < 12 => prop_assert_eq!(d, dense),
            Dimension::Finite(d) => prop_assert!(dense <= d),
            Dimension::Infinite => prop_assert!(dense >= 12),
        }
    }
}

#[test]
fn cross_cap_pipeline() {
    let nf = validate_normal_form(&germslice::germ::MapGerm::parse("x", "y^2", "x*y").unwrap()).unwrap();
    let sig = infer_qh_signature(&nf).unwrap();
    assert_eq!(sig.as_array(), [1, 2, 2, 1, 1]);
    assert_eq!(classify_slice(&sig, restriction_to_axis(&nf).s).unwrap().exponents, vec![2, 3]);
}
