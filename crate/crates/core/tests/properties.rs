use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qp_forms::embed::{decide, min_dimension, Family, TargetSpace};
use qp_forms::forms::{parse_form, DiagonalForm};
use qp_forms::padic::{PAdic, PrimeContext};
use qp_forms::symbols::{classify_rational, hilbert, SquareClass};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

fn class() -> impl Strategy<Value = SquareClass> {
    prop::sample::select(SquareClass::ALL.to_vec())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..10_000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 500,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn disc_is_multiplicative(
        p in prime(),
        a in prop::collection::vec(class(), 0..5),
        b in prop::collection::vec(class(), 0..5),
    ) {
        let c = PrimeContext::new(p).unwrap();
        let (f, g) = (DiagonalForm::nondegenerate(&c, a), DiagonalForm::nondegenerate(&c, b));
        prop_assert_eq!(f.direct_sum(&g).disc(), f.disc().mul(g.disc()));
    }

    #[test]
    fn hilbert_is_symmetric_and_bimultiplicative(p in prime(), a in class(), b in class(), d in class()) {
        let c = PrimeContext::new(p).unwrap();
        prop_assert_eq!(hilbert(a, b, &c), hilbert(b, a, &c));
        prop_assert_eq!(hilbert(a, b.mul(d), &c), hilbert(a, b, &c) * hilbert(a, d, &c));
    }

    #[test]
    fn dsl_round_trips(p in prime(), k in 0usize..4, cls in prop::collection::vec(class(), 0..7)) {
        let c = PrimeContext::new(p).unwrap();
        let f = DiagonalForm::new(&c, k, cls);
        if f.dim() > 0 {
            prop_assert_eq!(parse_form(&f.to_dsl(), &c).unwrap(), f);
        }
    }

    #[test]
    fn arithmetic_agrees_with_rationals(p in prime(), x in rational(), y in rational()) {
        let c = PrimeContext::new(p).unwrap();
        let (a, b) = (PAdic::from_rational(&x, &c, 24), PAdic::from_rational(&y, &c, 24));
        let agrees = |got: PAdic, want: BigRational| {
            let abs = got.absolute_precision().expect("nonzero result");
            got.congruent(&PAdic::from_rational(&want, &c, 64), abs).unwrap()
        };
        if &x + &y != BigRational::from_integer(0.into()) {
            prop_assert!(agrees(a.add(&b).unwrap(), &x + &y));
        }
        prop_assert!(agrees(a.mul(&b), &x * &y));
        prop_assert!(agrees(a.div(&b).unwrap(), &x / &y));
    }

    #[test]
    fn integers_stay_exact(p in prime(), x in -100_000i64..100_000, y in -100_000i64..100_000) {
        let c = PrimeContext::new(p).unwrap();
        let (a, b) = (PAdic::from_i64(x, &c, 24), PAdic::from_i64(y, &c, 24));
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        let want = BigRational::from_integer(BigInt::from(x) * BigInt::from(y));
        prop_assert_eq!(a.mul(&b).to_rational(), Some(want));
    }

    #[test]
    fn square_class_respects_products(p in prime(), x in rational(), y in rational()) {
        let c = PrimeContext::new(p).unwrap();
        let cx = classify_rational(&x, &c).unwrap();
        let cy = classify_rational(&y, &c).unwrap();
        prop_assert_eq!(classify_rational(&(&x * &y), &c).unwrap(), cx.mul(cy));
        prop_assert_eq!(classify_rational(&(&x * &y * &y), &c).unwrap(), cx);
    }

    #[test]
    fn min_dimension_is_tight(
        p in prime(),
        k in 0usize..4,
        cls in prop::collection::vec(class(), 0..5),
        lorentz in any::<bool>(),
    ) {
        let c = PrimeContext::new(p).unwrap();
        let f = DiagonalForm::new(&c, k, cls);
        prop_assume!(f.dim() > 0);
        let fam = if lorentz { Family::Lorentzian } else { Family::Euclidean };
        let n = min_dimension(&f, fam);
        prop_assert!(decide(&f, TargetSpace::new(fam, n).unwrap()).embeds);
        if n > 1 {
            prop_assert!(!decide(&f, TargetSpace::new(fam, n - 1).unwrap()).embeds);
        }
    }
}
