//! Property tests for the exact arithmetic layers.

use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use braidloom::braid::{plat_writhe, BraidWord};
use braidloom::kauffman::bracket;
use braidloom::numerics::laurent::LaurentPolynomial;

fn arb_poly() -> impl Strategy<Value = LaurentPolynomial> {
    proptest::collection::vec((-8i64..=8, -20i64..=20), 0..6).prop_map(|terms| {
        let mut p = LaurentPolynomial::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    })
}

fn arb_word() -> impl Strategy<Value = BraidWord> {
    (1usize..=3, proptest::collection::vec((1i32..=5, proptest::bool::ANY), 0..8)).prop_map(
        |(half, raw)| {
            let n = 2 * half;
            let letters = raw
                .into_iter()
                .map(|(i, neg)| {
                    let i = ((i - 1) % (n as i32 - 1).max(1)) + 1;
                    if neg {
                        -i
                    } else {
                        i
                    }
                })
                .collect();
            BraidWord::new(n, letters).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_is_commutative_and_distributive(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        let lhs = &p * &(&q + &r);
        let rhs = &(&p * &q) + &(&p * &r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_eval_is_a_homomorphism(p in arb_poly(), q in arb_poly(), re in 0.3f64..1.5, im in -0.7f64..0.7) {
        let a = Complex64::new(re, im);
        let lhs = (&p * &q).eval(a).unwrap();
        let rhs = p.eval(a).unwrap() * q.eval(a).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn laurent_serialization_round_trips(p in arb_poly()) {
        let text = p.to_string();
        let back: LaurentPolynomial = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn braid_text_round_trips(b in arb_word()) {
        let back = BraidWord::from_text(&b.to_text()).unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn writhe_and_bracket_ignore_cancelling_pairs(b in arb_word(), at_frac in 0.0f64..1.0, i in 1i32..=5) {
        let n = b.strands();
        let i = ((i - 1) % (n as i32 - 1).max(1)) + 1;
        let at = ((b.letters().len() as f64) * at_frac) as usize;
        let mut letters = b.letters().to_vec();
        letters.splice(at..at, [i, -i]);
        let padded = BraidWord::new(n, letters).unwrap();
        prop_assert_eq!(plat_writhe(&padded).unwrap(), plat_writhe(&b).unwrap());
        prop_assert_eq!(bracket(&padded).unwrap(), bracket(&b).unwrap());
    }

    #[test]
    fn mirror_exchanges_the_bracket_variable(b in arb_word()) {
        prop_assert_eq!(bracket(&b.mirror()).unwrap(), bracket(&b).unwrap().mirror());
    }
}
