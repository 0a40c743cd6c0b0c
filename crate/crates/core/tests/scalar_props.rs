use num_rational::Rational64;
use proptest::prelude::*;
use smlab::scalar::{monomial_inverse, potts_d, EntryMonomial, Ring, Scalar};

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        (0i64..4).prop_map(|e| Ring::potts_branch(1, e).unwrap()),
        (0i64..8).prop_map(|e| Ring::potts_branch(2, 2 * e + 1).unwrap()),
        (0i64..4).prop_map(|e| Ring::potts_branch(4, e).unwrap()),
        (5u64..=13).prop_map(Ring::potts),
    ]
}

fn monomial() -> impl Strategy<Value = EntryMonomial> {
    (prop_oneof![Just(1i64), Just(-1), Just(2), Just(-3)], 1i64..=4, 0i64..24, -9i32..=9)
        .prop_map(|(p, q, e, k)| EntryMonomial::new(Rational64::new(p, q), e, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_expands_to_one(ring in ring(), m in monomial()) {
        let n = 24;
        let inv = monomial_inverse(m, n).unwrap();
        let prod = m.expand(&ring, n).unwrap().mul(&inv.expand(&ring, n).unwrap()).unwrap();
        prop_assert_eq!(prod, Scalar::one(ring));
    }

    #[test]
    fn ring_zero_embeds_to_zero(ring in ring(), a in monomial(), b in monomial(), c in monomial()) {
        // the Potts identities expanded with random coefficients stay ring zero
        let n = 24;
        let d = potts_d(&ring).unwrap();
        let r = Scalar::from_int(ring, ring.r as i64);
        let lhs = d.mul(&d).unwrap().sub(&r).unwrap();
        let x = a.expand(&ring, n).unwrap().add(&b.expand(&ring, n).unwrap()).unwrap();
        let y = x.mul(&c.expand(&ring, n).unwrap()).unwrap();
        let z = y.mul(&lhs).unwrap();
        if ring.r >= 2 {
            prop_assert!(z.is_zero());
            prop_assert!(z.embed(256).contains_zero());
        }
        // multiplication agrees with the embedding
        let ex = x.embed(256).mul(&c.expand(&ring, n).unwrap().embed(256));
        let ey = y.embed(256);
        prop_assert!(ex.sub(&ey).contains_zero());
    }
}
