mod common;

use std::sync::{Arc, OnceLock};

use common::*;
use netcoh::nets::{AmbientSpace, Net};
use netcoh::piecewise::{charges, symplectic_form};
use netcoh::poset::build_poset;
use netcoh::rational::{int, rat};
use netcoh::sectors::*;
use netcoh::{ChargePair, IndexElement, PosetKind, SpaceTag};
use proptest::prelude::*;

fn charge() -> impl Strategy<Value = ChargePair> {
    (-4i64..=4, -4i64..=4, 1i64..=2).prop_map(|(c, q, d)| ChargePair::new(rat(c, d), int(q)))
}

fn add(x: &ChargePair, y: &ChargePair) -> ChargePair {
    ChargePair::new(&x.c + &y.c, &x.q + &y.q)
}

fn va_net() -> &'static Net {
    static NET: OnceLock<Net> = OnceLock::new();
    NET.get_or_init(|| {
        let p =
            Arc::new(build_poset(PosetKind::I, &int(-3), &int(3), &int(1), usize::MAX).unwrap());
        Net::new(
            SpaceTag::Va,
            p,
            AmbientSpace::new(int(-3), int(3), int(1)).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monodromy_law(r in charge(), t in charge()) {
        let m = monodromy(&r, &t).unwrap();
        prop_assert_eq!(&m, &(int(-2) * (&r.c * &t.q + &r.q * &t.c)));
        prop_assert_eq!(&m, &monodromy(&t, &r).unwrap());
        prop_assert_eq!(is_symmetric_pair(&r, &t).unwrap(), m == int(0));
    }

    #[test]
    fn monodromy_bilinear(r1 in charge(), r2 in charge(), t in charge()) {
        prop_assert_eq!(
            monodromy(&add(&r1, &r2), &t).unwrap(),
            monodromy(&r1, &t).unwrap() + monodromy(&r2, &t).unwrap()
        );
    }

    /// Braiding does not see the shape of the representatives.
    #[test]
    fn braiding_independent_of_shape(
        r in charge(), t in charge(),
        (m1, k1) in (1i64..4, 0i64..2), (m2, k2) in (1i64..4, 0i64..2),
    ) {
        use TailConvention::*;
        let (i1, i2) = (IndexElement::iv(0, 2), IndexElement::iv(3, 5));
        let canon_l = canonical_representative(&r, &i1, RightTailZero, &int(1)).unwrap();
        let canon_r = canonical_representative(&t, &i2, LeftTailZero, &int(1)).unwrap();
        let shaped_l = shaped_representative(
            &r, &i1, RightTailZero, (&int(0), &rat(m1, 2), &int(2)), (&rat(k1, 2), &int(2)),
        ).unwrap();
        let shaped_r = shaped_representative(
            &t, &i2, LeftTailZero, (&int(3), &(int(3) + rat(m2, 2)), &int(5)), (&int(3), &(int(4) + rat(k2, 2))),
        ).unwrap();
        prop_assert_eq!(charges(&shaped_l.representative).charge, r);
        let e0 = braiding_phase(&canon_l, &canon_r).unwrap().exponent;
        prop_assert_eq!(braiding_phase(&shaped_l, &shaped_r).unwrap().exponent, e0);
    }

    #[test]
    fn action_functional_left(r in charge(), g in pair_in(-12, -6)) {
        let f = canonical_representative(&r, &IndexElement::iv(0, 2), TailConvention::LeftTailZero, &int(1))
            .unwrap()
            .representative;
        let (cc, ct) = action_functional(&f, ComplementSide::Left);
        let cg = charges(&g);
        prop_assert_eq!(symplectic_form(&f, &g), ct * cg.right_grade + cc * cg.charge.c);
    }
}

#[test]
fn transporter_trichotomy() {
    let net = va_net();
    let (i1, i2) = (IndexElement::iv(-3, -1), IndexElement::iv(1, 3));
    for (c, q) in [(0, 0), (1, 0), (-2, 0), (0, 1), (3, -1)] {
        let ch = ChargePair::ints(c, q);
        let (t, rep) = transporter(&ch, &i1, &i2, net).unwrap();
        assert!(
            rep.zero_total_charge,
            "transporter of {ch:?} carries charge"
        );
        assert!(rep.in_dual, "{ch:?}");
        if ch.is_zero() {
            assert!(t.is_zero() && rep.in_additive_extension);
        } else {
            assert!(!rep.in_additive_extension, "{ch:?} transported additively");
        }
    }
}
