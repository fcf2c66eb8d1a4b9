mod common;

use common::*;
use netcoh::piecewise::{
    charges, localization, merge_intervals, pullback_isometry, space_member, symplectic_form,
};
use netcoh::{Isometry, SpaceTag, TestPair};
use num_traits::Zero;
use proptest::prelude::*;

fn contained(
    inner: &[(netcoh::Rational, netcoh::Rational)],
    outer: &[(netcoh::Rational, netcoh::Rational)],
) -> bool {
    inner
        .iter()
        .all(|(a, b)| outer.iter().any(|(c, d)| c <= a && b <= d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sigma_bilinear_antisymmetric(f in any_pair(), g in any_pair(), k in any_pair(),
                                    a in small_rational(), b in small_rational()) {
        let lhs = symplectic_form(&TestPair::combine(&a, &f, &b, &g), &k);
        prop_assert_eq!(lhs, &a * symplectic_form(&f, &k) + &b * symplectic_form(&g, &k));
        prop_assert_eq!(symplectic_form(&f, &g), -symplectic_form(&g, &f));
        prop_assert!(symplectic_form(&f, &f).is_zero());
    }

    #[test]
    fn charges_additive(f in any_pair(), g in any_pair()) {
        let (cf, cg, cs) = (charges(&f), charges(&g), charges(&(&f + &g)));
        prop_assert_eq!(cs.charge, &cf.charge + &cg.charge);
        prop_assert_eq!(cs.left_grade, cf.left_grade + cg.left_grade);
        prop_assert_eq!(cs.right_grade, cf.right_grade + cg.right_grade);
    }

    #[test]
    fn tag_lattice(f in any_pair()) {
        use SpaceTag::*;
        for (sub, sup) in [(Va, Vb), (Vb, Vc), (Vc, Vf), (Va, Vq), (Vq, Ve), (Ve, Vf), (Vf0, Vfl), (Vf0, Vfr), (Va, Vf0)] {
            prop_assert!(!space_member(&f, sub) || space_member(&f, sup), "{sub} ⊄ {sup}");
        }
    }

    #[test]
    fn localization_subadditive(f in any_pair(), g in any_pair()) {
        let joint = merge_intervals(localization(&f).into_iter().chain(localization(&g)));
        prop_assert!(contained(&localization(&(&f + &g)), &joint));
    }

    #[test]
    fn isometries_preserve_sigma_and_tags(f in any_pair(), g in any_pair(), t in -8i64..=8, refl in any::<bool>()) {
        let m = Isometry::new(if refl { -1 } else { 1 }, h(t)).unwrap();
        let (pf, pg) = (pullback_isometry(&f, &m), pullback_isometry(&g, &m));
        prop_assert_eq!(symplectic_form(&pf, &pg), symplectic_form(&f, &g));
        for tag in SpaceTag::ALL {
            let image = if refl { tag.reflected() } else { tag };
            prop_assert_eq!(space_member(&f, tag), space_member(&pf, image), "{}", tag);
        }
    }

    #[test]
    fn graded_locality_pointwise(
        (a, b) in span_in(-8, 0), (c, d) in span_in(0, 8),
        f0 in prop::collection::vec(-4i64..=4, 1..5), f1 in prop::collection::vec(-6i64..=6, 1..5),
        g0 in prop::collection::vec(-4i64..=4, 1..5), g1 in prop::collection::vec(-6i64..=6, 1..5),
        l in -3i64..=3, r in -3i64..=3,
    ) {
        let f = pair_from(a, b, &f0, &f1, l, 0);
        let g = pair_from(c, d, &g0, &g1, 0, r);
        prop_assert!(space_member(&f, SpaceTag::Vfl) && space_member(&g, SpaceTag::Vfr));
        prop_assert!(symplectic_form(&f, &g).is_zero());
    }
}
