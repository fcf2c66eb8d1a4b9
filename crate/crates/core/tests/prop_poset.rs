use std::sync::{Arc, OnceLock};

use netcoh::poset::{
    apply_inversion, before, build_poset, disjoint, disjoint_sieve, is_connected, leq,
};
use netcoh::rational::int;
use netcoh::simplicial::{
    canonical_simplex1, enumerate_paths, enumerate_simplices, Simplex, SupportPolicy,
};
use netcoh::{CausalPoset, PosetKind};
use proptest::prelude::*;

fn poset(kind: PosetKind) -> Arc<CausalPoset> {
    static CACHE: OnceLock<Vec<Arc<CausalPoset>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [PosetKind::I, PosetKind::I2, PosetKind::D, PosetKind::J]
            .iter()
            .map(|k| Arc::new(build_poset(*k, &int(-3), &int(3), &int(1), usize::MAX).unwrap()))
            .collect()
    });
    all[match kind {
        PosetKind::I => 0,
        PosetKind::I2 => 1,
        PosetKind::D => 2,
        PosetKind::J => 3,
    }]
    .clone()
}

fn kind() -> impl Strategy<Value = PosetKind> {
    prop_oneof![
        Just(PosetKind::I),
        Just(PosetKind::I2),
        Just(PosetKind::D),
        Just(PosetKind::J)
    ]
}

fn triple() -> impl Strategy<Value = (Arc<CausalPoset>, usize, usize, usize)> {
    kind().prop_flat_map(|k| {
        let p = poset(k);
        let n = p.len();
        (Just(p), 0..n, 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn disjointness_axioms((p, i, j, k) in triple()) {
        let (a, b, c) = (&p.elements[i], &p.elements[j], &p.elements[k]);
        prop_assert_eq!(disjoint(a, b), disjoint(b, a));
        if leq(a, b) && disjoint(b, c) {
            prop_assert!(disjoint(a, c));
        }
        let spans_window = a.hull() == Some(IndexElement::Interval { a: p.lo.clone(), b: p.hi.clone() });
        if p.kind != PosetKind::J && !spans_window {
            prop_assert!(p.elements.iter().any(|o| disjoint(a, o)), "no disjoint element for {}", a);
        }
    }

    #[test]
    fn before_is_strict_and_compatible((p, i, j, k) in triple()) {
        let (a, b, c) = (&p.elements[i], &p.elements[j], &p.elements[k]);
        prop_assert!(!before(a, a));
        prop_assert!(!(before(a, b) && before(b, a)));
        if before(a, b) {
            prop_assert!(disjoint(a, b));
            if before(b, c) {
                prop_assert!(before(a, c));
            }
        }
    }

    #[test]
    fn sieve_reverses_inclusion((p, i, j, _k) in triple()) {
        let (a, b) = (&p.elements[i], &p.elements[j]);
        if leq(a, b) {
            let (sa, sb) = (disjoint_sieve(a, &p).unwrap(), disjoint_sieve(b, &p).unwrap());
            let all = |s: &netcoh::poset::Sieve| {
                s.left.iter().chain(&s.right).chain(&s.other).cloned().collect::<Vec<_>>()
            };
            let fa = all(&sa);
            prop_assert!(all(&sb).iter().all(|o| fa.contains(o)));
        }
    }

    #[test]
    fn sieve_split_by_kind((p, i, _j, _k) in triple()) {
        let o = &p.elements[i];
        let s = disjoint_sieve(o, &p).unwrap();
        if p.kind == PosetKind::I {
            prop_assert!(s.other.is_empty());
        }
        for e in &p.elements {
            let side = (s.left.contains(e), s.right.contains(e), s.other.contains(e));
            let want = match (disjoint(e, o), before(e, o), before(o, e)) {
                (false, _, _) => (false, false, false),
                (true, true, _) => (true, false, false),
                (true, _, true) => (false, true, false),
                (true, false, false) => (false, false, true),
            };
            prop_assert_eq!(side, want, "{} against {}", e, o);
        }
        if p.kind == PosetKind::D && o.is_interval() {
            prop_assert!(s.other.iter().all(|e| e.is_double()));
        }
    }

    #[test]
    fn inversion_involutive_and_reversing((p, i, j, _k) in triple()) {
        let (a, b) = (&p.elements[i], &p.elements[j]);
        let (sa, sb) = (apply_inversion(a), apply_inversion(b));
        prop_assert_eq!(&apply_inversion(&sa), a);
        prop_assert!(p.contains(&sa));
        prop_assert_eq!(before(a, b), before(&sb, &sa));
    }

    #[test]
    fn canonical_support_is_minimal((p, i, j, _k) in triple()) {
        let (a, b) = (&p.elements[i], &p.elements[j]);
        if let Ok(s) = canonical_simplex1(a, b, &p) {
            prop_assert!(leq(a, &s.support) && leq(b, &s.support));
            prop_assert!(!p.elements.iter().any(|u| u != &s.support && leq(a, u) && leq(b, u) && leq(u, &s.support)));
        }
    }
}

use netcoh::IndexElement;

#[test]
fn every_two_simplex_is_face_compatible() {
    let p = build_poset(PosetKind::D, &int(0), &int(4), &int(1), usize::MAX).unwrap();
    let all = enumerate_simplices(&p, 2, SupportPolicy::Minimal, usize::MAX).unwrap();
    assert!(!all.is_empty());
    for s in all {
        let Simplex::S2(s) = s else {
            panic!("expected 2-simplices")
        };
        assert!(s.faces_compatible());
        assert_eq!(s.face(0).face(0), s.face(1).face(0));
        assert_eq!(s.face(0).face(1), s.face(2).face(0));
        assert_eq!(s.face(1).face(1), s.face(2).face(1));
    }
}

#[test]
fn connectedness_matches_path_search() {
    for kind in [PosetKind::I, PosetKind::I2, PosetKind::D, PosetKind::J] {
        let p = build_poset(kind, &int(0), &int(3), &int(1), usize::MAX).unwrap();
        let all_reach = p.elements.iter().all(|a| {
            p.elements
                .iter()
                .all(|b| !enumerate_paths(a, b, &p, p.len()).unwrap().is_empty())
        });
        assert_eq!(all_reach, is_connected(&p), "{kind:?}");
    }
}
