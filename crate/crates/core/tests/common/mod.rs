//! Shared generators for the property tests: grid test pairs on a
//! half-integer grid inside [-4, 4].
#![allow(dead_code)]

use netcoh::rational::{int, rat};
use netcoh::{PiecewiseLinear, Rational, TestPair};
use proptest::prelude::*;

pub const LO: i64 = -8; // in half units
pub const HI: i64 = 8;

pub fn h(k: i64) -> Rational {
    rat(k, 2)
}

/// Pair on nodes `a..=b` (half units) with given tails, interior values
/// drawn from `vals`.
pub fn pair_from(a: i64, b: i64, f0: &[i64], f1: &[i64], left: i64, right: i64) -> TestPair {
    let xs: Vec<Rational> = (a..=b).map(h).collect();
    let n = xs.len();
    let y0 = (0..n)
        .map(|k| {
            if k == 0 || k + 1 == n {
                int(0)
            } else {
                int(f0[k % f0.len()])
            }
        })
        .collect();
    let y1 = (0..n)
        .map(|k| match k {
            0 => int(left),
            k if k + 1 == n => int(right),
            _ => rat(f1[k % f1.len()], 2),
        })
        .collect();
    TestPair::new(
        PiecewiseLinear::new(xs.clone(), y0).unwrap(),
        PiecewiseLinear::new(xs, y1).unwrap(),
    )
    .unwrap()
}

/// `(a, b)` half-unit node indices with `a < b` inside `[lo, hi]`.
pub fn span_in(lo: i64, hi: i64) -> impl Strategy<Value = (i64, i64)> {
    (lo..hi).prop_flat_map(move |a| (Just(a), a + 1..=hi))
}

pub fn pair_in(lo: i64, hi: i64) -> impl Strategy<Value = TestPair> {
    (
        span_in(lo, hi),
        prop::collection::vec(-4i64..=4, 1..6),
        prop::collection::vec(-6i64..=6, 1..6),
        -3i64..=3,
        -3i64..=3,
    )
        .prop_map(|((a, b), f0, f1, l, r)| pair_from(a, b, &f0, &f1, l, r))
}

pub fn any_pair() -> impl Strategy<Value = TestPair> {
    pair_in(LO, HI)
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}
