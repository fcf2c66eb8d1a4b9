//! Acceptance suite: twelve exact criteria, one line each.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. Exit status is non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use netcoh::cohomology::{
    check_cocycle, coboundary_feasibility, condition_aa, induced_cocycle, witness_reproduces, z0,
    Feasibility,
};
use netcoh::nets::{AmbientSpace, Net, Side};
use netcoh::piecewise::{charges, localization, space_member, symplectic_form, PiecewiseLinear};
use netcoh::poset::{
    before, bot_graph, build_poset, flip_check, is_cofinal, is_connected, is_directed,
};
use netcoh::rational::{int, rat};
use netcoh::sectors::{braiding_phase, canonical_representative, monodromy, TailConvention};
use netcoh::simplicial::canonical_simplex1;
use netcoh::weyl::{adjoint_phase, mobius_from_double_interval, partition_of_unity, xi_apply};
use netcoh::{CausalPoset, ChargePair, IndexElement, PosetKind, Rational, SpaceTag, TestPair};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SEED: u64 = 0x5eed;

fn ambient() -> Arc<AmbientSpace> {
    AmbientSpace::default_window()
}

fn q(k: i64) -> Rational {
    rat(k, 4)
}

/// Interval on the quarter grid, in grid units.
fn iq(a: i64, b: i64) -> IndexElement {
    IndexElement::interval(q(a), q(b)).unwrap()
}

fn dq(a: i64, b: i64, c: i64, d: i64) -> IndexElement {
    IndexElement::double(q(a), q(b), q(c), q(d)).unwrap()
}

fn window_poset(kind: PosetKind) -> Arc<CausalPoset> {
    Arc::new(build_poset(kind, &int(-8), &int(8), &q(1), usize::MAX).unwrap())
}

fn small_poset(kind: PosetKind) -> Arc<CausalPoset> {
    Arc::new(build_poset(kind, &int(0), &int(4), &int(1), usize::MAX).unwrap())
}

fn twenty_intervals() -> Vec<IndexElement> {
    (0..20)
        .map(|k| {
            let a = -31 + 3 * k;
            iq(a, a + 2 + (k % 5))
        })
        .collect()
}

/// Double intervals with components of 2..=5 cells and gaps of 1..=5 cells.
/// (A one-cell component carries no zero-integral f0 on the grid.)
fn doubles(n: usize) -> Vec<IndexElement> {
    (0..n as i64)
        .map(|k| {
            let a = -30 + 4 * k;
            let (l1, g, l2) = (2 + k % 4, 1 + k % 5, 2 + (k + 2) % 4);
            dq(a, a + l1, a + l1 + g, a + l1 + g + l2)
        })
        .collect()
}

fn cells(a: &Rational, b: &Rational) -> i64 {
    let k = (b - a) / q(1);
    assert!(k.is_integer());
    i64::try_from(k.to_integer()).unwrap()
}

/// Rank oracle by node counting: per component of `k` cells, `k−1` free f0
/// nodes and `k−1` free f1 nodes; one shared f1 plateau across the gap; one
/// constraint `∫f0 = 0`.
fn va_dims(e: &IndexElement) -> (usize, usize) {
    let IndexElement::DoubleInterval { a, b, c, d } = e else {
        unreachable!()
    };
    let (k1, k2) = (cells(a, b), cells(c, d));
    let whole = (k1 - 1) + (k2 - 1) + (k1 - 1) + (k2 - 1) + 1 - 1;
    let parts = (2 * k1 - 3).max(0) + (2 * k2 - 3).max(0);
    (whole as usize, parts as usize)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_haag() -> Outcome {
    let net = Net::new(SpaceTag::Va, window_poset(PosetKind::I), ambient());
    let is = twenty_intervals();
    for i in &is {
        let (d, m) = (
            net.dual(i).map_err(|e| e.to_string())?,
            net.materialize(i).unwrap(),
        );
        check(d == m, || {
            format!("{i}: dual dim {} vs local dim {}", d.dim(), m.dim())
        })?;
    }
    Ok(format!("{} intervals", is.len()))
}

fn c2_double_gap() -> Outcome {
    let net = Net::new(SpaceTag::Va, window_poset(PosetKind::I), ambient());
    let es = doubles(10);
    for e in &es {
        let add = net.additive_extension(e).map_err(|x| x.to_string())?;
        let dual = net.dual(e).map_err(|x| x.to_string())?;
        let mat = net.materialize(e).unwrap();
        let (whole, parts) = va_dims(e);
        check(add.is_subspace_of(&dual).unwrap(), || {
            format!("{e}: extension not inside dual")
        })?;
        check(dual == mat, || format!("{e}: dual ≠ local space"))?;
        check(dual.dim() == whole && add.dim() == parts, || {
            format!(
                "{e}: dims {}/{} vs oracle {whole}/{parts}",
                dual.dim(),
                add.dim()
            )
        })?;
        check(dual.dim() - add.dim() == 2, || {
            format!("{e}: gap {}", dual.dim() - add.dim())
        })?;
    }
    Ok(format!("{} double intervals, gap 2", es.len()))
}

fn c3_additivity() -> Outcome {
    let p = window_poset(PosetKind::I);
    let es = doubles(10);
    for tag in [SpaceTag::Vf, SpaceTag::Vf0] {
        let net = Net::new(tag, p.clone(), ambient());
        for e in &es {
            let add = net.additive_extension(e).map_err(|x| x.to_string())?;
            check(add == net.materialize(e).unwrap(), || {
                format!("{tag} on {e}")
            })?;
        }
    }
    Ok(format!("Vf and Vf0 on {} double intervals", es.len()))
}

/// Random pair localized in the closed interval `[a, b]` (grid units), with
/// tails `(left, right)`.
fn random_pair(rng: &mut ChaCha8Rng, a: i64, b: i64, left: Rational, right: Rational) -> TestPair {
    let xs: Vec<Rational> = (a..=b).map(q).collect();
    let n = xs.len();
    let f0: Vec<Rational> = (0..n)
        .map(|k| {
            if k == 0 || k + 1 == n {
                Rational::zero()
            } else {
                int(rng.gen_range(-3..=3))
            }
        })
        .collect();
    let f1: Vec<Rational> = (0..n)
        .map(|k| match k {
            0 => left.clone(),
            k if k + 1 == n => right.clone(),
            _ => rat(rng.gen_range(-6..=6), 2),
        })
        .collect();
    TestPair::new(
        PiecewiseLinear::new(xs.clone(), f0).unwrap(),
        PiecewiseLinear::new(xs, f1).unwrap(),
    )
    .unwrap()
}

fn inside(f: &TestPair, a: i64, b: i64) -> bool {
    localization(f)
        .iter()
        .all(|(x, y)| *x >= q(a) && *y <= q(b))
}

fn c4_graded_locality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for s in 0..1000 {
        let a1 = rng.gen_range(-32..28);
        let b1 = rng.gen_range(a1 + 1..=29);
        let a2 = rng.gen_range(b1..31);
        let b2 = rng.gen_range(a2 + 1..=32);
        let (tl, tr) = (int(rng.gen_range(-4..=4)), int(rng.gen_range(-4..=4)));
        let f = random_pair(&mut rng, a1, b1, tl, int(0));
        let g = random_pair(&mut rng, a2, b2, int(0), tr);
        check(before(&iq(a1, b1), &iq(a2, b2)), || {
            format!("sample {s}: not ordered")
        })?;
        check(
            space_member(&f, SpaceTag::Vfl) && inside(&f, a1, b1),
            || format!("sample {s}: F"),
        )?;
        check(
            space_member(&g, SpaceTag::Vfr) && inside(&g, a2, b2),
            || format!("sample {s}: G"),
        )?;
        let sg = symplectic_form(&f, &g);
        check(sg.is_zero(), || {
            format!("sample {s}: σ = {sg} for {f:?} / {g:?}")
        })?;
    }
    Ok("1000 seeded pairs, σ = 0".into())
}

fn c5_graded_duality() -> Outcome {
    let p = window_poset(PosetKind::I);
    let fl = Net::new(SpaceTag::Vfl, p.clone(), ambient());
    let fr = Net::new(SpaceTag::Vfr, p.clone(), ambient());
    let vc = Net::new(SpaceTag::Vc, p.clone(), ambient());
    let is: Vec<IndexElement> = twenty_intervals().into_iter().step_by(2).collect();
    let es = doubles(10);
    for o in is.iter().chain(&es) {
        let g = fl.graded_dual(Side::L, o).map_err(|e| e.to_string())?;
        check(g == fl.materialize(o).unwrap(), || {
            format!("left graded dual on {o}")
        })?;
        let g = fr.graded_dual(Side::R, o).map_err(|e| e.to_string())?;
        check(g == fr.materialize(o).unwrap(), || {
            format!("right graded dual on {o}")
        })?;
    }
    for i in &is {
        let g = vc.global_graded_dual(i).map_err(|e| e.to_string())?;
        check(g == vc.materialize(i).unwrap(), || {
            format!("global graded dual on {i}")
        })?;
    }
    Ok(format!(
        "{} intervals, {} double intervals, both sides; global on intervals",
        is.len(),
        es.len()
    ))
}

fn c6_aa() -> Outcome {
    let p = small_poset(PosetKind::D);
    let vf = Net::new(SpaceTag::Vf, p.clone(), ambient());
    let va = Net::new(SpaceTag::Va, p.clone(), ambient());
    let pairs = [
        (IndexElement::iv(0, 1), IndexElement::iv(3, 4)),
        (IndexElement::iv(0, 1), IndexElement::iv(2, 3)),
        (IndexElement::iv(1, 2), IndexElement::iv(3, 4)),
        (IndexElement::iv(0, 2), IndexElement::iv(3, 4)),
        (IndexElement::iv(0, 1), IndexElement::iv(2, 4)),
        (IndexElement::iv(1, 2), IndexElement::iv(2, 3)),
    ];
    for (a1, a0) in &pairs {
        let b = canonical_simplex1(a0, a1, &p).map_err(|e| e.to_string())?;
        let r = condition_aa(&vf, &b, 3).map_err(|e| e.to_string())?;
        check(r.holds, || format!("Vf fails on {a1} → {a0}"))?;
        let r = condition_aa(&va, &b, 3).map_err(|e| e.to_string())?;
        check(!r.holds, || format!("Va holds on {a1} → {a0}"))?;
        let w = r.witness.clone().ok_or("Va failure without witness")?;
        check(
            !r.certificates.is_empty() && r.certificates.iter().all(|c| c.verified),
            || format!("uncertified witness on {a1} → {a0}"),
        )?;
        // Witness oracle: a zero-charge element that is not a sum of pieces
        // localized in the two end intervals.
        check(space_member(&w, SpaceTag::Va), || {
            format!("witness outside Va: {w:?}")
        })?;
        let ends = va
            .materialize(a1)
            .unwrap()
            .join(&va.materialize(a0).unwrap())
            .unwrap();
        check(!ends.contains(&w).unwrap(), || {
            format!("witness lies in the end join: {w:?}")
        })?;
        for c in &r.certificates {
            let sum = c.summands.iter().fold(TestPair::zero(), |acc, s| {
                TestPair::combine(&Rational::one(), &acc, &Rational::one(), s)
            });
            check(sum == w, || "certificate summands do not add up".into())?;
        }
    }
    Ok(format!("{} endpoint pairs on D", pairs.len()))
}

fn c7_cocycles() -> Outcome {
    let p = small_poset(PosetKind::D);
    let mut lines = Vec::new();
    for (c, qq) in [(1, 0), (0, 1), (1, 1), (0, 0)] {
        let ch = ChargePair::ints(c, qq);
        let z = induced_cocycle(&ch, p.clone(), Side::L, &q(1)).map_err(|e| e.to_string())?;
        check(check_cocycle(&z).map_err(|e| e.to_string())?.ok(), || {
            format!("{ch:?}: not a cocycle")
        })?;
        for tag in [SpaceTag::Vf, SpaceTag::Vfl] {
            match coboundary_feasibility(&z, tag).map_err(|e| e.to_string())? {
                Feasibility::Trivializer(w) => check(
                    witness_reproduces(&z, &w) && w.localized.iter().all(|x| *x),
                    || format!("{ch:?} in {tag}: trivializer not verified"),
                )?,
                Feasibility::Obstruction(o) => {
                    return Err(format!("{ch:?} in {tag}: obstructed ({})", o.reason))
                }
            }
        }
        let fa = coboundary_feasibility(&z, SpaceTag::Va).map_err(|e| e.to_string())?;
        match (&fa, ch.is_zero()) {
            (Feasibility::Trivializer(w), true) => {
                check(witness_reproduces(&z, w), || "(0,0) in Va".into())?
            }
            (Feasibility::Obstruction(o), false) => check(
                !charges(&o.transporter).charge.is_zero() || !o.forced.is_zero(),
                || format!("{ch:?}: empty certificate"),
            )?,
            _ => {
                return Err(format!(
                    "{ch:?} in Va: unexpected {}",
                    if fa.is_trivial() {
                        "trivializer"
                    } else {
                        "obstruction"
                    }
                ))
            }
        }
        lines.push(format!("({c},{qq})"));
    }
    Ok(format!("charges {} on D", lines.join(" ")))
}

fn c8_z0() -> Outcome {
    let amb = ambient();
    let constant = TestPair::from_f1(PiecewiseLinear::constant(int(1)));
    for kind in [PosetKind::I, PosetKind::D] {
        let p = small_poset(kind);
        for tag in [
            SpaceTag::Va,
            SpaceTag::Vq,
            SpaceTag::Vf0,
            SpaceTag::Vfl,
            SpaceTag::Vfr,
        ] {
            let z = z0(&Net::new(tag, p.clone(), amb.clone())).map_err(|e| e.to_string())?;
            check(z.dim() == 0, || format!("{kind:?}/{tag}: dim {}", z.dim()))?;
        }
        for tag in [SpaceTag::Vb, SpaceTag::Vc, SpaceTag::Vf] {
            let z = z0(&Net::new(tag, p.clone(), amb.clone())).map_err(|e| e.to_string())?;
            check(z.dim() == 1 && z.contains(&constant).unwrap(), || {
                format!("{kind:?}/{tag}: dim {}", z.dim())
            })?;
        }
    }
    Ok("I and D".into())
}

fn c9_braiding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let charge = |rng: &mut ChaCha8Rng| {
        ChargePair::new(
            rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)),
            rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)),
        )
    };
    for s in 0..100 {
        let (cr, ct) = (charge(&mut rng), charge(&mut rng));
        let a = rng.gen_range(-32..20);
        let b = rng.gen_range(a + 2..=a + 8);
        let c = rng.gen_range(b..=b + 4);
        let d = rng.gen_range(c + 2..=32);
        let rho = canonical_representative(&cr, &iq(a, b), TailConvention::RightTailZero, &q(1))
            .map_err(|e| e.to_string())?;
        let tau = canonical_representative(&ct, &iq(c, d), TailConvention::LeftTailZero, &q(1))
            .map_err(|e| e.to_string())?;
        let r = braiding_phase(&rho, &tau).map_err(|e| e.to_string())?;
        let expect = -(&cr.c * &ct.q + &cr.q * &ct.c);
        check(r.exponent == expect, || {
            format!("sample {s}: {} vs {expect}", r.exponent)
        })?;
        let m = monodromy(&cr, &ct).map_err(|e| e.to_string())?;
        check(m == int(2) * &expect, || {
            format!("sample {s}: monodromy {m}")
        })?;
        let selfb =
            canonical_representative(&cr, &iq(c, d), TailConvention::LeftTailZero, &q(1)).unwrap();
        let r = braiding_phase(&rho, &selfb).map_err(|e| e.to_string())?;
        check(r.exponent == -int(2) * &cr.c * &cr.q, || {
            format!("sample {s}: self-braiding {}", r.exponent)
        })?;
        let (cc, qq) = (
            ChargePair::new(cr.c.clone(), int(0)),
            ChargePair::new(ct.c.clone(), int(0)),
        );
        check(monodromy(&cc, &qq).unwrap().is_zero(), || {
            "C×C monodromy".into()
        })?;
        let (cc, qq) = (
            ChargePair::new(int(0), cr.q.clone()),
            ChargePair::new(int(0), ct.q.clone()),
        );
        check(monodromy(&cc, &qq).unwrap().is_zero(), || {
            "Q×Q monodromy".into()
        })?;
    }
    Ok("100 seeded charge pairs".into())
}

fn apply(m: &[Rational], x: &Rational) -> Rational {
    (&m[0] * x + &m[1]) / (&m[2] * x + &m[3])
}

fn c10_geometry() -> Outcome {
    let mut unequal = 0;
    let mut equal = 0;
    'outer: for a in (-8..8).step_by(3) {
        for l1 in 1..=3 {
            for g in 1..=3 {
                for l2 in 1..=4 {
                    let (al, be, ga, de) =
                        (int(a), int(a + l1), int(a + l1 + g), int(a + l1 + g + l2));
                    if de > int(8) {
                        continue;
                    }
                    let e = IndexElement::double(al.clone(), be.clone(), ga.clone(), de.clone())
                        .unwrap();
                    let m = mobius_from_double_interval(&e).map_err(|x| x.to_string())?;
                    if l1 == l2 {
                        check(m.is_identity(), || format!("{e}: equal lengths, got {m}"))?;
                        equal += 1;
                        continue;
                    }
                    let s = &al + &de;
                    let ok = apply(&m.m, &al) == al
                        && apply(&m.m, &de) == de
                        && apply(&m.m, &(&s - &be)) == ga
                        && apply(&m.m, &(&s - &ga)) == be;
                    check(ok, || format!("{e}: {m}"))?;
                    unequal += 1;
                    if unequal >= 60 && equal >= 5 {
                        break 'outer;
                    }
                }
            }
        }
    }
    check(unequal >= 50, || {
        format!("only {unequal} unequal double intervals")
    })?;
    let p = window_poset(PosetKind::I);
    let fl = Net::new(SpaceTag::Vfl, p.clone(), ambient());
    let fr = Net::new(SpaceTag::Vfr, p, ambient());
    let is = twenty_intervals();
    for i in &is {
        let (l, r) = (fl.materialize(i).unwrap(), fr.materialize(i).unwrap());
        let img = |v: &netcoh::nets::SymplecticSubspace| -> Result<Vec<TestPair>, String> {
            v.basis()
                .iter()
                .map(|f| xi_apply(i, f).map_err(|e| e.to_string()))
                .collect()
        };
        let l_img = netcoh::nets::SymplecticSubspace::span(ambient(), &img(&l)?).unwrap();
        let r_img = netcoh::nets::SymplecticSubspace::span(ambient(), &img(&r)?).unwrap();
        check(l_img == r && r_img == l, || format!("Ξ on {i}"))?;
    }
    Ok(format!(
        "{unequal} unequal + {equal} equal double intervals; Ξ on {} intervals",
        is.len()
    ))
}

fn c11_posets() -> Outcome {
    let mut fails = Vec::new();
    let sym = |k| Arc::new(build_poset(k, &int(-2), &int(2), &int(1), usize::MAX).unwrap());
    let (i, i2, d, j) = (
        sym(PosetKind::I),
        sym(PosetKind::I2),
        sym(PosetKind::D),
        sym(PosetKind::J),
    );
    for (name, p, dir, con) in [
        ("I", &i, true, true),
        ("I2", &i2, true, true),
        ("D", &d, true, true),
        ("J", &j, false, false),
    ] {
        if is_directed(p) != dir {
            fails.push(format!("{name} directed={}", !dir));
        }
        if is_connected(p) != con {
            fails.push(format!("{name} connected={}", !con));
        }
        let g = bot_graph(p);
        if g.component_count != 2 {
            fails.push(format!("{name} bot components={}", g.component_count));
        }
        if !flip_check(p).unwrap_or(false) {
            fails.push(format!("{name} flip"));
        }
    }
    for (name, sup, want) in [("I2", &i2, true), ("D", &d, true), ("J", &j, false)] {
        if is_cofinal(&i, sup) != want {
            fails.push(format!("I cofinal in {name} = {}", !want));
        }
    }
    if fails.is_empty() {
        Ok("I, I2, D, J on [-2,2]".into())
    } else {
        Err(fails.join("; "))
    }
}

fn c12_partition() -> Outcome {
    let one = TestPair::from_f1(PiecewiseLinear::constant(int(1)));
    let mut count = 0;
    for a in -32..32 {
        for b in a + 1..=32 {
            let (fl, fr) = partition_of_unity(&iq(a, b)).map_err(|e| e.to_string())?;
            let sum = TestPair::combine(&Rational::one(), &fl, &Rational::one(), &fr);
            check(sum == one, || format!("({a},{b}): {sum:?}"))?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 12);
    for s in 0..500 {
        let a = rng.gen_range(-20..20);
        let b = rng.gen_range(a + 1..=21);
        let n = rng.gen_range(-5..=5);
        let (fl, fr) = partition_of_unity(&iq(a, b)).unwrap();
        let (nfl, nfr) = (fl.scale(&int(n)), fr.scale(&int(n)));
        // right of I, zero left grade: F_l acts trivially
        let (c, d) = (rng.gen_range(b..30), 32);
        let tail = int(rng.gen_range(-3..=3));
        let g = random_pair(&mut rng, c, c + 1 + (d - c - 1).min(6), int(0), tail);
        let ph = adjoint_phase(&nfl, &g);
        check(ph.is_zero(), || {
            format!("sample {s}: phase {ph} right of I")
        })?;
        // left of I, zero right grade: F_r acts trivially, F_l acts by −n·C_G
        let (e, f) = (rng.gen_range(-32..a - 1).min(a - 2).max(-32), a);
        let tail = int(rng.gen_range(-3..=3));
        let h = random_pair(&mut rng, e, f, tail, int(0));
        let ph = adjoint_phase(&nfr, &h);
        check(ph.is_zero(), || format!("sample {s}: phase {ph} left of I"))?;
        let want = -int(n) * &charges(&h).charge.c;
        check(adjoint_phase(&nfl, &h) == want, || {
            format!("sample {s}: left action")
        })?;
    }
    Ok(format!("{count} grid intervals; 500 seeded samples"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Haag duality on intervals", c1_haag),
        ("double-interval duality gap", c2_double_gap),
        ("additivity of Vf and Vf0 on D", c3_additivity),
        ("graded locality", c4_graded_locality),
        ("graded duality", c5_graded_duality),
        ("condition aa dichotomy", c6_aa),
        ("cocycle triviality dichotomy", c7_cocycles),
        ("Z0 table", c8_z0),
        ("braiding", c9_braiding),
        ("geometry", c10_geometry),
        ("poset facts", c11_posets),
        ("partition of unity", c12_partition),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let selected: Vec<(String, &str, fn() -> Outcome)> = criteria
        .iter()
        .enumerate()
        .map(|(k, (name, f))| (format!("criterion {:02}", k + 1), *name, *f))
        .filter(|(id, name, _)| {
            filter.is_empty()
                || filter
                    .iter()
                    .any(|p| id.contains(p.as_str()) || name.contains(p.as_str()))
        })
        .collect();
    // Independent criteria run concurrently; lines print in criterion order.
    let results: Vec<(Outcome, u128)> = std::thread::scope(|s| {
        let handles: Vec<_> = selected
            .iter()
            .map(|(_, _, f)| {
                let f = *f;
                s.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|e| {
                        Err(e
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panicked".into()))
                    });
                    (r, t.elapsed().as_millis())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread"))
            .collect()
    });
    let mut failed = 0;
    for ((id, name, _), (r, ms)) in selected.iter().zip(results) {
        match r {
            Ok(msg) => println!("{id} PASS  {name}: {msg} [{ms} ms]"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL  {name}: {msg} [{ms} ms]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
