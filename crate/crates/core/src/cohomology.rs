//! 1-cocycles with Weyl-phase values, condition (aa) on path spaces, chain
//! decompositions, coboundary feasibility and 0-cohomology.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::nets::{Net, Side, SymplecticSubspace};
use crate::piecewise::{
    charges, localization, merge_intervals, space_member, symplectic_form, ChargePair,
    PiecewiseLinear, SpaceTag, TestPair,
};
use crate::poset::{before, disjoint, is_connected, leq, CausalPoset, IndexElement};
use crate::rational::{int, Rational};
use crate::sectors::{canonical_representative, TailConvention};
use crate::simplicial::{enumerate_simplices, Simplex, Simplex1, SupportPolicy};
use crate::weyl::{weyl_inverse, weyl_mul, WeylElement};

/// Closed-support containment of a localization in an element.
pub fn localized_in(f: &TestPair, o: &IndexElement) -> bool {
    match o.bounded_components() {
        Some(c) => localized_in_union(f, &c),
        None => localization(f)
            .iter()
            .all(|(x, y)| o.closure_contains(x, y)),
    }
}

/// Containment of the localization in a union of closed intervals.
pub fn localized_in_union(f: &TestPair, comps: &[(Rational, Rational)]) -> bool {
    let cover = merge_intervals(comps.iter().cloned());
    localization(f)
        .iter()
        .all(|(x, y)| cover.iter().any(|(a, b)| a <= x && y <= b))
}

/// Assignment `z` on the canonical 1-simplices of a poset.
#[derive(Clone, Debug)]
pub struct Cocycle1 {
    pub poset: Arc<CausalPoset>,
    pub entries: Vec<(Simplex1, WeylElement)>,
    /// Charge of the representatives, when induced.
    pub charge: Option<ChargePair>,
    index: HashMap<(usize, usize), usize>,
}

impl Cocycle1 {
    /// Build `z` by evaluating `f` on every canonical 1-simplex.
    pub fn from_fn(
        poset: Arc<CausalPoset>,
        mut f: impl FnMut(&Simplex1) -> Result<WeylElement>,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for s in enumerate_simplices(&poset, 1, SupportPolicy::Minimal, usize::MAX)? {
            let Simplex::S1(b) = s else { continue };
            let key = (
                poset.position(&b.d0.body).expect("vertex in poset"),
                poset.position(&b.d1.body).expect("vertex in poset"),
            );
            let w = f(&b)?;
            index.insert(key, entries.len());
            entries.push((b, w));
        }
        Ok(Cocycle1 {
            poset,
            entries,
            charge: None,
            index,
        })
    }

    pub fn identity(poset: Arc<CausalPoset>) -> Result<Self> {
        Cocycle1::from_fn(poset, |_| Ok(WeylElement::identity()))
    }

    /// `z(b)` for the canonical simplex from `a1` to `a0`.
    pub fn get(&self, a0: &IndexElement, a1: &IndexElement) -> Option<&WeylElement> {
        let k = (self.poset.position(a0)?, self.poset.position(a1)?);
        self.index.get(&k).map(|i| &self.entries[*i].1)
    }

    /// A copy with entry `i` replaced.
    pub fn with_entry(&self, i: usize, w: WeylElement) -> Self {
        let mut z = self.clone();
        z.entries[i].1 = w;
        z
    }
}

/// Representative of a charge inside a 0-simplex: canonical in the first
/// component of the element.
pub fn representative_in(
    charge: &ChargePair,
    a: &IndexElement,
    conv: TailConvention,
    step: &Rational,
) -> Result<TestPair> {
    let comps = a
        .bounded_components()
        .ok_or_else(|| Error::UnsupportedElement(a.to_string()))?;
    let (x, y) = comps[0].clone();
    let i = IndexElement::interval(x, y)?;
    canonical_representative(charge, &i, conv, step)
        .map(|r| r.representative)
        .map_err(|_| Error::RepresentativeDoesNotFit(a.to_string()))
}

/// `z(b) = W(F_{∂₀b}) W(F_{∂₁b})⁻¹` with canonical representatives on grid
/// `step`; side `l` uses right-tail-zero representatives, side `r`
/// left-tail-zero ones.
pub fn induced_cocycle(
    charge: &ChargePair,
    poset: Arc<CausalPoset>,
    side: Side,
    step: &Rational,
) -> Result<Cocycle1> {
    let conv = match side {
        Side::L => TailConvention::RightTailZero,
        Side::R => TailConvention::LeftTailZero,
    };
    let mut reps: HashMap<IndexElement, TestPair> = HashMap::new();
    for a in &poset.elements {
        reps.insert(a.clone(), representative_in(charge, a, conv, step)?);
    }
    let mut z = Cocycle1::from_fn(poset, |b| {
        let f0 = WeylElement::of(reps[&b.d0.body].clone());
        let f1 = WeylElement::of(reps[&b.d1.body].clone());
        Ok(weyl_mul(&f0, &weyl_inverse(&f1)))
    })?;
    z.charge = Some(charge.clone());
    Ok(z)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub simplices1: usize,
    pub simplices2: usize,
    pub locality_violations: Vec<Simplex1>,
    /// Vertex triples `(v0, v1, v2)` where `z(∂₀c)z(∂₂c) ≠ z(∂₁c)`.
    pub identity_violations: Vec<[IndexElement; 3]>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.locality_violations.is_empty() && self.identity_violations.is_empty()
    }
}

/// Locality on every canonical 1-simplex and the cocycle identity on every
/// canonical 2-simplex.
pub fn check_cocycle(z: &Cocycle1) -> Result<CocycleReport> {
    let mut r = CocycleReport {
        simplices1: z.entries.len(),
        ..Default::default()
    };
    for (b, w) in &z.entries {
        if !localized_in(&w.f, &b.support) {
            r.locality_violations.push(b.clone());
        }
    }
    for s in enumerate_simplices(&z.poset, 2, SupportPolicy::Minimal, usize::MAX)? {
        let Simplex::S2(c) = s else { continue };
        r.simplices2 += 1;
        let look = |b: &Simplex1| z.get(&b.d0.body, &b.d1.body);
        let ok = match (look(&c.d0), look(&c.d1), look(&c.d2)) {
            (Some(z0), Some(z1), Some(z2)) => weyl_mul(z0, z2) == *z1,
            _ => false,
        };
        if !ok {
            let v = c.vertices();
            r.identity_violations
                .push([v[0].body.clone(), v[1].body.clone(), v[2].body.clone()]);
        }
    }
    Ok(r)
}

/// Split `f0` (zero total integral) into zero-integral summands, one per
/// chain interval, by telescoping unit bumps through consecutive overlaps.
pub fn chain_decompose(
    f0: &PiecewiseLinear,
    chain: &[(Rational, Rational)],
) -> Result<Vec<PiecewiseLinear>> {
    let total = f0
        .integral()
        .ok_or_else(|| Error::InvalidFunction("f0 must be compactly supported".into()))?;
    if !total.is_zero() {
        return Err(Error::Validation(format!(
            "f0 has total integral {total}, not 0"
        )));
    }
    if chain.is_empty() {
        return Err(Error::SupportNotCovered("empty chain".into()));
    }
    let mut raw = vec![PiecewiseLinear::zero(); chain.len()];
    for (x, y) in merge_intervals(f0.support()) {
        let k = chain
            .iter()
            .position(|(a, b)| a <= &x && &y <= b)
            .ok_or_else(|| Error::SupportNotCovered(format!("[{x}, {y}]")))?;
        raw[k] = add(&raw[k], &restrict(f0, &x, &y));
    }
    let mut out = Vec::with_capacity(chain.len());
    let mut carry = Rational::zero();
    let mut incoming = PiecewiseLinear::zero();
    for (k, g) in raw.iter().enumerate() {
        let mut s = add(g, &incoming.scale(&carry));
        carry += g.integral().expect("compact");
        if k + 1 < chain.len() {
            let (a0, b0) = &chain[k];
            let (a1, b1) = &chain[k + 1];
            let (lo, hi) = (a0.max(a1), b0.min(b1));
            if lo >= hi {
                return Err(Error::NoOverlap(
                    format!("({a0}, {b0})"),
                    format!("({a1}, {b1})"),
                ));
            }
            let mid = (lo + hi) / int(2);
            let bump = PiecewiseLinear::tent_at(lo, &mid, hi, int(2) / (hi - lo));
            s = add(&s, &bump.scale(&-carry.clone()));
            incoming = bump;
        }
        out.push(s);
    }
    Ok(out)
}

fn add(f: &PiecewiseLinear, g: &PiecewiseLinear) -> PiecewiseLinear {
    crate::piecewise::pl_combine(&int(1), f, &int(1), g)
}

/// `f` on `[x, y]`, zero elsewhere; `f` must vanish at `x` and `y`.
fn restrict(f: &PiecewiseLinear, x: &Rational, y: &Rational) -> PiecewiseLinear {
    let mut xs: Vec<Rational> = vec![x.clone()];
    xs.extend(f.breakpoints().iter().filter(|b| *b > x && *b < y).cloned());
    xs.push(y.clone());
    let ys = xs.iter().map(|t| f.eval(t)).collect();
    PiecewiseLinear::new(xs, ys).expect("increasing breakpoints")
}

/// One path's certificate: the witness written as a sum of elements of the
/// local spaces on the path's supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub vertices: Vec<IndexElement>,
    pub supports: Vec<IndexElement>,
    pub summands: Vec<TestPair>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AaResult {
    pub holds: bool,
    pub paths_examined: usize,
    pub support_sets: usize,
    pub intersection_dim: usize,
    pub join_dim: usize,
    pub witness: Option<TestPair>,
    pub certificates: Vec<PathCertificate>,
}

/// Simple vertex paths from `s` to `e` of length ≤ `max_len`; at each step
/// every ⊆-minimal common support is tried (larger supports give larger
/// path spaces and cannot shrink the intersection). Returns, per distinct
/// support set, one vertex/support sequence realizing it.
fn path_support_sets(
    poset: &CausalPoset,
    s: usize,
    e: usize,
    max_len: usize,
) -> (usize, Vec<(Vec<usize>, Vec<usize>)>) {
    let n = poset.len();
    let els = &poset.elements;
    let minimal: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let cands: Vec<usize> = (0..n)
                        .filter(|&k| leq(&els[i], &els[k]) && leq(&els[j], &els[k]))
                        .collect();
                    cands
                        .iter()
                        .copied()
                        .filter(|&k| !cands.iter().any(|&m| m != k && leq(&els[m], &els[k])))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut found: HashMap<BTreeSet<usize>, (Vec<usize>, Vec<usize>)> = HashMap::new();
    let mut count = 0usize;
    if s == e {
        for &k in &minimal[s][s] {
            count += 1;
            found
                .entry(BTreeSet::from([k]))
                .or_insert((vec![s, s], vec![k]));
        }
    }
    struct St<'a> {
        minimal: &'a [Vec<Vec<usize>>],
        e: usize,
        max_len: usize,
        verts: Vec<usize>,
        sups: Vec<usize>,
        on: Vec<bool>,
        count: usize,
        found: HashMap<BTreeSet<usize>, (Vec<usize>, Vec<usize>)>,
    }
    fn dfs(st: &mut St) {
        if st.sups.len() >= st.max_len {
            return;
        }
        let v = *st.verts.last().expect("non-empty");
        for w in 0..st.on.len() {
            if st.on[w] || st.minimal[v][w].is_empty() {
                continue;
            }
            for k in st.minimal[v][w].clone() {
                st.verts.push(w);
                st.sups.push(k);
                if w == st.e {
                    st.count += 1;
                    let set: BTreeSet<usize> = st.sups.iter().copied().collect();
                    st.found
                        .entry(set)
                        .or_insert((st.verts.clone(), st.sups.clone()));
                } else {
                    st.on[w] = true;
                    dfs(st);
                    st.on[w] = false;
                }
                st.verts.pop();
                st.sups.pop();
            }
        }
    }
    if s != e {
        let mut on = vec![false; n];
        on[s] = true;
        let mut st = St {
            minimal: &minimal,
            e,
            max_len,
            verts: vec![s],
            sups: vec![],
            on,
            count: 0,
            found: HashMap::new(),
        };
        dfs(&mut st);
        count += st.count;
        found.extend(st.found);
    }
    let mut sets: Vec<(BTreeSet<usize>, (Vec<usize>, Vec<usize>))> = found.into_iter().collect();
    sets.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    // keep ⊆-minimal support sets
    let mut kept: Vec<(BTreeSet<usize>, (Vec<usize>, Vec<usize>))> = Vec::new();
    for (set, p) in sets {
        if !kept.iter().any(|(k, _)| k.is_subset(&set)) {
            kept.push((set, p));
        }
    }
    (count, kept.into_iter().map(|(_, p)| p).collect())
}

/// Condition (aa) for the simplex `b`: the intersection over paths from
/// `∂₁b` to `∂₀b` of the path spaces equals the join of the end spaces.
pub fn condition_aa(net: &Net, b: &Simplex1, max_len: usize) -> Result<AaResult> {
    if max_len == 0 {
        return Err(Error::Validation("maxLen must be at least 1".into()));
    }
    let poset = &net.spec.poset;
    let (start, end) = (&b.d1.body, &b.d0.body);
    let s = poset
        .position(start)
        .ok_or_else(|| Error::ElementNotInPoset(start.to_string()))?;
    let e = poset
        .position(end)
        .ok_or_else(|| Error::ElementNotInPoset(end.to_string()))?;
    let join = net
        .materialize(&b.d0.support)?
        .join(&net.materialize(&b.d1.support)?)?;
    let (paths_examined, sets) = path_support_sets(poset, s, e, max_len);
    let mut cache: HashMap<usize, Arc<Echelon>> = HashMap::new();
    let mut x: Option<Echelon> = None;
    for (_, sups) in &sets {
        let mut space = Echelon::new(net.ambient.dim());
        for k in sups {
            let m = match cache.get(k) {
                Some(m) => m.clone(),
                None => {
                    let m = Arc::new(net.materialize(&poset.elements[*k])?.rows);
                    cache.insert(*k, m.clone());
                    m
                }
            };
            space = space.join(&m);
        }
        x = Some(match x {
            None => space,
            Some(cur) if space.contains_all(&cur) => cur,
            Some(cur) => cur.intersect(&space),
        });
        if x.as_ref().is_some_and(|x| *x == join.rows) {
            break;
        }
    }
    let x = SymplecticSubspace::new(net.ambient.clone(), x.unwrap_or_else(|| join.rows.clone()));
    let holds = x == join;
    let mut witness = None;
    let mut certificates = Vec::new();
    if !holds {
        let w = aa_witness(net, start, end)
            .filter(|w| x.contains(w).unwrap_or(false) && !join.contains(w).unwrap_or(true))
            .or_else(|| {
                x.rows
                    .rows()
                    .find(|r| !join.rows.contains(r))
                    .map(|r| net.ambient.to_pair(r))
            });
        if let Some(w) = &w {
            for (verts, sups) in &sets {
                certificates.push(certify_path(net, w, start, end, verts, sups)?);
            }
        }
        witness = w;
    }
    Ok(AaResult {
        holds,
        paths_examined,
        support_sets: sets.len(),
        intersection_dim: x.dim(),
        join_dim: join.dim(),
        witness,
        certificates,
    })
}

fn unit_pair(a: &IndexElement, step: &Rational) -> Option<TestPair> {
    representative_in(
        &ChargePair::ints(1, 1),
        a,
        TailConvention::RightTailZero,
        step,
    )
    .ok()
}

/// `F_s − F_e` for unit `(c, q) = (1, 1)` representatives: canceling tents
/// and an f1 plateau between the two ends.
fn aa_witness(net: &Net, start: &IndexElement, end: &IndexElement) -> Option<TestPair> {
    let step = &net.ambient.step;
    if !disjoint(start, end) {
        return None;
    }
    Some(&unit_pair(start, step)? - &unit_pair(end, step)?)
}

/// Telescope `w = Σ (F_{v_{i−1}} − F_{v_i})` along the path's vertices when
/// `w` is the standard witness; otherwise only record membership of `w` in
/// the path space.
fn certify_path(
    net: &Net,
    w: &TestPair,
    start: &IndexElement,
    end: &IndexElement,
    verts: &[usize],
    sups: &[usize],
) -> Result<PathCertificate> {
    let poset = &net.spec.poset;
    let vertices: Vec<IndexElement> = verts.iter().map(|i| poset.elements[*i].clone()).collect();
    let supports: Vec<IndexElement> = sups.iter().map(|i| poset.elements[*i].clone()).collect();
    let step = &net.ambient.step;
    let standard = aa_witness(net, start, end).as_ref() == Some(w);
    let mut summands = Vec::new();
    let mut verified = standard;
    if standard {
        for (i, s) in supports.iter().enumerate() {
            let (Some(p), Some(q)) = (
                unit_pair(&vertices[i], step),
                unit_pair(&vertices[i + 1], step),
            ) else {
                verified = false;
                break;
            };
            let d = &p - &q;
            let ok = localized_in(&d, s)
                && space_member(&d, net.spec.tag)
                && net.materialize(s)?.contains(&d)?;
            verified &= ok;
            summands.push(d);
        }
        let total = summands.iter().fold(TestPair::zero(), |acc, d| &acc + d);
        verified &= total == *w;
    }
    Ok(PathCertificate {
        vertices,
        supports,
        summands,
        verified,
    })
}

/// Proof that no trivializer exists in the target net.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub base: IndexElement,
    pub distant: IndexElement,
    pub transporter: TestPair,
    /// The element any trivializer must place at the base simplex.
    pub forced: TestPair,
    pub charge: ChargePair,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivializerWitness {
    pub values: Vec<(IndexElement, WeylElement)>,
    /// Per 0-simplex: membership in the target tag and localization in it.
    pub localized: Vec<bool>,
    pub charges: Vec<ChargePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum Feasibility {
    Trivializer(TrivializerWitness),
    Obstruction(ObstructionCertificate),
}

impl Feasibility {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Feasibility::Trivializer(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum TreeOrder {
    /// Breadth-first, neighbours in poset order.
    #[default]
    Forward,
    /// Breadth-first, neighbours in reverse poset order.
    Reverse,
}

/// `V_a` with `z(b) = V(∂₀b)V(∂₁b)⁻¹` on a spanning tree, seeded by
/// `V(a₀) = 1`; then verified on every simplex.
fn propagate(z: &Cocycle1, base: usize, order: TreeOrder) -> Result<Vec<WeylElement>> {
    let poset = &z.poset;
    let n = poset.len();
    let mut v: Vec<Option<WeylElement>> = vec![None; n];
    v[base] = Some(WeylElement::identity());
    let mut q = VecDeque::from([base]);
    let nbrs: Vec<usize> = match order {
        TreeOrder::Forward => (0..n).collect(),
        TreeOrder::Reverse => (0..n).rev().collect(),
    };
    while let Some(u) = q.pop_front() {
        for &w in &nbrs {
            if v[w].is_some() {
                continue;
            }
            let (eu, ew) = (&poset.elements[u], &poset.elements[w]);
            // b from u to w: z(b) = V(w) V(u)⁻¹  ⇒  V(w) = z(b) V(u)
            if let Some(zb) = z.get(ew, eu) {
                let vu = v[u].clone().expect("visited");
                v[w] = Some(weyl_mul(zb, &vu));
                q.push_back(w);
            }
        }
    }
    v.into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.ok_or_else(|| {
                Error::Validation(format!("poset is not connected at {}", poset.elements[i]))
            })
        })
        .collect()
}

/// The part of `t` left of `cut`: f0 cut off there (it vanishes at the
/// cut), f1 frozen at its value at the cut.
fn split_left(t: &TestPair, cut: &Rational) -> TestPair {
    let cut_pl = |f: &PiecewiseLinear| {
        let mut xs: Vec<Rational> = f
            .breakpoints()
            .iter()
            .filter(|x| *x < cut)
            .cloned()
            .collect();
        xs.push(cut.clone());
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        PiecewiseLinear::new(xs, ys).expect("increasing")
    };
    TestPair::new(cut_pl(&t.f0), cut_pl(&t.f1)).expect("f0 vanishes at the cut")
}

/// Values of `κ` allowed by the tag's tail conditions for a pair with the
/// given tails shifted by `κ` (`None` = unconstrained).
fn solve_kappa(tag: SpaceTag, left: &Rational, right: &Rational) -> Option<Rational> {
    use SpaceTag::*;
    match tag {
        Va | Vf0 | Vfr => Some(-left.clone()),
        Vfl => Some(-right.clone()),
        Vq => Some(-(left + right) / int(2)),
        Vb | Vc | Ve | Vf => None,
    }
}

/// Decide whether `z` is a coboundary of a 0-cochain with values in the
/// target tag, each `V_a` localized in `a`.
pub fn coboundary_feasibility(z: &Cocycle1, target: SpaceTag) -> Result<Feasibility> {
    coboundary_feasibility_with_tree(z, target, TreeOrder::Forward)
}

pub fn coboundary_feasibility_with_tree(
    z: &Cocycle1,
    target: SpaceTag,
    order: TreeOrder,
) -> Result<Feasibility> {
    let poset = &z.poset;
    if !is_connected(poset) {
        return Err(Error::Validation("poset is not connected".into()));
    }
    let els = &poset.elements;
    let (a0, a1) = (0..els.len())
        .find_map(|i| {
            (0..els.len())
                .find(|&j| {
                    disjoint(&els[i], &els[j]) && before(&els[i], &els[j]) && els[j].is_interval()
                })
                .filter(|_| els[i].is_interval())
                .map(|j| (i, j))
        })
        .ok_or_else(|| Error::Validation("no disjoint pair of intervals in the poset".into()))?;
    let v = propagate(z, a0, order)?;
    // the propagated cochain must reproduce z everywhere
    for (b, zb) in &z.entries {
        let (i0, i1) = (
            poset.position(&b.d0.body).expect("in poset"),
            poset.position(&b.d1.body).expect("in poset"),
        );
        if weyl_mul(&v[i0], &weyl_inverse(&v[i1])) != *zb {
            return Err(Error::Validation(format!(
                "z is not a cocycle on the simplex {} → {}",
                b.d1, b.d0
            )));
        }
    }
    let (base, distant) = (&els[a0], &els[a1]);
    let t = v[a1].f.clone();
    let obstruct = |forced: TestPair, reason: String| {
        Ok(Feasibility::Obstruction(ObstructionCertificate {
            base: base.clone(),
            distant: distant.clone(),
            transporter: t.clone(),
            charge: charges(&forced).charge,
            forced,
            reason,
        }))
    };
    let hull = |o: &IndexElement| {
        o.bounded_components()
            .map(|c| (c[0].0.clone(), c[c.len() - 1].1.clone()))
    };
    let (Some((_, cut)), Some(_)) = (hull(base), hull(distant)) else {
        return Err(Error::UnsupportedElement(base.to_string()));
    };
    let ends: Vec<(Rational, Rational)> = [base, distant]
        .iter()
        .flat_map(|o| o.bounded_components().unwrap_or_default())
        .collect();
    let escapes = !localized_in_union(&t, &ends);
    if escapes {
        return obstruct(
            t.clone(),
            format!("transporter is not localized in {base} ∪ {distant}"),
        );
    }
    let t0 = split_left(&t, &cut);
    let mut forced = -&t0;
    let ch = charges(&forced);
    if let Some(k) = solve_kappa(target, &ch.left_grade, &ch.right_grade) {
        forced = &forced + &TestPair::from_f1(PiecewiseLinear::constant(k));
    }
    if !space_member(&forced, target) {
        let c = charges(&forced).charge;
        return obstruct(
            forced,
            format!(
                "forced element at {base} has charge (c, q) = ({}, {}) outside {target}",
                c.c, c.q
            ),
        );
    }
    let shift = &forced - &v[a0].f;
    let mut values = Vec::new();
    let mut localized = Vec::new();
    let mut chs = Vec::new();
    for (i, a) in els.iter().enumerate() {
        let x = &v[i].f + &shift;
        let ok = space_member(&x, target) && localized_in(&x, a);
        if !ok {
            return obstruct(
                forced.clone(),
                format!("no admissible element at {a}: the forced cochain leaves {target} or {a}"),
            );
        }
        // keep the cocycle relation: V'_a = V_a W(S) up to a phase fixed by z
        let w = weyl_mul(&v[i], &WeylElement::of(shift.clone()));
        localized.push(ok);
        chs.push(charges(&x).charge);
        values.push((a.clone(), w));
    }
    Ok(Feasibility::Trivializer(TrivializerWitness {
        values,
        localized,
        charges: chs,
    }))
}

/// Does the witness reproduce `z(b) = V(∂₀b)V(∂₁b)⁻¹` on every simplex?
pub fn witness_reproduces(z: &Cocycle1, w: &TrivializerWitness) -> bool {
    let lookup: HashMap<&IndexElement, &WeylElement> =
        w.values.iter().map(|(a, v)| (a, v)).collect();
    z.entries.iter().all(
        |(b, zb)| match (lookup.get(&b.d0.body), lookup.get(&b.d1.body)) {
            (Some(v0), Some(v1)) => weyl_mul(v0, &weyl_inverse(v1)) == *zb,
            _ => false,
        },
    )
}

/// Intersection of the local spaces over all poset elements.
pub fn z0(net: &Net) -> Result<SymplecticSubspace> {
    let mut acc: Option<SymplecticSubspace> = None;
    for o in &net.spec.poset.elements {
        let m = net.materialize(o)?;
        acc = Some(match acc {
            None => m,
            Some(a) => a.intersect(&m)?,
        });
    }
    acc.ok_or_else(|| Error::Validation("empty poset".into()))
}

/// Phase-level check `σ(F, G) = 0` used for the optional far-separation
/// clause; exported for callers that want to test it on their own pairs.
pub fn commutes(f: &TestPair, g: &TestPair) -> bool {
    symplectic_form(f, g).is_zero()
}
