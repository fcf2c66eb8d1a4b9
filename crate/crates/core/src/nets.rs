//! Nets of finite-dimensional symplectic subspaces over a grid window.
//!
//! The ambient space holds every grid `TestPair` on `[lo, hi]` with step `h`:
//! coordinates are the f0 values at the `N−1` interior nodes followed by the
//! f1 values at all `N+1` nodes (node value = coefficient of the hat, or of
//! the left/right tail unit at the two end nodes), so `dim = 2N`.
//!
//! Annihilators ("duals") are computed against test spaces materialized on a
//! refined copy of the window (step `h/k`, `k = 3` by default), into which
//! the coarse space embeds exactly. On a single grid level the symplectic
//! pairing of grid functions is too coarse to detect "vanishes on a region",
//! and exact Haag duality is unattainable there; one refinement level with
//! `k ≥ 3` restores it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::piecewise::{pl_product_integral, PiecewiseLinear, SpaceTag, TestPair};
use crate::poset::{
    before, causal_complement, check_window, disjoint, leq, CausalPoset, ComplementPiece,
    IndexElement,
};
use crate::rational::{grid_index, int, Rational};

pub const DEFAULT_PROBE_FACTOR: usize = 3;

/// Linear side conditions defining a local space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Constraints {
    pub zero_charge: bool,
    pub left_zero: bool,
    pub right_zero: bool,
    pub equal_tails: bool,
    pub opposite_tails: bool,
    /// f1 vanishes outside the region (f1 ∈ S rather than ∂⁻¹S).
    pub f1_compact: bool,
}

impl Constraints {
    pub fn tag(t: SpaceTag) -> Self {
        let mut c = Constraints::default();
        match t {
            SpaceTag::Va => {
                c.zero_charge = true;
                c.left_zero = true;
                c.right_zero = true;
            }
            SpaceTag::Vb => {
                c.zero_charge = true;
                c.equal_tails = true;
            }
            SpaceTag::Vc => c.equal_tails = true,
            SpaceTag::Vq => {
                c.zero_charge = true;
                c.opposite_tails = true;
            }
            SpaceTag::Ve => c.zero_charge = true,
            SpaceTag::Vf => {}
            SpaceTag::Vfl => c.right_zero = true,
            SpaceTag::Vfr => c.left_zero = true,
            SpaceTag::Vf0 => {
                c.left_zero = true;
                c.right_zero = true;
            }
        }
        c
    }

    /// `∂S(o) ⊕ S(o)`: zero-integral f0, compactly supported f1.
    pub fn compact_neutral() -> Self {
        Constraints {
            zero_charge: true,
            left_zero: true,
            right_zero: true,
            f1_compact: true,
            ..Default::default()
        }
    }

    /// `S(o) ⊕ S(o)`.
    pub fn compact_free() -> Self {
        Constraints {
            left_zero: true,
            right_zero: true,
            f1_compact: true,
            ..Default::default()
        }
    }

    /// Extra zero-tail conditions for a complement piece that is unbounded
    /// beyond the window edge.
    pub fn with_edges(mut self, piece: &ComplementPiece) -> Self {
        self.left_zero |= piece.unbounded_left;
        self.right_zero |= piece.unbounded_right;
        self
    }
}

/// The local space convention used for a given net tag. The identity-grade
/// net uses `S(o) ⊕ S(o)`: its f1 is compactly supported inside `o`.
pub fn local_constraints(tag: SpaceTag) -> Constraints {
    match tag {
        SpaceTag::Vf0 => Constraints::compact_free(),
        t => Constraints::tag(t),
    }
}

/// Grid window with its coordinate system and symplectic Gram matrix.
pub struct AmbientSpace {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
    /// Number of cells `N`.
    pub cells: usize,
    pub probe_factor: usize,
    omega: Vec<SparseVec>,
    probe: OnceLock<Arc<AmbientSpace>>,
    cache: Mutex<HashMap<(Vec<(Rational, Rational)>, Constraints), Arc<Echelon>>>,
}

impl fmt::Debug for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AmbientSpace([{}, {}], step {}, dim {})",
            self.lo,
            self.hi,
            self.step,
            self.dim()
        )
    }
}

impl PartialEq for AmbientSpace {
    fn eq(&self, o: &Self) -> bool {
        self.lo == o.lo && self.hi == o.hi && self.step == o.step
    }
}

impl AmbientSpace {
    pub fn new(lo: Rational, hi: Rational, step: Rational) -> Result<Arc<Self>> {
        Self::with_probe_factor(lo, hi, step, DEFAULT_PROBE_FACTOR)
    }

    pub fn with_probe_factor(
        lo: Rational,
        hi: Rational,
        step: Rational,
        probe_factor: usize,
    ) -> Result<Arc<Self>> {
        let cells = check_window(&lo, &hi, &step)?;
        if cells < 2 {
            return Err(Error::InvalidWindow("need at least two cells".into()));
        }
        if probe_factor == 0 {
            return Err(Error::InvalidWindow("probe factor must be positive".into()));
        }
        let mut a = AmbientSpace {
            lo,
            hi,
            step,
            cells,
            probe_factor,
            omega: Vec::new(),
            probe: OnceLock::new(),
            cache: Mutex::new(HashMap::new()),
        };
        a.omega = a.build_gram();
        Ok(Arc::new(a))
    }

    /// The window `[−8, 8]` with step `1/4`.
    pub fn default_window() -> Arc<Self> {
        Self::new(int(-8), int(8), crate::rational::rat(1, 4)).expect("valid default window")
    }

    pub fn dim(&self) -> usize {
        2 * self.cells
    }

    pub fn node(&self, k: usize) -> Rational {
        &self.lo + &self.step * int(k as i64)
    }

    /// Coordinate index of the f0 value at interior node `k`.
    pub fn a_idx(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k < self.cells);
        k - 1
    }

    /// Coordinate index of the f1 value at node `k`.
    pub fn b_idx(&self, k: usize) -> usize {
        self.cells - 1 + k
    }

    /// The basis function attached to coordinate `i`.
    pub fn basis_pair(&self, i: usize) -> TestPair {
        let n = self.cells;
        if i < n - 1 {
            let k = i + 1;
            TestPair::from_f0(PiecewiseLinear::tent_at(
                &self.node(k - 1),
                &self.node(k),
                &self.node(k + 1),
                int(1),
            ))
        } else {
            let k = i - (n - 1);
            let f1 = if k == 0 {
                PiecewiseLinear::ramp(&self.node(0), &self.node(1), int(1), int(0))
            } else if k == n {
                PiecewiseLinear::ramp(&self.node(n - 1), &self.node(n), int(0), int(1))
            } else {
                PiecewiseLinear::tent_at(
                    &self.node(k - 1),
                    &self.node(k),
                    &self.node(k + 1),
                    int(1),
                )
            };
            TestPair::from_f1(f1)
        }
    }

    fn build_gram(&self) -> Vec<SparseVec> {
        let n = self.cells;
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.dim()];
        for k in 1..n {
            let phi = self.basis_pair(self.a_idx(k)).f0;
            for m in k - 1..=k + 1 {
                let psi = self.basis_pair(self.b_idx(m)).f1;
                let v = pl_product_integral(&phi, &psi).expect("hat is compact");
                if v.is_zero() {
                    continue;
                }
                // σ(e_a, e_b) = ∫φψ,  σ(e_b, e_a) = −∫φψ
                rows[self.a_idx(k)].push((self.b_idx(m), v.clone()));
                rows[self.b_idx(m)].push((self.a_idx(k), -v));
            }
        }
        rows.into_iter().map(SparseVec::from_entries).collect()
    }

    /// `σ(x, y)` in coordinates.
    pub fn sigma(&self, x: &SparseVec, y: &SparseVec) -> Rational {
        let mut s = Rational::zero();
        for (i, xi) in &x.0 {
            let d = self.omega[*i].dot(y);
            if !d.is_zero() {
                s += xi * d;
            }
        }
        s
    }

    /// The functional `σ(·, w)` as a coordinate vector.
    pub fn sigma_functional(&self, w: &SparseVec) -> SparseVec {
        let mut e: Vec<(usize, Rational)> = Vec::new();
        for (j, wj) in &w.0 {
            // σ(x, w) = Σ_i x_i Ω_ij w_j ; Ω is antisymmetric, Ω_ij = −Ω_ji
            for (i, v) in &self.omega[*j].0 {
                e.push((*i, -(v * wj)));
            }
        }
        SparseVec::from_entries(e)
    }

    /// Coordinates of a grid test pair.
    pub fn coords(&self, f: &TestPair) -> Result<SparseVec> {
        let bad = |m: &str| Error::NotInAmbient(format!("{m}: {f:?}"));
        for g in [&f.f0, &f.f1] {
            if g.is_constant() {
                continue;
            }
            for x in g.breakpoints() {
                if x < &self.lo || x > &self.hi || grid_index(x, &self.lo, &self.step).is_none() {
                    return Err(bad("breakpoint off the window grid"));
                }
            }
        }
        let n = self.cells;
        let mut e = Vec::new();
        for k in 1..n {
            e.push((self.a_idx(k), f.f0.eval(&self.node(k))));
        }
        for k in 0..=n {
            e.push((self.b_idx(k), f.f1.eval(&self.node(k))));
        }
        Ok(SparseVec::from_entries(e))
    }

    pub fn to_pair(&self, v: &SparseVec) -> TestPair {
        let n = self.cells;
        let nodes: Vec<Rational> = (0..=n).map(|k| self.node(k)).collect();
        let mut f0 = vec![Rational::zero(); n + 1];
        let mut f1 = vec![Rational::zero(); n + 1];
        for (i, x) in &v.0 {
            if *i < n - 1 {
                f0[i + 1] = x.clone();
            } else {
                f1[i - (n - 1)] = x.clone();
            }
        }
        TestPair::new(
            PiecewiseLinear::new(nodes.clone(), f0).expect("increasing nodes"),
            PiecewiseLinear::new(nodes, f1).expect("increasing nodes"),
        )
        .expect("f0 vanishes at the window edges")
    }

    /// Tag membership as linear constraint rows.
    fn tag_rows(&self, c: &Constraints) -> Vec<SparseVec> {
        let n = self.cells;
        let mut rows = Vec::new();
        if c.zero_charge {
            rows.push(SparseVec::from_entries(
                (1..n).map(|k| (self.a_idx(k), int(1))).collect(),
            ));
        }
        if c.left_zero {
            rows.push(SparseVec::unit(self.b_idx(0)));
        }
        if c.right_zero {
            rows.push(SparseVec::unit(self.b_idx(n)));
        }
        if c.equal_tails {
            rows.push(SparseVec::from_entries(vec![
                (self.b_idx(0), int(1)),
                (self.b_idx(n), int(-1)),
            ]));
        }
        if c.opposite_tails {
            rows.push(SparseVec::from_entries(vec![
                (self.b_idx(0), int(1)),
                (self.b_idx(n), int(1)),
            ]));
        }
        rows
    }

    /// Is cell `c` (between nodes `c` and `c+1`) inside the closed region?
    fn cell_inside(&self, c: usize, region: &[(Rational, Rational)]) -> bool {
        let (x0, x1) = (self.node(c), self.node(c + 1));
        region.iter().any(|(a, b)| a <= &x0 && &x1 <= b)
    }

    fn local_rows(&self, region: &[(Rational, Rational)], c: &Constraints) -> Vec<SparseVec> {
        let n = self.cells;
        let mut rows = self.tag_rows(c);
        let mut zero_a = vec![false; n + 1];
        let mut zero_b = vec![false; n + 1];
        for cell in 0..n {
            if self.cell_inside(cell, region) {
                continue;
            }
            zero_a[cell] = true;
            zero_a[cell + 1] = true;
            if c.f1_compact {
                zero_b[cell] = true;
                zero_b[cell + 1] = true;
            } else {
                rows.push(SparseVec::from_entries(vec![
                    (self.b_idx(cell), int(1)),
                    (self.b_idx(cell + 1), int(-1)),
                ]));
            }
        }
        if c.f1_compact {
            zero_b[0] = true;
            zero_b[n] = true;
        }
        for k in 1..n {
            if zero_a[k] {
                rows.push(SparseVec::unit(self.a_idx(k)));
            }
        }
        for (k, z) in zero_b.iter().enumerate() {
            if *z {
                rows.push(SparseVec::unit(self.b_idx(k)));
            }
        }
        rows
    }

    /// Local space: all ambient pairs localized in the closed region and
    /// satisfying the constraints. Memoized per ambient.
    pub fn local_space(&self, region: &[(Rational, Rational)], c: &Constraints) -> Arc<Echelon> {
        let key = (region.to_vec(), c.clone());
        if let Some(e) = self.cache.lock().expect("cache lock").get(&key) {
            return e.clone();
        }
        let cons = Echelon::from_rows(self.dim(), self.local_rows(region, c));
        let e = Arc::new(Echelon::from_rows(self.dim(), cons.nullspace()));
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, e.clone());
        e
    }

    pub fn tag_space(&self, c: &Constraints) -> Echelon {
        let cons = Echelon::from_rows(self.dim(), self.tag_rows(c));
        Echelon::from_rows(self.dim(), cons.nullspace())
    }

    /// The refined window used for annihilator test spaces.
    pub fn probe_space(&self) -> Arc<AmbientSpace> {
        self.probe
            .get_or_init(|| {
                AmbientSpace::with_probe_factor(
                    self.lo.clone(),
                    self.hi.clone(),
                    &self.step / int(self.probe_factor as i64),
                    1,
                )
                .expect("refinement of a valid window")
            })
            .clone()
    }

    /// Pull a fine-grid functional back along the interpolating embedding
    /// coarse → fine.
    fn pull_back(&self, fine: &AmbientSpace, phi: &SparseVec) -> SparseVec {
        let k = self.probe_factor;
        let kr = int(k as i64);
        let nf = fine.cells;
        let mut e = Vec::new();
        for (i, x) in &phi.0 {
            let (is_a, j) = if *i < nf - 1 {
                (true, i + 1)
            } else {
                (false, i - (nf - 1))
            };
            let (c, r) = (j / k, j % k);
            let w_left = x * int((k - r) as i64) / &kr;
            let w_right = x * int(r as i64) / &kr;
            let mut push = |node: usize, w: Rational| {
                if w.is_zero() {
                    return;
                }
                if is_a {
                    if node >= 1 && node < self.cells {
                        e.push((self.a_idx(node), w));
                    }
                } else {
                    e.push((self.b_idx(node), w));
                }
            };
            push(c, w_left);
            if r > 0 {
                push(c + 1, w_right);
            }
        }
        SparseVec::from_entries(e)
    }

    /// Embed coarse coordinates into the probe window.
    pub fn refine(&self, v: &SparseVec) -> SparseVec {
        let fine = self.probe_space();
        fine.coords(&self.to_pair(v))
            .expect("coarse grid pairs live on the refined grid")
    }

    /// Coarse functionals `σ(·, w)` for every basis vector `w` of a fine
    /// test space.
    fn probe_functionals(&self, test: &Echelon) -> Vec<SparseVec> {
        let fine = self.probe_space();
        test.rows()
            .map(|w| self.pull_back(&fine, &fine.sigma_functional(w)))
            .filter(|v| !v.is_zero())
            .collect()
    }

    /// `{G ∈ tag space : σ(G, w) = 0 for all w in the fine test spaces}`.
    pub fn annihilator(&self, within: &Constraints, tests: &[Arc<Echelon>]) -> Echelon {
        let mut cons = Echelon::from_rows(self.dim(), self.tag_rows(within));
        for t in tests {
            for f in self.probe_functionals(t) {
                cons.insert(f);
            }
        }
        Echelon::from_rows(self.dim(), cons.nullspace())
    }
}

/// A subspace of an ambient window, stored in canonical reduced form.
#[derive(Clone)]
pub struct SymplecticSubspace {
    pub ambient: Arc<AmbientSpace>,
    pub rows: Echelon,
}

impl fmt::Debug for SymplecticSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SymplecticSubspace(dim {} in {:?})",
            self.dim(),
            self.ambient
        )
    }
}

impl PartialEq for SymplecticSubspace {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.rows == o.rows
    }
}

impl SymplecticSubspace {
    pub fn new(ambient: Arc<AmbientSpace>, rows: Echelon) -> Self {
        SymplecticSubspace { ambient, rows }
    }

    pub fn zero(ambient: Arc<AmbientSpace>) -> Self {
        let n = ambient.dim();
        SymplecticSubspace::new(ambient, Echelon::new(n))
    }

    pub fn span(ambient: Arc<AmbientSpace>, gens: &[TestPair]) -> Result<Self> {
        let rows = gens
            .iter()
            .map(|g| ambient.coords(g))
            .collect::<Result<Vec<_>>>()?;
        let n = ambient.dim();
        Ok(SymplecticSubspace::new(
            ambient,
            Echelon::from_rows(n, rows),
        ))
    }

    pub fn dim(&self) -> usize {
        self.rows.rank()
    }

    pub fn basis(&self) -> Vec<TestPair> {
        self.rows.rows().map(|r| self.ambient.to_pair(r)).collect()
    }

    pub fn contains(&self, f: &TestPair) -> Result<bool> {
        Ok(self.rows.contains(&self.ambient.coords(f)?))
    }

    fn same_ambient(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &o.ambient) || *self.ambient == *o.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn is_subspace_of(&self, o: &Self) -> Result<bool> {
        self.same_ambient(o)?;
        Ok(o.rows.contains_all(&self.rows))
    }

    pub fn join(&self, o: &Self) -> Result<Self> {
        self.same_ambient(o)?;
        Ok(SymplecticSubspace::new(
            self.ambient.clone(),
            self.rows.join(&o.rows),
        ))
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        self.same_ambient(o)?;
        Ok(SymplecticSubspace::new(
            self.ambient.clone(),
            self.rows.intersect(&o.rows),
        ))
    }

    /// Do all generator pairs across the two spaces have `σ = 0`?
    pub fn sigma_orthogonal(&self, o: &Self) -> Result<bool> {
        self.same_ambient(o)?;
        Ok(self
            .rows
            .rows()
            .all(|x| o.rows.rows().all(|y| self.ambient.sigma(x, y).is_zero())))
    }
}

pub fn join(spaces: &[SymplecticSubspace]) -> Result<SymplecticSubspace> {
    let first = spaces.first().ok_or(Error::AmbientMismatch)?;
    spaces[1..]
        .iter()
        .try_fold(first.clone(), |acc, s| acc.join(s))
}

pub fn intersect(spaces: &[SymplecticSubspace]) -> Result<SymplecticSubspace> {
    let first = spaces.first().ok_or(Error::AmbientMismatch)?;
    spaces[1..]
        .iter()
        .try_fold(first.clone(), |acc, s| acc.intersect(s))
}

/// A net: tag plus the poset it is indexed by.
#[derive(Clone, Debug, PartialEq)]
pub struct NetSpec {
    pub tag: SpaceTag,
    pub poset: Arc<CausalPoset>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    L,
    R,
}

/// Closed components of a bounded element (the region a local space lives on).
pub fn region_of(o: &IndexElement) -> Result<Vec<(Rational, Rational)>> {
    o.bounded_components()
        .ok_or_else(|| Error::UnsupportedElement(format!("{o} is unbounded")))
}

/// A net evaluated on a concrete ambient window.
#[derive(Clone, Debug)]
pub struct Net {
    pub spec: NetSpec,
    pub ambient: Arc<AmbientSpace>,
}

impl Net {
    pub fn new(tag: SpaceTag, poset: Arc<CausalPoset>, ambient: Arc<AmbientSpace>) -> Self {
        Net {
            spec: NetSpec { tag, poset },
            ambient,
        }
    }

    fn space(&self, e: Echelon) -> SymplecticSubspace {
        SymplecticSubspace::new(self.ambient.clone(), e)
    }

    fn local(&self, o: &IndexElement, c: &Constraints) -> Result<Arc<Echelon>> {
        Ok(self.ambient.local_space(&region_of(o)?, c))
    }

    fn probe(&self, region: &[(Rational, Rational)], c: &Constraints) -> Arc<Echelon> {
        self.ambient.probe_space().local_space(region, c)
    }

    fn pieces(&self, o: &IndexElement) -> Result<Vec<ComplementPiece>> {
        if !(o.is_interval() || o.is_double()) {
            return Err(Error::UnsupportedElement(o.to_string()));
        }
        causal_complement(o, &self.ambient.lo, &self.ambient.hi)
    }

    pub fn materialize(&self, o: &IndexElement) -> Result<SymplecticSubspace> {
        Ok(self.space((*self.local(o, &local_constraints(self.spec.tag))?).clone()))
    }

    /// Local space on a complement piece; edges of the window count as the
    /// unbounded true complement and force the f1 tail to vanish there.
    pub fn materialize_piece(&self, p: &ComplementPiece) -> Result<SymplecticSubspace> {
        match &p.element {
            None => Ok(SymplecticSubspace::zero(self.ambient.clone())),
            Some(e) => {
                let c = local_constraints(self.spec.tag).with_edges(p);
                Ok(self.space((*self.local(e, &c)?).clone()))
            }
        }
    }

    /// Join over the maximal poset intervals contained in `composite`.
    pub fn additive_extension(&self, composite: &IndexElement) -> Result<SymplecticSubspace> {
        let inside: Vec<&IndexElement> = self
            .spec
            .poset
            .elements
            .iter()
            .filter(|e| e.is_interval() && leq(e, composite))
            .collect();
        let maximal = inside
            .iter()
            .filter(|e| !inside.iter().any(|f| f != *e && leq(e, f)));
        let mut acc = Echelon::new(self.ambient.dim());
        for e in maximal {
            acc = acc.join(&*self.local(e, &local_constraints(self.spec.tag))?);
        }
        Ok(self.space(acc))
    }

    fn test_spaces(
        &self,
        pieces: &[ComplementPiece],
        pick: impl Fn(usize, &ComplementPiece) -> Constraints,
    ) -> Result<Vec<Arc<Echelon>>> {
        let mut out = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            if let Some(e) = &p.element {
                out.push(self.probe(&region_of(e)?, &pick(i, p).with_edges(p)));
            }
        }
        Ok(out)
    }

    /// σ-annihilator, inside the tag space, of the complement pieces' spaces.
    pub fn dual(&self, o: &IndexElement) -> Result<SymplecticSubspace> {
        let pieces = self.pieces(o)?;
        let c = local_constraints(self.spec.tag);
        let tests = self.test_spaces(&pieces, |_, _| c.clone())?;
        Ok(self.space(
            self.ambient
                .annihilator(&Constraints::tag(self.spec.tag), &tests),
        ))
    }

    /// The same annihilator tested against every poset element disjoint
    /// from `o` instead of the complement pieces.
    pub fn dual_via_poset(&self, o: &IndexElement) -> Result<SymplecticSubspace> {
        let c = local_constraints(self.spec.tag);
        let mut tests = Vec::new();
        for e in &self.spec.poset.elements {
            if disjoint(e, o) {
                tests.push(self.probe(&region_of(e)?, &c));
            }
        }
        Ok(self.space(
            self.ambient
                .annihilator(&Constraints::tag(self.spec.tag), &tests),
        ))
    }

    /// For a double interval `E` with gap `I3` and hull `I`:
    /// `A(I3)' ∧ A(I)`.
    pub fn dual_via_gap(&self, e: &IndexElement) -> Result<SymplecticSubspace> {
        let IndexElement::DoubleInterval { a, b, c, d } = e else {
            return Err(Error::UnsupportedElement(e.to_string()));
        };
        let lc = local_constraints(self.spec.tag);
        let gap = self.probe(&[(b.clone(), c.clone())], &lc);
        let ann = self
            .ambient
            .annihilator(&Constraints::tag(self.spec.tag), &[gap]);
        let hull = self.ambient.local_space(&[(a.clone(), d.clone())], &lc);
        Ok(self.space(ann.intersect(&hull)))
    }

    /// Annihilator of the refined copy of `materialize(o)` inside the tag.
    pub fn local_annihilator(&self, o: &IndexElement) -> Result<SymplecticSubspace> {
        let t = self.probe(&region_of(o)?, &local_constraints(self.spec.tag));
        Ok(self.space(
            self.ambient
                .annihilator(&Constraints::tag(self.spec.tag), &[t]),
        ))
    }

    /// Every cross generator pair of disjoint poset elements has σ = 0.
    pub fn check_locality(&self) -> Result<LocalityReport> {
        self.locality_between(self, disjoint)
    }

    fn locality_between(
        &self,
        other: &Net,
        rel: fn(&IndexElement, &IndexElement) -> bool,
    ) -> Result<LocalityReport> {
        let els = &self.spec.poset.elements;
        let mut report = LocalityReport::default();
        for o1 in els {
            for o2 in &other.spec.poset.elements {
                if !rel(o1, o2) {
                    continue;
                }
                report.pairs_checked += 1;
                let x = self.materialize(o1)?;
                let y = other.materialize(o2)?;
                for (i, u) in x.rows.rows().enumerate() {
                    for (j, v) in y.rows.rows().enumerate() {
                        let s = self.ambient.sigma(u, v);
                        if !s.is_zero() {
                            report.violations.push(LocalityViolation {
                                o1: o1.clone(),
                                o2: o2.clone(),
                                generator1: i,
                                generator2: j,
                                sigma: s,
                            });
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityViolation {
    pub o1: IndexElement,
    pub o2: IndexElement,
    pub generator1: usize,
    pub generator2: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub sigma: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub pairs_checked: usize,
    pub violations: Vec<LocalityViolation>,
}

impl LocalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Left-graded against right-graded nets over `before`-ordered pairs.
pub fn check_graded_locality(l: &Net, r: &Net) -> Result<LocalityReport> {
    l.locality_between(r, before)
}

/// Test-space constraints for the graded twist of side `side` on each
/// complement piece. On the far side (where the graded field has zero
/// tail) every f0 is allowed; on the near side and on gaps only
/// zero-integral f0 are allowed.
fn twist_constraints(side: Side, pieces: &[ComplementPiece], i: usize) -> Constraints {
    let last = pieces.len() - 1;
    let far = match side {
        Side::L => i == last,
        Side::R => i == 0,
    };
    if far {
        Constraints::compact_free()
    } else {
        Constraints::compact_neutral()
    }
}

impl Net {
    /// Graded twist test spaces on the complement pieces of `o`.
    pub fn graded_twist(&self, side: Side, o: &IndexElement) -> Result<Vec<SymplecticSubspace>> {
        let pieces = self.pieces(o)?;
        let mut out = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            match &p.element {
                None => out.push(SymplecticSubspace::zero(self.ambient.clone())),
                Some(e) => {
                    let c = twist_constraints(side, &pieces, i).with_edges(p);
                    out.push(self.space((*self.local(e, &c)?).clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn graded_dual(&self, side: Side, o: &IndexElement) -> Result<SymplecticSubspace> {
        let pieces = self.pieces(o)?;
        let tests = self.test_spaces(&pieces, |i, _| twist_constraints(side, &pieces, i))?;
        let within = match side {
            Side::L => SpaceTag::Vfl,
            Side::R => SpaceTag::Vfr,
        };
        Ok(self.space(self.ambient.annihilator(&Constraints::tag(within), &tests)))
    }

    /// Annihilator within `Vc` of `∂S ⊕ S` on every complement piece.
    pub fn global_graded_dual(&self, o: &IndexElement) -> Result<SymplecticSubspace> {
        let pieces = self.pieces(o)?;
        let tests = self.test_spaces(&pieces, |_, _| Constraints::compact_neutral())?;
        Ok(self.space(
            self.ambient
                .annihilator(&Constraints::tag(SpaceTag::Vc), &tests),
        ))
    }

    /// The complement test spaces of `global_graded_dual`, on the coarse grid.
    pub fn global_twist(&self, o: &IndexElement) -> Result<Vec<SymplecticSubspace>> {
        let pieces = self.pieces(o)?;
        let mut out = Vec::new();
        for p in &pieces {
            if let Some(e) = &p.element {
                let c = Constraints::compact_neutral().with_edges(p);
                out.push(self.space((*self.local(e, &c)?).clone()));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{space_member, symplectic_form};
    use crate::poset::{build_poset, PosetKind};
    use crate::rational::rat;

    fn small() -> Arc<AmbientSpace> {
        AmbientSpace::new(int(-2), int(4), rat(1, 2)).unwrap()
    }

    fn poset() -> Arc<CausalPoset> {
        Arc::new(build_poset(PosetKind::D, &int(-2), &int(4), &int(1), usize::MAX).unwrap())
    }

    #[test]
    fn coordinates_roundtrip_and_gram_matches_integrals() {
        let a = small();
        assert_eq!(a.dim(), 24);
        for i in 0..a.dim() {
            let p = a.basis_pair(i);
            assert_eq!(a.coords(&p).unwrap(), SparseVec::unit(i));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (p, q) = (a.basis_pair(i), a.basis_pair(j));
                assert_eq!(
                    a.sigma(&SparseVec::unit(i), &SparseVec::unit(j)),
                    symplectic_form(&p, &q)
                );
            }
        }
    }

    #[test]
    fn functional_agrees_with_sigma() {
        let a = small();
        let x = a
            .coords(&a.basis_pair(3))
            .unwrap()
            .axpy(&int(2), &SparseVec::unit(15));
        let w = SparseVec::unit(14).axpy(&int(-1), &SparseVec::unit(4));
        assert_eq!(a.sigma_functional(&w).dot(&x), a.sigma(&x, &w));
    }

    #[test]
    fn pullback_matches_refined_sigma() {
        let a = small();
        let fine = a.probe_space();
        let x = SparseVec::unit(2).axpy(&int(3), &SparseVec::unit(17));
        let xf = a.refine(&x);
        for j in [0usize, 5, 20, 40, 50] {
            let w = SparseVec::unit(j);
            let phi = a.pull_back(&fine, &fine.sigma_functional(&w));
            assert_eq!(phi.dot(&x), fine.sigma(&xf, &w));
        }
    }

    #[test]
    fn materialized_members_satisfy_tag_and_localization() {
        let a = small();
        let o = IndexElement::dbl(-1, 0, 1, 3);
        for tag in SpaceTag::ALL {
            let net = Net::new(tag, poset(), a.clone());
            for g in net.materialize(&o).unwrap().basis() {
                assert!(space_member(&g, tag));
                for (x, y) in crate::piecewise::localization(&g) {
                    assert!(o.closure_contains(&x, &y));
                }
            }
        }
    }

    #[test]
    fn lattice_inclusion_of_local_spaces() {
        let a = small();
        let o = IndexElement::iv(-1, 2);
        let va = Net::new(SpaceTag::Va, poset(), a.clone())
            .materialize(&o)
            .unwrap();
        let vf = Net::new(SpaceTag::Vf, poset(), a.clone())
            .materialize(&o)
            .unwrap();
        assert!(va.is_subspace_of(&vf).unwrap());
        let coarse = AmbientSpace::new(int(0), int(4), int(1)).unwrap();
        let net = Net::new(SpaceTag::Va, poset(), coarse);
        assert_eq!(net.materialize(&IndexElement::iv(0, 1)).unwrap().dim(), 0);
    }

    #[test]
    fn haag_duality_small_window() {
        let a = small();
        let net = Net::new(SpaceTag::Va, poset(), a);
        for o in [
            IndexElement::iv(-1, 1),
            IndexElement::iv(0, 3),
            IndexElement::iv(-2, 0),
        ] {
            assert_eq!(net.dual(&o).unwrap(), net.materialize(&o).unwrap(), "{o}");
        }
        let full = IndexElement::iv(-2, 4);
        let tagged = net.ambient.tag_space(&Constraints::tag(SpaceTag::Va));
        assert_eq!(net.dual(&full).unwrap().rows, tagged);
    }

    #[test]
    fn double_interval_gap() {
        let a = small();
        let net = Net::new(SpaceTag::Va, poset(), a);
        let e = IndexElement::dbl(-2, 0, 1, 3);
        let m = net.materialize(&e).unwrap();
        let add = net.additive_extension(&e).unwrap();
        assert!(add.is_subspace_of(&m).unwrap());
        assert_eq!(m.dim() - add.dim(), 2);
        assert_eq!(net.dual(&e).unwrap(), m);
        assert_eq!(net.dual_via_gap(&e).unwrap(), m);
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = small();
        let b = AmbientSpace::new(int(0), int(4), int(1)).unwrap();
        let x = SymplecticSubspace::zero(a);
        let y = SymplecticSubspace::zero(b);
        assert_eq!(x.join(&y).unwrap_err(), Error::AmbientMismatch);
    }
}
