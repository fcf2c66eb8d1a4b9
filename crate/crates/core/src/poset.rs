//! Finite causal index sets on a rational window.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{grid_index, int, serde_str, Rational};

/// Extended endpoint: −∞, a finite rational, or +∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Fin(r) => write!(f, "{r}"),
            Ext::PosInf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum IndexElement {
    Interval {
        #[serde(with = "serde_str")]
        a: Rational,
        #[serde(with = "serde_str")]
        b: Rational,
    },
    /// `(a,b) ∪ (c,d)` with `b < c`.
    DoubleInterval {
        #[serde(with = "serde_str")]
        a: Rational,
        #[serde(with = "serde_str")]
        b: Rational,
        #[serde(with = "serde_str")]
        c: Rational,
        #[serde(with = "serde_str")]
        d: Rational,
    },
    /// `(−∞, b)`.
    HalfLineLeft {
        #[serde(with = "serde_str")]
        b: Rational,
    },
    /// `(a, ∞)`.
    HalfLineRight {
        #[serde(with = "serde_str")]
        a: Rational,
    },
}

impl fmt::Display for IndexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexElement::Interval { a, b } => write!(f, "({a},{b})"),
            IndexElement::DoubleInterval { a, b, c, d } => write!(f, "({a},{b})∪({c},{d})"),
            IndexElement::HalfLineLeft { b } => write!(f, "(-inf,{b})"),
            IndexElement::HalfLineRight { a } => write!(f, "({a},inf)"),
        }
    }
}

impl IndexElement {
    pub fn interval(a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::UnsupportedElement(format!(
                "empty interval ({a},{b})"
            )));
        }
        Ok(IndexElement::Interval { a, b })
    }

    pub fn double(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if !(a < b && b < c && c < d) {
            return Err(Error::UnsupportedElement(format!(
                "not a double interval: ({a},{b})∪({c},{d})"
            )));
        }
        Ok(IndexElement::DoubleInterval { a, b, c, d })
    }

    /// Shorthand for integer-endpoint intervals.
    pub fn iv(a: i64, b: i64) -> Self {
        IndexElement::interval(int(a), int(b)).expect("a < b")
    }

    /// Shorthand for integer-endpoint double intervals.
    pub fn dbl(a: i64, b: i64, c: i64, d: i64) -> Self {
        IndexElement::double(int(a), int(b), int(c), int(d)).expect("a < b < c < d")
    }

    /// Open connected components, left to right.
    pub fn components(&self) -> Vec<(Ext, Ext)> {
        match self {
            IndexElement::Interval { a, b } => vec![(Ext::Fin(a.clone()), Ext::Fin(b.clone()))],
            IndexElement::DoubleInterval { a, b, c, d } => vec![
                (Ext::Fin(a.clone()), Ext::Fin(b.clone())),
                (Ext::Fin(c.clone()), Ext::Fin(d.clone())),
            ],
            IndexElement::HalfLineLeft { b } => vec![(Ext::NegInf, Ext::Fin(b.clone()))],
            IndexElement::HalfLineRight { a } => vec![(Ext::Fin(a.clone()), Ext::PosInf)],
        }
    }

    /// Bounded components as finite closed-interval endpoints.
    pub fn bounded_components(&self) -> Option<Vec<(Rational, Rational)>> {
        self.components()
            .into_iter()
            .map(|(l, r)| match (l, r) {
                (Ext::Fin(a), Ext::Fin(b)) => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    pub fn inf(&self) -> Ext {
        self.components()[0].0.clone()
    }

    pub fn sup(&self) -> Ext {
        self.components().last().expect("nonempty").1.clone()
    }

    /// Smallest interval containing the element (bounded elements only).
    pub fn hull(&self) -> Option<IndexElement> {
        match (self.inf(), self.sup()) {
            (Ext::Fin(a), Ext::Fin(b)) => Some(IndexElement::Interval { a, b }),
            _ => None,
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, IndexElement::Interval { .. })
    }

    pub fn is_double(&self) -> bool {
        matches!(self, IndexElement::DoubleInterval { .. })
    }

    /// Does the open set contain the closed interval `[x, y]`?
    pub fn contains_closed(&self, x: &Rational, y: &Rational) -> bool {
        self.components()
            .iter()
            .any(|(l, r)| l < &Ext::Fin(x.clone()) && &Ext::Fin(y.clone()) < r)
    }

    /// Does the closure of the element contain `[x, y]`?
    pub fn closure_contains(&self, x: &Rational, y: &Rational) -> bool {
        self.components()
            .iter()
            .any(|(l, r)| l <= &Ext::Fin(x.clone()) && &Ext::Fin(y.clone()) <= r)
    }

    fn sort_key(&self) -> (Ext, Ext, Vec<(Ext, Ext)>) {
        (self.inf(), self.sup(), self.components())
    }

    /// Image under the affine map `x ↦ eps·x + t`.
    pub fn affine_image(&self, eps: i8, t: &Rational) -> IndexElement {
        let m = |x: &Rational| if eps > 0 { x + t } else { t - x };
        match self {
            IndexElement::Interval { a, b } if eps > 0 => {
                IndexElement::Interval { a: m(a), b: m(b) }
            }
            IndexElement::Interval { a, b } => IndexElement::Interval { a: m(b), b: m(a) },
            IndexElement::DoubleInterval { a, b, c, d } if eps > 0 => {
                IndexElement::DoubleInterval {
                    a: m(a),
                    b: m(b),
                    c: m(c),
                    d: m(d),
                }
            }
            IndexElement::DoubleInterval { a, b, c, d } => IndexElement::DoubleInterval {
                a: m(d),
                b: m(c),
                c: m(b),
                d: m(a),
            },
            IndexElement::HalfLineLeft { b } if eps > 0 => IndexElement::HalfLineLeft { b: m(b) },
            IndexElement::HalfLineLeft { b } => IndexElement::HalfLineRight { a: m(b) },
            IndexElement::HalfLineRight { a } if eps > 0 => IndexElement::HalfLineRight { a: m(a) },
            IndexElement::HalfLineRight { a } => IndexElement::HalfLineLeft { b: m(a) },
        }
    }
}

/// Set inclusion.
pub fn leq(o1: &IndexElement, o2: &IndexElement) -> bool {
    let big = o2.components();
    o1.components()
        .iter()
        .all(|(l, r)| big.iter().any(|(bl, br)| bl <= l && r <= br))
}

/// Empty intersection of the open sets.
pub fn disjoint(o1: &IndexElement, o2: &IndexElement) -> bool {
    let c2 = o2.components();
    o1.components()
        .iter()
        .all(|(l1, r1)| c2.iter().all(|(l2, r2)| r1 <= l2 || r2 <= l1))
}

/// Every point of `o1` lies left of every point of `o2`.
pub fn before(o1: &IndexElement, o2: &IndexElement) -> bool {
    o1.sup() <= o2.inf()
}

/// Space inversion `x ↦ −x`.
pub fn apply_inversion(o: &IndexElement) -> IndexElement {
    o.affine_image(-1, &Rational::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosetKind {
    I,
    I2,
    D,
    J,
}

/// A piece of a causal complement, clipped to the window.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplementPiece {
    /// `None` when the piece is empty inside the window.
    pub element: Option<IndexElement>,
    /// The true piece is unbounded to the left (it abuts the window's left edge).
    pub unbounded_left: bool,
    /// The true piece is unbounded to the right.
    pub unbounded_right: bool,
}

impl ComplementPiece {
    fn new(a: &Rational, b: &Rational, ul: bool, ur: bool) -> Self {
        ComplementPiece {
            element: (a < b).then(|| IndexElement::Interval {
                a: a.clone(),
                b: b.clone(),
            }),
            unbounded_left: ul,
            unbounded_right: ur,
        }
    }
}

/// Ordered complement pieces of an interval (`[J_l, J_r]`) or a double
/// interval (`[J_l, I3, J_r]`) inside `[lo, hi]`.
pub fn causal_complement(
    o: &IndexElement,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<ComplementPiece>> {
    let comps = o
        .bounded_components()
        .filter(|_| o.is_interval() || o.is_double())
        .ok_or_else(|| Error::UnsupportedElement(o.to_string()))?;
    let (first, last) = (&comps[0], &comps[comps.len() - 1]);
    if &first.0 < lo || &last.1 > hi {
        return Err(Error::UnsupportedElement(format!("{o} leaves the window")));
    }
    let mut out = vec![ComplementPiece::new(lo, &first.0, true, false)];
    if comps.len() == 2 {
        out.push(ComplementPiece::new(&comps[0].1, &comps[1].0, false, false));
    }
    out.push(ComplementPiece::new(&last.1, hi, false, true));
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CausalPoset {
    pub kind: PosetKind,
    #[serde(with = "serde_str")]
    pub lo: Rational,
    #[serde(with = "serde_str")]
    pub hi: Rational,
    #[serde(with = "serde_str")]
    pub step: Rational,
    pub elements: Vec<IndexElement>,
    #[serde(skip)]
    index: HashMap<IndexElement, usize>,
}

impl PartialEq for CausalPoset {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.lo == o.lo
            && self.hi == o.hi
            && self.step == o.step
            && self.elements == o.elements
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn check_window(lo: &Rational, hi: &Rational, step: &Rational) -> Result<usize> {
    if lo >= hi || !step.is_positive() {
        return Err(Error::InvalidWindow(format!(
            "[{lo},{hi}] with step {step}"
        )));
    }
    grid_index(hi, lo, step)
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::InvalidWindow(format!("step {step} does not divide [{lo},{hi}]")))
}

pub fn build_poset(
    kind: PosetKind,
    lo: &Rational,
    hi: &Rational,
    step: &Rational,
    max_elements: usize,
) -> Result<CausalPoset> {
    let n = check_window(lo, hi, step)?;
    let count = match kind {
        PosetKind::I => binom(n + 1, 2),
        PosetKind::I2 => binom(n + 1, 4),
        PosetKind::D => binom(n + 1, 2).saturating_add(binom(n + 1, 4)),
        PosetKind::J => 2 * n,
    };
    if count > max_elements {
        return Err(Error::TooManyElements {
            count,
            max: max_elements,
        });
    }
    let node = |k: usize| lo + step * int(k as i64);
    let mut elements = Vec::with_capacity(count);
    if matches!(kind, PosetKind::I | PosetKind::D) {
        for i in 0..=n {
            for j in i + 1..=n {
                elements.push(IndexElement::Interval {
                    a: node(i),
                    b: node(j),
                });
            }
        }
    }
    if matches!(kind, PosetKind::I2 | PosetKind::D) {
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        elements.push(IndexElement::DoubleInterval {
                            a: node(i),
                            b: node(j),
                            c: node(k),
                            d: node(l),
                        });
                    }
                }
            }
        }
    }
    if kind == PosetKind::J {
        for k in 1..=n {
            elements.push(IndexElement::HalfLineLeft { b: node(k) });
        }
        for k in 0..n {
            elements.push(IndexElement::HalfLineRight { a: node(k) });
        }
    }
    Ok(CausalPoset::from_elements(
        kind,
        lo.clone(),
        hi.clone(),
        step.clone(),
        elements,
    ))
}

impl CausalPoset {
    /// A poset with an explicit element list, sorted deterministically.
    pub fn from_elements(
        kind: PosetKind,
        lo: Rational,
        hi: Rational,
        step: Rational,
        mut elements: Vec<IndexElement>,
    ) -> Self {
        elements.sort_by_key(|e| e.sort_key());
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        CausalPoset {
            kind,
            lo,
            hi,
            step,
            elements,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, o: &IndexElement) -> Option<usize> {
        if self.index.is_empty() && !self.elements.is_empty() {
            return self.elements.iter().position(|e| e == o);
        }
        self.index.get(o).copied()
    }

    pub fn contains(&self, o: &IndexElement) -> bool {
        self.position(o).is_some()
    }

    /// Index of the first (enumeration order) ⊆-minimal element containing
    /// both arguments.
    pub fn minimal_upper_bound(&self, o1: &IndexElement, o2: &IndexElement) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.len())
            .filter(|&i| leq(o1, &self.elements[i]) && leq(o2, &self.elements[i]))
            .collect();
        ubs.iter().copied().find(|&i| {
            !ubs.iter().any(|&j| {
                j != i
                    && leq(&self.elements[j], &self.elements[i])
                    && self.elements[j] != self.elements[i]
            })
        })
    }

    pub fn upper_bounds(&self, o1: &IndexElement, o2: &IndexElement) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| leq(o1, &self.elements[i]) && leq(o2, &self.elements[i]))
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sieve {
    pub left: Vec<IndexElement>,
    pub right: Vec<IndexElement>,
    pub other: Vec<IndexElement>,
}

pub fn disjoint_sieve(o: &IndexElement, poset: &CausalPoset) -> Result<Sieve> {
    if !poset.contains(o) {
        return Err(Error::ElementNotInPoset(o.to_string()));
    }
    let mut s = Sieve::default();
    for e in &poset.elements {
        if !disjoint(e, o) {
            continue;
        }
        if before(e, o) {
            s.left.push(e.clone());
        } else if before(o, e) {
            s.right.push(e.clone());
        } else {
            s.other.push(e.clone());
        }
    }
    Ok(s)
}

pub fn is_directed(poset: &CausalPoset) -> bool {
    let n = poset.len();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            poset
                .elements
                .iter()
                .any(|u| leq(&poset.elements[i], u) && leq(&poset.elements[j], u))
        })
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of the 1-simplex adjacency graph: two elements are
/// adjacent when some element contains both.
pub fn components(poset: &CausalPoset) -> Vec<Vec<usize>> {
    let n = poset.len();
    let mut uf = UnionFind::new(n);
    // Every element is adjacent to each of its upper bounds (a 1-simplex
    // with faces (o, u) and support u); this generates the same relation.
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(&poset.elements[i], &poset.elements[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = uf.find(i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(i);
    }
    groups
}

pub fn is_connected(poset: &CausalPoset) -> bool {
    components(poset).len() <= 1
}

/// Every element of `sup` is contained in some element of `sub`.
pub fn is_cofinal(sub: &CausalPoset, sup: &CausalPoset) -> bool {
    sup.elements
        .iter()
        .all(|o| sub.elements.iter().any(|p| leq(o, p)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotGraph {
    pub component_count: usize,
    /// Vertices as pairs of element indices, grouped by component.
    pub components: Vec<Vec<(usize, usize)>>,
    /// Pairs with `o1` before `o2`.
    pub less: Vec<(usize, usize)>,
    /// Pairs with `o2` before `o1`.
    pub greater: Vec<(usize, usize)>,
    /// Disjoint pairs that are interleaved (neither order).
    pub interleaved: Vec<(usize, usize)>,
}

/// The graph of ⊥ with the product order: vertices are disjoint ordered
/// pairs, edges join comparable pairs.
pub fn bot_graph(poset: &CausalPoset) -> BotGraph {
    let els = &poset.elements;
    let n = els.len();
    let mut sub = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            sub[i][j] = leq(&els[i], &els[j]);
        }
    }
    let vertices: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && disjoint(&els[i], &els[j]))
        .collect();
    let m = vertices.len();
    let mut uf = UnionFind::new(m);
    for x in 0..m {
        for y in x + 1..m {
            let (a, b) = vertices[x];
            let (c, d) = vertices[y];
            if (sub[a][c] && sub[b][d]) || (sub[c][a] && sub[d][b]) {
                uf.union(x, y);
            }
        }
    }
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut slot_of: HashMap<usize, usize> = HashMap::new();
    for (x, v) in vertices.iter().enumerate() {
        let r = uf.find(x);
        let slot = *slot_of.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(*v);
    }
    let mut g = BotGraph {
        component_count: groups.len(),
        components: groups,
        less: Vec::new(),
        greater: Vec::new(),
        interleaved: Vec::new(),
    };
    for &(i, j) in &vertices {
        if before(&els[i], &els[j]) {
            g.less.push((i, j));
        } else if before(&els[j], &els[i]) {
            g.greater.push((i, j));
        } else {
            g.interleaved.push((i, j));
        }
    }
    g
}

/// `(o1,o2) ∈ G< ⟺ (S o1, S o2) ∈ G>` for all element pairs, and S maps the
/// poset into itself.
pub fn flip_check(poset: &CausalPoset) -> Result<bool> {
    if poset.lo != -poset.hi.clone() {
        return Err(Error::WindowNotSymmetric(
            poset.lo.to_string(),
            poset.hi.to_string(),
        ));
    }
    let imgs: Vec<IndexElement> = poset.elements.iter().map(apply_inversion).collect();
    if !imgs.iter().all(|e| poset.contains(e)) {
        return Ok(false);
    }
    let n = poset.len();
    for i in 0..n {
        for j in 0..n {
            let (o1, o2) = (&poset.elements[i], &poset.elements[j]);
            let lhs = disjoint(o1, o2) && before(o1, o2);
            let rhs = disjoint(&imgs[i], &imgs[j]) && before(&imgs[j], &imgs[i]);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Is `x` a node of the poset grid?
pub fn is_grid_point(poset: &CausalPoset, x: &Rational) -> bool {
    grid_index(x, &poset.lo, &poset.step).is_some() && x <= &poset.hi
}

/// Length of the shortest component of a bounded element.
pub fn min_component_length(o: &IndexElement) -> Option<Rational> {
    o.bounded_components()?
        .into_iter()
        .map(|(a, b)| b - a)
        .min()
        .filter(|l| !l.is_zero())
}
