//! Singular simplices of a causal poset and paths between 0-simplices.
//!
//! Orientation: a 1-simplex `b` runs from `∂₁b` to `∂₀b`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{leq, CausalPoset, IndexElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex0 {
    pub body: IndexElement,
    pub support: IndexElement,
}

impl Simplex0 {
    /// A 0-simplex that is its own support.
    pub fn of(o: IndexElement) -> Self {
        Simplex0 {
            body: o.clone(),
            support: o,
        }
    }

    pub fn with_support(body: IndexElement, support: IndexElement) -> Result<Self> {
        if !leq(&body, &support) {
            return Err(Error::NoCommonSupport(
                body.to_string(),
                support.to_string(),
            ));
        }
        Ok(Simplex0 { body, support })
    }
}

impl fmt::Display for Simplex0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body == self.support {
            write!(f, "{}", self.body)
        } else {
            write!(f, "{}⊆{}", self.body, self.support)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex1 {
    pub support: IndexElement,
    /// Target face `∂₀b`.
    pub d0: Simplex0,
    /// Source face `∂₁b`.
    pub d1: Simplex0,
}

impl Simplex1 {
    pub fn new(support: IndexElement, d0: Simplex0, d1: Simplex0) -> Result<Self> {
        for f in [&d0, &d1] {
            if !leq(&f.support, &support) {
                return Err(Error::NoCommonSupport(
                    f.support.to_string(),
                    support.to_string(),
                ));
            }
        }
        Ok(Simplex1 { support, d0, d1 })
    }

    pub fn face(&self, i: usize) -> &Simplex0 {
        match i {
            0 => &self.d0,
            _ => &self.d1,
        }
    }

    pub fn reversed(&self) -> Simplex1 {
        Simplex1 {
            support: self.support.clone(),
            d0: self.d1.clone(),
            d1: self.d0.clone(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.d0 == self.d1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex2 {
    pub support: IndexElement,
    pub d0: Simplex1,
    pub d1: Simplex1,
    pub d2: Simplex1,
}

impl Simplex2 {
    pub fn new(support: IndexElement, d0: Simplex1, d1: Simplex1, d2: Simplex1) -> Result<Self> {
        let c = Simplex2 {
            support,
            d0,
            d1,
            d2,
        };
        if !c.faces_compatible() {
            return Err(Error::Validation(
                "2-simplex faces do not share vertices".into(),
            ));
        }
        for f in [&c.d0, &c.d1, &c.d2] {
            if !leq(&f.support, &c.support) {
                return Err(Error::NoCommonSupport(
                    f.support.to_string(),
                    c.support.to_string(),
                ));
            }
        }
        Ok(c)
    }

    pub fn face(&self, i: usize) -> &Simplex1 {
        match i {
            0 => &self.d0,
            1 => &self.d1,
            _ => &self.d2,
        }
    }

    /// `∂ᵢ∂ⱼc = ∂ⱼ₋₁∂ᵢc` for `i < j`.
    pub fn faces_compatible(&self) -> bool {
        (0..3).all(|j| (0..j).all(|i| self.face(j).face(i) == self.face(i).face(j - 1)))
    }

    /// Vertices `(v0, v1, v2)`; `∂ᵢc` omits `vᵢ`.
    pub fn vertices(&self) -> [&Simplex0; 3] {
        [&self.d1.d1, &self.d2.d0, &self.d0.d0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SupportPolicy {
    #[default]
    Minimal,
    All,
}

/// Poset elements containing every element of `parts`, in poset order.
pub fn common_supports<'a>(
    parts: &[&IndexElement],
    poset: &'a CausalPoset,
) -> Vec<&'a IndexElement> {
    poset
        .elements
        .iter()
        .filter(|e| parts.iter().all(|p| leq(p, e)))
        .collect()
}

fn minimal_support(parts: &[&IndexElement], poset: &CausalPoset) -> Option<IndexElement> {
    let cands = common_supports(parts, poset);
    cands
        .iter()
        .find(|e| !cands.iter().any(|f| f != *e && leq(f, e)))
        .map(|e| (*e).clone())
}

/// The 1-simplex from `a1` to `a0` with the ⊆-minimal poset support.
pub fn canonical_simplex1(
    a0: &IndexElement,
    a1: &IndexElement,
    poset: &CausalPoset,
) -> Result<Simplex1> {
    let s = minimal_support(&[a0, a1], poset)
        .ok_or_else(|| Error::NoCommonSupport(a0.to_string(), a1.to_string()))?;
    Simplex1::new(s, Simplex0::of(a0.clone()), Simplex0::of(a1.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "dim", content = "simplex")]
pub enum Simplex {
    #[serde(rename = "0")]
    S0(Simplex0),
    #[serde(rename = "1")]
    S1(Simplex1),
    #[serde(rename = "2")]
    S2(Simplex2),
}

/// Enumerate `n`-simplices (`n ≤ 2`) whose vertices are poset elements used
/// as their own supports. `max_count` caps the output.
pub fn enumerate_simplices(
    poset: &CausalPoset,
    n: usize,
    policy: SupportPolicy,
    max_count: usize,
) -> Result<Vec<Simplex>> {
    let els = &poset.elements;
    let mut out = Vec::new();
    let supports = |parts: &[&IndexElement]| -> Vec<IndexElement> {
        match policy {
            SupportPolicy::Minimal => minimal_support(parts, poset).into_iter().collect(),
            SupportPolicy::All => common_supports(parts, poset).into_iter().cloned().collect(),
        }
    };
    match n {
        0 => {
            for a in els {
                for s in supports(&[a]) {
                    out.push(Simplex::S0(Simplex0::with_support(a.clone(), s)?));
                    if out.len() >= max_count {
                        return Ok(out);
                    }
                }
            }
        }
        1 => {
            for a1 in els {
                for a0 in els {
                    for s in supports(&[a0, a1]) {
                        out.push(Simplex::S1(Simplex1::new(
                            s,
                            Simplex0::of(a0.clone()),
                            Simplex0::of(a1.clone()),
                        )?));
                        if out.len() >= max_count {
                            return Ok(out);
                        }
                    }
                }
            }
        }
        2 => {
            let pair: Vec<Vec<Option<Simplex1>>> = els
                .iter()
                .map(|x| {
                    els.iter()
                        .map(|y| canonical_simplex1(x, y, poset).ok())
                        .collect()
                })
                .collect();
            for i0 in 0..els.len() {
                for i1 in 0..els.len() {
                    for i2 in 0..els.len() {
                        let (Some(d0), Some(d1), Some(d2)) =
                            (&pair[i2][i1], &pair[i2][i0], &pair[i1][i0])
                        else {
                            continue;
                        };
                        let parts = [&d0.support, &d1.support, &d2.support];
                        for s in supports(&parts) {
                            out.push(Simplex::S2(Simplex2::new(
                                s,
                                d0.clone(),
                                d1.clone(),
                                d2.clone(),
                            )?));
                            if out.len() >= max_count {
                                return Ok(out);
                            }
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::Validation(format!(
                "simplices of dimension {n} are not supported"
            )))
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub steps: Vec<Simplex1>,
}

impl Path {
    pub fn new(steps: Vec<Simplex1>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Validation(
                "a path needs at least one 1-simplex".into(),
            ));
        }
        for w in steps.windows(2) {
            if w[1].d1 != w[0].d0 {
                return Err(Error::Validation(format!(
                    "{} does not continue from {}",
                    w[1].d1, w[0].d0
                )));
            }
        }
        Ok(Path { steps })
    }

    pub fn start(&self) -> &Simplex0 {
        &self.steps[0].d1
    }

    pub fn end(&self) -> &Simplex0 {
        &self.steps[self.steps.len() - 1].d0
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Supports of the 1-simplices, in order.
    pub fn supports(&self) -> Vec<&IndexElement> {
        self.steps.iter().map(|b| &b.support).collect()
    }

    /// Vertices `start = v0, v1, …, vn = end`.
    pub fn vertices(&self) -> Vec<&Simplex0> {
        let mut v = vec![self.start()];
        v.extend(self.steps.iter().map(|b| &b.d0));
        v
    }
}

pub fn path_boundary(p: &Path) -> (Simplex0, Simplex0) {
    (p.start().clone(), p.end().clone())
}

pub fn path_reverse(p: &Path) -> Path {
    Path {
        steps: p.steps.iter().rev().map(Simplex1::reversed).collect(),
    }
}

pub fn path_compose(p: &Path, q: &Path) -> Result<Path> {
    if p.end() != q.start() {
        return Err(Error::NonComposable);
    }
    let mut steps = p.steps.clone();
    steps.extend(q.steps.iter().cloned());
    Ok(Path { steps })
}

/// Build the path through the given vertex sequence with canonical supports.
pub fn path_through(vertices: &[IndexElement], poset: &CausalPoset) -> Result<Path> {
    let steps = vertices
        .windows(2)
        .map(|w| canonical_simplex1(&w[1], &w[0], poset))
        .collect::<Result<Vec<_>>>()?;
    Path::new(steps)
}

fn adjacency(poset: &CausalPoset) -> Vec<Vec<usize>> {
    let els = &poset.elements;
    (0..els.len())
        .map(|i| {
            (0..els.len())
                .filter(|&j| j != i && minimal_support(&[&els[i], &els[j]], poset).is_some())
                .collect()
        })
        .collect()
}

/// All paths with minimal supports, of length ≤ `max_len`, that do not
/// revisit a vertex; for `start = end` the degenerate loop is included.
/// Deterministic order: by length, then lexicographically by vertex index.
pub fn enumerate_paths(
    start: &IndexElement,
    end: &IndexElement,
    poset: &CausalPoset,
    max_len: usize,
) -> Result<Vec<Path>> {
    if max_len == 0 {
        return Err(Error::Validation("maxLen must be at least 1".into()));
    }
    let s = poset
        .position(start)
        .ok_or_else(|| Error::ElementNotInPoset(start.to_string()))?;
    let e = poset
        .position(end)
        .ok_or_else(|| Error::ElementNotInPoset(end.to_string()))?;
    let adj = adjacency(poset);
    let mut found: Vec<Vec<usize>> = Vec::new();
    if s == e {
        found.push(vec![s, s]);
    }
    let mut stack = vec![s];
    let mut on = vec![false; poset.len()];
    on[s] = true;
    fn dfs(
        adj: &[Vec<usize>],
        e: usize,
        max_len: usize,
        stack: &mut Vec<usize>,
        on: &mut [bool],
        found: &mut Vec<Vec<usize>>,
    ) {
        let v = *stack.last().expect("non-empty");
        if stack.len() > max_len {
            return;
        }
        for &w in &adj[v] {
            if on[w] {
                continue;
            }
            stack.push(w);
            if w == e {
                found.push(stack.clone());
            } else {
                on[w] = true;
                dfs(adj, e, max_len, stack, on, found);
                on[w] = false;
            }
            stack.pop();
        }
    }
    if s != e {
        dfs(&adj, e, max_len, &mut stack, &mut on, &mut found);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found.dedup();
    found
        .iter()
        .map(|vs| {
            let els: Vec<IndexElement> = vs.iter().map(|i| poset.elements[*i].clone()).collect();
            path_through(&els, poset)
        })
        .collect()
}

/// A shortest path (breadth-first), if one exists.
pub fn shortest_path(
    start: &IndexElement,
    end: &IndexElement,
    poset: &CausalPoset,
) -> Result<Option<Path>> {
    let s = poset
        .position(start)
        .ok_or_else(|| Error::ElementNotInPoset(start.to_string()))?;
    let e = poset
        .position(end)
        .ok_or_else(|| Error::ElementNotInPoset(end.to_string()))?;
    if s == e {
        return path_through(&[start.clone(), end.clone()], poset).map(Some);
    }
    let adj = adjacency(poset);
    let mut prev = vec![usize::MAX; poset.len()];
    let mut seen = HashSet::from([s]);
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if seen.insert(w) {
                prev[w] = v;
                q.push_back(w);
            }
        }
    }
    if !seen.contains(&e) {
        return Ok(None);
    }
    let mut vs = vec![e];
    while *vs.last().expect("non-empty") != s {
        vs.push(prev[*vs.last().expect("non-empty")]);
    }
    vs.reverse();
    let els: Vec<IndexElement> = vs.iter().map(|i| poset.elements[*i].clone()).collect();
    path_through(&els, poset).map(Some)
}
