//! Exact sparse linear algebra over the rationals.
//!
//! Subspaces are kept in reduced row echelon form, which is canonical: two
//! row spaces are equal iff their reduced forms are identical.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Sparse vector: strictly increasing column indices with nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(pub Vec<(usize, Rational)>);

impl SparseVec {
    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        )
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Rational::one())])
    }

    pub fn from_entries(mut e: Vec<(usize, Rational)>) -> Self {
        e.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(e.len());
        for (i, x) in e {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        SparseVec(out)
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (i, x) in &self.0 {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.0
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.0[k].1)
    }

    pub fn lead(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    pub fn dot(&self, o: &SparseVec) -> Rational {
        let (mut a, mut b) = (0, 0);
        let mut s = Rational::zero();
        while a < self.0.len() && b < o.0.len() {
            match self.0[a].0.cmp(&o.0[b].0) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    s += &self.0[a].1 * &o.0[b].1;
                    a += 1;
                    b += 1;
                }
            }
        }
        s
    }

    /// Dot product with a dense vector.
    pub fn dot_dense(&self, o: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, x) in &self.0 {
            if !o[*i].is_zero() {
                s += x * &o[*i];
            }
        }
        s
    }

    /// `self + f·o`.
    pub fn axpy(&self, f: &Rational, o: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut a, mut b) = (0, 0);
        while a < self.0.len() || b < o.0.len() {
            let ia = self.0.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = o.0.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.0[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, f * &o.0[b].1));
                b += 1;
            } else {
                let v = &self.0[a].1 + f * &o.0[b].1;
                if !v.is_zero() {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec(out)
    }

    pub fn scale(&self, f: &Rational) -> SparseVec {
        if f.is_zero() {
            return SparseVec::default();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x * f)).collect())
    }

    /// Entries with column index shifted by `off`.
    pub fn shifted(&self, off: usize) -> SparseVec {
        SparseVec(self.0.iter().map(|(i, x)| (i + off, x.clone())).collect())
    }
}

/// Row space in reduced row echelon form, keyed by pivot column.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    pub ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce `v` against the stored pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut k = 0;
        while k < v.0.len() {
            let (col, coef) = (v.0[k].0, v.0[k].1.clone());
            match self.rows.get(&col) {
                Some(row) => {
                    v = v.axpy(&-coef, row);
                    // the pivot entry vanished; entries before k are untouched
                }
                None => k += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        let Some(lead) = r.lead() else {
            return false;
        };
        let inv = r.0[0].1.recip();
        let r = r.scale(&inv);
        let keys: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, row)| row.get(lead).is_some())
            .map(|(k, _)| *k)
            .collect();
        for k in keys {
            let row = &self.rows[&k];
            let f = -row.get(lead).expect("checked").clone();
            let new = row.axpy(&f, &r);
            self.rows.insert(k, new);
        }
        self.rows.insert(lead, r);
        true
    }

    pub fn contains_all(&self, o: &Echelon) -> bool {
        o.rows().all(|r| self.contains(r))
    }

    /// Basis of `{x : row·x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let mut free_cols: Vec<usize> = Vec::new();
        let mut is_pivot = vec![false; self.ncols];
        for p in self.rows.keys() {
            is_pivot[*p] = true;
        }
        for (c, p) in is_pivot.iter().enumerate() {
            if !p {
                free_cols.push(c);
            }
        }
        // column view of the non-pivot entries
        let mut col_entries: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (p, row) in &self.rows {
            for (c, x) in &row.0 {
                if c != p {
                    col_entries.entry(*c).or_default().push((*p, -x.clone()));
                }
            }
        }
        free_cols
            .into_iter()
            .map(|f| {
                let mut e = col_entries.remove(&f).unwrap_or_default();
                e.push((f, Rational::one()));
                SparseVec::from_entries(e)
            })
            .collect()
    }

    /// Intersection of two row spaces (Zassenhaus).
    pub fn intersect(&self, o: &Echelon) -> Echelon {
        assert_eq!(self.ncols, o.ncols);
        let n = self.ncols;
        if self.rank() == 0 || o.rank() == 0 {
            return Echelon::new(n);
        }
        if self.contains_all(o) {
            return o.clone();
        }
        if o.contains_all(self) {
            return self.clone();
        }
        let mut z = Echelon::new(2 * n);
        for r in self.rows() {
            let mut e = r.0.clone();
            e.extend(r.shifted(n).0);
            z.insert(SparseVec(e));
        }
        for r in o.rows() {
            z.insert(r.clone());
        }
        let rows = z
            .rows
            .range(n..)
            .map(|(_, r)| SparseVec(r.0.iter().map(|(i, x)| (i - n, x.clone())).collect()));
        Echelon::from_rows(n, rows)
    }

    pub fn join(&self, o: &Echelon) -> Echelon {
        let mut e = self.clone();
        for r in o.rows() {
            e.insert(r.clone());
        }
        e
    }
}
