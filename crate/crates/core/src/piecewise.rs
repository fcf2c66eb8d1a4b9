//! Piecewise-linear test functions, the symplectic form, localization,
//! charges and the membership predicates of the symplectic lattice.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, serde_str, Rational};

/// A continuous piecewise-linear function, constant beyond its first and
/// last breakpoints. Always stored in canonical (minimal) form, so derived
/// equality is functional equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPl", into = "RawPl")]
pub struct PiecewiseLinear {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawPl {
    #[serde(with = "serde_str::vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    values: Vec<Rational>,
}

impl TryFrom<RawPl> for PiecewiseLinear {
    type Error = Error;
    fn try_from(r: RawPl) -> Result<Self> {
        PiecewiseLinear::new(r.breakpoints, r.values)
    }
}

impl From<PiecewiseLinear> for RawPl {
    fn from(p: PiecewiseLinear) -> Self {
        RawPl {
            breakpoints: p.xs,
            values: p.ys,
        }
    }
}

impl fmt::Debug for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PL[")?;
        for (i, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints vs {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self::canonical(xs, ys))
    }

    fn canonical(mut xs: Vec<Rational>, mut ys: Vec<Rational>) -> Self {
        // Drop interior points where the slope does not change.
        let mut i = 1;
        while i + 1 < xs.len() {
            let lhs = (&ys[i] - &ys[i - 1]) * (&xs[i + 1] - &xs[i]);
            let rhs = (&ys[i + 1] - &ys[i]) * (&xs[i] - &xs[i - 1]);
            if lhs == rhs {
                xs.remove(i);
                ys.remove(i);
                if i > 1 {
                    i -= 1;
                }
            } else {
                i += 1;
            }
        }
        // Drop leading/trailing points that merely continue a constant tail.
        while xs.len() > 1 && ys[0] == ys[1] {
            xs.remove(0);
            ys.remove(0);
        }
        while xs.len() > 1 && ys[ys.len() - 1] == ys[ys.len() - 2] {
            xs.pop();
            ys.pop();
        }
        if xs.len() == 1 {
            xs[0] = Rational::zero();
        }
        PiecewiseLinear { xs, ys }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        PiecewiseLinear {
            xs: vec![Rational::zero()],
            ys: vec![c],
        }
    }

    /// Tent on `[a, b]` with the given peak value at `m`.
    pub fn tent_at(a: &Rational, m: &Rational, b: &Rational, peak: Rational) -> Self {
        Self::new(
            vec![a.clone(), m.clone(), b.clone()],
            vec![Rational::zero(), peak, Rational::zero()],
        )
        .expect("tent breakpoints must satisfy a < m < b")
    }

    /// Tent on `[a, b]` with peak 1 at the midpoint.
    pub fn tent(a: &Rational, b: &Rational) -> Self {
        let m = (a + b) / int(2);
        Self::tent_at(a, &m, b, Rational::one())
    }

    /// Linear from `from` at `a` to `to` at `b`, constant outside.
    pub fn ramp(a: &Rational, b: &Rational, from: Rational, to: Rational) -> Self {
        Self::new(vec![a.clone(), b.clone()], vec![from, to]).expect("ramp needs a < b")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.xs
    }

    pub fn values(&self) -> &[Rational] {
        &self.ys
    }

    pub fn left_tail(&self) -> &Rational {
        &self.ys[0]
    }

    pub fn right_tail(&self) -> &Rational {
        &self.ys[self.ys.len() - 1]
    }

    pub fn is_compact(&self) -> bool {
        self.left_tail().is_zero() && self.right_tail().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.xs.len() == 1 && self.ys[0].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.xs.len() == 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let n = self.xs.len();
        if x <= &self.xs[0] {
            return self.ys[0].clone();
        }
        if x >= &self.xs[n - 1] {
            return self.ys[n - 1].clone();
        }
        let j = self.xs.partition_point(|p| p <= x);
        let (x0, x1) = (&self.xs[j - 1], &self.xs[j]);
        let (y0, y1) = (&self.ys[j - 1], &self.ys[j]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn scale(&self, a: &Rational) -> Self {
        Self::canonical(self.xs.clone(), self.ys.iter().map(|y| y * a).collect())
    }

    /// Pullback by the affine map `x ↦ eps*x + t`, i.e. `f ∘ map⁻¹`.
    pub fn push_affine(&self, eps: i8, t: &Rational) -> Self {
        let mut pts: Vec<(Rational, Rational)> = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| (if eps > 0 { x + t } else { t - x }, y.clone()))
            .collect();
        if eps < 0 {
            pts.reverse();
        }
        let (xs, ys) = pts.into_iter().unzip();
        Self::canonical(xs, ys)
    }

    /// Exact integral; `None` when a tail is nonzero.
    pub fn integral(&self) -> Option<Rational> {
        if !self.is_compact() {
            return None;
        }
        let mut s = Rational::zero();
        for i in 0..self.xs.len() - 1 {
            s += (&self.xs[i + 1] - &self.xs[i]) * (&self.ys[i] + &self.ys[i + 1]) / int(2);
        }
        Some(s)
    }

    /// Closed intervals (merged) on which the function is not identically zero.
    /// Only meaningful for compactly supported functions.
    pub fn support(&self) -> Vec<(Rational, Rational)> {
        let segs = (0..self.xs.len().saturating_sub(1))
            .filter(|&i| !(self.ys[i].is_zero() && self.ys[i + 1].is_zero()))
            .map(|i| (self.xs[i].clone(), self.xs[i + 1].clone()));
        merge_intervals(segs)
    }

    /// Closed intervals (merged) on which the slope is nonzero.
    pub fn slope_support(&self) -> Vec<(Rational, Rational)> {
        let segs = (0..self.xs.len().saturating_sub(1))
            .filter(|&i| self.ys[i] != self.ys[i + 1])
            .map(|i| (self.xs[i].clone(), self.xs[i + 1].clone()));
        merge_intervals(segs)
    }
}

/// Merge a list of closed intervals sorted by left endpoint; touching
/// intervals are joined.
pub fn merge_intervals(
    segs: impl IntoIterator<Item = (Rational, Rational)>,
) -> Vec<(Rational, Rational)> {
    let mut v: Vec<(Rational, Rational)> = segs.into_iter().collect();
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

fn merged_breakpoints(f: &PiecewiseLinear, g: &PiecewiseLinear) -> Vec<Rational> {
    let mut xs: Vec<Rational> = f.xs.iter().chain(&g.xs).cloned().collect();
    xs.sort();
    xs.dedup();
    xs
}

/// `a·f + b·g` on the merged breakpoint set.
pub fn pl_combine(
    a: &Rational,
    f: &PiecewiseLinear,
    b: &Rational,
    g: &PiecewiseLinear,
) -> PiecewiseLinear {
    let xs = merged_breakpoints(f, g);
    let ys = xs.iter().map(|x| a * f.eval(x) + b * g.eval(x)).collect();
    PiecewiseLinear::canonical(xs, ys)
}

/// Exact `∫ f·g dx`; one factor must be compactly supported.
pub fn pl_product_integral(f: &PiecewiseLinear, g: &PiecewiseLinear) -> Result<Rational> {
    if !f.is_compact() && !g.is_compact() {
        return Err(Error::BothTailsNonzero);
    }
    let xs = merged_breakpoints(f, g);
    let fv: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
    let gv: Vec<Rational> = xs.iter().map(|x| g.eval(x)).collect();
    let mut s = Rational::zero();
    for i in 0..xs.len().saturating_sub(1) {
        let h = &xs[i + 1] - &xs[i];
        let (p0, p1, q0, q1) = (&fv[i], &fv[i + 1], &gv[i], &gv[i + 1]);
        let inner = int(2) * p0 * q0 + p0 * q1 + p1 * q0 + int(2) * p1 * q1;
        s += h * inner / int(6);
    }
    Ok(s)
}

/// `F = f0 ⊕ f1` with `f0` compactly supported and `f1` with constant tails.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct TestPair {
    pub f0: PiecewiseLinear,
    pub f1: PiecewiseLinear,
}

#[derive(Deserialize)]
struct RawPair {
    f0: PiecewiseLinear,
    f1: PiecewiseLinear,
}

impl TryFrom<RawPair> for TestPair {
    type Error = Error;
    fn try_from(r: RawPair) -> Result<Self> {
        TestPair::new(r.f0, r.f1)
    }
}

impl TestPair {
    pub fn new(f0: PiecewiseLinear, f1: PiecewiseLinear) -> Result<Self> {
        if !f0.is_compact() {
            return Err(Error::InvalidFunction(
                "f0 must have zero tails on both sides".into(),
            ));
        }
        Ok(TestPair { f0, f1 })
    }

    pub fn zero() -> Self {
        TestPair {
            f0: PiecewiseLinear::zero(),
            f1: PiecewiseLinear::zero(),
        }
    }

    pub fn from_f0(f0: PiecewiseLinear) -> Self {
        TestPair::new(f0, PiecewiseLinear::zero()).expect("f0 must be compact")
    }

    pub fn from_f1(f1: PiecewiseLinear) -> Self {
        TestPair {
            f0: PiecewiseLinear::zero(),
            f1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        TestPair {
            f0: self.f0.scale(a),
            f1: self.f1.scale(a),
        }
    }

    pub fn combine(a: &Rational, f: &TestPair, b: &Rational, g: &TestPair) -> TestPair {
        TestPair {
            f0: pl_combine(a, &f.f0, b, &g.f0),
            f1: pl_combine(a, &f.f1, b, &g.f1),
        }
    }

    /// Every breakpoint lies on the grid `lo + k·step`.
    pub fn on_grid(&self, lo: &Rational, step: &Rational) -> bool {
        [&self.f0, &self.f1].iter().all(|f| {
            f.is_constant()
                || f.breakpoints()
                    .iter()
                    .all(|x| crate::rational::on_grid(x, lo, step))
        })
    }
}

impl Add for &TestPair {
    type Output = TestPair;
    fn add(self, o: &TestPair) -> TestPair {
        TestPair::combine(&Rational::one(), self, &Rational::one(), o)
    }
}

impl Sub for &TestPair {
    type Output = TestPair;
    fn sub(self, o: &TestPair) -> TestPair {
        TestPair::combine(&Rational::one(), self, &-Rational::one(), o)
    }
}

impl Neg for &TestPair {
    type Output = TestPair;
    fn neg(self) -> TestPair {
        self.scale(&-Rational::one())
    }
}

/// `(c, q)`: total f0 integral and f1 tail jump.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChargePair {
    #[serde(with = "serde_str")]
    pub c: Rational,
    #[serde(with = "serde_str")]
    pub q: Rational,
}

impl ChargePair {
    pub fn new(c: Rational, q: Rational) -> Self {
        ChargePair { c, q }
    }

    pub fn ints(c: i64, q: i64) -> Self {
        ChargePair::new(int(c), int(q))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.q.is_zero()
    }
}

impl Add for &ChargePair {
    type Output = ChargePair;
    fn add(self, o: &ChargePair) -> ChargePair {
        ChargePair::new(&self.c + &o.c, &self.q + &o.q)
    }
}

/// Charge pair together with the two f1 tail values (grades).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Charges {
    pub charge: ChargePair,
    #[serde(with = "serde_str")]
    pub left_grade: Rational,
    #[serde(with = "serde_str")]
    pub right_grade: Rational,
}

pub fn charges(f: &TestPair) -> Charges {
    let c = f.f0.integral().expect("f0 is compactly supported");
    let left = f.f1.left_tail().clone();
    let right = f.f1.right_tail().clone();
    Charges {
        charge: ChargePair::new(c, &right - &left),
        left_grade: left,
        right_grade: right,
    }
}

pub fn symplectic_form(f: &TestPair, g: &TestPair) -> Rational {
    let a = pl_product_integral(&f.f0, &g.f1).expect("f0 is compact");
    let b = pl_product_integral(&f.f1, &g.f0).expect("g0 is compact");
    a - b
}

/// `supp f0 ∪ supp ∂f1` as a minimal list of closed intervals.
pub fn localization(f: &TestPair) -> Vec<(Rational, Rational)> {
    merge_intervals(f.f0.support().into_iter().chain(f.f1.slope_support()))
}

/// The nine symplectic spaces of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceTag {
    Va,
    Vb,
    Vc,
    Vq,
    Ve,
    Vf,
    Vfl,
    Vfr,
    Vf0,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 9] = [
        SpaceTag::Va,
        SpaceTag::Vb,
        SpaceTag::Vc,
        SpaceTag::Vq,
        SpaceTag::Ve,
        SpaceTag::Vf,
        SpaceTag::Vfl,
        SpaceTag::Vfr,
        SpaceTag::Vf0,
    ];

    pub fn admits(self, ch: &Charges) -> bool {
        let c0 = ch.charge.c.is_zero();
        let (l, r) = (&ch.left_grade, &ch.right_grade);
        match self {
            SpaceTag::Va => c0 && l.is_zero() && r.is_zero(),
            SpaceTag::Vb => c0 && l == r,
            SpaceTag::Vc => l == r,
            SpaceTag::Vq => c0 && *l == -r,
            SpaceTag::Ve => c0,
            SpaceTag::Vf => true,
            SpaceTag::Vfl => r.is_zero(),
            SpaceTag::Vfr => l.is_zero(),
            SpaceTag::Vf0 => l.is_zero() && r.is_zero(),
        }
    }

    /// Image under a point reflection.
    pub fn reflected(self) -> SpaceTag {
        match self {
            SpaceTag::Vfl => SpaceTag::Vfr,
            SpaceTag::Vfr => SpaceTag::Vfl,
            t => t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::Va => "Va",
            SpaceTag::Vb => "Vb",
            SpaceTag::Vc => "Vc",
            SpaceTag::Vq => "Vq",
            SpaceTag::Ve => "Ve",
            SpaceTag::Vf => "Vf",
            SpaceTag::Vfl => "Vfl",
            SpaceTag::Vfr => "Vfr",
            SpaceTag::Vf0 => "Vf0",
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn space_member(f: &TestPair, tag: SpaceTag) -> bool {
    tag.admits(&charges(f))
}

/// Affine isometry `x ↦ eps·x + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub eps: i8,
    pub t: Rational,
}

impl Isometry {
    pub fn new(eps: i8, t: Rational) -> Result<Self> {
        if eps != 1 && eps != -1 {
            return Err(Error::UnsupportedMap(format!("scale factor {eps}")));
        }
        Ok(Isometry { eps, t })
    }

    pub fn translation(t: Rational) -> Self {
        Isometry { eps: 1, t }
    }

    /// Point reflection about `p`: `x ↦ 2p − x`.
    pub fn reflection_about(p: &Rational) -> Self {
        Isometry {
            eps: -1,
            t: p * int(2),
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        if self.eps > 0 {
            x + &self.t
        } else {
            &self.t - x
        }
    }
}

pub fn pullback_isometry(f: &TestPair, map: &Isometry) -> TestPair {
    TestPair {
        f0: f.f0.push_affine(map.eps, &map.t),
        f1: f.f1.push_affine(map.eps, &map.t),
    }
}
