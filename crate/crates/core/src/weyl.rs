//! Heisenberg phase group over test pairs, grading representations, and the
//! geometric maps Ξ (reflection through an interval, Möbius maps of double
//! intervals).

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{
    charges, localization, pullback_isometry, symplectic_form, Isometry, PiecewiseLinear, TestPair,
};
use crate::poset::IndexElement;
use crate::rational::{int, Rational};

/// `e^{iθ} W(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylElement {
    pub f: TestPair,
    #[serde(with = "crate::rational::serde_str")]
    pub theta: Rational,
}

impl WeylElement {
    pub fn new(f: TestPair, theta: Rational) -> Self {
        WeylElement { f, theta }
    }

    pub fn of(f: TestPair) -> Self {
        WeylElement::new(f, Rational::zero())
    }

    pub fn identity() -> Self {
        WeylElement::of(TestPair::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_zero() && self.theta.is_zero()
    }
}

/// `W(F1)W(F2) = e^{−iσ(F1,F2)/2} W(F1+F2)`.
pub fn weyl_mul(w1: &WeylElement, w2: &WeylElement) -> WeylElement {
    WeylElement {
        f: &w1.f + &w2.f,
        theta: &w1.theta + &w2.theta - symplectic_form(&w1.f, &w2.f) / int(2),
    }
}

pub fn weyl_inverse(w: &WeylElement) -> WeylElement {
    WeylElement {
        f: -&w.f,
        theta: -w.theta.clone(),
    }
}

/// Phase of the group commutator `W(F)W(G)W(F)⁻¹W(G)⁻¹`, computed by
/// multiplying out; equals `−σ(F,G)`.
pub fn commutator_exponent(f: &TestPair, g: &TestPair) -> Rational {
    let (wf, wg) = (WeylElement::of(f.clone()), WeylElement::of(g.clone()));
    let c = weyl_mul(
        &weyl_mul(&weyl_mul(&wf, &wg), &weyl_inverse(&wf)),
        &weyl_inverse(&wg),
    );
    debug_assert!(c.f.is_zero());
    c.theta
}

/// Exponent by which `ad W(F)` rescales `W(G)`, reported as `σ(F,G)`.
///
/// With the product convention of [`weyl_mul`] the conjugate
/// `W(F)W(G)W(F)⁻¹` carries the phase `−σ(F,G)`; this function reports the
/// opposite sign so that a charge `C_F` seen through a left plateau of
/// height 1 reads `+C_F`.
pub fn adjoint_phase(f: &TestPair, g: &TestPair) -> Rational {
    symplectic_form(f, g)
}

/// Conjugation `W(F) · w · W(F)⁻¹` in the group.
pub fn conjugate(f: &TestPair, w: &WeylElement) -> WeylElement {
    let wf = WeylElement::of(f.clone());
    weyl_mul(&weyl_mul(&wf, w), &weyl_inverse(&wf))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingSide {
    L,
    R,
    Global,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingRep {
    pub side: GradingSide,
    pub base: IndexElement,
    pub generator: TestPair,
}

impl GradingRep {
    pub fn left(i: &IndexElement) -> Result<Self> {
        let (fl, _) = partition_of_unity(i)?;
        Ok(GradingRep {
            side: GradingSide::L,
            base: i.clone(),
            generator: fl,
        })
    }

    pub fn right(i: &IndexElement) -> Result<Self> {
        let (_, fr) = partition_of_unity(i)?;
        Ok(GradingRep {
            side: GradingSide::R,
            base: i.clone(),
            generator: fr,
        })
    }

    pub fn global(i: &IndexElement) -> Self {
        GradingRep {
            side: GradingSide::Global,
            base: i.clone(),
            generator: TestPair::from_f1(PiecewiseLinear::constant(int(1))),
        }
    }

    /// `V(n) = W(n·F_side)`.
    pub fn at(&self, n: i64) -> WeylElement {
        WeylElement::of(self.generator.scale(&int(n)))
    }
}

fn interval_ends(i: &IndexElement) -> Result<(Rational, Rational)> {
    match i {
        IndexElement::Interval { a, b } if a < b => Ok((a.clone(), b.clone())),
        _ => Err(Error::IntervalTooSmall(i.to_string())),
    }
}

/// Linear partition of unity across `I = (a, b)`: `f1l` falls from 1 to 0,
/// `f1r` rises from 0 to 1.
pub fn partition_of_unity(i: &IndexElement) -> Result<(TestPair, TestPair)> {
    let (a, b) = interval_ends(i)?;
    Ok((
        TestPair::from_f1(PiecewiseLinear::ramp(&a, &b, int(1), int(0))),
        TestPair::from_f1(PiecewiseLinear::ramp(&a, &b, int(0), int(1))),
    ))
}

/// `n·(F1 − F2)`: localized in the hull of both bases with both grades 0.
pub fn rep_ambiguity(v1: &GradingRep, v2: &GradingRep, n: i64) -> Result<TestPair> {
    if v1.side != v2.side {
        return Err(Error::SideMismatch);
    }
    let d = (&v1.generator - &v2.generator).scale(&int(n));
    let ch = charges(&d);
    if !ch.left_grade.is_zero() || !ch.right_grade.is_zero() {
        return Err(Error::Validation(
            "grading ambiguity carries a grade".into(),
        ));
    }
    let (a1, b1) = interval_ends(&v1.base)?;
    let (a2, b2) = interval_ends(&v2.base)?;
    let (lo, hi) = (a1.min(a2), b1.max(b2));
    if localization(&d).iter().any(|(x, y)| x < &lo || y > &hi) {
        return Err(Error::Validation(
            "grading ambiguity escapes the common interval".into(),
        ));
    }
    Ok(d)
}

/// `x ↦ −x + α + β` for `I = (α, β)`.
pub fn xi_interval(i: &IndexElement) -> Result<Isometry> {
    let (a, b) = interval_ends(i)?;
    Isometry::new(-1, a + b)
}

pub fn xi_apply(i: &IndexElement, f: &TestPair) -> Result<TestPair> {
    Ok(pullback_isometry(f, &xi_interval(i)?))
}

/// `x ↦ (m00·x + m01)/(m10·x + m11)`, normalized so the first nonzero
/// entry is 1 (matrices are taken up to scale).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MobiusMap {
    #[serde(with = "crate::rational::serde_str::vec")]
    pub m: Vec<Rational>,
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0], self.m[1], self.m[2], self.m[3]
        )
    }
}

impl MobiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::UnsupportedMap("singular Möbius matrix".into()));
        }
        let mut m = vec![a, b, c, d];
        let first = m.iter().find(|x| !x.is_zero()).cloned().expect("det ≠ 0");
        for x in &mut m {
            *x = &*x / &first;
        }
        Ok(MobiusMap { m })
    }

    pub fn identity() -> Self {
        MobiusMap::new(int(1), int(0), int(0), int(1)).expect("regular")
    }

    pub fn translation(t: Rational) -> Self {
        MobiusMap::new(int(1), t, int(0), int(1)).expect("regular")
    }

    /// `S: x ↦ −x`.
    pub fn inversion() -> Self {
        MobiusMap::new(int(-1), int(0), int(0), int(1)).expect("regular")
    }

    pub fn det(&self) -> Rational {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    /// `+1` preserves orientation on each branch, `−1` reverses it.
    pub fn orientation(&self) -> i8 {
        if self.det().is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn pole(&self) -> Option<Rational> {
        (!self.m[2].is_zero()).then(|| -&self.m[3] / &self.m[2])
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &MobiusMap) -> MobiusMap {
        let (a, b) = (&self.m, &o.m);
        MobiusMap::new(
            &a[0] * &b[0] + &a[1] * &b[2],
            &a[0] * &b[1] + &a[1] * &b[3],
            &a[2] * &b[0] + &a[3] * &b[2],
            &a[2] * &b[1] + &a[3] * &b[3],
        )
        .expect("product of regular matrices is regular")
    }

    pub fn is_identity(&self) -> bool {
        *self == MobiusMap::identity()
    }
}

/// The map `g` fixing `α` and `δ` and exchanging `α+δ−β ↦ γ`,
/// `α+δ−γ ↦ β`; the identity when both components have equal length.
pub fn mobius_from_double_interval(e: &IndexElement) -> Result<MobiusMap> {
    let IndexElement::DoubleInterval {
        a: al,
        b: be,
        c: ga,
        d: de,
    } = e
    else {
        return Err(Error::UnsupportedElement(e.to_string()));
    };
    let den = (de - ga) - (be - al);
    if den.is_zero() {
        return Ok(MobiusMap::identity());
    }
    let c = (al * de - be * ga) / den - (al + de);
    let a = &c + al + de;
    let b = -(al * de);
    MobiusMap::new(a, b, int(1), c)
}

/// `Ξ_E = g ∘ τ_{α+δ} ∘ S`.
pub fn xi_double_interval(e: &IndexElement) -> Result<MobiusMap> {
    let IndexElement::DoubleInterval { a, d, .. } = e else {
        return Err(Error::UnsupportedElement(e.to_string()));
    };
    let g = mobius_from_double_interval(e)?;
    Ok(g.compose(&MobiusMap::translation(a + d))
        .compose(&MobiusMap::inversion()))
}

pub fn mobius_apply_endpoint(m: &MobiusMap, x: &Rational) -> Result<Rational> {
    let den = &m.m[2] * x + &m.m[3];
    if den.is_zero() {
        return Err(Error::PoleHit(x.to_string()));
    }
    Ok((&m.m[0] * x + &m.m[1]) / den)
}

/// Image of a bounded element; a component whose closure contains the pole
/// is rejected.
pub fn mobius_apply_element(m: &MobiusMap, o: &IndexElement) -> Result<IndexElement> {
    let comps = o
        .bounded_components()
        .ok_or_else(|| Error::UnsupportedElement(o.to_string()))?;
    let mut out = Vec::new();
    for (x, y) in comps {
        if let Some(p) = m.pole() {
            if x <= p && p <= y {
                return Err(Error::PoleHit(p.to_string()));
            }
        }
        let (u, v) = (mobius_apply_endpoint(m, &x)?, mobius_apply_endpoint(m, &y)?);
        out.push(if m.orientation() > 0 { (u, v) } else { (v, u) });
    }
    out.sort();
    match out.len() {
        1 => IndexElement::interval(out[0].0.clone(), out[0].1.clone()),
        _ => IndexElement::double(
            out[0].0.clone(),
            out[0].1.clone(),
            out[1].0.clone(),
            out[1].1.clone(),
        ),
    }
}

impl Default for MobiusMap {
    fn default() -> Self {
        MobiusMap::identity()
    }
}
