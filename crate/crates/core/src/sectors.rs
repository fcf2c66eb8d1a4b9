//! Charged representatives, transporters, braiding phases and the
//! DHR / solitonic classification of the subnets.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nets::Net;
use crate::piecewise::{charges, localization, ChargePair, PiecewiseLinear, SpaceTag, TestPair};
use crate::poset::IndexElement;
use crate::rational::{grid_index, int, Rational};
use crate::weyl::commutator_exponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TailConvention {
    /// `λ₊ = 0`, `λ₋ = −q`.
    RightTailZero,
    /// `λ₋ = 0`, `λ₊ = q`.
    LeftTailZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRep {
    pub charge: ChargePair,
    pub interval: IndexElement,
    pub representative: TestPair,
    pub convention: TailConvention,
}

fn ends(i: &IndexElement) -> Result<(Rational, Rational)> {
    match i {
        IndexElement::Interval { a, b } => Ok((a.clone(), b.clone())),
        _ => Err(Error::UnsupportedElement(i.to_string())),
    }
}

fn f1_ramp(q: &Rational, a: &Rational, b: &Rational, conv: TailConvention) -> PiecewiseLinear {
    match conv {
        TailConvention::RightTailZero => PiecewiseLinear::ramp(a, b, -q.clone(), int(0)),
        TailConvention::LeftTailZero => PiecewiseLinear::ramp(a, b, int(0), q.clone()),
    }
}

/// Tent over the whole of `I` with integral `c`, peaked at the grid node
/// nearest the middle, and an f1 ramp across `I` with tails per convention.
pub fn canonical_representative(
    charge: &ChargePair,
    i: &IndexElement,
    conv: TailConvention,
    step: &Rational,
) -> Result<SectorRep> {
    let (a, b) = ends(i)?;
    let cells = grid_index(&b, &a, step).unwrap_or(0);
    if cells < 2 {
        return Err(Error::IntervalTooSmall(i.to_string()));
    }
    let peak_at = &a + step * int((cells / 2) as i64);
    shaped_representative(charge, i, conv, (&a, &peak_at, &b), (&a, &b))
}

/// Representative with a tent on `bump = (x0, m, x1)` and the f1 ramp on
/// `ramp = (y0, y1)`, both inside `I`.
pub fn shaped_representative(
    charge: &ChargePair,
    i: &IndexElement,
    conv: TailConvention,
    bump: (&Rational, &Rational, &Rational),
    ramp: (&Rational, &Rational),
) -> Result<SectorRep> {
    let (a, b) = ends(i)?;
    let (x0, m, x1) = bump;
    let (y0, y1) = ramp;
    if !(&a <= x0 && x0 < m && m < x1 && x1 <= &b && &a <= y0 && y0 < y1 && y1 <= &b) {
        return Err(Error::RepresentativeDoesNotFit(i.to_string()));
    }
    let peak = &charge.c * int(2) / (x1 - x0);
    let f0 = PiecewiseLinear::tent_at(x0, m, x1, peak);
    let f1 = f1_ramp(&charge.q, y0, y1, conv);
    Ok(SectorRep {
        charge: charge.clone(),
        interval: i.clone(),
        representative: TestPair::new(f0, f1)?,
        convention: conv,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidResult {
    #[serde(with = "crate::rational::serde_str")]
    pub exponent: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub charge_term: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub commutator_term: Rational,
}

fn strictly_left(f: &TestPair, g: &TestPair) -> bool {
    let (lf, lg) = (localization(f), localization(g));
    match (lf.last(), lg.first()) {
        (Some((_, r)), Some((l, _))) => r <= l,
        _ => true,
    }
}

/// `ε(ρ,τ)` for `ρ` localized left of `τ`: `−(C_ρQ_τ + Q_ρC_τ)` plus the
/// commutator phase of `W(F_τ), W(F_ρ)`.
pub fn braiding_phase(rho: &SectorRep, tau: &SectorRep) -> Result<BraidResult> {
    let (fr, ft) = (&rho.representative, &tau.representative);
    if !strictly_left(fr, ft) {
        return Err(Error::NotOrdered);
    }
    let (cr, ct) = (charges(fr), charges(ft));
    let charge_term = -(&cr.charge.c * &ct.charge.q + &cr.charge.q * &ct.charge.c);
    let commutator_term = commutator_exponent(ft, fr);
    Ok(BraidResult {
        exponent: &charge_term + &commutator_term,
        charge_term,
        commutator_term,
    })
}

/// `ε(ρ,τ)ε(τ,ρ)` exponent with canonical transported representatives.
pub fn monodromy(rho: &ChargePair, tau: &ChargePair) -> Result<Rational> {
    let step = int(1);
    let (i1, i2) = (IndexElement::iv(0, 2), IndexElement::iv(3, 5));
    let left = |c: &ChargePair, i: &IndexElement| {
        canonical_representative(c, i, TailConvention::RightTailZero, &step)
    };
    let right = |c: &ChargePair, i: &IndexElement| {
        canonical_representative(c, i, TailConvention::LeftTailZero, &step)
    };
    let e1 = braiding_phase(&left(rho, &i1)?, &right(tau, &i2)?)?;
    let e2 = braiding_phase(&left(tau, &i1)?, &right(rho, &i2)?)?;
    Ok(e1.exponent + e2.exponent)
}

pub fn is_symmetric_pair(rho: &ChargePair, tau: &ChargePair) -> Result<bool> {
    Ok(monodromy(rho, tau)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransporterReport {
    pub zero_total_charge: bool,
    pub in_dual: bool,
    pub in_additive_extension: bool,
}

/// `F₁ − F₂` for canonical representatives in `I1 < I2`, with membership of
/// the net's double-interval spaces on `E = I1 ∪ I2`.
pub fn transporter(
    charge: &ChargePair,
    i1: &IndexElement,
    i2: &IndexElement,
    net: &Net,
) -> Result<(TestPair, TransporterReport)> {
    let ((a, b), (c, d)) = (ends(i1)?, ends(i2)?);
    if b >= c {
        return Err(Error::NotOrdered);
    }
    let step = &net.ambient.step;
    let conv = TailConvention::RightTailZero;
    let f1 = canonical_representative(charge, i1, conv, step)?.representative;
    let f2 = canonical_representative(charge, i2, conv, step)?.representative;
    let t = &f1 - &f2;
    let ch = charges(&t);
    let e = IndexElement::double(a, b, c, d)?;
    let report = TransporterReport {
        zero_total_charge: ch.charge.is_zero(),
        in_dual: net.dual(&e)?.contains(&t)?,
        in_additive_extension: net.additive_extension(&e)?.contains(&t)?,
    };
    Ok((t, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplementSide {
    Left,
    Right,
}

/// Coefficients `(coefC, coefTail)` with `σ(F,G) = coefTail·λ + coefC·C_G`
/// for `G` localized strictly on `side` of `F`, `λ` being the tail of `G`
/// facing `F`.
pub fn action_functional(f: &TestPair, side: ComplementSide) -> (Rational, Rational) {
    let ch = charges(f);
    match side {
        ComplementSide::Left => (-ch.left_grade, ch.charge.c),
        ComplementSide::Right => (-ch.right_grade, ch.charge.c),
    }
}

/// Which `(C_G, λ_near − λ_far)` directions a tag leaves free. The far tail
/// of `G` is normalized to zero by subtracting a constant (void localization).
pub fn free_directions(tag: SpaceTag) -> (bool, bool) {
    use SpaceTag::*;
    let charge_free = matches!(tag, Vc | Vf | Vfl | Vfr | Vf0);
    let tail_free = matches!(tag, Vq | Ve | Vf | Vfl | Vfr);
    (charge_free, tail_free)
}

/// Is `ad W(F)` trivial on tag-elements localized on `side` of `F`?
pub fn acts_trivially(f: &TestPair, tag: SpaceTag, side: ComplementSide) -> bool {
    let (cc, ct) = action_functional(f, side);
    let (charge_free, tail_free) = free_directions(tag);
    (!charge_free || cc.is_zero()) && (!tail_free || ct.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubnetLabel {
    A,
    B,
    C,
    E,
    Q,
    F0,
}

impl SubnetLabel {
    pub const ALL: [SubnetLabel; 6] = [
        SubnetLabel::A,
        SubnetLabel::B,
        SubnetLabel::C,
        SubnetLabel::E,
        SubnetLabel::Q,
        SubnetLabel::F0,
    ];

    pub fn tag(self) -> SpaceTag {
        match self {
            SubnetLabel::A => SpaceTag::Va,
            SubnetLabel::B => SpaceTag::Vb,
            SubnetLabel::C => SpaceTag::Vc,
            SubnetLabel::E => SpaceTag::Ve,
            SubnetLabel::Q => SpaceTag::Vq,
            SubnetLabel::F0 => SpaceTag::Vf0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => SubnetLabel::A,
            "B" => SubnetLabel::B,
            "C" => SubnetLabel::C,
            "E" => SubnetLabel::E,
            "Q" => SubnetLabel::Q,
            "F0" => SubnetLabel::F0,
            _ => return Err(Error::Validation(format!("unknown subnet `{s}`"))),
        })
    }
}

impl fmt::Display for SubnetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorKind {
    #[serde(rename = "DHR")]
    Dhr,
    #[serde(rename = "solitonic")]
    Solitonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChargeGroup {
    #[serde(rename = "C⊕Q")]
    Both,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "Q")]
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorDescriptor {
    pub net: SubnetLabel,
    pub labels: ChargeGroup,
    pub kind: SectorKind,
    /// The label group recomputed from which charges the net realizes itself.
    pub labels_confirmed: bool,
    /// The kind recomputed from pointwise action on complements.
    pub kind_confirmed: bool,
}

fn table(net: SubnetLabel) -> (ChargeGroup, SectorKind) {
    match net {
        SubnetLabel::A | SubnetLabel::B => (ChargeGroup::Both, SectorKind::Dhr),
        SubnetLabel::C | SubnetLabel::F0 => (ChargeGroup::Q, SectorKind::Solitonic),
        SubnetLabel::E | SubnetLabel::Q => (ChargeGroup::C, SectorKind::Dhr),
    }
}

/// Can the tag itself hold an element carrying only a `c` (resp. only a
/// `q`) charge? Then that charge direction is inner and carries no label.
fn realizes(tag: SpaceTag, c_direction: bool) -> bool {
    let tails = [-1i64, 0, 1];
    tails.iter().any(|&l| {
        tails.iter().any(|&r| {
            let ch = crate::piecewise::Charges {
                charge: ChargePair::new(int(c_direction as i64), int(r - l)),
                left_grade: int(l),
                right_grade: int(r),
            };
            (c_direction == (l == r)) && tag.admits(&ch)
        })
    })
}

fn label_group(tag: SpaceTag) -> Option<ChargeGroup> {
    let c_label = !realizes(tag, true);
    let q_label = !realizes(tag, false);
    match (c_label, q_label) {
        (true, true) => Some(ChargeGroup::Both),
        (true, false) => Some(ChargeGroup::C),
        (false, true) => Some(ChargeGroup::Q),
        (false, false) => None,
    }
}

fn computed_kind(tag: SpaceTag, group: ChargeGroup) -> Option<SectorKind> {
    let step = int(1);
    let i = IndexElement::iv(0, 2);
    let charges_: Vec<ChargePair> = match group {
        ChargeGroup::Both => vec![
            ChargePair::ints(1, 0),
            ChargePair::ints(0, 1),
            ChargePair::ints(1, 1),
        ],
        ChargeGroup::C => vec![ChargePair::ints(1, 0)],
        ChargeGroup::Q => vec![ChargePair::ints(0, 1)],
    };
    let mut kinds = Vec::new();
    for ch in &charges_ {
        let mut best = None;
        for conv in [TailConvention::RightTailZero, TailConvention::LeftTailZero] {
            let f = canonical_representative(ch, &i, conv, &step)
                .ok()?
                .representative;
            let l = acts_trivially(&f, tag, ComplementSide::Left);
            let r = acts_trivially(&f, tag, ComplementSide::Right);
            let k = match (l, r) {
                (true, true) => Some(SectorKind::Dhr),
                (true, false) | (false, true) => Some(SectorKind::Solitonic),
                (false, false) => None,
            };
            best = match (best, k) {
                (Some(SectorKind::Dhr), _) | (_, Some(SectorKind::Dhr)) => Some(SectorKind::Dhr),
                (b, None) => b,
                (_, k) => k,
            };
        }
        kinds.push(best);
    }
    let first = kinds[0];
    kinds.iter().all(|k| *k == first).then_some(first).flatten()
}

/// The classification table, with each entry recomputed.
pub fn sector_group(net: SubnetLabel) -> SectorDescriptor {
    let (labels, kind) = table(net);
    let tag = net.tag();
    SectorDescriptor {
        net,
        labels,
        kind,
        labels_confirmed: label_group(tag) == Some(labels),
        kind_confirmed: computed_kind(tag, labels) == Some(kind),
    }
}
