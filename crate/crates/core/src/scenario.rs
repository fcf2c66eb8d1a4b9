//! Declarative scenarios: a JSON document listing checks, a runner that
//! executes them (optionally in parallel) and a report with exact witnesses.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cohomology::{
    check_cocycle, coboundary_feasibility, condition_aa, induced_cocycle, witness_reproduces, z0,
    Feasibility,
};
use crate::error::{Error, Result};
use crate::nets::{AmbientSpace, Net, Side, SymplecticSubspace};
use crate::piecewise::{
    charges, space_member, symplectic_form, ChargePair, PiecewiseLinear, SpaceTag, TestPair,
};
use crate::poset::{
    before, bot_graph, build_poset, check_window, flip_check, is_cofinal, is_connected,
    is_directed, CausalPoset, IndexElement, PosetKind,
};
use crate::rational::{int, on_grid, serde_str, Rational};
use crate::sectors::{
    braiding_phase, canonical_representative, monodromy, sector_group, SubnetLabel, TailConvention,
};
use crate::simplicial::canonical_simplex1;
use crate::weyl::{
    adjoint_phase, mobius_apply_endpoint, mobius_from_double_interval, partition_of_unity, xi_apply,
};

fn default_max_elements() -> usize {
    5000
}
fn default_max_path_len() -> usize {
    3
}
fn default_sample_count() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_max_elements")]
    pub max_elements: usize,
    #[serde(default = "default_max_path_len")]
    pub max_path_len: usize,
    /// Default number of elements / random samples per check.
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: default_max_elements(),
            max_path_len: default_max_path_len(),
            sample_count: default_sample_count(),
        }
    }
}

/// Poset override for checks that enumerate a whole poset; its grid must
/// be a sub-grid of the scenario window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PosetSpec {
    #[serde(with = "serde_str::vec")]
    pub window: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub step: Rational,
    #[serde(default)]
    pub kind: Option<PosetKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AaExpect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibilityExpect {
    Trivial,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    rename_all_fields = "camelCase",
    deny_unknown_fields
)]
pub enum Check {
    /// `dual = materialize` on intervals.
    HaagDuality {
        tag: SpaceTag,
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
    },
    /// Additive extension ⊆ dual = materialize on double intervals, with the
    /// rank gap reported (and compared when `expectedGap` is set).
    DoubleIntervalDuality {
        tag: SpaceTag,
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
        expected_gap: Option<usize>,
    },
    Additivity {
        tag: SpaceTag,
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
    },
    Locality {
        tag: SpaceTag,
        poset: Option<PosetSpec>,
    },
    GradedLocality {
        samples: Option<usize>,
    },
    GradedDuality {
        side: Side,
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
    },
    GlobalGradedDuality {
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
    },
    ConditionAa {
        tag: SpaceTag,
        /// `[start, end]` element pairs.
        #[serde(default)]
        pairs: Vec<[IndexElement; 2]>,
        max_path_len: Option<usize>,
        poset: Option<PosetSpec>,
        expect: Option<AaExpect>,
    },
    Cocycle {
        charge: ChargePair,
        side: Side,
        poset: Option<PosetSpec>,
    },
    Coboundary {
        tag: SpaceTag,
        charge: ChargePair,
        side: Side,
        poset: Option<PosetSpec>,
        expect: Option<FeasibilityExpect>,
    },
    Z0 {
        tag: SpaceTag,
        poset: Option<PosetSpec>,
        expected_dim: Option<usize>,
    },
    Braiding {
        samples: Option<usize>,
    },
    Mobius {
        count: Option<usize>,
    },
    XiSwap {
        count: Option<usize>,
        #[serde(default)]
        elements: Vec<IndexElement>,
    },
    PosetFacts {
        poset: Option<PosetSpec>,
    },
    FlipCheck {
        poset: Option<PosetSpec>,
    },
    PartitionOfUnity {
        samples: Option<usize>,
    },
    SectorTable {},
}

/// Every check kind, in documentation order.
pub const CHECK_KINDS: [(&str, &str); 18] = [
    ("haag-duality", "dual equals the local space on intervals"),
    (
        "double-interval-duality",
        "additive extension vs dual on double intervals, rank gap",
    ),
    (
        "additivity",
        "additive extension equals the local space on double intervals",
    ),
    ("locality", "sigma vanishes across disjoint poset elements"),
    (
        "graded-locality",
        "seeded Vfl/Vfr pairs on ordered intervals commute",
    ),
    (
        "graded-duality",
        "graded dual equals the graded local space",
    ),
    (
        "global-graded-duality",
        "global graded dual equals Vc on intervals",
    ),
    (
        "condition-aa",
        "path-space intersection equals the end join",
    ),
    (
        "cocycle",
        "induced charge cocycle satisfies the cocycle identity",
    ),
    (
        "coboundary",
        "trivializer or obstruction for an induced cocycle",
    ),
    ("z0", "intersection of all local spaces"),
    ("braiding", "statistics phases with canonical conventions"),
    (
        "mobius",
        "fixed-point identities of the double-interval Moebius map",
    ),
    (
        "xi-swap",
        "reflection through an interval swaps Vfl and Vfr",
    ),
    (
        "poset-facts",
        "directedness, connectedness, cofinality, bot-graph components",
    ),
    (
        "flip-check",
        "inversion exchanges the two oriented bot graphs",
    ),
    (
        "partition-of-unity",
        "F_l + F_r = (0,1) and the one-sided triviality contract",
    ),
    ("sector-table", "sector labels per subnet, cross-validated"),
];

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::HaagDuality { .. } => "haag-duality",
            Check::DoubleIntervalDuality { .. } => "double-interval-duality",
            Check::Additivity { .. } => "additivity",
            Check::Locality { .. } => "locality",
            Check::GradedLocality { .. } => "graded-locality",
            Check::GradedDuality { .. } => "graded-duality",
            Check::GlobalGradedDuality { .. } => "global-graded-duality",
            Check::ConditionAa { .. } => "condition-aa",
            Check::Cocycle { .. } => "cocycle",
            Check::Coboundary { .. } => "coboundary",
            Check::Z0 { .. } => "z0",
            Check::Braiding { .. } => "braiding",
            Check::Mobius { .. } => "mobius",
            Check::XiSwap { .. } => "xi-swap",
            Check::PosetFacts { .. } => "poset-facts",
            Check::FlipCheck { .. } => "flip-check",
            Check::PartitionOfUnity { .. } => "partition-of-unity",
            Check::SectorTable {} => "sector-table",
        }
    }

    /// Display name, e.g. `haag-duality(Va)`.
    pub fn name(&self) -> String {
        let arg = match self {
            Check::HaagDuality { tag, .. }
            | Check::DoubleIntervalDuality { tag, .. }
            | Check::Additivity { tag, .. }
            | Check::Locality { tag, .. }
            | Check::ConditionAa { tag, .. }
            | Check::Z0 { tag, .. } => tag.to_string(),
            Check::GradedDuality { side, .. } => format!("{side:?}").to_lowercase(),
            Check::Cocycle { charge, side, .. } => {
                format!(
                    "{},{};{}",
                    charge.c,
                    charge.q,
                    format!("{side:?}").to_lowercase()
                )
            }
            Check::Coboundary { tag, charge, .. } => format!("{tag};{},{}", charge.c, charge.q),
            _ => return self.kind().to_string(),
        };
        format!("{}({arg})", self.kind())
    }

    fn poset_spec(&self) -> Option<&PosetSpec> {
        match self {
            Check::Locality { poset, .. }
            | Check::ConditionAa { poset, .. }
            | Check::Cocycle { poset, .. }
            | Check::Coboundary { poset, .. }
            | Check::Z0 { poset, .. }
            | Check::PosetFacts { poset }
            | Check::FlipCheck { poset } => poset.as_ref(),
            _ => None,
        }
    }

    fn elements(&self) -> Vec<&IndexElement> {
        match self {
            Check::HaagDuality { elements, .. }
            | Check::DoubleIntervalDuality { elements, .. }
            | Check::Additivity { elements, .. }
            | Check::GradedDuality { elements, .. }
            | Check::GlobalGradedDuality { elements, .. }
            | Check::XiSwap { elements, .. } => elements.iter().collect(),
            Check::ConditionAa { pairs, .. } => pairs.iter().flatten().collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    #[serde(with = "serde_str::vec")]
    pub window: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub step: Rational,
    pub poset_kind: PosetKind,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub limits: Limits,
}

impl Scenario {
    pub fn lo(&self) -> &Rational {
        &self.window[0]
    }

    pub fn hi(&self) -> &Rational {
        &self.window[1]
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.window.len() != 2 {
            return bad(format!(
                "window needs 2 endpoints, got {}",
                self.window.len()
            ));
        }
        check_window(self.lo(), self.hi(), &self.step)
            .map_err(|e| Error::Validation(e.to_string()))?;
        for (k, c) in self.checks.iter().enumerate() {
            let at = |m: String| Error::Validation(format!("check {k} ({}): {m}", c.kind()));
            if let Some(p) = c.poset_spec() {
                self.validate_poset(p).map_err(|e| at(e.to_string()))?;
            }
            if let Check::FlipCheck { poset } = c {
                let (lo, hi) = match poset {
                    Some(p) => (&p.window[0], &p.window[1]),
                    None => (self.lo(), self.hi()),
                };
                if *lo != -hi.clone() {
                    return Err(at(format!("window [{lo}, {hi}] is not symmetric about 0")));
                }
            }
            for e in c.elements() {
                self.validate_element(e).map_err(|x| at(x.to_string()))?;
            }
            if let Check::ConditionAa {
                max_path_len: Some(0),
                ..
            } = c
            {
                return Err(at("maxPathLen must be at least 1".into()));
            }
        }
        Ok(())
    }

    fn validate_poset(&self, p: &PosetSpec) -> Result<()> {
        if p.window.len() != 2 {
            return Err(Error::Validation("poset window needs 2 endpoints".into()));
        }
        check_window(&p.window[0], &p.window[1], &p.step)?;
        let sub = on_grid(&p.window[0], self.lo(), &self.step)
            && (&p.step / &self.step).is_integer()
            && &p.window[0] >= self.lo()
            && &p.window[1] <= self.hi();
        if !sub {
            return Err(Error::Validation(format!(
                "poset grid [{}, {}] step {} is not a sub-grid of the window",
                p.window[0], p.window[1], p.step
            )));
        }
        Ok(())
    }

    fn validate_element(&self, e: &IndexElement) -> Result<()> {
        let comps = e
            .bounded_components()
            .ok_or_else(|| Error::Validation(format!("{e} is unbounded")))?;
        for (a, b) in comps {
            for x in [&a, &b] {
                if x < self.lo() || x > self.hi() || !on_grid(x, self.lo(), &self.step) {
                    return Err(Error::Validation(format!("{e} is off the window grid")));
                }
            }
        }
        Ok(())
    }
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let sc: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    sc.validate()?;
    Ok(sc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub name: String,
    pub kind: String,
    pub status: Status,
    pub detail: String,
    /// Serialized test pairs, subspace bases or certificates.
    pub witness: Option<Value>,
    pub dimensions: BTreeMap<String, usize>,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub all_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub scenario: Scenario,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    /// Copy with every timing set to zero (for determinism comparisons).
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.timing_ms = 0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "status", "dimensions", "time_ms"])
                .expect("in-memory write");
            for c in &report.checks {
                let dims = c
                    .dimensions
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped => "skipped",
                };
                w.write_record([c.name.as_str(), status, &dims, &c.timing_ms.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    }
}

/// One line per check kind.
pub fn list_checks() -> String {
    CHECK_KINDS
        .iter()
        .map(|(k, d)| format!("{k:<24} {d}\n"))
        .collect()
}

// ---------------------------------------------------------------------------
// runner

struct Outcome {
    status: Status,
    detail: String,
    witness: Option<Value>,
    dimensions: BTreeMap<String, usize>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            status: if pass { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            witness: None,
            dimensions: BTreeMap::new(),
        }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            ..Outcome::new(true, detail)
        }
    }

    fn witness<T: Serialize>(mut self, w: &T) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("witness serializes"));
        self
    }

    fn dim(mut self, k: &str, v: usize) -> Self {
        self.dimensions.insert(k.to_string(), v);
        self
    }
}

struct Ctx<'a> {
    sc: &'a Scenario,
    ambient: Arc<AmbientSpace>,
    intervals: OnceLock<Result<Arc<CausalPoset>>>,
    posets: Mutex<BTreeMap<String, Result<Arc<CausalPoset>>>>,
}

fn err_outcome(e: Error) -> Outcome {
    match e {
        Error::TooManyElements { .. } => Outcome::skipped(e.to_string()),
        e => Outcome::new(false, format!("error: {e}")),
    }
}

impl<'a> Ctx<'a> {
    fn cells(&self) -> i64 {
        i64::try_from(((self.sc.hi() - self.sc.lo()) / &self.sc.step).to_integer())
            .expect("validated window")
    }

    fn node(&self, k: i64) -> Rational {
        self.sc.lo() + &self.sc.step * int(k)
    }

    fn interval(&self, i: i64, j: i64) -> IndexElement {
        IndexElement::interval(self.node(i), self.node(j)).expect("i < j")
    }

    /// The interval poset of the whole window (used by additive extensions).
    fn interval_poset(&self) -> Result<Arc<CausalPoset>> {
        self.intervals
            .get_or_init(|| {
                build_poset(
                    PosetKind::I,
                    self.sc.lo(),
                    self.sc.hi(),
                    &self.sc.step,
                    self.sc.limits.max_elements,
                )
                .map(Arc::new)
            })
            .clone()
    }

    fn poset(&self, spec: Option<&PosetSpec>, kind: Option<PosetKind>) -> Result<Arc<CausalPoset>> {
        let (lo, hi, step, k) = match spec {
            Some(p) => (&p.window[0], &p.window[1], &p.step, kind.or(p.kind)),
            None => (self.sc.lo(), self.sc.hi(), &self.sc.step, kind),
        };
        let k = k.unwrap_or(self.sc.poset_kind);
        let key = format!("{k:?} {lo} {hi} {step}");
        if let Some(p) = self.posets.lock().expect("poset cache").get(&key) {
            return p.clone();
        }
        let p = build_poset(k, lo, hi, step, self.sc.limits.max_elements).map(Arc::new);
        self.posets
            .lock()
            .expect("poset cache")
            .insert(key, p.clone());
        p
    }

    fn net(&self, tag: SpaceTag) -> Result<Net> {
        Ok(Net::new(tag, self.interval_poset()?, self.ambient.clone()))
    }

    fn random_interval(&self, rng: &mut ChaCha8Rng, max_cells: i64) -> IndexElement {
        let n = self.cells();
        let len = rng.gen_range(1..=max_cells.min(n));
        let a = rng.gen_range(0..=n - len);
        self.interval(a, a + len)
    }

    fn random_double(&self, rng: &mut ChaCha8Rng) -> Option<IndexElement> {
        let n = self.cells();
        if n < 5 {
            return None;
        }
        let l1 = rng.gen_range(2..=5.min((n - 1) / 2));
        let g = rng.gen_range(1..=5.min(n - 2 * l1).max(1));
        let l2 = rng.gen_range(2..=5.min(n - l1 - g).max(2));
        let total = l1 + g + l2;
        if total > n {
            return None;
        }
        let a = rng.gen_range(0..=n - total);
        IndexElement::double(
            self.node(a),
            self.node(a + l1),
            self.node(a + l1 + g),
            self.node(total + a),
        )
        .ok()
    }

    fn pick_intervals(
        &self,
        rng: &mut ChaCha8Rng,
        given: &[IndexElement],
        count: Option<usize>,
    ) -> Vec<IndexElement> {
        if !given.is_empty() {
            return given.to_vec();
        }
        let k = count.unwrap_or(self.sc.limits.sample_count);
        (0..k).map(|_| self.random_interval(rng, 8)).collect()
    }

    fn pick_doubles(
        &self,
        rng: &mut ChaCha8Rng,
        given: &[IndexElement],
        count: Option<usize>,
    ) -> Vec<IndexElement> {
        if !given.is_empty() {
            return given.to_vec();
        }
        let k = count.unwrap_or(self.sc.limits.sample_count);
        (0..k).filter_map(|_| self.random_double(rng)).collect()
    }

    /// Random pair localized in `[node(i), node(j)]` with prescribed tails.
    fn random_pair(
        &self,
        rng: &mut ChaCha8Rng,
        i: i64,
        j: i64,
        left: Rational,
        right: Rational,
    ) -> TestPair {
        let xs: Vec<Rational> = (i..=j).map(|k| self.node(k)).collect();
        let n = xs.len();
        let f0 = (0..n)
            .map(|k| {
                if k == 0 || k + 1 == n {
                    Rational::zero()
                } else {
                    int(rng.gen_range(-3..=3))
                }
            })
            .collect();
        let f1 = (0..n)
            .map(|k| match k {
                0 => left.clone(),
                k if k + 1 == n => right.clone(),
                _ => Rational::new(rng.gen_range(-6..=6).into(), 2.into()),
            })
            .collect();
        TestPair::new(
            PiecewiseLinear::new(xs.clone(), f0).expect("increasing"),
            PiecewiseLinear::new(xs, f1).expect("increasing"),
        )
        .expect("f0 vanishes at both ends")
    }
}

/// First basis vector of `a` missing from `b`.
fn missing(a: &SymplecticSubspace, b: &SymplecticSubspace) -> Option<TestPair> {
    a.basis()
        .into_iter()
        .find(|f| !b.contains(f).unwrap_or(false))
}

fn mismatch_witness(a: &SymplecticSubspace, b: &SymplecticSubspace) -> Option<TestPair> {
    missing(a, b).or_else(|| missing(b, a))
}

#[derive(Serialize)]
struct ElementWitness<'a, T: Serialize> {
    element: &'a IndexElement,
    pair: T,
}

fn subspace_equalities(
    label: &str,
    els: &[IndexElement],
    mut f: impl FnMut(&IndexElement) -> Result<(SymplecticSubspace, SymplecticSubspace)>,
) -> Result<Outcome> {
    let mut total = 0;
    for e in els {
        let (a, b) = f(e)?;
        total += a.dim();
        if a != b {
            return Ok(Outcome::new(
                false,
                format!("{label} on {e}: dims {} vs {}", a.dim(), b.dim()),
            )
            .witness(&ElementWitness {
                element: e,
                pair: mismatch_witness(&a, &b),
            })
            .dim("elements", els.len()));
        }
    }
    Ok(
        Outcome::new(true, format!("{label} on {} elements", els.len()))
            .dim("elements", els.len())
            .dim("totalDim", total),
    )
}

fn run_check(ctx: &Ctx, check: &Check, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let limits = &ctx.sc.limits;
    match check {
        Check::HaagDuality {
            tag,
            count,
            elements,
        } => {
            let net = ctx.net(*tag)?;
            let els = ctx.pick_intervals(rng, elements, *count);
            subspace_equalities("dual = local", &els, |i| {
                Ok((net.dual(i)?, net.materialize(i)?))
            })
        }
        Check::DoubleIntervalDuality {
            tag,
            count,
            elements,
            expected_gap,
        } => {
            let net = ctx.net(*tag)?;
            let els = ctx.pick_doubles(rng, elements, *count);
            let mut gaps = BTreeMap::new();
            for e in &els {
                let add = net.additive_extension(e)?;
                let dual = net.dual(e)?;
                let mat = net.materialize(e)?;
                if let Some(w) = missing(&add, &dual) {
                    return Ok(
                        Outcome::new(false, format!("extension ⊄ dual on {e}")).witness(
                            &ElementWitness {
                                element: e,
                                pair: w,
                            },
                        ),
                    );
                }
                if dual != mat {
                    return Ok(
                        Outcome::new(false, format!("dual ≠ local space on {e}")).witness(
                            &ElementWitness {
                                element: e,
                                pair: mismatch_witness(&dual, &mat),
                            },
                        ),
                    );
                }
                let gap = dual.dim() - add.dim();
                if expected_gap.is_some_and(|g| g != gap) {
                    return Ok(Outcome::new(false, format!("rank gap {gap} on {e}"))
                        .witness(&ElementWitness {
                            element: e,
                            pair: missing(&dual, &add),
                        })
                        .dim("gap", gap));
                }
                *gaps.entry(gap).or_insert(0usize) += 1;
            }
            let mut o = Outcome::new(true, format!("{} double intervals", els.len()))
                .dim("elements", els.len());
            for (g, n) in gaps {
                o = o.dim(&format!("gap{g}"), n);
            }
            Ok(o)
        }
        Check::Additivity {
            tag,
            count,
            elements,
        } => {
            let net = ctx.net(*tag)?;
            let els = ctx.pick_doubles(rng, elements, *count);
            subspace_equalities("extension = local", &els, |e| {
                Ok((net.additive_extension(e)?, net.materialize(e)?))
            })
        }
        Check::Locality { tag, poset } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let r = Net::new(*tag, p.clone(), ctx.ambient.clone()).check_locality()?;
            let o = Outcome::new(r.ok(), format!("{} disjoint pairs", r.pairs_checked))
                .dim("pairs", r.pairs_checked)
                .dim("violations", r.violations.len());
            Ok(match r.violations.first() {
                Some(v) => o.witness(v),
                None => o,
            })
        }
        Check::GradedLocality { samples } => {
            let n = ctx.cells();
            if n < 2 {
                return Ok(Outcome::skipped("window too small"));
            }
            let k = samples.unwrap_or(limits.sample_count);
            for _ in 0..k {
                let a1 = rng.gen_range(0..n - 1);
                let b1 = rng.gen_range(a1 + 1..n);
                let a2 = rng.gen_range(b1..n);
                let b2 = rng.gen_range(a2 + 1..=n);
                let (tl, tr) = (int(rng.gen_range(-4..=4)), int(rng.gen_range(-4..=4)));
                let f = ctx.random_pair(rng, a1, b1, tl, int(0));
                let g = ctx.random_pair(rng, a2, b2, int(0), tr);
                debug_assert!(space_member(&f, SpaceTag::Vfl) && space_member(&g, SpaceTag::Vfr));
                if !symplectic_form(&f, &g).is_zero() {
                    return Ok(Outcome::new(false, "σ ≠ 0 on an ordered pair").witness(&[f, g]));
                }
            }
            Ok(Outcome::new(true, format!("{k} seeded pairs")).dim("samples", k))
        }
        Check::GradedDuality {
            side,
            count,
            elements,
        } => {
            let tag = match side {
                Side::L => SpaceTag::Vfl,
                Side::R => SpaceTag::Vfr,
            };
            let net = ctx.net(tag)?;
            let mut els = elements.clone();
            if els.is_empty() {
                let k = count.unwrap_or(limits.sample_count);
                els = ctx.pick_intervals(rng, &[], Some(k.div_ceil(2)));
                els.extend(ctx.pick_doubles(rng, &[], Some(k / 2)));
            }
            subspace_equalities("graded dual = local", &els, |o| {
                Ok((net.graded_dual(*side, o)?, net.materialize(o)?))
            })
        }
        Check::GlobalGradedDuality { count, elements } => {
            let net = ctx.net(SpaceTag::Vc)?;
            let els = ctx.pick_intervals(rng, elements, *count);
            subspace_equalities("global graded dual = Vc", &els, |i| {
                Ok((net.global_graded_dual(i)?, net.materialize(i)?))
            })
        }
        Check::ConditionAa {
            tag,
            pairs,
            max_path_len,
            poset,
            expect,
        } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let net = Net::new(*tag, p.clone(), ctx.ambient.clone());
            let pairs: Vec<[IndexElement; 2]> = if pairs.is_empty() {
                let ivs: Vec<&IndexElement> =
                    p.elements.iter().filter(|e| e.is_interval()).collect();
                ivs.iter()
                    .flat_map(|x| ivs.iter().map(move |y| (x, y)))
                    .filter(|(x, y)| before(x, y))
                    .take(5)
                    .map(|(x, y)| [(*x).clone(), (*y).clone()])
                    .collect()
            } else {
                pairs.clone()
            };
            let want = expect.unwrap_or(AaExpect::Holds) == AaExpect::Holds;
            let len = max_path_len.unwrap_or(limits.max_path_len);
            let mut paths = 0;
            for [s, e] in &pairs {
                let b = canonical_simplex1(e, s, &p)?;
                let r = condition_aa(&net, &b, len)?;
                paths += r.paths_examined;
                let certified = r.holds || r.certificates.iter().all(|c| c.verified);
                if r.holds != want || !certified {
                    let detail = format!(
                        "{s} → {e}: {} (intersection {}, join {})",
                        if r.holds { "holds" } else { "fails" },
                        r.intersection_dim,
                        r.join_dim
                    );
                    return Ok(Outcome::new(false, detail)
                        .witness(&r)
                        .dim("intersectionDim", r.intersection_dim)
                        .dim("joinDim", r.join_dim));
                }
            }
            Ok(Outcome::new(
                true,
                format!(
                    "{} endpoint pairs {}",
                    pairs.len(),
                    if want { "hold" } else { "fail, certified" }
                ),
            )
            .dim("pairs", pairs.len())
            .dim("paths", paths))
        }
        Check::Cocycle {
            charge,
            side,
            poset,
        } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let z = induced_cocycle(charge, p, *side, &ctx.sc.step)?;
            let r = check_cocycle(&z)?;
            let ok = r.ok();
            Ok(Outcome::new(ok, format!("{} entries", z.entries.len()))
                .dim("entries", z.entries.len())
                .witness(&r))
        }
        Check::Coboundary {
            tag,
            charge,
            side,
            poset,
            expect,
        } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let z = induced_cocycle(charge, p, *side, &ctx.sc.step)?;
            let f = coboundary_feasibility(&z, *tag)?;
            let want = expect.unwrap_or(FeasibilityExpect::Trivial);
            let (ok, what) = match (&f, want) {
                (Feasibility::Trivializer(w), FeasibilityExpect::Trivial) => (
                    witness_reproduces(&z, w) && w.localized.iter().all(|x| *x),
                    "verified trivializer",
                ),
                (Feasibility::Obstruction(_), FeasibilityExpect::Obstructed) => {
                    (true, "obstruction certificate")
                }
                (Feasibility::Trivializer(_), _) => (false, "unexpected trivializer"),
                (Feasibility::Obstruction(_), _) => (false, "unexpected obstruction"),
            };
            Ok(Outcome::new(ok, what)
                .witness(&f)
                .dim("entries", z.entries.len()))
        }
        Check::Z0 {
            tag,
            poset,
            expected_dim,
        } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let z = z0(&Net::new(*tag, p, ctx.ambient.clone()))?;
            let constant = TestPair::from_f1(PiecewiseLinear::constant(int(1)));
            let want = expected_dim.unwrap_or(usize::from(tag.admits(&charges(&constant))));
            Ok(Outcome::new(
                z.dim() == want,
                format!("dim {} (expected {want})", z.dim()),
            )
            .witness(&z.basis())
            .dim("dim", z.dim()))
        }
        Check::Braiding { samples } => {
            let n = ctx.cells();
            if n < 5 {
                return Ok(Outcome::skipped("window too small"));
            }
            let k = samples.unwrap_or(limits.sample_count);
            let charge = |rng: &mut ChaCha8Rng| {
                ChargePair::new(
                    Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into()),
                    Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into()),
                )
            };
            for _ in 0..k {
                let (cr, ct) = (charge(rng), charge(rng));
                let a = rng.gen_range(0..=n - 4);
                let b = rng.gen_range(a + 2..=(a + 8).min(n - 2));
                let c = rng.gen_range(b..=n - 2);
                let d = rng.gen_range(c + 2..=n);
                let step = &ctx.sc.step;
                let rho = canonical_representative(
                    &cr,
                    &ctx.interval(a, b),
                    TailConvention::RightTailZero,
                    step,
                )?;
                let tau = canonical_representative(
                    &ct,
                    &ctx.interval(c, d),
                    TailConvention::LeftTailZero,
                    step,
                )?;
                let r = braiding_phase(&rho, &tau)?;
                let expect = -(&cr.c * &ct.q + &cr.q * &ct.c);
                let m = monodromy(&cr, &ct)?;
                let twin = canonical_representative(
                    &cr,
                    &ctx.interval(c, d),
                    TailConvention::LeftTailZero,
                    step,
                )?;
                let selfb = braiding_phase(&rho, &twin)?;
                if r.exponent != expect
                    || m != int(2) * &expect
                    || selfb.exponent != -int(2) * &cr.c * &cr.q
                {
                    return Ok(Outcome::new(false, format!("charges {cr:?} / {ct:?}"))
                        .witness(&(rho, tau, r)));
                }
            }
            Ok(Outcome::new(true, format!("{k} charge pairs")).dim("samples", k))
        }
        Check::Mobius { count } => {
            let k = count.unwrap_or(limits.sample_count);
            let (mut unequal, mut equal) = (0usize, 0usize);
            for _ in 0..k {
                let Some(e) = ctx.random_double(rng) else {
                    return Ok(Outcome::skipped("window too small"));
                };
                let IndexElement::DoubleInterval { a, b, c, d } = &e else {
                    unreachable!()
                };
                let m = mobius_from_double_interval(&e)?;
                let ok = if (b - a) == (d - c) {
                    equal += 1;
                    m.is_identity()
                } else {
                    unequal += 1;
                    let s = a + d;
                    mobius_apply_endpoint(&m, a)? == *a
                        && mobius_apply_endpoint(&m, d)? == *d
                        && mobius_apply_endpoint(&m, &(&s - b))? == *c
                        && mobius_apply_endpoint(&m, &(&s - c))? == *b
                };
                if !ok {
                    return Ok(Outcome::new(false, format!("{e}: {m}")).witness(&(e.clone(), m)));
                }
            }
            Ok(
                Outcome::new(true, format!("{unequal} unequal, {equal} equal"))
                    .dim("unequal", unequal)
                    .dim("equal", equal),
            )
        }
        Check::XiSwap { count, elements } => {
            let (fl, fr) = (ctx.net(SpaceTag::Vfl)?, ctx.net(SpaceTag::Vfr)?);
            let els = ctx.pick_intervals(rng, elements, *count);
            subspace_equalities("Ξ(Vfl) = Vfr", &els, |i| {
                let imgs = fl
                    .materialize(i)?
                    .basis()
                    .iter()
                    .map(|f| xi_apply(i, f))
                    .collect::<Result<Vec<_>>>()?;
                Ok((
                    SymplecticSubspace::span(ctx.ambient.clone(), &imgs)?,
                    fr.materialize(i)?,
                ))
            })
        }
        Check::PosetFacts { poset } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let i = ctx.poset(poset.as_ref(), Some(PosetKind::I))?;
            let (dir, con) = (is_directed(&p), is_connected(&p));
            let cof = is_cofinal(&i, &p);
            let g = bot_graph(&p);
            let want_j = p.kind == PosetKind::J;
            let mut bad = Vec::new();
            if dir == want_j {
                bad.push(format!("directed={dir}"));
            }
            if con == want_j {
                bad.push(format!("connected={con}"));
            }
            if cof == want_j {
                bad.push(format!("I cofinal={cof}"));
            }
            if g.component_count != 2 {
                bad.push(format!("bot components={}", g.component_count));
            }
            let detail = if bad.is_empty() {
                format!(
                    "{:?}: directed={dir} connected={con} cofinal={cof} components=2",
                    p.kind
                )
            } else {
                format!("{:?}: {}", p.kind, bad.join(", "))
            };
            let mut o = Outcome::new(bad.is_empty(), detail)
                .dim("elements", p.len())
                .dim("components", g.component_count)
                .dim("less", g.less.len())
                .dim("greater", g.greater.len())
                .dim("interleaved", g.interleaved.len());
            if g.component_count != 2 {
                let w: Vec<Vec<(&IndexElement, &IndexElement)>> = g
                    .components
                    .iter()
                    .map(|c| {
                        c.iter()
                            .take(3)
                            .map(|&(a, b)| (&p.elements[a], &p.elements[b]))
                            .collect()
                    })
                    .collect();
                o = o.witness(&w);
            }
            Ok(o)
        }
        Check::FlipCheck { poset } => {
            let p = ctx.poset(poset.as_ref(), None)?;
            let ok = flip_check(&p)?;
            Ok(
                Outcome::new(ok, format!("{:?} with {} elements", p.kind, p.len()))
                    .dim("elements", p.len()),
            )
        }
        Check::PartitionOfUnity { samples } => {
            let n = ctx.cells();
            let one = TestPair::from_f1(PiecewiseLinear::constant(int(1)));
            let mut count = 0;
            for a in 0..n {
                for b in a + 1..=n {
                    let (fl, fr) = partition_of_unity(&ctx.interval(a, b))?;
                    if &fl + &fr != one {
                        return Ok(Outcome::new(false, "F_l + F_r ≠ (0,1)").witness(&[fl, fr]));
                    }
                    count += 1;
                }
            }
            let k = samples.unwrap_or(limits.sample_count);
            if n >= 5 {
                for _ in 0..k {
                    let a = rng.gen_range(2..n - 2);
                    let b = rng.gen_range(a + 1..n - 1);
                    let m = int(rng.gen_range(-5..=5));
                    let (fl, fr) = partition_of_unity(&ctx.interval(a, b))?;
                    let (nfl, nfr) = (fl.scale(&m), fr.scale(&m));
                    let c = rng.gen_range(b..n);
                    let tail = int(rng.gen_range(-3..=3));
                    let end = rng.gen_range(c + 1..=n);
                    let g = ctx.random_pair(rng, c, end, int(0), tail);
                    let e = rng.gen_range(0..a - 1);
                    let tail = int(rng.gen_range(-3..=3));
                    let end = rng.gen_range(e + 1..=a);
                    let h = ctx.random_pair(rng, e, end, tail, int(0));
                    let ok = adjoint_phase(&nfl, &g).is_zero()
                        && adjoint_phase(&nfr, &h).is_zero()
                        && adjoint_phase(&nfl, &h) == -(&m * &charges(&h).charge.c);
                    if !ok {
                        return Ok(Outcome::new(false, "one-sided triviality violated")
                            .witness(&[nfl, g, h]));
                    }
                }
            }
            Ok(
                Outcome::new(true, format!("{count} intervals, {k} samples"))
                    .dim("intervals", count)
                    .dim("samples", k),
            )
        }
        Check::SectorTable {} => {
            let rows: Vec<_> = SubnetLabel::ALL.iter().map(|l| sector_group(*l)).collect();
            let labels = rows.iter().filter(|d| d.labels_confirmed).count();
            let kinds = rows.iter().filter(|d| d.kind_confirmed).count();
            Ok(Outcome::new(
                labels == rows.len(),
                format!("{labels} label rows and {kinds} kinds confirmed"),
            )
            .witness(&rows)
            .dim("labelsConfirmed", labels)
            .dim("kindsConfirmed", kinds))
        }
    }
}

fn record(ctx: &Ctx, k: usize, check: &Check) -> CheckRecord {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.sc.seed.wrapping_add(k as u64));
    let out = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        run_check(ctx, check, &mut rng)
    })) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => err_outcome(e),
        Err(p) => Outcome::new(
            false,
            format!(
                "panic: {}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        ),
    };
    CheckRecord {
        name: check.name(),
        kind: check.kind().to_string(),
        status: out.status,
        detail: out.detail,
        witness: out.witness,
        dimensions: out.dimensions,
        timing_ms: u64::try_from(t.elapsed().as_millis()).unwrap_or(u64::MAX),
    }
}

/// Execute every check; `jobs` worker threads, report in scenario order.
pub fn run(scenario: &Scenario, jobs: usize) -> Report {
    let ambient = AmbientSpace::new(
        scenario.lo().clone(),
        scenario.hi().clone(),
        scenario.step.clone(),
    )
    .expect("validated window");
    let ctx = Ctx {
        sc: scenario,
        ambient,
        intervals: OnceLock::new(),
        posets: Mutex::new(BTreeMap::new()),
    };
    let n = scenario.checks.len();
    let slots: Vec<Mutex<Option<CheckRecord>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= n {
                    break;
                }
                let r = record(&ctx, k, &scenario.checks[k]);
                *slots[k].lock().expect("slot") = Some(r);
            });
        }
    });
    let checks: Vec<CheckRecord> = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot").expect("every check ran"))
        .collect();
    let count = |st| checks.iter().filter(|c| c.status == st).count();
    let summary = Summary {
        total: checks.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
        all_passed: count(Status::Fail) == 0,
    };
    Report {
        scenario: scenario.clone(),
        seed: scenario.seed,
        checks,
        summary,
    }
}

/// The scenario mirroring the acceptance suite.
pub fn default_scenario() -> Scenario {
    let text = include_str!("default_scenario.json");
    parse_scenario(text).expect("bundled scenario is valid")
}
