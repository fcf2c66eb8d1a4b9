//! Python bindings. Rationals cross the boundary as strings ("3/2").

use std::collections::BTreeMap;
use std::sync::Arc;

use netcoh::nets::{AmbientSpace, Net as CoreNet};
use netcoh::piecewise::{charges, localization, symplectic_form};
use netcoh::poset::{bot_graph, build_poset, is_connected, is_directed};
use netcoh::rational::{fmt_rational, parse_rational};
use netcoh::scenario::{self, Format};
use netcoh::sectors::monodromy as core_monodromy;
use netcoh::{ChargePair, IndexElement, PiecewiseLinear, PosetKind, Rational, SpaceTag};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: netcoh::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn q(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

fn qs(v: &[String]) -> PyResult<Vec<Rational>> {
    v.iter().map(|s| q(s)).collect()
}

fn element(ends: &[String]) -> PyResult<IndexElement> {
    let e = qs(ends)?;
    match e.as_slice() {
        [a, b] => IndexElement::interval(a.clone(), b.clone()),
        [a, b, c, d] => IndexElement::double(a.clone(), b.clone(), c.clone(), d.clone()),
        _ => return Err(PyValueError::new_err("an element is 2 or 4 endpoints")),
    }
    .map_err(err)
}

fn tag(s: &str) -> PyResult<SpaceTag> {
    SpaceTag::ALL
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown tag {s}")))
}

fn kind(s: &str) -> PyResult<PosetKind> {
    Ok(match s {
        "I" => PosetKind::I,
        "I2" => PosetKind::I2,
        "D" => PosetKind::D,
        "J" => PosetKind::J,
        _ => return Err(PyValueError::new_err(format!("unknown poset kind {s}"))),
    })
}

/// A pair `(f0, f1)` of piecewise-linear functions given by breakpoints and
/// values; f0 must vanish at both ends, f1 extends by its end values.
#[pyclass(frozen)]
struct TestPair {
    inner: netcoh::TestPair,
}

#[pymethods]
impl TestPair {
    #[new]
    fn new(
        xs0: Vec<String>,
        ys0: Vec<String>,
        xs1: Vec<String>,
        ys1: Vec<String>,
    ) -> PyResult<Self> {
        let f0 = PiecewiseLinear::new(qs(&xs0)?, qs(&ys0)?).map_err(err)?;
        let f1 = PiecewiseLinear::new(qs(&xs1)?, qs(&ys1)?).map_err(err)?;
        Ok(TestPair {
            inner: netcoh::TestPair::new(f0, f1).map_err(err)?,
        })
    }

    /// `{"c", "q", "left", "right"}`.
    fn charges(&self) -> BTreeMap<&'static str, String> {
        let ch = charges(&self.inner);
        BTreeMap::from([
            ("c", fmt_rational(&ch.charge.c)),
            ("q", fmt_rational(&ch.charge.q)),
            ("left", fmt_rational(&ch.left_grade)),
            ("right", fmt_rational(&ch.right_grade)),
        ])
    }

    fn sigma(&self, other: &TestPair) -> String {
        fmt_rational(&symplectic_form(&self.inner, &other.inner))
    }

    fn localization(&self) -> Vec<(String, String)> {
        localization(&self.inner)
            .iter()
            .map(|(a, b)| (fmt_rational(a), fmt_rational(b)))
            .collect()
    }

    fn is_member(&self, tag_name: &str) -> PyResult<bool> {
        Ok(netcoh::piecewise::space_member(&self.inner, tag(tag_name)?))
    }

    fn __add__(&self, other: &TestPair) -> TestPair {
        TestPair {
            inner: &self.inner + &other.inner,
        }
    }

    fn __eq__(&self, other: &TestPair) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("TestPair(localized in {:?})", self.localization())
    }
}

#[pyclass(frozen)]
struct Poset {
    inner: Arc<netcoh::CausalPoset>,
}

#[pymethods]
impl Poset {
    #[new]
    #[pyo3(signature = (kind_name, lo, hi, step="1"))]
    fn new(kind_name: &str, lo: &str, hi: &str, step: &str) -> PyResult<Self> {
        let p = build_poset(kind(kind_name)?, &q(lo)?, &q(hi)?, &q(step)?, 5000).map_err(err)?;
        Ok(Poset { inner: Arc::new(p) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.elements.iter().map(|e| e.to_string()).collect()
    }

    fn is_directed(&self) -> bool {
        is_directed(&self.inner)
    }

    fn is_connected(&self) -> bool {
        is_connected(&self.inner)
    }

    fn bot_components(&self) -> usize {
        bot_graph(&self.inner).component_count
    }
}

/// A tagged net on a poset over a grid ambient space.
#[pyclass(frozen)]
struct Net {
    inner: CoreNet,
}

#[pymethods]
impl Net {
    #[new]
    #[pyo3(signature = (tag_name, poset, lo, hi, step="1/2"))]
    fn new(tag_name: &str, poset: &Poset, lo: &str, hi: &str, step: &str) -> PyResult<Self> {
        let ambient = AmbientSpace::new(q(lo)?, q(hi)?, q(step)?).map_err(err)?;
        Ok(Net {
            inner: CoreNet::new(tag(tag_name)?, poset.inner.clone(), ambient),
        })
    }

    fn local_dim(&self, ends: Vec<String>) -> PyResult<usize> {
        Ok(self.inner.materialize(&element(&ends)?).map_err(err)?.dim())
    }

    fn dual_dim(&self, ends: Vec<String>) -> PyResult<usize> {
        Ok(self.inner.dual(&element(&ends)?).map_err(err)?.dim())
    }

    fn additive_dim(&self, ends: Vec<String>) -> PyResult<usize> {
        Ok(self
            .inner
            .additive_extension(&element(&ends)?)
            .map_err(err)?
            .dim())
    }

    /// Does the dual equal the local space on this element?
    fn is_dual(&self, ends: Vec<String>) -> PyResult<bool> {
        let o = element(&ends)?;
        Ok(self.inner.dual(&o).map_err(err)? == self.inner.materialize(&o).map_err(err)?)
    }
}

#[pyfunction]
fn monodromy(c1: &str, q1: &str, c2: &str, q2: &str) -> PyResult<String> {
    let (r, t) = (
        ChargePair::new(q(c1)?, q(q1)?),
        ChargePair::new(q(c2)?, q(q2)?),
    );
    core_monodromy(&r, &t)
        .map(|m| fmt_rational(&m))
        .map_err(err)
}

/// Run a scenario document; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (text, jobs=1))]
fn run_scenario(py: Python<'_>, text: &str, jobs: usize) -> PyResult<String> {
    let sc = scenario::parse_scenario(text).map_err(err)?;
    let report = py.detach(|| scenario::run(&sc, jobs));
    Ok(scenario::emit(&report, Format::Json))
}

#[pyfunction]
fn list_checks() -> String {
    scenario::list_checks()
}

#[pymodule]
pub fn netcoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<TestPair>()?;
    m.add_class::<Poset>()?;
    m.add_class::<Net>()?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(list_checks, m)?)?;
    Ok(())
}
