use netcoh_py::netcoh_py;
use pyo3::ffi::c_str;
use pyo3::prelude::*;

#[test]
fn module_works_inside_an_interpreter() {
    pyo3::append_to_inittab!(netcoh_py);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import netcoh_py as nc
f = nc.TestPair(["0", "1", "2"], ["0", "3", "0"], ["0"], ["0"])
g = nc.TestPair(["3"], ["0"], ["-1", "1"], ["0", "1"])
assert f.charges()["c"] == "3"
assert (f.sigma(g), g.sigma(f)) == ("11/4", "-11/4"), f.sigma(g)
assert nc.monodromy("1", "0", "0", "1") == "-2"
p = nc.Poset("D", "0", "3")
assert p.bot_components() >= 1
try:
    nc.TestPair(["0", "1"], ["1", "1"], ["0"], ["0"])
    raise SystemExit("f0 with tails accepted")
except ValueError:
    pass
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}
