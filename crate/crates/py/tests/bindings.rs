use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(subsum::subsum)(py);
        let globals = PyDict::new(py);
        globals.set_item("subsum", module).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn group_basics() {
    run(r#"
from fractions import Fraction
g = subsum.Group("product:cyclic:2+cyclic:2")
assert g.order == 4
assert g.sigma1() == Fraction(11, 4)
assert g.classify() == ("BelowThreshold", "Z2xZ2")
assert g.census() == {1: 1, 2: 3, 4: 1}
assert subsum.Group("cyclic:12").sigma1() == subsum.threshold(12)
"#);
}

#[test]
fn number_theory() {
    run(r#"
assert subsum.sigma_scan(1000) == [12, 70, 88]
assert subsum.gaussian_subgroup_count(6, 3, 3) == 33880
assert subsum.divisor_sum(1) == 1
seq = subsum.sequence(2)
assert [r["q"] for r in seq["rows"]] == [3, 7]
"#);
}

#[test]
fn errors_map_to_exceptions() {
    run(r#"
def raises(f, exc):
    try:
        f()
    except exc:
        return True
    return False
assert raises(lambda: subsum.Group("pq:3,5"), ValueError)
assert raises(lambda: subsum.Group("cyclic:20", max_order=10), subsum.CapExceededError)
assert raises(lambda: subsum.Group("elem:2,6", max_subgroups=100).census(), subsum.CapExceededError)
assert issubclass(subsum.CapExceededError, subsum.SubsumError)
assert raises(lambda: subsum.Group("cyclic:3").mul(0, 3), ValueError)
assert raises(lambda: subsum.verify(), ValueError)
"#);
}
