//! Python bindings: `import subsum`.
//!
//! Rationals cross the boundary as `fractions.Fraction`, big counts as `int`,
//! and reports as plain dicts (the same shape as the CLI's JSON).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use subsum_core::arith;
use subsum_core::corpus::{self, CorpusConfig};
use subsum_core::families;
use subsum_core::{lattice, report, sigma, Error, GroupSpec, Lattice, Limits, Rational};

create_exception!(subsum, SubsumError, PyException);
create_exception!(subsum, CapExceededError, SubsumError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidTable(_) | Error::NotAPermutation { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::OrderCapExceeded { .. }
        | Error::LatticeTooLarge { .. }
        | Error::LimitTooLarge { .. }
        | Error::SearchCapExceeded { .. } => CapExceededError::new_err(e.to_string()),
        _ => SubsumError::new_err(e.to_string()),
    }
}

fn limits(max_order: Option<usize>, max_subgroups: Option<usize>) -> Limits {
    let d = Limits::default();
    Limits {
        max_order: max_order.unwrap_or(d.max_order),
        max_subgroups: max_subgroups.unwrap_or(d.max_subgroups),
    }
}

/// Serializes through JSON and hands back the parsed Python object.
fn to_pyobject<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| SubsumError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A finite group given by its Cayley table. The subgroup lattice is
/// enumerated on first use and cached.
#[pyclass(frozen, module = "subsum")]
struct Group {
    inner: subsum_core::Group,
    limits: Limits,
    lattice: OnceLock<Lattice>,
}

impl Group {
    fn wrap(inner: subsum_core::Group, limits: Limits) -> Self {
        Self { inner, limits, lattice: OnceLock::new() }
    }

    fn lattice(&self, py: Python<'_>) -> PyResult<&Lattice> {
        if let Some(lat) = self.lattice.get() {
            return Ok(lat);
        }
        let lat = py.detach(|| lattice::enumerate(&self.inner, &self.limits)).map_err(to_py)?;
        Ok(self.lattice.get_or_init(|| lat))
    }
}

#[pymethods]
impl Group {
    /// Builds a group from a spec string such as `"cyclic:12"`, `"pq:3,7"`
    /// or `"product:elem:2,2+cyclic:9"`.
    #[new]
    #[pyo3(signature = (spec, max_order=None, max_subgroups=None))]
    fn new(spec: &str, max_order: Option<usize>, max_subgroups: Option<usize>) -> PyResult<Self> {
        let limits = limits(max_order, max_subgroups);
        let g = spec.parse::<GroupSpec>().and_then(|s| s.build(&limits)).map_err(to_py)?;
        Ok(Self::wrap(g, limits))
    }

    /// Rows of a Cayley table over `0..n`, identity at 0.
    #[staticmethod]
    #[pyo3(signature = (rows, label="table", max_order=None, max_subgroups=None))]
    fn from_table(
        rows: Vec<Vec<usize>>,
        label: &str,
        max_order: Option<usize>,
        max_subgroups: Option<usize>,
    ) -> PyResult<Self> {
        let limits = limits(max_order, max_subgroups);
        let g = subsum_core::Group::from_table(rows, label, &limits).map_err(to_py)?;
        Ok(Self::wrap(g, limits))
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        self.check(a)?;
        Ok(self.inner.inv(a))
    }

    fn element_order(&self, a: usize) -> PyResult<usize> {
        self.check(a)?;
        Ok(self.inner.element_order(a))
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        (0..self.inner.order()).map(|a| self.inner.row(a).iter().map(|&x| x as usize).collect()).collect()
    }

    /// Every subgroup as a sorted element list, in canonical order.
    fn subgroups(&self, py: Python<'_>) -> PyResult<Vec<Vec<usize>>> {
        Ok(self.lattice(py)?.subgroups().iter().map(|h| h.elements().collect()).collect())
    }

    fn subgroup_count(&self, py: Python<'_>) -> PyResult<usize> {
        Ok(self.lattice(py)?.len())
    }

    /// Subgroup order to number of subgroups of that order.
    fn census(&self, py: Python<'_>) -> PyResult<BTreeMap<usize, usize>> {
        Ok(self.lattice(py)?.census().clone())
    }

    fn sigma1(&self, py: Python<'_>) -> PyResult<Rational> {
        Ok(sigma::sigma1(&self.inner, self.lattice(py)?))
    }

    fn is_nilpotent(&self, py: Python<'_>) -> PyResult<bool> {
        Ok(lattice::is_nilpotent(&self.inner, self.lattice(py)?))
    }

    fn is_cyclic(&self) -> bool {
        lattice::is_cyclic(&self.inner)
    }

    /// `(verdict, structure)` against `2 + 4/n`, e.g. `("AtThreshold", "S3")`.
    fn classify(&self, py: Python<'_>) -> PyResult<(String, String)> {
        let c = sigma::classify(&self.inner, self.lattice(py)?);
        Ok((format!("{:?}", c.verdict), c.structure.to_string()))
    }

    /// Full analysis report as a dict, without timing.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let rep = py.detach(|| report::analyze(&self.inner, &self.limits)).map_err(to_py)?;
        to_pyobject(py, &rep.without_timing())
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.label(), self.inner.order())
    }
}

impl Group {
    fn check(&self, a: usize) -> PyResult<()> {
        if a < self.inner.order() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("element {a} out of range for order {}", self.inner.order())))
        }
    }
}

/// `2 + 4/n`
#[pyfunction]
fn threshold(n: u64) -> Rational {
    sigma::threshold(&n.into())
}

/// `σ(n)`, the sum of the divisors of `n`.
#[pyfunction]
fn divisor_sum(n: u64) -> PyResult<u64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(arith::divisor_sum(n))
}

/// All `n ≤ limit` with `σ(n) = 2n + 4`.
#[pyfunction]
fn sigma_scan(py: Python<'_>, limit: usize) -> PyResult<Vec<u64>> {
    py.detach(|| arith::build_sieve(limit).map(|s| arith::scan_threshold(&s).equal)).map_err(to_py)
}

/// Number of subgroups of order `p^i` in `(Z_p)^k`.
#[pyfunction]
fn gaussian_subgroup_count(k: u32, p: u64, i: u32) -> BigUint {
    arith::gaussian_subgroup_count(k, p, i)
}

/// Smallest prime `q ≡ 1 (mod p)`, searched up to `cap`.
#[pyfunction]
#[pyo3(signature = (p, cap=None))]
fn dirichlet_search(p: u64, cap: Option<u64>) -> PyResult<u64> {
    if !arith::is_prime(p) {
        return Err(PyValueError::new_err(format!("{p} is not prime")));
    }
    families::dirichlet_search(p, cap.unwrap_or_else(|| families::default_search_cap(p))).map_err(to_py)
}

/// Rows for the first `count` non-nilpotent pq-groups.
#[pyfunction]
#[pyo3(signature = (count, max_order=None, search_cap=None))]
fn sequence<'py>(
    py: Python<'py>,
    count: usize,
    max_order: Option<usize>,
    search_cap: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    if count == 0 {
        return Err(PyValueError::new_err("count must be at least 1"));
    }
    let limits = limits(max_order, None);
    let rep = py.detach(|| families::convergence_report(count, &limits, search_cap)).map_err(to_py)?;
    to_pyobject(py, &rep)
}

/// Runs the corpus verification and returns the report as a dict. Families
/// left as `None` are skipped; `extra` takes spec strings.
#[pyfunction]
#[pyo3(signature = (
    cyclic_max=None, elem_max=None, dihedral_max=None, pq_max=None, sym_max=None,
    extra=Vec::new(), max_order=None, max_subgroups=None
))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    cyclic_max: Option<usize>,
    elem_max: Option<usize>,
    dihedral_max: Option<usize>,
    pq_max: Option<usize>,
    sym_max: Option<usize>,
    extra: Vec<String>,
    max_order: Option<usize>,
    max_subgroups: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let limits = limits(max_order, max_subgroups);
    let config = CorpusConfig { cyclic_max, elem_max, dihedral_max, pq_max, sym_max };
    let mut entries = corpus::default_corpus(&config, &limits).map_err(to_py)?;
    for s in &extra {
        let spec = s.parse::<GroupSpec>().map_err(to_py)?;
        entries.push(corpus::CorpusEntry::spec(spec));
    }
    if entries.is_empty() {
        return Err(PyValueError::new_err("the selected corpus is empty"));
    }
    let rep = py.detach(|| corpus::verify_corpus(&entries, &limits));
    let out = to_pyobject(py, &rep)?;
    out.cast::<PyDict>()?.set_item("violations", rep.violations())?;
    Ok(out)
}

#[pymodule]
pub fn subsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SubsumError", m.py().get_type::<SubsumError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_scan, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_subgroup_count, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_search, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
