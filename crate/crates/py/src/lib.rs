//! Python bindings for `gradedlie-core`.
//!
//! Structured inputs (presentations, algebra files, check configs) are
//! accepted as JSON text or as the equivalent dicts and lists; reports come
//! back as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;

use gradedlie_core::eigenspace::{analyze_algebra, AlgebraFile};
use gradedlie_core::free::{ElementTerm, FineDegree, LieElement, MonomialJson};
use gradedlie_core::harness::{self, CheckConfig};
use gradedlie_core::quotient::{self as core_quotient, GradedPresentation, PresentationSpec};
use gradedlie_core::zn::{self, IndexSequence, PaperConstants};
use gradedlie_core::Error;

create_exception!(gradedlie, GradedLieError, PyValueError);
create_exception!(gradedlie, BudgetExceededError, GradedLieError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) => BudgetExceededError::new_err(e.to_string()),
        _ => GradedLieError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    GradedLieError::new_err(format!("invalid input: {e}"))
}

/// Serializes through `json.loads`, so Python sees dicts, lists and ints.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn dumps(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    obj.py()
        .import("json")?
        .call_method1("dumps", (obj,))?
        .extract()
}

/// A Python object converted through `json.dumps`.
fn from_value<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    serde_json::from_str(&dumps(obj)?).map_err(json_err)
}

/// JSON text, or a Python object of the same shape.
fn from_document<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    match obj.cast::<PyString>() {
        Ok(s) => serde_json::from_str(s.to_str()?).map_err(json_err),
        Err(_) => from_value(obj),
    }
}

fn sequence(n: u64, seq: &[i64]) -> PyResult<IndexSequence> {
    IndexSequence::new(n, seq).map_err(err)
}

/// True iff some nonempty sub-multiset of `seq` sums to 0 mod `n`.
#[pyfunction]
fn is_minus_one_dependent(n: u64, seq: Vec<i64>) -> PyResult<bool> {
    zn::is_minus_one_dependent(&sequence(n, &seq)?).map_err(err)
}

/// Residues `j` making `seq + [j]` dependent; `seq` must be independent.
#[pyfunction]
fn dependency_set(n: u64, seq: Vec<i64>) -> PyResult<Vec<u64>> {
    Ok(zn::dependency_set(&sequence(n, &seq)?)
        .map_err(err)?
        .values
        .into_iter()
        .collect())
}

/// Combinations of `seq` with coefficients in {0, +-1, +-2}.
#[pyfunction]
fn dtilde_set(n: u64, seq: Vec<i64>) -> PyResult<Vec<u64>> {
    Ok(zn::dtilde_set(&sequence(n, &seq)?)
        .map_err(err)?
        .values
        .into_iter()
        .collect())
}

#[pyfunction]
fn order_three_subgroup(n: u64) -> PyResult<Vec<u64>> {
    Ok(zn::order_three_subgroup(zn::Modulus::new(n).map_err(err)?)
        .into_iter()
        .collect())
}

/// Dimension of the free Lie algebra component with the given letter counts.
#[pyfunction]
fn witt_dimension(counts: Vec<u32>) -> u128 {
    gradedlie_core::free::witt_dimension(&counts)
}

#[pyfunction]
#[pyo3(signature = (f1 = 3))]
fn paper_constants(py: Python<'_>, f1: u64) -> PyResult<Bound<'_, PyAny>> {
    let c = PaperConstants::new(f1);
    let out = to_py(py, &c)?;
    out.set_item("e_bound_rendered", c.e_bound.render())?;
    out.set_item("e_bound_decimal_digits", c.e_bound.decimal_digits())?;
    Ok(out)
}

/// Runs one check config and returns its report.
#[pyfunction]
fn run_check<'py>(py: Python<'py>, config: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let cfg: CheckConfig = from_document(config)?;
    let report = py.detach(|| harness::run_check(&cfg)).map_err(err)?;
    to_py(py, &report)
}

/// Runs a list of configs concurrently; reports keep the input order.
#[pyfunction]
fn run_campaign<'py>(py: Python<'py>, configs: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text = match configs.cast::<PyString>() {
        Ok(s) => s.to_str()?.to_string(),
        Err(_) => dumps(configs)?,
    };
    let cfgs = harness::parse_campaign(&text).map_err(err)?;
    let reports = py.detach(|| harness::run_campaign(&cfgs)).map_err(err)?;
    to_py(py, &reports)
}

/// Hypothesis validation and Witt-formula dimensions, without row reduction.
#[pyfunction]
fn plan_check<'py>(py: Python<'py>, config: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let cfg: CheckConfig = from_document(config)?;
    to_py(py, &harness::plan_check(&cfg).map_err(err)?)
}

/// Pair checks, eigenspace grading, hypotheses and selective condition for
/// an algebra file.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, algebra: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let file: AlgebraFile = from_document(algebra)?;
    let input = file.build().map_err(err)?;
    to_py(py, &analyze_algebra(&input).map_err(err)?)
}

/// Truncated graded quotient of a free Lie algebra.
#[pyclass(frozen)]
struct Quotient {
    inner: core_quotient::Quotient,
}

impl Quotient {
    /// An element given as `[[monomial, num, den], ...]` or as a bare monomial.
    fn element(&self, obj: &Bound<'_, PyAny>) -> PyResult<LieElement> {
        let alg = self.inner.algebra();
        let text = dumps(obj)?;
        if let Ok(terms) = serde_json::from_str::<Vec<ElementTerm>>(&text) {
            return alg.element_from_json(&terms).map_err(err);
        }
        let m: MonomialJson = serde_json::from_str(&text).map_err(json_err)?;
        alg.normalize(&m.to_expr()).map_err(err)
    }
}

#[pymethods]
impl Quotient {
    /// `presentation` is a presentation document: modulus, generators,
    /// relator families and cutoff.
    #[new]
    fn new(py: Python<'_>, presentation: &Bound<'_, PyAny>) -> PyResult<Self> {
        let spec: PresentationSpec = from_document(presentation)?;
        let inner = py
            .detach(|| GradedPresentation::from_spec(&spec).and_then(core_quotient::Quotient::new))
            .map_err(err)?;
        Ok(Quotient { inner })
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.presentation().modulus().get()
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.inner.cutoff()
    }

    /// One dict per nonzero free component: fine degree, length, zn-degree,
    /// free dimension, relation rank and quotient dimension.
    fn components<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        #[derive(Serialize)]
        struct Row {
            fine_degree: String,
            length: usize,
            zn_degree: u64,
            free_dimension: usize,
            rank: usize,
            quotient_dimension: usize,
        }
        let gens = self.inner.presentation().generators();
        let mut rows = Vec::new();
        for key in self.inner.fine_degrees() {
            let comp = self.inner.component(&key).map_err(err)?;
            if comp.free_dimension() == 0 {
                continue;
            }
            rows.push(Row {
                fine_degree: key.label(gens),
                length: key.len(),
                zn_degree: self.inner.zn_degree(&key),
                free_dimension: comp.free_dimension(),
                rank: comp.rank(),
                quotient_dimension: comp.quotient_dimension(),
            });
        }
        to_py(py, &rows)
    }

    /// Quotient dimension of the component with the given generator counts.
    fn dimension(&self, counts: Vec<u32>) -> PyResult<usize> {
        let key = FineDegree::from_counts(counts);
        Ok(self
            .inner
            .component(&key)
            .map_err(err)?
            .quotient_dimension())
    }

    fn is_zero(&self, element: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.inner.is_zero(&self.element(element)?).map_err(err)
    }

    /// Normal form modulo the relations, as `[[monomial, num, den], ...]`.
    fn reduce<'py>(
        &self,
        py: Python<'py>,
        element: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = self.inner.reduce(&self.element(element)?).map_err(err)?;
        to_py(py, &self.inner.algebra().element_to_json(&r))
    }

    fn bracket<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'py, PyAny>,
        y: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let alg = self.inner.algebra();
        let b = alg.bracket(&self.element(x)?, &self.element(y)?);
        to_py(py, &alg.element_to_json(&b))
    }

    /// Derived length within the cutoff, with its vacuity threshold.
    fn derived_length<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let dl = py.detach(|| self.inner.derived_length()).map_err(err)?;
        to_py(py, &dl)
    }

    /// Dimension reports of `L^(1), ..., L^(depth)`.
    fn derived_series<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        let series = py
            .detach(|| self.inner.derived_series(depth))
            .map_err(err)?;
        let reports: Vec<_> = series.iter().map(|s| s.report(&self.inner)).collect();
        to_py(py, &reports)
    }

    fn __repr__(&self) -> String {
        let gens: Vec<String> = self
            .inner
            .presentation()
            .generators()
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree.value()))
            .collect();
        format!(
            "Quotient(n={}, generators=[{}], cutoff={})",
            self.modulus(),
            gens.join(", "),
            self.cutoff()
        )
    }
}

#[pymodule]
fn gradedlie(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", harness::VERSION)?;
    m.add("GradedLieError", m.py().get_type::<GradedLieError>())?;
    m.add(
        "BudgetExceededError",
        m.py().get_type::<BudgetExceededError>(),
    )?;
    m.add_function(wrap_pyfunction!(is_minus_one_dependent, m)?)?;
    m.add_function(wrap_pyfunction!(dependency_set, m)?)?;
    m.add_function(wrap_pyfunction!(dtilde_set, m)?)?;
    m.add_function(wrap_pyfunction!(order_three_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(witt_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(paper_constants, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(plan_check, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_class::<Quotient>()?;
    Ok(())
}
