//! Python bindings. Naturals cross the boundary as Python `int`; budgets are
//! optional keyword arguments defaulting to the library defaults.

use hyperop::oracle;
use hyperop::{
    BudgetExceeded, DivisibilityError, DivisorSet, EvalBudget, HypothesisError, InverseError,
    Lemma2Outcome, MultiplicateError, Natural, PowerError, RFactorOutcome, Rank, Tower, TowerError,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyRange};

create_exception!(
    pyhyperop,
    BudgetExceededError,
    PyException,
    "An evaluation budget was exceeded."
);
create_exception!(
    pyhyperop,
    DomainError,
    PyValueError,
    "An input is outside the operation's domain."
);
create_exception!(
    pyhyperop,
    CounterexampleError,
    PyException,
    "A brute-force check found a counterexample."
);

fn budget_err(e: BudgetExceeded) -> PyErr {
    BudgetExceededError::new_err(e.to_string())
}

fn domain_err(e: impl std::fmt::Display) -> PyErr {
    DomainError::new_err(e.to_string())
}

fn power_err(e: PowerError) -> PyErr {
    domain_err(e)
}

fn tower_err(e: TowerError) -> PyErr {
    match e {
        TowerError::UniquenessViolation { .. } => CounterexampleError::new_err(e.to_string()),
        other => domain_err(other),
    }
}

fn divisibility_err(e: DivisibilityError) -> PyErr {
    match e {
        DivisibilityError::Budget(b) => budget_err(b),
        other => domain_err(other),
    }
}

fn hypothesis_err(e: HypothesisError) -> PyErr {
    match e {
        HypothesisError::Budget(b) => budget_err(b),
        other => domain_err(other),
    }
}

fn make_budget(max_bits: Option<u64>, max_steps: Option<u64>) -> PyResult<EvalBudget> {
    EvalBudget::new(
        max_bits.unwrap_or(EvalBudget::DEFAULT_MAX_RESULT_BITS),
        max_steps.unwrap_or(EvalBudget::DEFAULT_MAX_STEPS),
    )
    .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// H_rank(a, x).
#[pyfunction]
#[pyo3(signature = (rank, a, x, *, max_bits=None, max_steps=None))]
fn hyper_eval(
    rank: u32,
    a: Natural,
    x: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Natural> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::hyper_eval(Rank(rank), &a, &x, &budget).map_err(budget_err)
}

/// The unique x with H_rank(a, x) = y.
#[pyfunction]
#[pyo3(signature = (rank, a, y, *, max_bits=None, max_steps=None))]
fn hyper_inverse(
    rank: u32,
    a: Natural,
    y: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Natural> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::hyper_inverse(Rank(rank), &a, &y, &budget).map_err(|e| match e {
        InverseError::Budget(b) => budget_err(b),
        other => domain_err(other),
    })
}

/// Right-to-left fold of `values` through H_rank, seeded with sgn(rank).
#[pyfunction]
#[pyo3(signature = (rank, values, *, max_bits=None, max_steps=None))]
fn r_multiplicate(
    rank: u32,
    values: Vec<Natural>,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Natural> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::r_multiplicate(Rank(rank), &values, &budget).map_err(|e| match e {
        MultiplicateError::Budget(b) => budget_err(b),
        other => domain_err(other),
    })
}

#[pyfunction]
fn sgn(rank: u32) -> Natural {
    hyperop::sgn(Rank(rank))
}

/// (floor(n ** (1/k)), exact).
#[pyfunction]
fn integer_kth_root(n: Natural, k: u32) -> PyResult<(Natural, bool)> {
    hyperop::integer_kth_root(&n, k).map_err(power_err)
}

/// (base, exponent) with base biprime and exponent maximal, or None for a
/// biprime.
#[pyfunction]
fn perfect_power_form(n: Natural) -> PyResult<Option<(Natural, Natural)>> {
    Ok(hyperop::perfect_power_form(&n)
        .map_err(power_err)?
        .map(|f| f.into_parts()))
}

#[pyfunction]
fn is_biprime(n: Natural) -> PyResult<bool> {
    hyperop::is_biprime(&n).map_err(power_err)
}

#[pyfunction]
#[pyo3(signature = (rank, m, *, max_bits=None, max_steps=None))]
fn is_r_prime(
    rank: u32,
    m: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<bool> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::is_r_prime(Rank(rank), &m, &budget).map_err(divisibility_err)
}

#[pyfunction]
#[pyo3(signature = (rank, m, *, max_bits=None, max_steps=None))]
fn is_r_decomposable(
    rank: u32,
    m: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<bool> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::is_r_decomposable(Rank(rank), &m, &budget).map_err(divisibility_err)
}

/// The r-quotient of `a` by `d`, or None when `d` is not an r-divisor.
#[pyfunction]
#[pyo3(signature = (rank, d, a, *, max_bits=None, max_steps=None))]
fn is_r_divisor(
    rank: u32,
    d: Natural,
    a: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Option<Natural>> {
    let budget = make_budget(max_bits, max_steps)?;
    Ok(hyperop::is_r_divisor(Rank(rank), &d, &a, &budget)
        .map_err(divisibility_err)?
        .map(|w| w.quotient))
}

/// Common r-divisors as a sorted list; at rank 0 the answer is every number
/// in 1..=min(a, b), returned as a `range`.
#[pyfunction]
#[pyo3(signature = (rank, a, b, *, max_bits=None, max_steps=None))]
fn common_r_divisors<'py>(
    py: Python<'py>,
    rank: u32,
    a: Natural,
    b: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let budget = make_budget(max_bits, max_steps)?;
    match hyperop::common_r_divisors(Rank(rank), &a, &b, &budget).map_err(divisibility_err)? {
        DivisorSet::Interval { low, high } => {
            let bound = |n: &Natural| {
                isize::try_from(n)
                    .map_err(|_| PyOverflowError::new_err("interval exceeds a Python range"))
            };
            let (start, stop) = (bound(&low)?, bound(&high)? + 1);
            Ok(PyRange::new(py, start, stop)?.into_any())
        }
        DivisorSet::Listed(v) => Ok(v.into_pyobject(py)?.into_any()),
    }
}

#[pyfunction]
#[pyo3(signature = (rank, a, b, *, max_bits=None, max_steps=None))]
fn is_r_coprime(
    rank: u32,
    a: Natural,
    b: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<bool> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::is_r_coprime(Rank(rank), &a, &b, &budget).map_err(divisibility_err)
}

#[pyfunction]
#[pyo3(signature = (rank, a, b, *, max_bits=None, max_steps=None))]
fn greatest_common_r_divisor(
    rank: u32,
    a: Natural,
    b: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Option<Natural>> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::greatest_common_r_divisor(Rank(rank), &a, &b, &budget).map_err(divisibility_err)
}

/// A tower of biprimes `a_1^(a_2^(...^a_s))`, outermost base first.
#[pyclass(
    name = "Tower",
    module = "pyhyperop",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTower {
    inner: Tower,
}

#[pymethods]
impl PyTower {
    #[new]
    fn new(components: Vec<Natural>) -> PyResult<Self> {
        Ok(PyTower {
            inner: Tower::new(components).map_err(tower_err)?,
        })
    }

    #[getter]
    fn components(&self) -> Vec<Natural> {
        self.inner.components().to_vec()
    }

    fn value(&self) -> PyResult<Natural> {
        self.inner.value().map_err(budget_err)
    }

    fn is_biprime(&self) -> bool {
        self.inner.is_biprime()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .components()
            .iter()
            .map(|c| c.to_string())
            .collect();
        format!("Tower([{}])", parts.join(", "))
    }
}

/// The unique biprime tower of `m >= 2`.
#[pyfunction]
fn bi_factorize(m: Natural) -> PyResult<PyTower> {
    Ok(PyTower {
        inner: hyperop::bi_factorize(&m).map_err(tower_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (tower, *, max_bits=None, max_steps=None))]
fn tower_eval(tower: &PyTower, max_bits: Option<u64>, max_steps: Option<u64>) -> PyResult<Natural> {
    let budget = make_budget(max_bits, max_steps)?;
    hyperop::tower_eval(&tower.inner, &budget).map_err(budget_err)
}

/// (root, exponent) with `d = root ** exponent`, root biprime.
#[pyfunction]
fn biprime_root(d: Natural) -> PyResult<(Natural, Natural)> {
    Ok(hyperop::biprime_root(&d).map_err(tower_err)?.into_parts())
}

/// A witness (x, y) with a**x == b**y inside the box, or None.
#[pyfunction]
fn lemma2_witness_search(
    a: Natural,
    b: Natural,
    x_max: u64,
    y_max: u64,
) -> PyResult<Option<(u64, u64)>> {
    match hyperop::lemma2_witness_search(&a, &b, x_max, y_max).map_err(tower_err)? {
        Lemma2Outcome::NoWitness => Ok(None),
        Lemma2Outcome::Witness { x, y } => Ok(Some((x, y))),
    }
}

#[pyfunction]
fn verify_uniqueness<'py>(py: Python<'py>, m: Natural) -> PyResult<Bound<'py, PyDict>> {
    let report = hyperop::verify_uniqueness(&m).map_err(tower_err)?;
    let d = PyDict::new(py);
    d.set_item("value", report.value)?;
    d.set_item(
        "tower",
        PyTower {
            inner: report.tower,
        },
    )?;
    d.set_item("representations", report.representations)?;
    d.set_item("collapsed_reps", report.collapsed_reps)?;
    d.set_item("candidate_towers", report.candidate_towers)?;
    Ok(d)
}

/// Factors `m` into r-prime components at rank >= 3.
///
/// Returns a dict with `components` (None when no such factorization
/// exists), `complete` and, in the None case, the `decompositions` found.
#[pyfunction]
#[pyo3(signature = (rank, m, *, max_bits=None, max_steps=None))]
fn r_factorize<'py>(
    py: Python<'py>,
    rank: u32,
    m: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let budget = make_budget(max_bits, max_steps)?;
    let d = PyDict::new(py);
    d.set_item("rank", rank)?;
    match hyperop::r_factorize(Rank(rank), &m, &budget).map_err(hypothesis_err)? {
        RFactorOutcome::Factored(f) => {
            d.set_item("components", f.components)?;
            d.set_item("complete", f.complete)?;
            d.set_item("decompositions", Vec::<(Natural, Natural)>::new())?;
        }
        RFactorOutcome::NoPrimeFactorization { decompositions } => {
            d.set_item("components", py.None())?;
            d.set_item("complete", true)?;
            d.set_item("decompositions", decompositions)?;
        }
    }
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (rank, n_max, *, max_bits=None, max_steps=None))]
fn hypothesis_scan<'py>(
    py: Python<'py>,
    rank: u32,
    n_max: Natural,
    max_bits: Option<u64>,
    max_steps: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let budget = make_budget(max_bits, max_steps)?;
    let report = hyperop::hypothesis_scan(Rank(rank), &n_max, &budget).map_err(hypothesis_err)?;
    let entries = report
        .entries
        .iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("value", e.value.clone())?;
            d.set_item("decompositions", e.decompositions.clone())?;
            d.set_item("factorizations", e.factorizations.clone())?;
            d.set_item("factorizer_agrees", e.factorizer_agrees)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("rank", rank)?;
    d.set_item("n_max", report.n_max.clone())?;
    d.set_item("compound", report.compound.clone())?;
    d.set_item("entries", entries)?;
    d.set_item("counterexamples", report.counterexamples.clone())?;
    d.set_item("existence_gaps", report.existence_gaps.clone())?;
    d.set_item("disagreements", report.disagreements.clone())?;
    d.set_item("uniqueness_holds", report.uniqueness_holds())?;
    d.set_item("summary", report.summary())?;
    Ok(d)
}

/// H_r(a, x) by literal recursion on the schema, or None above oracle scale.
#[pyfunction]
fn oracle_hyper(r: u32, a: Natural, x: Natural) -> Option<Natural> {
    oracle::oracle_hyper(r, &a, &x)
}

/// Every (a, x) with a, x >= 2 and a**x == m.
#[pyfunction]
fn oracle_all_power_reps(m: Natural) -> Vec<(Natural, Natural)> {
    oracle::oracle_all_power_reps(&m).into_iter().collect()
}

#[pymodule]
pub fn pyhyperop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("BudgetExceededError", py.get_type::<BudgetExceededError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("CounterexampleError", py.get_type::<CounterexampleError>())?;
    m.add_class::<PyTower>()?;
    m.add_function(wrap_pyfunction!(hyper_eval, m)?)?;
    m.add_function(wrap_pyfunction!(hyper_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(r_multiplicate, m)?)?;
    m.add_function(wrap_pyfunction!(sgn, m)?)?;
    m.add_function(wrap_pyfunction!(integer_kth_root, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_power_form, m)?)?;
    m.add_function(wrap_pyfunction!(is_biprime, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_prime, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_decomposable, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(common_r_divisors, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(greatest_common_r_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(bi_factorize, m)?)?;
    m.add_function(wrap_pyfunction!(tower_eval, m)?)?;
    m.add_function(wrap_pyfunction!(biprime_root, m)?)?;
    m.add_function(wrap_pyfunction!(lemma2_witness_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_uniqueness, m)?)?;
    m.add_function(wrap_pyfunction!(r_factorize, m)?)?;
    m.add_function(wrap_pyfunction!(hypothesis_scan, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_hyper, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_all_power_reps, m)?)?;
    Ok(())
}
