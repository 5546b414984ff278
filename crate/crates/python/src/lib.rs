use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use ::azcong::checks::{self, CheckError, CheckId, EvalPath, IdentityId, PrimeContext, SweepOptions};
use ::azcong::{exactnum, padic, sequences, BigRat};

create_exception!(azcong, IllPosedError, PyArithmeticError);

fn check_err(e: CheckError) -> PyErr {
    match e {
        CheckError::IllPosed { .. } => IllPosedError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &BigRat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn parse_check(id: &str) -> PyResult<CheckId> {
    id.parse().map_err(PyValueError::new_err)
}

#[pyclass(frozen, skip_from_py_object, module = "azcong")]
#[derive(Clone)]
pub struct CheckResult {
    #[pyo3(get)]
    check: String,
    #[pyo3(get)]
    p: u64,
    #[pyo3(get)]
    m: u32,
    #[pyo3(get)]
    lhs: BigInt,
    #[pyo3(get)]
    rhs: BigInt,
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    detail: Option<String>,
}

impl From<&checks::CheckResult> for CheckResult {
    fn from(r: &checks::CheckResult) -> Self {
        Self {
            check: r.check.to_string(),
            p: r.p,
            m: r.m,
            lhs: r.lhs.value().clone(),
            rhs: r.rhs.value().clone(),
            passed: r.passed,
            detail: r.detail.clone(),
        }
    }
}

#[pymethods]
impl CheckResult {
    #[getter]
    fn modulus(&self) -> String {
        format!("{}^{}", self.p, self.m)
    }

    fn __repr__(&self) -> String {
        format!(
            "CheckResult(check={:?}, p={}, m={}, lhs={}, rhs={}, passed={})",
            self.check,
            self.p,
            self.m,
            self.lhs,
            self.rhs,
            if self.passed { "True" } else { "False" }
        )
    }
}

#[pyclass(frozen, module = "azcong")]
pub struct SweepReport {
    inner: checks::SweepReport,
}

#[pymethods]
impl SweepReport {
    #[getter]
    fn pmin(&self) -> u64 {
        self.inner.pmin
    }

    #[getter]
    fn pmax(&self) -> u64 {
        self.inner.pmax
    }

    #[getter]
    fn checks(&self) -> Vec<String> {
        self.inner.checks.iter().map(|c| c.to_string()).collect()
    }

    #[getter]
    fn results(&self) -> Vec<CheckResult> {
        self.inner.results.iter().map(CheckResult::from).collect()
    }

    #[getter]
    fn failures(&self) -> Vec<CheckResult> {
        self.inner.failures.iter().map(CheckResult::from).collect()
    }

    #[getter]
    fn elapsed_ms(&self) -> u128 {
        self.inner.elapsed.as_millis()
    }

    fn all_passed(&self) -> bool {
        self.inner.all_passed()
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        ::azcong::cli::write_csv(&self.inner, &mut buf).map_err(value_err)?;
        String::from_utf8(buf).map_err(value_err)
    }

    #[pyo3(signature = (timing = true))]
    fn to_json(&self, timing: bool) -> PyResult<String> {
        let mut buf = Vec::new();
        ::azcong::cli::write_json(&self.inner, &mut buf, timing).map_err(value_err)?;
        String::from_utf8(buf).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.results.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepReport(pmin={}, pmax={}, total={}, failed={})",
            self.inner.pmin,
            self.inner.pmax,
            self.inner.total(),
            self.inner.failures.len()
        )
    }
}

#[pyfunction]
fn binomial(n: BigInt, k: BigInt) -> PyResult<BigInt> {
    exactnum::binomial(&n, &k).map_err(value_err)
}

#[pyfunction]
fn az_g(n: u64) -> BigInt {
    sequences::az_g(n)
}

#[pyfunction]
fn harmonic(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &sequences::harmonic(n))
}

#[pyfunction]
fn euler_exact(n: u64) -> BigInt {
    sequences::euler_exact(n)
}

#[pyfunction]
fn euler_mod(n: u64, p: u64) -> PyResult<BigInt> {
    sequences::euler_mod(n, p)
        .map(|r| r.value().clone())
        .map_err(value_err)
}

#[pyfunction]
fn fermat_quotient2(p: u64) -> PyResult<BigInt> {
    sequences::fermat_quotient2(p).map_err(value_err)
}

#[pyfunction]
fn sum_central_h2(py: Python<'_>, m: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &sequences::sum_central_h2(m))
}

#[pyfunction]
fn sum_central_h_over_k1(py: Python<'_>, m: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &sequences::sum_central_h_over_k1(m))
}

#[pyfunction]
fn sum_alt_inv_sq(py: Python<'_>, m: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &sequences::sum_alt_inv_sq(m))
}

#[pyfunction]
fn sum_g_over_16(py: Python<'_>, m: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &sequences::sum_g_over_16(m))
}

/// `num/den` reduced modulo `p^m`.
#[pyfunction]
#[pyo3(signature = (num, den, p, m = 1))]
fn reduce(num: BigInt, den: BigInt, p: u64, m: u32) -> PyResult<BigInt> {
    if den == BigInt::from(0) {
        return Err(value_err("zero denominator"));
    }
    let md = padic::PrimePowerModulus::new(p, m).map_err(value_err)?;
    padic::reduce(&BigRat::new(num, den), &md)
        .map(|r| r.value().clone())
        .map_err(|e| IllPosedError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (num, p, den = BigInt::from(1)))]
fn vp(num: BigInt, p: u64, den: BigInt) -> PyResult<i64> {
    if den == BigInt::from(0) {
        return Err(value_err("zero denominator"));
    }
    padic::vp(&BigRat::new(num, den), p).map_err(value_err)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    padic::is_prime(n)
}

#[pyfunction]
fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    padic::primes_in(lo, hi)
}

#[pyfunction]
#[pyo3(signature = (check, p, exact = false))]
fn run_check(py: Python<'_>, check: &str, p: u64, exact: bool) -> PyResult<CheckResult> {
    let id = parse_check(check)?;
    py.detach(|| {
        let ctx = PrimeContext::new(p)?;
        if exact {
            ctx.run_cross_validated(id)
        } else {
            ctx.run(id, EvalPath::Residue)
        }
    })
    .map(|r| CheckResult::from(&r))
    .map_err(check_err)
}

#[pyfunction]
fn run_identity(identity: &str, n: u64) -> PyResult<bool> {
    let id: IdentityId = identity.parse().map_err(PyValueError::new_err)?;
    checks::run_identity(id, n).map_err(check_err)
}

#[pyfunction]
fn run_consistency(p: u64) -> PyResult<bool> {
    checks::run_consistency(p).map_err(check_err)
}

/// Runs checks over all primes in `[pmin, pmax]`. `checks` is `"all"`,
/// `"modp"`, `"p3"`, a comma-separated string, or a list of ids.
#[pyfunction]
#[pyo3(signature = (pmin, pmax, checks = None, workers = None, exact = false))]
fn sweep(
    py: Python<'_>,
    pmin: u64,
    pmax: u64,
    checks: Option<&Bound<'_, PyAny>>,
    workers: Option<usize>,
    exact: bool,
) -> PyResult<SweepReport> {
    let selector = match checks {
        None => "all".to_string(),
        Some(c) => match c.extract::<String>() {
            Ok(s) => s,
            Err(_) => c.extract::<Vec<String>>()?.join(","),
        },
    };
    let ids = ::azcong::cli::parse_check_set(&selector).map_err(PyValueError::new_err)?;
    let options = SweepOptions {
        workers: workers.unwrap_or(SweepOptions::default().workers),
        exact,
    };
    py.detach(|| ::azcong::checks::sweep(pmin, pmax, &ids, options))
        .map(|inner| SweepReport { inner })
        .map_err(check_err)
}

#[pymodule(name = "azcong")]
fn azcong_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("IllPosedError", m.py().get_type::<IllPosedError>())?;
    m.add_class::<CheckResult>()?;
    m.add_class::<SweepReport>()?;
    m.add(
        "CHECK_IDS",
        CheckId::ALL.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    )?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(az_g, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(euler_exact, m)?)?;
    m.add_function(wrap_pyfunction!(euler_mod, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_quotient2, m)?)?;
    m.add_function(wrap_pyfunction!(sum_central_h2, m)?)?;
    m.add_function(wrap_pyfunction!(sum_central_h_over_k1, m)?)?;
    m.add_function(wrap_pyfunction!(sum_alt_inv_sq, m)?)?;
    m.add_function(wrap_pyfunction!(sum_g_over_16, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(vp, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(primes_in, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_identity, m)?)?;
    m.add_function(wrap_pyfunction!(run_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
