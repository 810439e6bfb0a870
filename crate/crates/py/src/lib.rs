//! Python bindings. Sequences are plain lists of ints; errors surface as `ValueError`.

use anticont as core;
use core::{
    AsymmetryDecomposition, BigInt, CongruenceSpec, ExtendedAsymmetryType, FoldedParams,
    LambdaParity, Parity, QuotientSequence, RationalPair, TheoremMode,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn seq(v: Vec<BigInt>) -> PyResult<QuotientSequence> {
    QuotientSequence::new(v).map_err(err)
}

fn parse<T: std::str::FromStr<Err = core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn range(q: &QuotientSequence, i: Option<i64>, j: Option<i64>) -> (i64, i64) {
    (i.unwrap_or(0), j.unwrap_or(q.len() as i64 - 1))
}

fn spec(n: BigInt, s: i64) -> PyResult<CongruenceSpec> {
    CongruenceSpec::new(n, s).map_err(err)
}

/// Conventional expansion of alpha/beta, or the one of the given length parity.
#[pyfunction]
#[pyo3(signature = (alpha, beta, parity=None))]
fn expand(alpha: BigInt, beta: BigInt, parity: Option<&str>) -> PyResult<Vec<BigInt>> {
    let pair = RationalPair::new(alpha, beta).map_err(err)?;
    let q = match parity {
        Some(p) => core::expand_with_parity(&pair, parse::<Parity>(p)?).map_err(err)?,
        None => core::expand(&pair),
    };
    Ok(q.into_entries())
}

#[pyfunction]
fn both_expansions(alpha: BigInt, beta: BigInt) -> PyResult<Vec<Vec<BigInt>>> {
    let pair = RationalPair::new(alpha, beta).map_err(err)?;
    Ok(core::both_expansions(&pair)
        .into_iter()
        .map(QuotientSequence::into_entries)
        .collect())
}

/// `(alpha, beta)` with `alpha / beta` equal to the continued fraction.
#[pyfunction]
fn evaluate(q: Vec<BigInt>) -> PyResult<(BigInt, BigInt)> {
    let pair = core::evaluate(&seq(q)?).map_err(err)?;
    Ok((pair.alpha().clone(), pair.beta().clone()))
}

/// `(v_inverse, same_side, parity)`.
#[pyfunction]
fn parity_by_inverse(u: BigInt, v: BigInt) -> PyResult<(BigInt, bool, String)> {
    let p = core::parity_by_inverse(&u, &v).map_err(err)?;
    Ok((p.v_inverse, p.same_side, p.predicted_parity.to_string()))
}

#[pyfunction]
#[pyo3(signature = (q, i=None, j=None))]
fn continuant(q: Vec<BigInt>, i: Option<i64>, j: Option<i64>) -> PyResult<BigInt> {
    let q = seq(q)?;
    let (i, j) = range(&q, i, j);
    core::continuant_range(&q, i, j).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (q, i=None, j=None, recursive=false))]
fn anticontinuant(
    q: Vec<BigInt>,
    i: Option<i64>,
    j: Option<i64>,
    recursive: bool,
) -> PyResult<BigInt> {
    let q = seq(q)?;
    let (i, j) = range(&q, i, j);
    if recursive {
        core::anticontinuant_recursive(&q, i, j).map_err(err)
    } else {
        core::anticontinuant_range(&q, i, j).map_err(err)
    }
}

#[pyfunction]
fn euler_residual(q: Vec<BigInt>, k: i64, l: i64, m: i64, n: i64) -> PyResult<BigInt> {
    core::euler_residual(&seq(q)?, k, l, m, n).map_err(err)
}

#[pyfunction]
fn fibonacci(k: u64) -> BigInt {
    core::fibonacci(k)
}

#[pyclass(frozen, get_all)]
struct Decomposition {
    depth: usize,
    c: BigInt,
    core: Vec<BigInt>,
    pivot: Option<BigInt>,
    outer: Vec<BigInt>,
    /// Parity of the stripped depth, `"even"` or `"odd"`.
    sigma: String,
}

#[pymethods]
impl Decomposition {
    fn is_symmetric(&self) -> bool {
        self.pivot.is_none()
    }

    fn __repr__(&self) -> String {
        format!(
            "Decomposition(depth={}, c={}, core={:?}, pivot={:?}, outer={:?})",
            self.depth,
            self.c,
            self.core
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            self.pivot.as_ref().map(ToString::to_string),
            self.outer
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )
    }
}

#[pyfunction]
fn decompose(q: Vec<BigInt>) -> PyResult<Decomposition> {
    let d = core::decompose(&seq(q)?).map_err(err)?;
    Ok(Decomposition {
        depth: d.depth,
        sigma: d.depth_parity().to_string(),
        c: d.c,
        core: d.core.into_entries(),
        pivot: d.pivot,
        outer: d.outer.into_entries(),
    })
}

#[pyfunction]
#[pyo3(signature = (c, core, pivot, outer=Vec::new()))]
fn compose(
    c: BigInt,
    core: Vec<BigInt>,
    pivot: BigInt,
    outer: Vec<BigInt>,
) -> PyResult<Vec<BigInt>> {
    let outer = seq(outer)?;
    let d = AsymmetryDecomposition {
        depth: outer.len(),
        c,
        core: seq(core)?,
        pivot: Some(pivot),
        outer,
    };
    Ok(core::compose(&d).map_err(err)?.into_entries())
}

#[pyfunction]
#[pyo3(signature = (c, core, sigma="even"))]
fn type_value(c: BigInt, core: Vec<BigInt>, sigma: &str) -> PyResult<BigInt> {
    let t = ExtendedAsymmetryType::new(c, seq(core)?, parse(sigma)?).map_err(err)?;
    core::type_value(&t).map_err(err)
}

/// Every extended type with a given anticontinuant.
#[pyclass(frozen)]
struct TypeCatalog(core::TypeCatalog);

#[pymethods]
impl TypeCatalog {
    /// `(c, core, sigma)` for each finite type.
    fn types(&self) -> Vec<(BigInt, Vec<BigInt>, String)> {
        self.0
            .finite_types
            .iter()
            .map(|t| (t.c.clone(), t.core.entries().to_vec(), t.sigma.to_string()))
            .collect()
    }

    /// `(c, pattern, sigma)` for each one-parameter family, e.g. `(1, "p,1", "even")`.
    fn families(&self) -> Vec<(BigInt, String, String)> {
        self.0
            .parametric_families
            .iter()
            .map(|f| (f.c.clone(), f.pattern_string(), f.sigma.to_string()))
            .collect()
    }

    #[pyo3(signature = (c, core, sigma="even"))]
    fn contains(&self, c: BigInt, core: Vec<BigInt>, sigma: &str) -> PyResult<bool> {
        let t = ExtendedAsymmetryType::new(c, seq(core)?, parse(sigma)?).map_err(err)?;
        Ok(self.0.contains(&t))
    }

    /// Coarse `(c ; x)` strings of the even-depth projection.
    fn coarse(&self) -> Vec<String> {
        let view = self.0.paper_view();
        view.types
            .iter()
            .map(ToString::to_string)
            .chain(
                view.families
                    .iter()
                    .map(|f| format!("({} ; {})", f.c, f.pattern_string())),
            )
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("catalog serializes")
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
#[pyo3(signature = (n, parity="both"))]
fn enumerate_types(n: BigInt, parity: &str) -> PyResult<TypeCatalog> {
    let parity: LambdaParity = parse(parity)?;
    Ok(TypeCatalog(core::enumerate_types(&n, parity).map_err(err)?))
}

#[pyfunction]
fn solve_quadratic(n: BigInt, s: i64, alpha: BigInt) -> PyResult<Vec<BigInt>> {
    Ok(core::solve_quadratic(&spec(n, s)?, &alpha))
}

#[pyfunction]
fn exceptional_candidates(n: BigInt, s: i64) -> PyResult<Vec<BigInt>> {
    Ok(core::exceptional_candidates(&spec(n, s)?)
        .map_err(err)?
        .moduli())
}

#[pyfunction]
#[pyo3(signature = (n, s, include_negated=true))]
fn true_exceptions(n: BigInt, s: i64, include_negated: bool) -> PyResult<Vec<(BigInt, BigInt)>> {
    core::true_exceptions(&spec(n, s)?, include_negated).map_err(err)
}

/// `(b, n, a, eps)` after moving `gcd(a, n)^2` into `b`.
#[pyfunction]
#[pyo3(signature = (b, n, a, eps=1))]
fn folded_normalize(
    b: BigInt,
    n: BigInt,
    a: BigInt,
    eps: i8,
) -> PyResult<(BigInt, BigInt, BigInt, i8)> {
    let p = core::folded_normalize(&FoldedParams::new(b, n, a, eps).map_err(err)?);
    Ok((p.b, p.n, p.a, p.epsilon))
}

/// `(sequence, form, x, pivot)` for the normalized fraction.
#[pyfunction]
#[pyo3(signature = (b, n, a, eps=1))]
fn folded_classify(
    b: BigInt,
    n: BigInt,
    a: BigInt,
    eps: i8,
) -> PyResult<(Vec<BigInt>, u8, Option<BigInt>, BigInt)> {
    let p = core::folded_normalize(&FoldedParams::new(b, n, a, eps).map_err(err)?);
    let c = core::folded_expand_classify(&p).map_err(err)?;
    Ok((
        c.sequence.into_entries(),
        c.form.form,
        c.form.x,
        c.form.pivot,
    ))
}

#[pyclass(frozen)]
struct Report(core::VerificationReport);

#[pymethods]
impl Report {
    fn is_clean(&self) -> bool {
        self.0.is_clean()
    }

    #[getter]
    fn checked(&self) -> u64 {
        self.0.checked
    }

    #[getter]
    fn matches(&self) -> u64 {
        self.0.matches
    }

    #[getter]
    fn violations(&self) -> usize {
        self.0.violations.len()
    }

    /// `(alpha, beta, expansion, coarse type)` for each coarse-mode mismatch.
    fn coarse_counterexamples(&self) -> Vec<(BigInt, BigInt, Vec<BigInt>, String)> {
        self.0
            .coarse_counterexamples
            .iter()
            .map(|c| {
                (
                    c.alpha.clone(),
                    c.beta.clone(),
                    c.expansion.entries().to_vec(),
                    c.coarse_type.to_string(),
                )
            })
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("report serializes")
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (max_alpha=500, trials=10_000, seed=0))]
fn verify_identities(py: Python<'_>, max_alpha: u64, trials: u64, seed: u64) -> PyResult<Report> {
    py.detach(|| core::verify_identities(max_alpha, trials, seed))
        .map(Report)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, s, alpha_max=2000, mode="refined"))]
fn verify_main_theorem(
    py: Python<'_>,
    n: BigInt,
    s: i64,
    alpha_max: u64,
    mode: &str,
) -> PyResult<Report> {
    let spec = spec(n, s)?;
    let mode: TheoremMode = parse(mode)?;
    py.detach(|| core::verify_main_theorem(&spec, alpha_max, mode))
        .map(Report)
        .map_err(err)
}

/// The small-value table as `"csv"`, `"json"` or `"text"`.
#[pyfunction]
#[pyo3(signature = (n_max=6, format="csv"))]
fn build_table(n_max: u64, format: &str) -> PyResult<String> {
    let doc = core::build_table(n_max).map_err(err)?;
    match format {
        "csv" => Ok(doc.to_csv()),
        "text" => Ok(doc.to_text()),
        "json" => Ok(serde_json::to_string(&doc).expect("table serializes")),
        _ => Err(PyValueError::new_err(format!("unknown format {format:?}"))),
    }
}

#[pymodule]
#[pyo3(name = "anticont")]
fn anticont_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Decomposition>()?;
    m.add_class::<TypeCatalog>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(both_expansions, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(parity_by_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(continuant, m)?)?;
    m.add_function(wrap_pyfunction!(anticontinuant, m)?)?;
    m.add_function(wrap_pyfunction!(euler_residual, m)?)?;
    m.add_function(wrap_pyfunction!(fibonacci, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(type_value, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_types, m)?)?;
    m.add_function(wrap_pyfunction!(solve_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(true_exceptions, m)?)?;
    m.add_function(wrap_pyfunction!(folded_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(folded_classify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(build_table, m)?)?;
    Ok(())
}
