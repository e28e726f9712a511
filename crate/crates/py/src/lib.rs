//! Python bindings. Elements cross the boundary as strings in the tower's
//! term form (`2+1u`); reports come back as dicts.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use skewcodes::acd::{self, AcdParams};
use skewcodes::tlrs::{self, TlrsCode, TlrsParams};
use skewcodes::{
    acd_record, build_code, tlrs_record, ArithOp, DistanceMode, Elem, EvalRule, FieldTower, Level,
    QuotientCtx, RecordOptions, SearchStrategy,
};

create_exception!(skewcodes, SkewcodesError, PyValueError);

fn err(e: skewcodes::Error) -> PyErr {
    SkewcodesError::new_err(e.to_string())
}

fn bad(msg: String) -> PyErr {
    SkewcodesError::new_err(msg)
}

pub fn parse_level(s: &str) -> Result<Level, String> {
    match s {
        "prime" => Ok(Level::Prime),
        "mid" => Ok(Level::Mid),
        "top" => Ok(Level::Top),
        _ => Err(format!("level must be prime, mid or top, got {s:?}")),
    }
}

pub fn parse_distance(s: &str) -> Result<DistanceMode, String> {
    match s {
        "auto" => Ok(DistanceMode::IfWithinLimit),
        "always" => Ok(DistanceMode::Required),
        "never" => Ok(DistanceMode::Skip),
        _ => Err(format!("distance must be auto, always or never, got {s:?}")),
    }
}

pub fn parse_rule(s: &str) -> Result<EvalRule, String> {
    match s {
        "norm_preimage" => Ok(EvalRule::NormPreimage),
        "power_of_lambda" => Ok(EvalRule::PowerOfLambda),
        _ => Err(format!(
            "rule must be norm_preimage or power_of_lambda, got {s:?}"
        )),
    }
}

pub fn parse_strategy(s: &str) -> Result<SearchStrategy, String> {
    match s {
        "geometric" => Ok(SearchStrategy::Geometric),
        "exhaustive" => Ok(SearchStrategy::Exhaustive),
        "auto" => Ok(SearchStrategy::Auto),
        _ => Err(format!(
            "strategy must be geometric, exhaustive or auto, got {s:?}"
        )),
    }
}

fn options(oracle: bool, distance: &str, limit: Option<u128>) -> PyResult<RecordOptions> {
    Ok(RecordOptions {
        oracle,
        distance: parse_distance(distance).map_err(bad)?,
        limit: limit.unwrap_or(tlrs::DEFAULT_ENUM_LIMIT),
    })
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, rec: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(rec).map_err(|e| bad(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// The tower `F_p ⊆ F_q ⊆ L`, `q = p^m`, `[L : F_q] = r`.
#[pyclass(frozen, name = "Tower", module = "skewcodes")]
pub struct PyTower {
    inner: Arc<FieldTower>,
}

impl PyTower {
    fn elem(&self, level: Level, s: &str) -> PyResult<u32> {
        self.inner.parse(level, s).map(|e| e.value).map_err(err)
    }

    fn show(&self, level: Level, v: u32) -> String {
        self.inner.format(Elem::new(level, v))
    }

    fn arith(&self, a: &str, b: &str, level: &str, op: ArithOp) -> PyResult<String> {
        let level = parse_level(level).map_err(bad)?;
        let t = &self.inner;
        let r = t
            .arithmetic(
                t.parse(level, a).map_err(err)?,
                t.parse(level, b).map_err(err)?,
                op,
            )
            .map_err(err)?;
        Ok(t.format(r))
    }
}

#[pymethods]
impl PyTower {
    #[new]
    #[pyo3(signature = (p, m = 1, r = 2))]
    fn new(p: u32, m: u32, r: u32) -> PyResult<Self> {
        Ok(PyTower {
            inner: Arc::new(FieldTower::new(p, m, r).map_err(err)?),
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[pyo3(signature = (a, b, level = "top"))]
    fn add(&self, a: &str, b: &str, level: &str) -> PyResult<String> {
        self.arith(a, b, level, ArithOp::Add)
    }

    #[pyo3(signature = (a, b, level = "top"))]
    fn sub(&self, a: &str, b: &str, level: &str) -> PyResult<String> {
        self.arith(a, b, level, ArithOp::Sub)
    }

    #[pyo3(signature = (a, b, level = "top"))]
    fn mul(&self, a: &str, b: &str, level: &str) -> PyResult<String> {
        self.arith(a, b, level, ArithOp::Mul)
    }

    #[pyo3(signature = (a, b, level = "top"))]
    fn div(&self, a: &str, b: &str, level: &str) -> PyResult<String> {
        self.arith(a, b, level, ArithOp::Div)
    }

    /// `x^{q^h}` on `L`.
    #[pyo3(signature = (x, h = 1))]
    fn frob(&self, x: &str, h: i64) -> PyResult<String> {
        let v = self.elem(Level::Top, x)?;
        Ok(self.show(Level::Top, self.inner.frob(v, h)))
    }

    fn trace(&self, x: &str) -> PyResult<String> {
        let v = self.elem(Level::Top, x)?;
        Ok(self.show(Level::Mid, self.inner.trace(v)))
    }

    fn norm(&self, x: &str) -> PyResult<String> {
        let v = self.elem(Level::Top, x)?;
        Ok(self.show(Level::Mid, self.inner.norm(v)))
    }

    /// `α` with `α^q = −α`.
    fn skew_unit(&self) -> PyResult<String> {
        Ok(self.inner.format(self.inner.skew_unit().map_err(err)?))
    }

    /// The subgroup of `F_q^*` of order `ell`.
    fn subgroup(&self, ell: u64) -> PyResult<Vec<String>> {
        let s = self.inner.subgroup_lambda(ell).map_err(err)?;
        Ok(s.into_iter().map(|e| self.inner.format(e)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Tower(p={}, m={}, r={})",
            self.inner.p(),
            self.inner.m(),
            self.inner.r()
        )
    }
}

/// A twisted linearized Reed-Solomon code in the sum-rank metric.
#[pyclass(frozen, name = "TlrsCode", module = "skewcodes")]
pub struct PyTlrsCode {
    code: TlrsCode,
}

#[pymethods]
impl PyTlrsCode {
    #[new]
    #[pyo3(signature = (tower, k, eta, h = 0, ell = None, lambda_ = None, rule = "norm_preimage"))]
    fn new(
        tower: &PyTower,
        k: usize,
        eta: &str,
        h: usize,
        ell: Option<u64>,
        lambda_: Option<Vec<String>>,
        rule: &str,
    ) -> PyResult<Self> {
        let t = tower.inner.clone();
        let ctx = match (lambda_, ell) {
            (Some(l), _) => {
                let l = l
                    .iter()
                    .map(|s| tower.elem(Level::Mid, s))
                    .collect::<PyResult<Vec<_>>>()?;
                QuotientCtx::with_lambda(t.clone(), l)
            }
            (None, Some(ell)) => QuotientCtx::new(t.clone(), ell),
            (None, None) => return Err(bad("one of ell or lambda_ is required".into())),
        }
        .map_err(err)?
        .with_rule(parse_rule(rule).map_err(bad)?);
        let eta = tower.elem(Level::Top, eta)?;
        let params = TlrsParams::new(Arc::new(ctx), k, h, eta).map_err(err)?;
        Ok(PyTlrsCode {
            code: build_code(&params).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.code.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.code.ctx().dim_k()
    }

    fn gram(&self) -> Vec<Vec<String>> {
        tlrs::gram(&self.code, false)
            .gram
            .format_rows(self.code.tower())
    }

    fn gram_det(&self) -> String {
        let d = tlrs::gram(&self.code, false).det_value;
        self.code.tower().format(Elem::new(Level::Mid, d))
    }

    fn lcd_criterion(&self) -> bool {
        tlrs::lcd_criterion(&self.code.params)
    }

    /// `dim (C ∩ C⊥)` by linear algebra on the ambient space.
    fn hull_dim(&self) -> usize {
        tlrs::hull_oracle(&self.code)
    }

    fn dual_dim(&self) -> usize {
        tlrs::dual_basis(&self.code).dim()
    }

    #[pyo3(signature = (limit = None))]
    fn min_distance(&self, limit: Option<u128>) -> PyResult<usize> {
        tlrs::min_sum_rank_distance(&self.code, limit.unwrap_or(tlrs::DEFAULT_ENUM_LIMIT))
            .map_err(err)
    }

    #[pyo3(signature = (oracle = true, distance = "auto", limit = None))]
    fn report<'py>(
        &self,
        py: Python<'py>,
        oracle: bool,
        distance: &str,
        limit: Option<u128>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let rec = tlrs_record(&self.code, &options(oracle, distance, limit)?).map_err(err)?;
        to_dict(py, &rec)
    }
}

/// An additive twisted Reed-Solomon code over `F_{q²}`.
#[pyclass(frozen, name = "AcdCode", module = "skewcodes")]
pub struct PyAcdCode {
    params: AcdParams,
}

impl PyAcdCode {
    fn fmt(&self, level: Level, v: u32) -> String {
        self.params.tower.format(Elem::new(level, v))
    }
}

#[pymethods]
impl PyAcdCode {
    #[new]
    #[pyo3(signature = (tower, k, lambda_, gamma = None))]
    fn new(tower: &PyTower, k: usize, lambda_: Vec<String>, gamma: Option<&str>) -> PyResult<Self> {
        let lambda = lambda_
            .iter()
            .map(|s| tower.elem(Level::Mid, s))
            .collect::<PyResult<Vec<_>>>()?;
        let gamma = match gamma {
            Some(g) => tower.elem(Level::Top, g)?,
            None => tower.inner.skew_unit().map_err(err)?.value,
        };
        Ok(PyAcdCode {
            params: AcdParams::new(tower.inner.clone(), k, lambda, gamma).map_err(err)?,
        })
    }

    #[getter]
    fn lambda_(&self) -> Vec<String> {
        self.params
            .lambda
            .iter()
            .map(|&l| self.fmt(Level::Mid, l))
            .collect()
    }

    #[getter]
    fn gamma(&self) -> String {
        self.fmt(Level::Top, self.params.gamma)
    }

    #[getter]
    fn k(&self) -> usize {
        self.params.k
    }

    /// Trace of the trace-Hermitian Gram matrix of the generator.
    fn t_matrix(&self) -> Vec<Vec<String>> {
        acd::t_matrix(&self.params).format_rows(&self.params.tower)
    }

    /// Whether the trace-Hermitian hull is trivial, by `det T ≠ 0`.
    fn acd_check(&self) -> bool {
        acd::acd_check(&self.params).matrix
    }

    /// `Δ` from the structured blocks, or `None` when they do not apply.
    fn delta(&self) -> Option<String> {
        acd::acd_check(&self.params)
            .structured
            .ok()
            .map(|s| self.fmt(Level::Mid, s.delta))
    }

    /// Hull dimension over `F_q` by brute-force linear algebra.
    fn acd_oracle(&self) -> PyResult<usize> {
        acd::acd_oracle(&self.params).map_err(err)
    }

    fn mds_criterion(&self) -> bool {
        acd::mds_criterion(&self.params)
    }

    #[pyo3(signature = (limit = None))]
    fn min_distance(&self, limit: Option<u128>) -> PyResult<usize> {
        acd::min_distance_oracle(&self.params, limit.unwrap_or(acd::DEFAULT_ENUM_LIMIT))
            .map_err(err)
    }

    /// Codeword for `(a_0, a_1, ..., a_k)`; `a_0` and `a_k` in `F_q`.
    fn encode(&self, message: Vec<String>) -> PyResult<Vec<String>> {
        let t = &self.params.tower;
        let msg = message
            .iter()
            .map(|s| t.parse(Level::Top, s).map(|e| e.value).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        let word = acd::encode(&self.params, &msg).map_err(err)?;
        Ok(word.into_iter().map(|v| self.fmt(Level::Top, v)).collect())
    }

    #[pyo3(signature = (oracle = true, distance = "auto", limit = None))]
    fn report<'py>(
        &self,
        py: Python<'py>,
        oracle: bool,
        distance: &str,
        limit: Option<u128>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let rec = acd_record(&self.params, &options(oracle, distance, limit)?).map_err(err)?;
        to_dict(py, &rec)
    }
}

/// Finds `Λ` making the `γ = α` code ACD and MDS. Returns
/// `(code, strategy_used, candidates_scanned)`.
#[pyfunction]
#[pyo3(signature = (tower, k, ell, strategy = "auto"))]
fn lambda_search(
    tower: &PyTower,
    k: usize,
    ell: usize,
    strategy: &str,
) -> PyResult<(PyAcdCode, String, usize)> {
    let s = parse_strategy(strategy).map_err(bad)?;
    let found = acd::lambda_search(tower.inner.clone(), k, ell, s).map_err(err)?;
    let used = format!("{:?}", found.strategy).to_lowercase();
    Ok((
        PyAcdCode {
            params: found.params,
        },
        used,
        found.scanned,
    ))
}

#[pymodule(name = "skewcodes")]
mod module {
    #[pymodule_export]
    use super::{lambda_search, PyAcdCode, PyTlrsCode, PyTower, SkewcodesError};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn option_parsing() {
        assert_eq!(parse_level("mid"), Ok(Level::Mid));
        assert!(parse_level("bottom").is_err());
        assert_eq!(parse_distance("never"), Ok(DistanceMode::Skip));
        assert_eq!(parse_rule("power_of_lambda"), Ok(EvalRule::PowerOfLambda));
        assert_eq!(parse_strategy("exhaustive"), Ok(SearchStrategy::Exhaustive));
        assert!(parse_strategy("random").is_err());
    }
}
