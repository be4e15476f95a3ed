//! Python bindings for the `cyclerep` core crate.

use pyo3::exceptions::{PyLookupError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cyclerep::bounds::{
    best_cheb_bound, builtin_pub_values, comparison_csv, derivation_csv, table_derivation,
    table_pub_vs_cheb, SeedTable, TABLE_DEGREES,
};
use cyclerep::branches;
use cyclerep::dynamics::{self, LiftConfig};
use cyclerep::polycore::json::{from_json, to_json};
use cyclerep::polycore::{self, parse_rat};
use cyclerep::{pullback, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) | Error::OutOfRange { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::MissingSeed(_) | Error::NoWitness { .. } => PyLookupError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Planar polynomial vector field with exact rational coefficients.
#[pyclass(frozen, module = "cyclerep_py")]
struct VectorField2(polycore::VectorField2);

#[pymethods]
impl VectorField2 {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Self).map_err(py_err)
    }

    /// `(y, -x)`.
    #[staticmethod]
    fn harmonic() -> Self {
        Self(polycore::VectorField2::harmonic())
    }

    /// Radial cubic with a hyperbolic cycle of radius `rho`, given as text
    /// such as `"1/2"`.
    #[staticmethod]
    fn radial_cubic(rho: &str) -> PyResult<Self> {
        Ok(Self(polycore::VectorField2::radial_cubic(
            &parse_rat(rho).map_err(py_err)?,
        )))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    /// Total degree, or `None` for the zero field.
    fn degree(&self) -> Option<u32> {
        self.0.degree().finite()
    }

    fn eval(&self, u: f64, v: f64) -> (f64, f64) {
        let [a, b] = self.0.eval_f64(u, v);
        (a, b)
    }

    fn __repr__(&self) -> String {
        format!("VectorField2(P = {}, Q = {})", self.0.p_comp, self.0.q_comp)
    }
}

/// Univariate polynomial with exact rational coefficients.
#[pyclass(frozen, module = "cyclerep_py")]
struct UniPoly(polycore::UniPoly);

#[pymethods]
impl UniPoly {
    /// Coefficients by increasing power, as rational strings.
    #[new]
    fn new(coeffs: Vec<String>) -> PyResult<Self> {
        let cs = coeffs
            .iter()
            .map(|c| parse_rat(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        Ok(Self(polycore::UniPoly::new(cs)))
    }

    #[staticmethod]
    fn chebyshev(m: usize) -> Self {
        Self(polycore::chebyshev(m))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(polycore::format_rat).collect()
    }

    fn degree(&self) -> Option<u32> {
        self.0.degree().finite()
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.eval_f64(x)
    }

    fn __repr__(&self) -> String {
        format!("UniPoly({})", self.0)
    }
}

/// Separable pullback of a field through `(p(u), p(v))`.
#[pyclass(frozen, module = "cyclerep_py")]
struct PullbackResult(pullback::PullbackResult);

#[pymethods]
impl PullbackResult {
    #[getter]
    fn field(&self) -> VectorField2 {
        VectorField2(self.0.field.clone())
    }

    #[getter]
    fn cover(&self) -> UniPoly {
        UniPoly(self.0.cover_poly.clone())
    }

    #[getter]
    fn degree(&self) -> Option<u32> {
        self.0.field_degree.finite()
    }

    /// Exact check of `DPhi . Y = lambda X o Phi`.
    fn verify(&self, source: &VectorField2) -> bool {
        pullback::verify_conjugacy(&self.0, &source.0)
    }

    fn exact_degree(&self, source: &VectorField2) -> bool {
        pullback::check_exact_degree(&self.0, &source.0)
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }
}

#[pyclass(frozen, get_all, module = "cyclerep_py")]
struct BranchInterval {
    k: usize,
    lo: f64,
    hi: f64,
    increasing: bool,
}

#[pymethods]
impl BranchInterval {
    fn __repr__(&self) -> String {
        format!(
            "BranchInterval(k={}, lo={}, hi={}, increasing={})",
            self.k, self.lo, self.hi, self.increasing
        )
    }
}

fn intervals(set: &branches::BranchSet) -> Vec<BranchInterval> {
    set.intervals
        .iter()
        .map(|b| BranchInterval {
            k: b.index,
            lo: b.lo,
            hi: b.hi,
            increasing: b.direction == branches::Direction::Increasing,
        })
        .collect()
}

/// A located limit cycle.
#[pyclass(frozen, get_all, module = "cyclerep_py")]
struct LimitCycle {
    anchor: (f64, f64),
    period: f64,
    multiplier: f64,
    rect: Option<(usize, usize)>,
    orientation_reversed: bool,
    certified: bool,
}

impl From<&dynamics::LimitCycleRecord> for LimitCycle {
    fn from(r: &dynamics::LimitCycleRecord) -> Self {
        Self {
            anchor: (r.anchor[0], r.anchor[1]),
            period: r.period,
            multiplier: r.multiplier,
            rect: r.rect.map(|b| (b.i, b.j)),
            orientation_reversed: r.orientation_reversed,
            certified: r.certified,
        }
    }
}

#[pymethods]
impl LimitCycle {
    fn __repr__(&self) -> String {
        format!(
            "LimitCycle(rect={:?}, anchor={:?}, multiplier={}, certified={})",
            self.rect, self.anchor, self.multiplier, self.certified
        )
    }
}

/// A replication lower bound `H(N) >= value`.
#[pyclass(frozen, get_all, module = "cyclerep_py")]
struct BoundEntry {
    target_degree: u32,
    value: u64,
    witness: Option<(u32, u32)>,
    source: String,
    chain: String,
}

#[pymethods]
impl BoundEntry {
    fn __repr__(&self) -> String {
        format!("BoundEntry({})", self.chain)
    }
}

#[pyfunction]
fn build_pullback(x: &VectorField2, p: &UniPoly) -> PyResult<PullbackResult> {
    pullback::build_pullback(&x.0, &p.0)
        .map(PullbackResult)
        .map_err(py_err)
}

#[pyfunction]
fn cheb_branches(m: usize) -> PyResult<Vec<BranchInterval>> {
    Ok(intervals(&branches::cheb_branches(m).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (p, tol = 1e-12))]
fn full_branches(p: &UniPoly, tol: f64) -> PyResult<Vec<BranchInterval>> {
    Ok(intervals(
        &branches::full_branch_intervals(&p.0, tol).map_err(py_err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (p, tol = 1e-12))]
fn branch_count(p: &UniPoly, tol: f64) -> PyResult<usize> {
    branches::branch_count(&p.0, tol).map_err(py_err)
}

#[pyfunction]
fn branch_inverse(m: usize, k: usize, y: f64) -> PyResult<f64> {
    branches::branch_inverse(m, k, y).map_err(py_err)
}

/// Lifts the radial cubic's cycle through `T_m`; returns the base cycle and
/// the lifted cycles in `(i, j)` order.
#[pyfunction]
#[pyo3(signature = (m = 3, rho = "1/2", tol = 1e-10))]
fn worked_example(
    py: Python<'_>,
    m: u32,
    rho: &str,
    tol: f64,
) -> PyResult<(LimitCycle, Vec<LimitCycle>)> {
    let rho = parse_rat(rho).map_err(py_err)?;
    let mut cfg = LiftConfig::default();
    cfg.cycle.ret.integ = dynamics::IntegratorConfig::with_tol(tol);
    let rep = py
        .detach(|| dynamics::worked_example(m, &rho, &cfg))
        .map_err(py_err)?;
    Ok((
        LimitCycle::from(&rep.base),
        rep.lifts.iter().map(LimitCycle::from).collect(),
    ))
}

#[pyfunction]
fn best_bound(n: u32) -> PyResult<BoundEntry> {
    let seeds = SeedTable::from_env().map_err(py_err)?;
    let e = best_cheb_bound(n, &seeds).map_err(py_err)?;
    Ok(BoundEntry {
        target_degree: e.target_degree,
        value: e.value,
        witness: e.witness,
        chain: e.chain(),
        source: e.source,
    })
}

/// The published-versus-replicated comparison table as CSV.
#[pyfunction]
fn table1_csv() -> PyResult<String> {
    let seeds = SeedTable::from_env().map_err(py_err)?;
    Ok(comparison_csv(
        &table_pub_vs_cheb(&seeds, &builtin_pub_values()).map_err(py_err)?,
    ))
}

/// The derivation table as CSV.
#[pyfunction]
fn table2_csv() -> PyResult<String> {
    let seeds = SeedTable::from_env().map_err(py_err)?;
    Ok(derivation_csv(
        &table_derivation(&seeds, &TABLE_DEGREES).map_err(py_err)?,
    ))
}

/// `k0 ((N+1)/(n0+1))^2` as a `"num/den"` string.
#[pyfunction]
fn quadratic_ceiling(k0: u64, n0: u64, n: u64) -> PyResult<String> {
    let c = cyclerep::bounds::quadratic_ceiling(k0, n0, n).map_err(py_err)?;
    Ok(format!("{}/{}", c.numer(), c.denom()))
}

#[pymodule]
fn cyclerep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<VectorField2>()?;
    m.add_class::<UniPoly>()?;
    m.add_class::<PullbackResult>()?;
    m.add_class::<BranchInterval>()?;
    m.add_class::<LimitCycle>()?;
    m.add_class::<BoundEntry>()?;
    m.add_function(wrap_pyfunction!(build_pullback, m)?)?;
    m.add_function(wrap_pyfunction!(cheb_branches, m)?)?;
    m.add_function(wrap_pyfunction!(full_branches, m)?)?;
    m.add_function(wrap_pyfunction!(branch_count, m)?)?;
    m.add_function(wrap_pyfunction!(branch_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(worked_example, m)?)?;
    m.add_function(wrap_pyfunction!(best_bound, m)?)?;
    m.add_function(wrap_pyfunction!(table1_csv, m)?)?;
    m.add_function(wrap_pyfunction!(table2_csv, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_ceiling, m)?)?;
    Ok(())
}
