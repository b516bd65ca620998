//! Python bindings for the seqdi crate: parameter presets, correlation
//! tables, the security ledger, and the entropy pipeline.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use seqdi::correlations::CorrelationTable as CoreTable;
use seqdi::entropy::EntropyReport as CoreReport;
use seqdi::protocol::{Preset, ProtocolParams as CoreParams};
use seqdi::security::SecurityLedger as CoreLedger;

fn err(e: seqdi::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// ---------------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------------

/// Measurement angles and weak-measurement strength for one protocol run.
#[pyclass(name = "ProtocolParams", frozen)]
#[derive(Clone)]
struct PyProtocolParams {
    inner: CoreParams,
    preset: Option<Preset>,
}

#[pymethods]
impl PyProtocolParams {
    #[new]
    fn new(
        alpha0: f64,
        alpha1: f64,
        beta1: f64,
        theta: f64,
        delta: f64,
    ) -> PyResult<Self> {
        let inner = CoreParams::new(alpha0, alpha1, beta1, theta, delta).map_err(err)?;
        Ok(Self { inner, preset: None })
    }

    /// CHSH-optimal angles at weak-measurement strength `theta`.
    #[staticmethod]
    fn chsh(theta: f64) -> PyResult<Self> {
        let preset = Preset::Chsh;
        let inner = preset.params(theta).map_err(err)?;
        Ok(Self { inner, preset: Some(preset) })
    }

    /// Tilted one-parameter family at `omega` in (0, pi/6].
    #[staticmethod]
    fn wooltorton(omega: f64, theta: f64) -> PyResult<Self> {
        let preset = Preset::wooltorton(omega).map_err(err)?;
        let inner = preset.params(theta).map_err(err)?;
        Ok(Self { inner, preset: Some(preset) })
    }

    #[getter]
    fn alpha0(&self) -> f64 {
        self.inner.alpha0
    }

    #[getter]
    fn alpha1(&self) -> f64 {
        self.inner.alpha1
    }

    #[getter]
    fn beta1(&self) -> f64 {
        self.inner.beta1
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    /// True away from the excluded strength endpoints.
    fn security_valid(&self) -> bool {
        self.inner.security_valid()
    }

    /// Copy with a different weak-measurement strength.
    fn with_theta(&self, theta: f64) -> PyResult<Self> {
        let inner = self.inner.with_theta(theta).map_err(err)?;
        Ok(Self { inner, preset: self.preset })
    }

    /// Copy with a different second-measurement tilt.
    fn with_delta(&self, delta: f64) -> Self {
        Self { inner: self.inner.with_delta(delta), preset: self.preset }
    }

    fn __repr__(&self) -> String {
        format!(
            "ProtocolParams(alpha0={}, alpha1={}, beta1={}, theta={}, delta={})",
            self.inner.alpha0, self.inner.alpha1, self.inner.beta1, self.inner.theta,
            self.inner.delta
        )
    }
}

// ---------------------------------------------------------------------------
// correlations
// ---------------------------------------------------------------------------

/// Joint outcome probabilities for the long and short branches.
#[pyclass(name = "CorrelationTable", frozen)]
struct PyCorrelationTable {
    inner: CoreTable,
}

#[pymethods]
impl PyCorrelationTable {
    /// Table from the sequential instrument picture.
    #[staticmethod]
    fn povm(params: &PyProtocolParams) -> PyResult<Self> {
        Ok(Self { inner: seqdi::correlations::joint_povm(&params.inner).map_err(err)? })
    }

    /// Table from the dilated three-qubit picture.
    #[staticmethod]
    fn dilated(params: &PyProtocolParams) -> PyResult<Self> {
        Ok(Self { inner: seqdi::correlations::joint_dilated(&params.inner).map_err(err)? })
    }

    /// P(a, b1, b2 | x, y1 = 0, y2).
    fn long(&self, a: i8, b1: i8, b2: i8, x: u8, y2: u8) -> f64 {
        self.inner.long(a, b1, b2, x, y2)
    }

    /// P(a, b1 | x, y1 = 1).
    fn short(&self, a: i8, b1: i8, x: u8) -> f64 {
        self.inner.short(a, b1, x)
    }

    /// Largest entrywise gap to another table.
    fn max_abs_diff(&self, other: &PyCorrelationTable) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }
}

// ---------------------------------------------------------------------------
// security ledger
// ---------------------------------------------------------------------------

/// The twenty state-and-observable expectation values fixed by the boundary.
#[pyclass(name = "SecurityLedger", frozen)]
struct PySecurityLedger {
    inner: CoreLedger,
}

#[pymethods]
impl PySecurityLedger {
    /// Ledger from the closed-form target values.
    #[staticmethod]
    fn closed_form(params: &PyProtocolParams) -> PyResult<Self> {
        Ok(Self { inner: seqdi::security::ledger_closed_form(&params.inner).map_err(err)? })
    }

    /// Ledger evaluated on the dilated realization.
    #[staticmethod]
    fn born(params: &PyProtocolParams) -> PyResult<Self> {
        Ok(Self { inner: seqdi::security::ledger_born(&params.inner).map_err(err)? })
    }

    /// Entry labels, in ledger order.
    #[staticmethod]
    fn labels() -> Vec<String> {
        seqdi::security::LEDGER_LABELS.iter().map(|s| s.to_string()).collect()
    }

    /// Entry values, in ledger order.
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    /// Value for one label, or None for an unknown label.
    fn get(&self, label: &str) -> Option<f64> {
        self.inner.get(label)
    }

    /// Largest entrywise gap to another ledger.
    fn max_abs_diff(&self, other: &PySecurityLedger) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

/// Certified randomness figures for one parameter point.
#[pyclass(name = "EntropyReport", frozen)]
struct PyEntropyReport {
    inner: CoreReport,
}

#[pymethods]
impl PyEntropyReport {
    #[getter]
    fn x_star(&self) -> u8 {
        self.inner.x_star
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn h_min(&self) -> f64 {
        self.inner.h_min
    }

    #[getter]
    fn h_vn(&self) -> f64 {
        self.inner.h_vn
    }

    #[getter]
    fn security_valid(&self) -> bool {
        self.inner.security_valid
    }

    fn __repr__(&self) -> String {
        format!(
            "EntropyReport(x_star={}, theta={}, delta={}, h_min={}, h_vn={}, security_valid={})",
            self.inner.x_star, self.inner.theta, self.inner.delta, self.inner.h_min,
            self.inner.h_vn, self.inner.security_valid
        )
    }
}

// ---------------------------------------------------------------------------
// module functions
// ---------------------------------------------------------------------------

/// Bell-operator coefficients (c1, c2, c3, c4) at the given strength and tilt.
#[pyfunction]
fn coefficients(theta: f64, delta: f64) -> PyResult<(f64, f64, f64, f64)> {
    let c = seqdi::bell::coefficients(theta, delta).map_err(err)?;
    Ok((c.c1, c.c2, c.c3, c.c4))
}

/// Min- and von Neumann entropy of the double outcome at input `x_star`.
#[pyfunction]
fn entropies(params: &PyProtocolParams, x_star: u8) -> PyEntropyReport {
    PyEntropyReport { inner: seqdi::entropy::entropies(&params.inner, x_star) }
}

/// Entropies recomputed from an explicit correlation table.
#[pyfunction]
fn entropies_from_table(
    table: &PyCorrelationTable,
    params: &PyProtocolParams,
    x_star: u8,
) -> PyEntropyReport {
    PyEntropyReport {
        inner: seqdi::entropy::entropies_from_table(&table.inner, &params.inner, x_star),
    }
}

/// ||S psi|| for the Bell operator built from the realization itself.
#[pyfunction]
fn saturation_residual(params: &PyProtocolParams) -> PyResult<f64> {
    seqdi::bell::saturation_residual(&params.inner).map_err(err)
}

/// Distance 2 ||S psi|| of the behaviour from the certifying boundary.
#[pyfunction]
fn boundary_residual(params: &PyProtocolParams) -> PyResult<f64> {
    seqdi::bell::boundary_residual(&params.inner).map_err(err)
}

/// Largest gap between the Born ledger and its closed form.
#[pyfunction]
fn uniqueness_gap(params: &PyProtocolParams) -> PyResult<f64> {
    let report = seqdi::security::uniqueness_check(&params.inner).map_err(err)?;
    Ok(report.max_abs_gap)
}

/// Second-measurement tilt that maximizes h_min, found by grid + refinement.
#[pyfunction]
fn optimize_delta(params: &PyProtocolParams, x_star: u8) -> f64 {
    seqdi::entropy::optimize_delta(&params.inner, x_star)
}

/// Tilted Bell value at `omega` from the Alice-Bob marginals of `params`.
#[pyfunction]
fn i_omega(params: &PyProtocolParams, omega: f64) -> PyResult<f64> {
    let table = seqdi::correlations::joint_povm(&params.inner).map_err(err)?;
    seqdi::bell::i_omega(&table, omega).map_err(err)
}

/// Quantum maximum of the tilted Bell expression at `omega`.
#[pyfunction]
fn tsirelson_bound_omega(omega: f64) -> PyResult<f64> {
    seqdi::bell::tsirelson_bound_omega(omega).map_err(err)
}

/// Best-sign CHSH value over the Alice-Bob marginals of `params`.
#[pyfunction]
fn chsh_best_sign_value(params: &PyProtocolParams) -> PyResult<f64> {
    let table = seqdi::correlations::joint_povm(&params.inner).map_err(err)?;
    Ok(seqdi::bell::chsh_best_sign_value(&table))
}

/// Full self-check suite; returns (name, status, residual) triples.
#[pyfunction]
fn verify(params: &PyProtocolParams) -> PyResult<Vec<(String, String, Option<f64>)>> {
    let results =
        seqdi::checks::verify_suite(&params.inner, params.preset.as_ref()).map_err(err)?;
    Ok(results
        .into_iter()
        .map(|c| {
            let status = match c.status {
                seqdi::checks::CheckStatus::Pass => "pass",
                seqdi::checks::CheckStatus::Fail => "fail",
                seqdi::checks::CheckStatus::Skipped => "skipped",
            };
            (c.name.to_string(), status.to_string(), c.residual)
        })
        .collect())
}

#[pymodule]
fn seqdi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProtocolParams>()?;
    m.add_class::<PyCorrelationTable>()?;
    m.add_class::<PySecurityLedger>()?;
    m.add_class::<PyEntropyReport>()?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(entropies, m)?)?;
    m.add_function(wrap_pyfunction!(entropies_from_table, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_residual, m)?)?;
    m.add_function(wrap_pyfunction!(uniqueness_gap, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_delta, m)?)?;
    m.add_function(wrap_pyfunction!(i_omega, m)?)?;
    m.add_function(wrap_pyfunction!(tsirelson_bound_omega, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_best_sign_value, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
