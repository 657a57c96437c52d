//! Python bindings: state classes for the three families, the region
//! scanner driven by JSON configs, and the oracle self-test.

use std::path::PathBuf;

use fidelity_gap::gaussian_single::{
    displaced_sts1, fidelity_gaussian1, is_nonclassical_sts1, photon_stats, STS1Params, SingleModeGaussian,
};
use fidelity_gap::gaussian_two::{
    fidelity_sts2, gaussian_b_discord, is_separable, sts2_coeffs, symplectic_spectrum, STS2Params,
};
use fidelity_gap::qubit::{
    is_separable_pd, negativity, pd_discord, pd_eigenvalues, pd_fidelity, qubit_fidelity, BlochVector,
    PauliDiagonalCoeffs,
};
use fidelity_gap::{figures, report, selftest, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) | Error::InsufficientCutoff { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Two-qubit state diagonal in the Bell basis.
#[pyclass(frozen, skip_from_py_object)]
struct PauliDiagonal {
    inner: PauliDiagonalCoeffs,
}

#[pymethods]
impl PauliDiagonal {
    #[new]
    fn new(c1: f64, c2: f64, c3: f64) -> PyResult<Self> {
        let inner = PauliDiagonalCoeffs::new(c1, c2, c3);
        inner.require_physical().map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn werner(cw: f64) -> PyResult<Self> {
        Ok(Self {
            inner: fidelity_gap::qubit::werner(cw).map_err(py_err)?,
        })
    }

    #[getter]
    fn coeffs(&self) -> (f64, f64, f64) {
        (self.inner.c1, self.inner.c2, self.inner.c3)
    }

    fn eigenvalues(&self) -> [f64; 4] {
        pd_eigenvalues(self.inner).0
    }

    fn fidelity(&self, other: PyRef<'_, Self>) -> PyResult<f64> {
        pd_fidelity(self.inner, other.inner).map_err(py_err)
    }

    fn negativity(&self) -> PyResult<f64> {
        negativity(self.inner).map_err(py_err)
    }

    /// Discord in bits.
    fn discord(&self) -> PyResult<f64> {
        pd_discord(self.inner).map_err(py_err)
    }

    fn is_separable(&self) -> PyResult<bool> {
        is_separable_pd(self.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("PauliDiagonal({}, {}, {})", self.inner.c1, self.inner.c2, self.inner.c3)
    }
}

/// Displaced single-mode squeezed thermal state `D(x) S(r) ν(N)`.
#[pyclass(frozen, skip_from_py_object)]
struct STS1 {
    params: STS1Params,
    x: f64,
    state: SingleModeGaussian,
}

#[pymethods]
impl STS1 {
    #[new]
    #[pyo3(signature = (s, mu, x = 0.0))]
    fn new(s: f64, mu: f64, x: f64) -> PyResult<Self> {
        let params = STS1Params::new(s, mu).map_err(py_err)?;
        let state = displaced_sts1(params, x).map_err(py_err)?;
        Ok(Self { params, x, state })
    }

    #[getter]
    fn params(&self) -> (f64, f64, f64) {
        (self.params.s, self.params.mu, self.x)
    }

    fn fidelity(&self, other: PyRef<'_, Self>) -> PyResult<f64> {
        fidelity_gaussian1(&self.state, &other.state).map_err(py_err)
    }

    /// `(mean, variance, fano)`; the Fano factor is `None` for zero mean.
    fn photon_stats(&self) -> PyResult<(f64, f64, Option<f64>)> {
        let st = photon_stats(&self.state).map_err(py_err)?;
        Ok((st.mean_n, st.var_n, st.fano))
    }

    /// P-function nonclassicality of the undisplaced part.
    fn is_nonclassical(&self) -> bool {
        is_nonclassical_sts1(self.params)
    }

    fn is_subpoissonian(&self) -> PyResult<bool> {
        fidelity_gap::gaussian_single::is_subpoissonian(&self.state).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("STS1(s={}, mu={}, x={})", self.params.s, self.params.mu, self.x)
    }
}

/// Two-mode squeezed thermal state with total photons `n`, squeezing
/// fraction `beta` and thermal split `gamma`.
#[pyclass(frozen, skip_from_py_object)]
struct STS2 {
    inner: STS2Params,
}

#[pymethods]
impl STS2 {
    #[new]
    fn new(n: f64, beta: f64, gamma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: STS2Params::new(n, beta, gamma).map_err(py_err)?,
        })
    }

    #[getter]
    fn params(&self) -> (f64, f64, f64) {
        (self.inner.n_tot, self.inner.beta, self.inner.gamma)
    }

    /// Covariance coefficients `(A, B, C)`.
    fn coefficients(&self) -> PyResult<(f64, f64, f64)> {
        let m = sts2_coeffs(self.inner).map_err(py_err)?;
        Ok((m.a, m.b, m.c))
    }

    /// `(d_minus, d_plus, dt_minus, dt_plus)`.
    fn symplectic_spectrum(&self) -> PyResult<(f64, f64, f64, f64)> {
        let s = symplectic_spectrum(sts2_coeffs(self.inner).map_err(py_err)?).map_err(py_err)?;
        Ok((s.d_minus, s.d_plus, s.dt_minus, s.dt_plus))
    }

    fn is_separable(&self) -> PyResult<bool> {
        is_separable(self.inner).map_err(py_err)
    }

    /// Gaussian B-discord in nats.
    fn discord(&self) -> PyResult<f64> {
        gaussian_b_discord(self.inner).map_err(py_err)
    }

    fn fidelity(&self, other: PyRef<'_, Self>) -> PyResult<f64> {
        fidelity_sts2(self.inner, other.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "STS2(n={}, beta={}, gamma={})",
            self.inner.n_tot, self.inner.beta, self.inner.gamma
        )
    }
}

/// Fidelity of two single-qubit states given by Bloch vectors.
#[pyfunction]
fn bloch_fidelity(r: (f64, f64, f64), t: (f64, f64, f64)) -> PyResult<f64> {
    qubit_fidelity(BlochVector::new(r.0, r.1, r.2), BlochVector::new(t.0, t.1, t.2)).map_err(py_err)
}

/// Preset config of a figure as a JSON string.
#[pyfunction]
fn figure_config(id: &str) -> PyResult<String> {
    figures::preset(id)
        .map(|c| c.to_json())
        .ok_or_else(|| PyValueError::new_err(format!("unknown figure '{id}'")))
}

/// Runs a JSON scan config. Returns the `summary.json` text and, when
/// `out` is given, also writes `records.csv` and `summary.json` there.
#[pyfunction]
#[pyo3(signature = (config, out = None))]
fn run_scan(py: Python<'_>, config: &str, out: Option<PathBuf>) -> PyResult<String> {
    let cfg = report::ScanConfig::from_json(config).map_err(py_err)?;
    let run = py.detach(|| report::run_config(&cfg)).map_err(py_err)?;
    if let Some(dir) = out {
        report::write_outputs(&run, &dir).map_err(py_err)?;
    }
    Ok(report::summary_json(&run))
}

/// Oracle checks as `(name, passed, detail)` tuples.
#[pyfunction]
#[pyo3(signature = (seed = selftest::DEFAULT_SEED))]
fn run_selftest(py: Python<'_>, seed: u64) -> PyResult<Vec<(String, bool, String)>> {
    let checks = py.detach(|| selftest::run(seed)).map_err(py_err)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect())
}

#[pymodule(name = "fidelity_gap")]
fn fidelity_gap_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PauliDiagonal>()?;
    m.add_class::<STS1>()?;
    m.add_class::<STS2>()?;
    m.add_function(wrap_pyfunction!(bloch_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(figure_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
