//! Python bindings for the wyur library.
//!
//! Exposes density states, Kraus channels, skew-information evaluation, and
//! the full bound report to Python. Matrices cross the boundary as nested
//! lists of complex numbers in row-major order.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use wyur::bounds::{self, BoundId};
use wyur::matcore::ComplexMatrix;
use wyur::quantum::{self, DensityState, KrausChannel};
use wyur::skew;

fn pyerr(err: wyur::Error) -> PyErr {
    match err {
        wyur::Error::Io(inner) => PyIOError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(pyerr)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// A validated density matrix.
#[pyclass(name = "DensityState", frozen)]
struct PyDensityState {
    inner: DensityState,
}

#[pymethods]
impl PyDensityState {
    /// Builds a state from an explicit Hermitian trace-one matrix.
    #[staticmethod]
    fn from_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let rho = matrix_from_rows(&rows)?;
        Ok(Self {
            inner: DensityState::new(rho).map_err(pyerr)?,
        })
    }

    /// Qubit state from a Bloch vector with norm at most 1.
    #[staticmethod]
    fn from_bloch(rx: f64, ry: f64, rz: f64) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::state_from_bloch(quantum::BlochVector::new(rx, ry, rz))
                .map_err(pyerr)?,
        })
    }

    /// The builtin ring-state family at angle theta.
    #[staticmethod]
    fn ring(theta: f64) -> Self {
        Self {
            inner: quantum::ring_state(theta),
        }
    }

    /// The maximally mixed state in the given dimension.
    #[staticmethod]
    fn maximally_mixed(dim: usize) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::maximally_mixed(dim).map_err(pyerr)?,
        })
    }

    /// A seeded random full-rank state.
    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::random_state(dim, seed).map_err(pyerr)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.rho())
    }

    fn sqrt_matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.sqrt_rho())
    }

    fn __repr__(&self) -> String {
        format!("DensityState(dim={})", self.inner.dim())
    }
}

/// A quantum channel given by a list of Kraus operators.
#[pyclass(name = "KrausChannel", frozen)]
struct PyKrausChannel {
    inner: KrausChannel,
}

#[pymethods]
impl PyKrausChannel {
    /// Builds a channel from explicit operators, all square of one size.
    #[staticmethod]
    fn from_operators(ops: Vec<Vec<Vec<Complex64>>>, label: &str) -> PyResult<Self> {
        let kraus: Vec<ComplexMatrix> = ops
            .iter()
            .map(|rows| matrix_from_rows(rows))
            .collect::<PyResult<_>>()?;
        Ok(Self {
            inner: KrausChannel::new(kraus, label).map_err(pyerr)?,
        })
    }

    /// A builtin channel by name, e.g. "phase_damping(0.5)" or "rot_y_pi8".
    #[staticmethod]
    fn from_name(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::channel_from_name(name).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn phase_damping(q: f64) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::phase_damping(q).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn bit_flip(q: f64) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::bit_flip(q).map_err(pyerr)?,
        })
    }

    /// The fixed y-axis rotation by pi/8, as a single-operator channel.
    #[staticmethod]
    fn rot_y_pi8() -> Self {
        Self {
            inner: quantum::rotation_unitaries().0,
        }
    }

    /// The fixed z-axis phase rotation by pi/8, as a single-operator channel.
    #[staticmethod]
    fn rot_z_pi8() -> Self {
        Self {
            inner: quantum::rotation_unitaries().1,
        }
    }

    /// A seeded random channel with exactly n_kraus operators.
    #[staticmethod]
    fn random(dim: usize, n_kraus: usize, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: quantum::random_channel(dim, n_kraus, seed).map_err(pyerr)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn operators(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.kraus().iter().map(matrix_to_rows).collect()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn completeness_residual(&self) -> f64 {
        self.inner.completeness_residual()
    }

    /// Applies the channel to a density matrix given as nested lists.
    fn apply(&self, rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
        let rho = matrix_from_rows(&rho)?;
        Ok(matrix_to_rows(&self.inner.apply(&rho).map_err(pyerr)?))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "KrausChannel(label={:?}, dim={}, n={})",
            self.inner.label(),
            self.inner.dim(),
            self.inner.len()
        )
    }
}

/// Uncertainties and every lower bound for one evaluated instance.
#[pyclass(name = "BoundReport", frozen)]
struct PyBoundReport {
    inner: bounds::BoundReport,
}

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn product_uncertainty(&self) -> f64 {
        self.inner.product_uncertainty
    }

    #[getter]
    fn sum_uncertainty(&self) -> f64 {
        self.inner.sum_uncertainty
    }

    /// The value of one bound by its id string.
    fn value(&self, id: &str) -> PyResult<f64> {
        let id = BoundId::parse(id).map_err(pyerr)?;
        self.inner
            .value(id)
            .ok_or_else(|| PyValueError::new_err(format!("report has no value for {id}")))
    }

    /// All (id, value) pairs in canonical order.
    fn bounds(&self) -> Vec<(String, f64)> {
        self.inner
            .bounds
            .iter()
            .map(|(id, v)| (id.as_str().to_string(), *v))
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(product={:.6e}, sum={:.6e})",
            self.inner.product_uncertainty, self.inner.sum_uncertainty
        )
    }
}

/// Skew information of one operator, given as nested lists.
#[pyfunction]
fn skew_info_op(state: PyRef<'_, PyDensityState>, op: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let op = matrix_from_rows(&op)?;
    skew::skew_info_op(&state.inner, &op).map_err(pyerr)
}

/// Skew information of a channel (sum over its Kraus operators).
#[pyfunction]
fn skew_info_channel(
    state: PyRef<'_, PyDensityState>,
    channel: PyRef<'_, PyKrausChannel>,
) -> PyResult<f64> {
    skew::skew_info_channel(&state.inner, &channel.inner).map_err(pyerr)
}

/// The correlation measure between two operators in the given state.
#[pyfunction]
fn corr_wy(
    state: PyRef<'_, PyDensityState>,
    a: Vec<Vec<Complex64>>,
    b: Vec<Vec<Complex64>>,
) -> PyResult<Complex64> {
    let a = matrix_from_rows(&a)?;
    let b = matrix_from_rows(&b)?;
    skew::corr_wy(&state.inner, &a, &b).map_err(pyerr)
}

/// Evaluates both uncertainties and every bound for a state and two channels.
#[pyfunction]
fn evaluate_all(
    state: PyRef<'_, PyDensityState>,
    chan_a: PyRef<'_, PyKrausChannel>,
    chan_b: PyRef<'_, PyKrausChannel>,
) -> PyResult<PyBoundReport> {
    Ok(PyBoundReport {
        inner: bounds::evaluate_all(&state.inner, &chan_a.inner, &chan_b.inner).map_err(pyerr)?,
    })
}

/// The canonical bound id strings, in report order.
#[pyfunction]
fn bound_ids() -> Vec<String> {
    BoundId::ALL
        .iter()
        .map(|id| id.as_str().to_string())
        .collect()
}

fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityState>()?;
    m.add_class::<PyKrausChannel>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(skew_info_op, m)?)?;
    m.add_function(wrap_pyfunction!(skew_info_channel, m)?)?;
    m.add_function(wrap_pyfunction!(corr_wy, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_all, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ids, m)?)?;
    Ok(())
}

#[pymodule]
fn wyur_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
