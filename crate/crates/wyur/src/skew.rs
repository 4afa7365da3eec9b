//! Skew information of operators and channels.
//!
//! The central object is the tilde matrix [sqrt(rho), K]: skew information
//! is half its squared Hilbert-Schmidt norm, the correlation measure is half
//! the inner product of two tilde matrices, and the channel quantity sums
//! over a Kraus list. Channel skew information does not depend on which
//! Kraus representation is supplied; `channel_invariance_check` exercises
//! exactly that.

use num_complex::Complex64;

use crate::matcore::{hs_inner, ComplexMatrix};
use crate::quantum::{unitary_residual, DensityState, KrausChannel};
use crate::{Error, Result};

/// Rounding noise below this magnitude is reported as exactly zero.
const NOISE_FLOOR: f64 = 1e-12;

/// The commutator [sqrt(rho), K] for one operator.
#[derive(Debug, Clone)]
pub struct TildeMatrix {
    matrix: ComplexMatrix,
    source_label: String,
}

impl TildeMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }
}

/// Tilde matrices for a whole channel, in Kraus order.
#[derive(Debug, Clone)]
pub struct TildeSet {
    tildes: Vec<TildeMatrix>,
}

impl TildeSet {
    pub fn tildes(&self) -> &[TildeMatrix] {
        &self.tildes
    }

    pub fn len(&self) -> usize {
        self.tildes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tildes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TildeMatrix> {
        self.tildes.iter()
    }
}

fn check_dims(state: &DensityState, k: &ComplexMatrix) -> Result<()> {
    if k.rows() != state.dim() || k.cols() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but the state has dimension {}",
            k.rows(),
            k.cols(),
            state.dim()
        )));
    }
    Ok(())
}

/// Computes [sqrt(rho), K] = sqrt(rho) K - K sqrt(rho).
pub fn tilde(state: &DensityState, k: &ComplexMatrix) -> Result<TildeMatrix> {
    tilde_labeled(state, k, "operator")
}

fn tilde_labeled(
    state: &DensityState,
    k: &ComplexMatrix,
    label: impl Into<String>,
) -> Result<TildeMatrix> {
    check_dims(state, k)?;
    let s = state.sqrt_rho();
    let matrix = s.matmul(k)?.sub(&k.matmul(s)?)?;
    Ok(TildeMatrix {
        matrix,
        source_label: label.into(),
    })
}

/// Tilde matrices for every Kraus operator of a channel.
pub fn tilde_set(state: &DensityState, ch: &KrausChannel) -> Result<TildeSet> {
    let tildes = ch
        .kraus()
        .iter()
        .enumerate()
        .map(|(i, k)| tilde_labeled(state, k, format!("{}[{}]", ch.label(), i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TildeSet { tildes })
}

/// Half the squared Hilbert-Schmidt norm of a tilde matrix, with the
/// rounding-noise floor applied.
pub(crate) fn half_norm_sqr(t: &ComplexMatrix) -> f64 {
    let value = 0.5 * t.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
    if (-NOISE_FLOOR..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

/// Skew information of one operator: half tr([sqrt(rho),K]^H [sqrt(rho),K]).
pub fn skew_info_op(state: &DensityState, k: &ComplexMatrix) -> Result<f64> {
    let t = tilde(state, k)?;
    let value = 0.5 * hs_inner(t.matrix(), t.matrix())?.re;
    if (-NOISE_FLOOR..0.0).contains(&value) {
        Ok(0.0)
    } else {
        Ok(value)
    }
}

/// Skew information of a channel: the sum over its Kraus operators.
pub fn skew_info_channel(state: &DensityState, ch: &KrausChannel) -> Result<f64> {
    let mut total = 0.0;
    for k in ch.kraus() {
        total += skew_info_op(state, k)?;
    }
    Ok(total)
}

/// Correlation measure: half the inner product of the two tilde matrices.
/// Conjugate-symmetric in its operator arguments; corr(A, A) recovers the
/// skew information of A.
pub fn corr_wy(state: &DensityState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    let ta = tilde(state, a)?;
    let tb = tilde(state, b)?;
    Ok(0.5 * hs_inner(ta.matrix(), tb.matrix())?)
}

/// Evaluates channel skew information for the original Kraus list and for
/// the mixed list K'_i = sum_j u_ij K_j, returning both values. For unitary
/// u the two agree, which is the representation independence of the channel
/// quantity.
pub fn channel_invariance_check(
    state: &DensityState,
    ch: &KrausChannel,
    unitary_mix: &ComplexMatrix,
) -> Result<(f64, f64)> {
    let n = ch.len();
    if unitary_mix.rows() != n || unitary_mix.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "mixing matrix is {}x{} but the channel has {} operators",
            unitary_mix.rows(),
            unitary_mix.cols(),
            n
        )));
    }
    let residual = unitary_residual(unitary_mix);
    if residual > 1e-10 {
        return Err(Error::NotUnitaryMix { residual });
    }

    let mut mixed_ops = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = ComplexMatrix::zeros(ch.dim(), ch.dim());
        for (j, k) in ch.kraus().iter().enumerate() {
            acc = acc.add(&k.scale(unitary_mix.get(i, j)))?;
        }
        mixed_ops.push(acc);
    }
    let mixed = KrausChannel::new(mixed_ops, format!("{} (mixed)", ch.label()))?;

    let original_value = skew_info_channel(state, ch)?;
    let mixed_value = skew_info_channel(state, &mixed)?;
    Ok((original_value, mixed_value))
}
