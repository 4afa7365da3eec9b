//! Hermitian eigendecomposition by cyclic Jacobi rotations, and the
//! positive-semidefinite matrix square root built on top of it.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Hermiticity threshold for inputs to the eigensolver.
const HERMITIAN_TOL: f64 = 1e-9;
/// Off-diagonal mass must drop below this fraction of the Frobenius norm.
const CONVERGENCE_FACTOR: f64 = 1e-14;
/// A sweep visits every off-diagonal pair once; this caps the sweep count.
const MAX_SWEEPS: usize = 100;

/// Result of [`hermitian_eig`]: eigenvalues ascending, eigenvectors as the
/// columns of a unitary matrix, so M = V diag(lambda) V^H.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds V diag(lambda) V^H.
    ///
    /// The entrywise accumulation mirrors conjugate pairs, so the output is
    /// Hermitian to the last bit.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v.get(i, k) * self.eigenvalues[k] * v.get(j, k).conj();
                }
                if i == j {
                    out.set(i, i, Complex64::new(acc.re, 0.0));
                } else {
                    out.set(i, j, acc);
                    out.set(j, i, acc.conj());
                }
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
///
/// Each rotation is a complex plane rotation chosen to zero one off-diagonal
/// pair; sweeps repeat until the remaining off-diagonal Frobenius mass falls
/// below 1e-14 times the input norm. `tol` bounds the allowed reconstruction
/// residual of the returned decomposition.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }

    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize so rounding in the input cannot bias one triangle.
    for i in 0..n {
        for j in 0..n {
            if i == j {
                a.set(i, i, Complex64::new(a.get(i, i).re, 0.0));
            } else {
                let avg = 0.5 * (a.get(i, j) + a.get(j, i).conj());
                a.set(i, j, avg);
                a.set(j, i, avg.conj());
            }
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_FACTOR * m.frobenius_norm();

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let gamma = (app - aqq) / (2.0 * r);
                let t = if gamma == 0.0 {
                    1.0
                } else {
                    gamma.signum() / (gamma.abs() + (1.0 + gamma * gamma).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Right multiplication by the rotation: mix columns p and q.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp + s * phase.conj() * akq);
                    a.set(k, q, -s * phase * akp + c * akq);
                }
                // Left multiplication by its adjoint: mix rows p and q.
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk + s * phase * aqk);
                    a.set(q, k, -s * phase.conj() * apk + c * aqk);
                }
                // The pivot pair is zero by construction; store it exactly.
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp + s * phase.conj() * vkq);
                    v.set(k, q, -s * phase * vkp + c * vkq);
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k).re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors.set(i, dst, v.get(i, src));
        }
    }

    let decomposition = EigenDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let rebuilt = decomposition.reconstruct();
    let err = rebuilt.max_abs_diff(m)?;
    if err > tol {
        return Err(Error::NoConvergence { sweeps });
    }
    Ok(decomposition)
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in [-clamp_tol, 0) are treated as rounding noise and clamped
/// to zero; anything more negative is rejected.
pub fn psd_sqrt(m: &ComplexMatrix, clamp_tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m, 1e-10)?;
    if let Some(&lowest) = eig.eigenvalues.iter().find(|&&lambda| lambda < -clamp_tol) {
        return Err(Error::NegativeEigenvalue { value: lowest });
    }
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| lambda.max(0.0).sqrt())
        .collect();
    let sqrt = EigenDecomposition {
        eigenvalues: roots,
        eigenvectors: eig.eigenvectors,
    };
    Ok(sqrt.reconstruct())
}
