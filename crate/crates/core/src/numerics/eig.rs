//! Hermitian eigendecomposition by cyclic Jacobi rotations, plus the matrix
//! functions built on it (PSD square root, trace norm).
//!
//! Jacobi is a good fit here: the matrices never exceed 4x4, convergence is
//! quadratic once the off-diagonal mass is small, and the accumulated
//! eigenvector matrix stays unitary to machine precision.

use num_complex::Complex64;

use super::matrix::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Eigenvalue clamp threshold shared by every PSD consumer in the crate:
/// eigenvalues in [-PSD_CLAMP, 0) are treated as exact zeros.
pub const PSD_CLAMP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// Rebuild V diag(λ) V†.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.eigenvectors.dim();
        let mut out = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::ZERO;
                for (k, lam) in self.eigenvalues.iter().enumerate() {
                    acc += self.eigenvectors[(i, k)] * lam * self.eigenvectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// V f(diag(λ)) V† for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let dim = self.eigenvectors.dim();
        let mut out = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::ZERO;
                for (k, lam) in self.eigenvalues.iter().enumerate() {
                    acc += self.eigenvectors[(i, k)] * f(*lam) * self.eigenvectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

fn offdiagonal_norm(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &HermitianMatrix) -> EigenDecomposition {
    let dim = m.dim();
    let mut a = *m.as_cmatrix();
    let mut v = CMatrix::identity(dim);

    let scale = (0..dim)
        .map(|i| a[(i, i)].re.abs())
        .fold(offdiagonal_norm(&a), f64::max)
        .max(1e-300);

    for _sweep in 0..60 {
        if offdiagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[(p, q)];
                let beta = apq.norm();
                if beta <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / beta; // e^{iφ}
                let alpha = a[(p, p)].re;
                let delta = a[(q, q)].re;
                // Rotation angle zeroing the (p,q) entry: tan(2θ) = 2β/(α-δ).
                let tau = (alpha - delta) / (2.0 * beta);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // G is identity except at rows/cols (p,q):
                //   G[p][p] = c, G[p][q] = -s e^{iφ}, G[q][p] = s e^{-iφ}, G[q][q] = c.
                let gpq = -s * phase;
                let gqp = s * phase.conj();

                // A <- G† A G, applied as column then row update.
                for r in 0..dim {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * c + arq * gqp;
                    a[(r, q)] = arp * gpq + arq * c;
                }
                for r in 0..dim {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = c * apr + gqp.conj() * aqr;
                    a[(q, r)] = gpq.conj() * apr + c * aqr;
                }
                for r in 0..dim {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c + vrq * gqp;
                    v[(r, q)] = vrp * gpq + vrq * c;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..dim).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut vectors = CMatrix::zeros(dim);
    let mut values = Vec::with_capacity(dim);
    for (slot, (lam, col)) in pairs.into_iter().enumerate() {
        values.push(lam);
        for r in 0..dim {
            vectors[(r, slot)] = v[(r, col)];
        }
    }

    EigenDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Square root of a positive semidefinite Hermitian matrix through its
/// spectral decomposition. Eigenvalues within `PSD_CLAMP` below zero are
/// clamped; anything lower is an error.
pub fn sqrt_psd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(m);
    let min = eig.eigenvalues[0];
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    let root = eig.apply(|lam| lam.max(0.0).sqrt());
    HermitianMatrix::new(root)
}

/// Trace norm Tr√(A†A) of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    eig_hermitian(m).eigenvalues.iter().map(|l| l.abs()).sum()
}
