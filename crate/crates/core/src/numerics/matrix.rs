//! Small dense complex matrices (dimensions 2-4).
//!
//! Everything in this crate lives in Hilbert-space dimension at most four, so
//! matrices are stored inline in a fixed 16-slot buffer and all operations are
//! straightforward O(n³) loops.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// Dense complex matrix of dimension 2, 3 or 4, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((2..=MAX_DIM).contains(&dim), "dimension must be 2..=4");
        CMatrix {
            dim,
            data: [Complex64::ZERO; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_rows(dim: usize, rows: &[Complex64]) -> Self {
        assert_eq!(rows.len(), dim * dim);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = rows[i * dim + j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..self.dim {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] += rhs[(i, j)];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] -= rhs[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] *= factor;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest |a_ij - conj(a_ji)| over all entry pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - rhs[(i, j)]).norm());
            }
        }
        worst
    }

    /// Kronecker product of two 2x2 matrices, basis order |00>,|01>,|10>,|11>.
    pub fn kron2(a: &CMatrix, b: &CMatrix) -> CMatrix {
        assert_eq!(a.dim, 2);
        assert_eq!(b.dim, 2);
        let mut out = CMatrix::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * MAX_DIM + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * MAX_DIM + j]
    }
}

/// Validated Hermitian matrix. Construction checks `a_ij = conj(a_ji)` to
/// absolute tolerance 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix(CMatrix);

pub const HERMITICITY_TOL: f64 = 1e-12;

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        // Symmetrize so downstream algebra sees an exactly Hermitian matrix.
        let mut s = m;
        for i in 0..m.dim() {
            s[(i, i)] = Complex64::new(s[(i, i)].re, 0.0);
            for j in (i + 1)..m.dim() {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                s[(i, j)] = avg;
                s[(j, i)] = avg.conj();
            }
        }
        Ok(HermitianMatrix(s))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(CMatrix::identity(dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        HermitianMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

/// Pauli matrix σ_k for k in 0..=3 with σ_0 the identity and
/// (σ_1, σ_2, σ_3) = (σ_x, σ_y, σ_z).
pub fn pauli(k: usize) -> CMatrix {
    let z = Complex64::ZERO;
    let one = Complex64::ONE;
    let i = Complex64::I;
    let rows = match k {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -i, i, z],
        3 => [one, z, z, -one],
        _ => panic!("Pauli index out of range"),
    };
    CMatrix::from_rows(2, &rows)
}

/// σ_a ⊗ σ_b as a 4x4 matrix.
pub fn pauli_tensor(a: usize, b: usize) -> CMatrix {
    CMatrix::kron2(&pauli(a), &pauli(b))
}
