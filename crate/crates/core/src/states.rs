//! Two-qubit X states: validation, Fano-Bloch transforms, phase-removal
//! canonicalization, block eigensystem and the closed-form matrix square
//! root.
//!
//! Conventions used everywhere in the crate: Pauli labels (σ1, σ2, σ3) =
//! (x, y, z) and computational-basis ordering |00>, |01>, |10>, |11>. An X
//! state is nonzero only on the main diagonal (ρ11, ρ22, ρ33, ρ44) and the
//! anti-diagonal (ρ14, ρ23 and conjugates).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::matrix::{CMatrix, HermitianMatrix};

/// Invariant tolerance: deviations at most this size are healed silently.
const HEAL_TOL: f64 = 1e-12;
/// Deviations beyond this are rejected as invalid states.
const REJECT_TOL: f64 = 1e-9;
/// A 2x2 block with `t + 2√d` below this is treated as identically zero when
/// taking the closed-form square root (the 0/0 limit of the block formulas).
const DEGENERATE_BLOCK_TOL: f64 = 1e-14;

/// Validated two-qubit X-state density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: Complex64,
    rho23: Complex64,
}

impl XState {
    /// Validating constructor. Sub-tolerance defects (trace drift, tiny
    /// negative populations, tiny coherence excess over the block bound) are
    /// healed; anything larger than 1e-9 is rejected with the violated
    /// invariant named.
    pub fn new(populations: [f64; 4], rho14: Complex64, rho23: Complex64) -> Result<Self> {
        let [mut p1, mut p2, mut p3, mut p4] = populations;
        for p in [&mut p1, &mut p2, &mut p3, &mut p4] {
            if *p < 0.0 {
                if *p < -REJECT_TOL {
                    return Err(Error::InvalidState(format!(
                        "population positivity: population {p} < 0"
                    )));
                }
                *p = 0.0;
            }
        }

        let trace = p1 + p2 + p3 + p4;
        if (trace - 1.0).abs() > REJECT_TOL {
            return Err(Error::InvalidState(format!("unit trace: trace = {trace}")));
        }
        let (mut rho14, mut rho23) = (rho14, rho23);
        if trace != 1.0 {
            let inv = 1.0 / trace;
            p1 *= inv;
            p2 *= inv;
            p3 *= inv;
            p4 *= inv;
            rho14 *= inv;
            rho23 *= inv;
        }

        // 2x2 block positivity (Cauchy-Schwarz on each anti-diagonal block).
        let clamp_block = |off: &mut Complex64, pa: f64, pb: f64, name: &str| -> Result<()> {
            let bound = pa * pb;
            let excess = off.norm_sqr() - bound;
            if excess > REJECT_TOL {
                return Err(Error::InvalidState(format!(
                    "block positivity ({name}): |off|^2 = {} > {} = product of populations",
                    off.norm_sqr(),
                    bound
                )));
            }
            if excess > 0.0 {
                *off *= bound.max(0.0).sqrt() / off.norm();
            }
            Ok(())
        };
        clamp_block(&mut rho14, p1, p4, "rho14")?;
        clamp_block(&mut rho23, p2, p3, "rho23")?;

        Ok(XState {
            rho11: p1,
            rho22: p2,
            rho33: p3,
            rho44: p4,
            rho14,
            rho23,
        })
    }

    /// Bell-diagonal state (1/4)(I⊗I + Σ c_i σ_i⊗σ_i). In the computational
    /// basis the populations are (1±c3)/4 and the coherences (c1∓c2)/4.
    pub fn from_bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c3p = 0.25 * (1.0 + c3);
        let c3m = 0.25 * (1.0 - c3);
        XState::new(
            [c3p, c3m, c3m, c3p],
            Complex64::new(0.25 * (c1 - c2), 0.0),
            Complex64::new(0.25 * (c1 + c2), 0.0),
        )
    }

    pub fn maximally_mixed() -> Self {
        XState::new([0.25; 4], Complex64::ZERO, Complex64::ZERO).unwrap()
    }

    /// Pure state a|00> + d|11> (or, with `inner` set, a|01> + d|10>),
    /// normalized by the caller.
    pub fn pure_superposition(a: Complex64, d: Complex64, inner: bool) -> Result<Self> {
        let (pa, pd) = (a.norm_sqr(), d.norm_sqr());
        let off = a * d.conj();
        if inner {
            XState::new([0.0, pa, pd, 0.0], Complex64::ZERO, off)
        } else {
            XState::new([pa, 0.0, 0.0, pd], off, Complex64::ZERO)
        }
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }
    pub fn rho22(&self) -> f64 {
        self.rho22
    }
    pub fn rho33(&self) -> f64 {
        self.rho33
    }
    pub fn rho44(&self) -> f64 {
        self.rho44
    }
    pub fn rho14(&self) -> Complex64 {
        self.rho14
    }
    pub fn rho23(&self) -> Complex64 {
        self.rho23
    }

    /// Embed into a dense 4x4 Hermitian matrix.
    pub fn to_matrix(&self) -> HermitianMatrix {
        self.as_xmatrix().embed()
    }

    pub fn as_xmatrix(&self) -> XMatrix {
        XMatrix {
            diag: [self.rho11, self.rho22, self.rho33, self.rho44],
            m14: self.rho14,
            m23: self.rho23,
        }
    }

    /// Fano-Bloch correlation tensor T_αβ = Tr ρ (σ_α ⊗ σ_β).
    pub fn to_fano_bloch(&self) -> FanoBloch {
        FanoBloch::from_x_matrix(&self.as_xmatrix())
    }

    /// Phase-removal canonicalization: the Fano-Bloch coefficients of the
    /// locally rotated state whose anti-diagonal entries are |ρ14|, |ρ23|.
    pub fn canonicalize(&self) -> TildeR {
        let a14 = self.rho14.norm();
        let a23 = self.rho23.norm();
        TildeR {
            r11: 2.0 * (a23 + a14),
            r22: 2.0 * (a23 - a14),
            r33: 1.0 - 2.0 * (self.rho22 + self.rho33),
            r03: 2.0 * (self.rho11 + self.rho33) - 1.0,
            r30: 2.0 * (self.rho11 + self.rho22) - 1.0,
        }
    }

    /// Block traces/determinants, eigenvalues and their square roots from the
    /// closed 2x2-block formulas.
    pub fn eigensystem(&self) -> Result<XEigensystem> {
        let t1 = self.rho11 + self.rho44;
        let t2 = self.rho22 + self.rho33;
        // Determinants below the rounding scale of their own products are
        // indistinguishable from zero; the square roots taken downstream
        // would otherwise amplify that noise to ~1e-9.
        let det = |prod: f64, coh: f64| {
            let d = prod - coh;
            if d.abs() < 16.0 * f64::EPSILON * (prod + coh) {
                0.0
            } else {
                d
            }
        };
        let d1 = det(self.rho11 * self.rho44, self.rho14.norm_sqr());
        let d2 = det(self.rho22 * self.rho33, self.rho23.norm_sqr());

        let clamp = |x: f64, what: &str| -> Result<f64> {
            if x < -HEAL_TOL {
                return Err(Error::Numeric(format!(
                    "negative radicand {what} = {x} on a supposedly PSD state"
                )));
            }
            Ok(x.max(0.0))
        };

        let d1c = clamp(d1, "d1")?;
        let d2c = clamp(d2, "d2")?;
        let disc1 = clamp(t1 * t1 - 4.0 * d1c, "t1^2 - 4 d1")?.sqrt();
        let disc2 = clamp(t2 * t2 - 4.0 * d2c, "t2^2 - 4 d2")?.sqrt();

        let lambda = [
            0.5 * (t1 + disc1),
            0.5 * (t2 + disc2),
            0.5 * (t2 - disc2),
            0.5 * (t1 - disc1),
        ];

        // √λ from the radical identities (half-sums of √(t ± 2√d)), which
        // stay accurate when a block nearly vanishes.
        let sp1 = clamp(t1 + 2.0 * d1c.sqrt(), "t1 + 2√d1")?.sqrt();
        let sm1 = clamp(t1 - 2.0 * d1c.sqrt(), "t1 - 2√d1")?.sqrt();
        let sp2 = clamp(t2 + 2.0 * d2c.sqrt(), "t2 + 2√d2")?.sqrt();
        let sm2 = clamp(t2 - 2.0 * d2c.sqrt(), "t2 - 2√d2")?.sqrt();
        let sqrt_lambda = [
            0.5 * (sp1 + sm1),
            0.5 * (sp2 + sm2),
            0.5 * (sp2 - sm2),
            0.5 * (sp1 - sm1),
        ];

        Ok(XEigensystem {
            t1,
            d1: d1c,
            t2,
            d2: d2c,
            lambda,
            sqrt_lambda,
        })
    }

    /// Closed-form square root of the density matrix together with its
    /// Fano-Bloch coefficients. A numerically vanished 2x2 block maps to a
    /// zero block (the limit of the closed form).
    pub fn sqrt(&self) -> Result<(XMatrix, SqrtFanoBloch)> {
        let es = self.eigensystem()?;
        let (t1, d1, t2, d2) = (es.t1, es.d1, es.t2, es.d2);

        let mut root = XMatrix {
            diag: [0.0; 4],
            m14: Complex64::ZERO,
            m23: Complex64::ZERO,
        };

        let n1 = t1 + 2.0 * d1.sqrt();
        if n1 >= DEGENERATE_BLOCK_TOL {
            let inv = 1.0 / n1.sqrt();
            root.diag[0] = (self.rho11 + d1.sqrt()) * inv;
            root.diag[3] = (self.rho44 + d1.sqrt()) * inv;
            root.m14 = self.rho14 * inv;
        }
        let n2 = t2 + 2.0 * d2.sqrt();
        if n2 >= DEGENERATE_BLOCK_TOL {
            let inv = 1.0 / n2.sqrt();
            root.diag[1] = (self.rho22 + d2.sqrt()) * inv;
            root.diag[2] = (self.rho33 + d2.sqrt()) * inv;
            root.m23 = self.rho23 * inv;
        }

        let fb = FanoBloch::from_x_matrix(&root);
        let coeffs = SqrtFanoBloch {
            r00: fb.get(0, 0),
            r03: fb.get(0, 3),
            r30: fb.get(3, 0),
            r11: fb.get(1, 1),
            r12: fb.get(1, 2),
            r21: fb.get(2, 1),
            r22: fb.get(2, 2),
            r33: fb.get(3, 3),
        };
        Ok((root, coeffs))
    }
}

/// Hermitian matrix with X-shaped support (not necessarily unit trace); this
/// is the natural home of √ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XMatrix {
    pub diag: [f64; 4],
    pub m14: Complex64,
    pub m23: Complex64,
}

impl XMatrix {
    pub fn embed(&self) -> HermitianMatrix {
        let mut m = CMatrix::zeros(4);
        for i in 0..4 {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
        }
        m[(0, 3)] = self.m14;
        m[(3, 0)] = self.m14.conj();
        m[(1, 2)] = self.m23;
        m[(2, 1)] = self.m23.conj();
        HermitianMatrix::new(m).expect("X matrix is Hermitian by construction")
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }
}

/// Full 4x4 Fano-Bloch tensor T_αβ of a two-qubit operator, T[0][0] equal to
/// the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanoBloch {
    t: [[f64; 4]; 4],
}

impl FanoBloch {
    /// Coefficients of an X-shaped Hermitian matrix, derived from
    /// T_αβ = Tr M (σ_α ⊗ σ_β) on the X support.
    pub fn from_x_matrix(m: &XMatrix) -> Self {
        let [a, b, c, d] = m.diag;
        let mut t = [[0.0; 4]; 4];
        t[0][0] = a + b + c + d;
        t[0][3] = a - b + c - d;
        t[3][0] = a + b - c - d;
        t[3][3] = a - b - c + d;
        t[1][1] = 2.0 * (m.m14 + m.m23).re;
        t[2][2] = 2.0 * (m.m23 - m.m14).re;
        t[1][2] = 2.0 * (m.m23 - m.m14).im;
        t[2][1] = -2.0 * (m.m14 + m.m23).im;
        FanoBloch { t }
    }

    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.t[alpha][beta]
    }

    #[cfg(test)]
    pub(crate) fn set(&mut self, alpha: usize, beta: usize, value: f64) {
        self.t[alpha][beta] = value;
    }

    /// Rebuild the X state. Fails if any entry outside the X support exceeds
    /// 1e-12 or the tensor is not normalized.
    pub fn to_x_state(&self) -> Result<XState> {
        const X_SUPPORT: [(usize, usize); 8] = [
            (0, 0),
            (0, 3),
            (3, 0),
            (3, 3),
            (1, 1),
            (2, 2),
            (1, 2),
            (2, 1),
        ];
        for row in 0..4 {
            for col in 0..4 {
                if !X_SUPPORT.contains(&(row, col)) && self.t[row][col].abs() > HEAL_TOL {
                    return Err(Error::NotXShaped {
                        row,
                        col,
                        value: self.t[row][col],
                    });
                }
            }
        }
        if (self.t[0][0] - 1.0).abs() > HEAL_TOL {
            return Err(Error::InvalidState(format!(
                "normalization: T[0][0] = {}",
                self.t[0][0]
            )));
        }

        let (t03, t30, t33) = (self.t[0][3], self.t[3][0], self.t[3][3]);
        let (t11, t22, t12, t21) = (self.t[1][1], self.t[2][2], self.t[1][2], self.t[2][1]);
        let populations = [
            0.25 * (1.0 + t03 + t30 + t33),
            0.25 * (1.0 - t03 + t30 - t33),
            0.25 * (1.0 + t03 - t30 - t33),
            0.25 * (1.0 - t03 - t30 + t33),
        ];
        let rho14 = Complex64::new(0.25 * (t11 - t22), -0.25 * (t12 + t21));
        let rho23 = Complex64::new(0.25 * (t11 + t22), 0.25 * (t12 - t21));
        XState::new(populations, rho14, rho23)
    }
}

/// Fano-Bloch coefficients of the phase-canonicalized state ρ̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeR {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r03: f64,
    pub r30: f64,
}

/// Block data and spectrum of an X state: t_i, d_i are the trace and
/// determinant of the outer (1,4) and inner (2,3) blocks; `lambda` holds
/// (λ1, λ2, λ3, λ4) in the block labelling with λ1 ≥ λ4 and λ2 ≥ λ3.
#[derive(Debug, Clone, Copy)]
pub struct XEigensystem {
    pub t1: f64,
    pub d1: f64,
    pub t2: f64,
    pub d2: f64,
    pub lambda: [f64; 4],
    pub sqrt_lambda: [f64; 4],
}

/// Fano-Bloch coefficients R_χδ of √ρ, normalized as
/// √ρ = (1/4) Σ R_χδ σ_χ ⊗ σ_δ.
#[derive(Debug, Clone, Copy)]
pub struct SqrtFanoBloch {
    pub r00: f64,
    pub r03: f64,
    pub r30: f64,
    pub r11: f64,
    pub r12: f64,
    pub r21: f64,
    pub r22: f64,
    pub r33: f64,
}

/// Deterministic samplers for the randomized verification batteries.
pub mod sampling {
    use super::*;
    use rand::Rng;

    /// Random X state: populations from normalized positive weights,
    /// coherences uniform inside the block-positivity disc with a random
    /// phase.
    pub fn random_x_state<R: Rng>(rng: &mut R) -> XState {
        let mut p = [0.0f64; 4];
        let mut total = 0.0;
        for v in &mut p {
            *v = rng.random::<f64>() + 1e-6;
            total += *v;
        }
        for v in &mut p {
            *v /= total;
        }
        let mut coherence = |bound: f64| {
            let mag = bound.sqrt() * rng.random::<f64>();
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(mag, phase)
        };
        let rho14 = coherence(p[0] * p[3]);
        let rho23 = coherence(p[1] * p[2]);
        XState::new(p, rho14, rho23).expect("sampled state is valid by construction")
    }

    /// Random Bell-diagonal correlation triple, rejection-sampled from the
    /// physical tetrahedron.
    pub fn random_bell_triple<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
        loop {
            let c1 = rng.random::<f64>() * 2.0 - 1.0;
            let c2 = rng.random::<f64>() * 2.0 - 1.0;
            let c3 = rng.random::<f64>() * 2.0 - 1.0;
            if (c1 - c2).abs() <= 1.0 + c3 && (c1 + c2).abs() <= 1.0 - c3 {
                return (c1, c2, c3);
            }
        }
    }

    /// Random pure X state, alternating between the outer (|00>,|11>) and
    /// inner (|01>,|10>) superposition families.
    pub fn random_pure_x_state<R: Rng>(rng: &mut R) -> XState {
        let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
        let phase = rng.random::<f64>() * std::f64::consts::TAU;
        let a = Complex64::new(theta.cos(), 0.0);
        let d = Complex64::from_polar(theta.sin(), phase);
        let inner = rng.random::<bool>();
        XState::pure_superposition(a, d, inner).expect("pure X state is valid")
    }
}
