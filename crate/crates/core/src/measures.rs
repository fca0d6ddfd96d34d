//! Correlation quantifiers for two-qubit X states: local quantum uncertainty
//! via the W matrix, trace-distance discord via the X-state closed form with
//! its Bell-diagonal reduction, and Wootters concurrence.
//!
//! Trace-distance discord uses the 1/2-normalized convention throughout: the
//! Bell-diagonal value is half the intermediate of (|c1|, |c2|, |c3|), so the
//! general X-state formula and the Bell-diagonal rule agree on their common
//! domain.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::matrix::{pauli_tensor, CMatrix, HermitianMatrix};
use crate::numerics::{eig_hermitian, sqrt_psd};
use crate::states::XState;

/// A block of the W matrix is dropped to its limit when the product of block
/// radicals falls below this.
const DEGENERATE_W_TOL: f64 = 1e-14;
/// Negative radicands within this of zero are clamped (floating-point drift).
const CLAMP_TOL: f64 = 1e-12;

/// The symmetric 3x3 matrix ω_ij = Tr{√ρ (σ_i⊗I) √ρ (σ_j⊗I)} restricted to
/// the entries that survive on X states: the 13-family vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WMatrix {
    pub w11: f64,
    pub w22: f64,
    pub w33: f64,
    pub w12: f64,
}

impl WMatrix {
    /// Eigenvalues (λ1, λ2, λ3): λ1 ≥ λ2 from the closed 2x2 block, λ3 = w33
    /// (which decouples because the 13-family entries are zero).
    pub fn eigenvalues(&self) -> (f64, f64, f64) {
        let mean = 0.5 * (self.w11 + self.w22);
        let disc = (0.25 * (self.w11 - self.w22).powi(2) + self.w12 * self.w12).sqrt();
        (mean + disc, mean - disc, self.w33)
    }

    pub fn embed(&self) -> HermitianMatrix {
        let mut m = CMatrix::zeros(3);
        m[(0, 0)] = Complex64::new(self.w11, 0.0);
        m[(1, 1)] = Complex64::new(self.w22, 0.0);
        m[(2, 2)] = Complex64::new(self.w33, 0.0);
        m[(0, 1)] = Complex64::new(self.w12, 0.0);
        m[(1, 0)] = Complex64::new(self.w12, 0.0);
        HermitianMatrix::new(m).expect("W matrix is real symmetric")
    }
}

/// The three quantifiers evaluated on one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSet {
    pub lqu: f64,
    pub trace_discord: f64,
    pub concurrence: f64,
}

/// W matrix from the closed forms in the Fano-Bloch coefficients and the
/// block radicals u = √λ1 + √λ4, v = √λ2 + √λ3. Correction terms whose block
/// radical vanishes are set to their (zero) limit.
pub fn w_matrix(x: &XState) -> Result<WMatrix> {
    let es = x.eigensystem()?;
    let u2 = es.t1 + 2.0 * es.d1.sqrt();
    let v2 = es.t2 + 2.0 * es.d2.sqrt();
    let u = u2.sqrt();
    let v = v2.sqrt();
    let uv = u * v;

    let t = x.to_fano_bloch();
    let t03 = t.get(0, 3);
    let t30 = t.get(3, 0);
    let t11 = t.get(1, 1);
    let t22 = t.get(2, 2);
    let t12 = t.get(1, 2);
    let t21 = t.get(2, 1);

    // Expanding ω_ij over the Fano-Bloch coefficients of √ρ shows that only
    // the coherence combinations flip sign between w11 and w22; the
    // (T03² - T30²) population term enters both with the same sign.
    let (w11, w22, w12) = if uv < DEGENERATE_W_TOL {
        (uv, uv, 0.0)
    } else {
        let flip = (t11 * t11 - t22 * t22) + (t12 * t12 - t21 * t21);
        let keep = t03 * t03 - t30 * t30;
        (
            uv + (flip + keep) / (4.0 * uv),
            uv + (keep - flip) / (4.0 * uv),
            (t11 * t21 + t22 * t12) / (2.0 * uv),
        )
    };

    let outer_term = if u2 < DEGENERATE_W_TOL {
        0.0
    } else {
        ((t30 + t03).powi(2) - (t11 - t22).powi(2) - (t12 + t21).powi(2)) / (8.0 * u2)
    };
    let inner_term = if v2 < DEGENERATE_W_TOL {
        0.0
    } else {
        ((t03 - t30).powi(2) - (t11 + t22).powi(2) - (t12 - t21).powi(2)) / (8.0 * v2)
    };
    let w33 = 0.5 * (u2 + v2) + outer_term + inner_term;

    let w = WMatrix { w11, w22, w33, w12 };
    #[cfg(debug_assertions)]
    {
        let direct = w_matrix_direct(x)?;
        debug_assert!(
            (direct[0][0] - w.w11).abs() < 1e-8
                && (direct[1][1] - w.w22).abs() < 1e-8
                && (direct[2][2] - w.w33).abs() < 1e-8
                && (direct[0][1] - w.w12).abs() < 1e-8,
            "closed-form W disagrees with the direct trace evaluation"
        );
    }
    Ok(w)
}

/// Direct evaluation of the full 3x3 ω matrix from its definition,
/// ω_ij = Tr{√ρ (σ_i⊗I) √ρ (σ_j⊗I)}, using the closed-form √ρ. Serves as the
/// cross-check for [`w_matrix`] and for the vanishing of the 13-family.
pub fn w_matrix_direct(x: &XState) -> Result<[[f64; 3]; 3]> {
    let (root, _) = x.sqrt()?;
    let dense = root.embed();
    let mut factors = Vec::with_capacity(3);
    for i in 1..=3 {
        factors.push(dense.as_cmatrix().mul(&pauli_tensor(i, 0)));
    }
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let tr = factors[i].mul(&factors[j]).trace();
            out[i][j] = tr.re;
        }
    }
    Ok(out)
}

/// Local quantum uncertainty: 1 - λ_max(W), in [0, 1].
pub fn lqu(x: &XState) -> Result<f64> {
    let w = w_matrix(x)?;
    let (l1, _, l3) = w.eigenvalues();
    let lmax = l1.max(l3);
    #[cfg(debug_assertions)]
    {
        let spectrum = eig_hermitian(&w.embed());
        debug_assert!(
            (spectrum.eigenvalues[2] - lmax).abs() < 1e-8,
            "2x2-block eigenvalues disagree with the 3x3 solver"
        );
    }
    Ok((1.0 - lmax).clamp(0.0, 1.0))
}

/// Trace-distance discord of an X state (1/2-normalized). The degenerate
/// branch (numerator and denominator both below tolerance) arises for
/// Bell-diagonal states with |c1| = |c2| = |c3| and returns the directional
/// limit R11/2.
pub fn trace_discord(x: &XState) -> f64 {
    let r = x.canonicalize();
    let r11s = r.r11 * r.r11;
    let r22s = r.r22 * r.r22;
    let r33s = r.r33 * r.r33;
    let r30s = r.r30 * r.r30;

    let rmax2 = r33s.max(r22s + r30s);
    let rmin2 = r11s.min(r33s);

    let num = r11s * rmax2 - r22s * rmin2;
    let den = rmax2 - rmin2 + r11s - r22s;
    if num.abs() < CLAMP_TOL && den.abs() < CLAMP_TOL {
        return 0.5 * r.r11;
    }
    let ratio = (num / den).max(0.0);
    0.5 * ratio.sqrt()
}

/// Bell-diagonal reduction: half the intermediate of the absolute correlation
/// factors. Rejects unphysical triples.
pub fn trace_discord_bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    XState::from_bell_diagonal(c1, c2, c3)?;
    let mut v = [c1.abs(), c2.abs(), c3.abs()];
    v.sort_by(f64::total_cmp);
    Ok(0.5 * v[1])
}

/// Wootters concurrence through the X-state reduction
/// max{0, 2(|ρ14| - √(ρ22 ρ33)), 2(|ρ23| - √(ρ11 ρ44))}, which is exact on
/// the X sector. [`concurrence_spin_flip`] provides the general route.
pub fn concurrence(x: &XState) -> f64 {
    let outer = 2.0 * (x.rho14().norm() - (x.rho22() * x.rho33()).max(0.0).sqrt());
    let inner = 2.0 * (x.rho23().norm() - (x.rho11() * x.rho44()).max(0.0).sqrt());
    outer.max(inner).max(0.0)
}

/// Concurrence from the spin-flip definition: the square roots of the
/// eigenvalues of ρρ̃ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y), computed through the
/// Hermitian product √ρ ρ̃ √ρ.
pub fn concurrence_spin_flip(x: &XState) -> Result<f64> {
    let rho = x.to_matrix();
    let mut conj = CMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            conj[(i, j)] = rho.as_cmatrix()[(i, j)].conj();
        }
    }
    let yy = pauli_tensor(2, 2);
    let flipped = yy.mul(&conj).mul(&yy);

    let root = sqrt_psd(&rho)?;
    let m = root.as_cmatrix().mul(&flipped).mul(root.as_cmatrix());
    let eig = eig_hermitian(&HermitianMatrix::new(m).map_err(|_| {
        Error::Numeric("√ρ ρ̃ √ρ lost hermiticity".into())
    })?);

    let mut lams: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&mu| mu.max(0.0).sqrt())
        .collect();
    lams.sort_by(|a, b| b.total_cmp(a));
    Ok((lams[0] - lams[1] - lams[2] - lams[3]).max(0.0))
}

/// All three quantifiers at once.
pub fn measure_set(x: &XState) -> Result<MeasureSet> {
    Ok(MeasureSet {
        lqu: lqu(x)?,
        trace_discord: trace_discord(x),
        concurrence: concurrence(x),
    })
}

/// LQU of the dephasing-evolved Bell-diagonal state, from the two closed-form
/// branches in (c1, c2, c3) and γ(t). Requires the ordering |c2| ≤ |c1|; the
/// general [`lqu`] path has no such restriction.
///
/// Both branches are independent of the qubit frequencies: the v-dependent
/// terms rotate the upper 2x2 block of W without changing its spectrum.
pub fn lqu_dephasing_closed_form(c1: f64, c2: f64, c3: f64, gamma_t: f64) -> Result<f64> {
    if c2.abs() > c1.abs() + CLAMP_TOL {
        return Err(Error::Precondition(format!(
            "closed-form LQU assumes |c2| <= |c1| (got |c1| = {}, |c2| = {}); \
             use the general lqu path instead",
            c1.abs(),
            c2.abs()
        )));
    }
    XState::from_bell_diagonal(c1, c2, c3)?;

    let e2 = (-2.0 * gamma_t).exp();
    let c3p = 1.0 + c3;
    let c3m = 1.0 - c3;
    let cm = c1 - c2;
    let cp = c1 + c2;

    let u2 = 0.5 * (c3p + (c3p * c3p - cm * cm * e2).max(0.0).sqrt());
    let v2 = 0.5 * (c3m + (c3m * c3m - cp * cp * e2).max(0.0).sqrt());
    let uv = (u2 * v2).sqrt();

    // λ1 branch: the off-diagonal block contributes |c+ c-| e^{-2γ}/(4uv),
    // and c+ c- = c1² - c2² ≥ 0 under the ordering precondition.
    let lambda1 = if uv < DEGENERATE_W_TOL {
        0.0
    } else {
        uv + cp * cm * e2 / (4.0 * uv)
    };

    // λ3 branch: w33 with per-block degenerate limits.
    let outer = if u2 < DEGENERATE_W_TOL {
        0.0
    } else {
        cm * cm * e2 / (8.0 * u2)
    };
    let inner = if v2 < DEGENERATE_W_TOL {
        0.0
    } else {
        cp * cp * e2 / (8.0 * v2)
    };
    let lambda3 = 0.5 * (u2 + v2) - outer - inner;

    Ok((1.0 - lambda1.max(lambda3)).clamp(0.0, 1.0))
}
