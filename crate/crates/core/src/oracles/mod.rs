//! Definition-level verifiers for the closed-form measures.
//!
//! Everything here deliberately avoids the closed forms it checks:
//!
//! * [`lqu_bruteforce`] minimizes the Wigner-Yanase skew information
//!   -½Tr([√ρ, n·σ⊗I]²) over local spin directions, with √ρ from the generic
//!   Jacobi eigensolver rather than the X-state block formulas;
//! * [`trace_discord_bruteforce`] minimizes ½‖ρ - χ‖₁ over the nine-parameter
//!   family of classical-quantum states by multi-start simplex descent.
//!
//! Both return upper bounds on the true minima, so "closed form ≤ oracle"
//! holds exactly and "oracle - closed form small" certifies search quality.

pub mod simplex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::measures::w_matrix;
use crate::numerics::matrix::{pauli, CMatrix, HermitianMatrix};
use crate::numerics::{sqrt_psd, trace_norm};
use crate::states::XState;
use simplex::{nelder_mead, SimplexOptions};

/// Hemisphere scan resolution for the skew-information minimization, with
/// shrinking local refinement around the best cell before the simplex
/// polish. Defaults give 1° resolution.
#[derive(Debug, Clone, Copy)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refinement_rounds: usize,
}

impl Default for SphereGrid {
    fn default() -> Self {
        SphereGrid {
            n_theta: 91,
            n_phi: 360,
            refinement_rounds: 2,
        }
    }
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// n·σ ⊗ I for a unit direction.
pub fn local_spin_observable(n: [f64; 3]) -> CMatrix {
    let id = CMatrix::identity(2);
    let mut k = CMatrix::zeros(2);
    for (weight, axis) in n.iter().zip(1..=3) {
        k = k.add(&pauli(axis).scale(Complex64::new(*weight, 0.0)));
    }
    CMatrix::kron2(&k, &id)
}

/// Skew information I(ρ, n·σ⊗I) = 1 - nᵀWn from the closed-form W matrix.
/// `n` is normalized before use. The commutator-definition route
/// [`skew_information_commutator`] is the independent cross-check.
pub fn skew_information(x: &XState, n: [f64; 3]) -> Result<f64> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let n = [n[0] / norm, n[1] / norm, n[2] / norm];
    let w = w_matrix(x)?;
    let quad = n[0] * n[0] * w.w11
        + n[1] * n[1] * w.w22
        + n[2] * n[2] * w.w33
        + 2.0 * n[0] * n[1] * w.w12;
    Ok(1.0 - quad)
}

/// Skew information -½Tr([√ρ, K]²) = Tr(ρK²) - Tr(√ρ K √ρ K) evaluated
/// literally for an arbitrary Hermitian observable K on the full space,
/// with √ρ from the generic eigensolver.
pub fn skew_information_commutator(x: &XState, observable: &CMatrix) -> Result<f64> {
    let rho = x.to_matrix();
    let root = sqrt_psd(&rho)?;
    let k_sq = observable.mul(observable);
    let rho_k2 = rho.as_cmatrix().mul(&k_sq).trace().re;
    let rk = root.as_cmatrix().mul(observable);
    let cross = rk.mul(&rk).trace().re;
    Ok(rho_k2 - cross)
}

/// Minimum skew information over local observables n·σ ⊗ I, by hemisphere
/// scan, local grid refinement and a final simplex polish. The quadratic
/// form nᵀΩn is assembled once per state from the generic √ρ, so the scan
/// evaluates the commutator definition, not the closed forms.
pub fn lqu_bruteforce(x: &XState, grid: &SphereGrid) -> Result<f64> {
    let rho = x.to_matrix();
    let root = sqrt_psd(&rho)?;

    // Ω_ij = Tr(√ρ σ_i⊗I √ρ σ_j⊗I); I(n) = Tr(ρ(n·σ⊗I)²) - nᵀΩn and the
    // first trace is exactly 1 for unit n.
    let factors: Vec<CMatrix> = (1..=3)
        .map(|i| root.as_cmatrix().mul(&pauli_tensor_local(i)))
        .collect();
    let mut omega = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            omega[i][j] = factors[i].mul(&factors[j]).trace().re;
        }
    }

    let quad = |theta: f64, phi: f64| -> f64 {
        let n = direction(theta, phi);
        let mut q = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                q += n[i] * omega[i][j] * n[j];
            }
        }
        q
    };

    // Hemisphere covers all observables: n and -n give the same skew
    // information.
    let mut best = (f64::MIN, 0.0, 0.0);
    let dtheta = std::f64::consts::FRAC_PI_2 / (grid.n_theta.max(2) - 1) as f64;
    let dphi = std::f64::consts::TAU / grid.n_phi.max(4) as f64;
    for it in 0..grid.n_theta {
        let theta = it as f64 * dtheta;
        for ip in 0..grid.n_phi {
            let phi = ip as f64 * dphi;
            let q = quad(theta, phi);
            if q > best.0 {
                best = (q, theta, phi);
            }
        }
    }

    let (mut step_t, mut step_p) = (dtheta, dphi);
    for _ in 0..grid.refinement_rounds {
        step_t /= 4.0;
        step_p /= 4.0;
        let (_, t0, p0) = best;
        for dt in -3i32..=3 {
            for dp in -3i32..=3 {
                let theta = t0 + dt as f64 * step_t;
                let phi = p0 + dp as f64 * step_p;
                let q = quad(theta, phi);
                if q > best.0 {
                    best = (q, theta, phi);
                }
            }
        }
    }

    let polish = nelder_mead(
        |p| -quad(p[0], p[1]),
        &[best.1, best.2],
        step_t.max(1e-4),
        SimplexOptions::default(),
    );
    let q_max = best.0.max(-polish.fx);
    Ok((1.0 - q_max).clamp(0.0, 1.0))
}

fn pauli_tensor_local(i: usize) -> CMatrix {
    CMatrix::kron2(&pauli(i), &CMatrix::identity(2))
}

/// Nine-parameter classical-quantum state
/// χ = p Π₊⊗ρ₁ + (1-p) Π₋⊗ρ₂ with Π± = (I ± n·σ)/2 projectors on qubit 1
/// and ρ₁, ρ₂ Bloch-ball states on qubit 2. Parameter vector layout:
/// [θ, φ, p, b₁x, b₁y, b₁z, b₂x, b₂y, b₂z].
#[derive(Debug, Clone, Copy)]
pub struct CQParametrization {
    pub params: [f64; 9],
}

impl CQParametrization {
    /// Clamp p into [0,1] and the Bloch vectors into the unit ball; the
    /// projector angles are unconstrained.
    pub fn projected(mut self) -> Self {
        self.params[2] = self.params[2].clamp(0.0, 1.0);
        for k in [3, 6] {
            let b = &mut self.params[k..k + 3];
            let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            if norm > 1.0 {
                for v in b {
                    *v /= norm;
                }
            }
        }
        self
    }

    pub fn to_state(&self) -> CMatrix {
        let p = self.params[2];
        let n = direction(self.params[0], self.params[1]);
        let id = CMatrix::identity(2);

        let mut n_sigma = CMatrix::zeros(2);
        for (weight, axis) in n.iter().zip(1..=3) {
            n_sigma = n_sigma.add(&pauli(axis).scale(Complex64::new(*weight, 0.0)));
        }
        let proj_plus = id.add(&n_sigma).scale(Complex64::new(0.5, 0.0));
        let proj_minus = id.sub(&n_sigma).scale(Complex64::new(0.5, 0.0));

        let bloch_state = |b: &[f64]| {
            let mut m = CMatrix::identity(2);
            for (weight, axis) in b.iter().zip(1..=3) {
                m = m.add(&pauli(axis).scale(Complex64::new(*weight, 0.0)));
            }
            m.scale(Complex64::new(0.5, 0.0))
        };
        let rho1 = bloch_state(&self.params[3..6]);
        let rho2 = bloch_state(&self.params[6..9]);

        CMatrix::kron2(&proj_plus, &rho1)
            .scale(Complex64::new(p, 0.0))
            .add(&CMatrix::kron2(&proj_minus, &rho2).scale(Complex64::new(1.0 - p, 0.0)))
    }
}

/// Warm start: project ρ onto the eigenbasis of n·σ on qubit 1 and read off
/// the branch probability and conditional Bloch vectors.
fn measured_state_params(x: &XState, theta: f64, phi: f64) -> CQParametrization {
    let n = direction(theta, phi);
    let rho = x.to_matrix();
    let id = CMatrix::identity(2);
    let mut n_sigma = CMatrix::zeros(2);
    for (weight, axis) in n.iter().zip(1..=3) {
        n_sigma = n_sigma.add(&pauli(axis).scale(Complex64::new(*weight, 0.0)));
    }
    let projectors = [
        id.add(&n_sigma).scale(Complex64::new(0.5, 0.0)),
        id.sub(&n_sigma).scale(Complex64::new(0.5, 0.0)),
    ];

    let mut params = [0.0f64; 9];
    params[0] = theta;
    params[1] = phi;
    for (branch, proj) in projectors.iter().enumerate() {
        let big = CMatrix::kron2(proj, &id);
        let projected = big.mul(rho.as_cmatrix()).mul(&big);
        let weight = projected.trace().re;
        if branch == 0 {
            params[2] = weight.clamp(0.0, 1.0);
        }
        let bloch_slot = if branch == 0 { 3 } else { 6 };
        if weight > 1e-12 {
            // Partial trace over qubit 1, then Bloch components.
            let mut reduced = CMatrix::zeros(2);
            for k in 0..2 {
                for l in 0..2 {
                    reduced[(k, l)] = projected[(k, l)] + projected[(2 + k, 2 + l)];
                }
            }
            for axis in 1..=3usize {
                params[bloch_slot + axis - 1] =
                    reduced.mul(&pauli(axis)).trace().re / weight;
            }
        }
    }
    CQParametrization { params }
}

/// Minimal trace distance to the classical-quantum set, halved: multi-start
/// Nelder-Mead over [`CQParametrization`] with measured-state warm starts
/// along the three Pauli axes plus `restarts` seeded random starts. Returns
/// an upper bound on the trace-distance discord. Deterministic for a fixed
/// seed; restarts run in parallel.
pub fn trace_discord_bruteforce(x: &XState, restarts: usize, seed: u64) -> f64 {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let rho = *x.to_matrix().as_cmatrix();
    let objective = move |raw: &[f64]| -> f64 {
        let mut params = [0.0; 9];
        params.copy_from_slice(raw);
        let chi = CQParametrization { params }.projected().to_state();
        let diff = HermitianMatrix::new(rho.sub(&chi))
            .expect("difference of Hermitian matrices is Hermitian");
        0.5 * trace_norm(&diff)
    };

    let frac_pi_2 = std::f64::consts::FRAC_PI_2;
    let mut starts: Vec<CQParametrization> = vec![
        measured_state_params(x, frac_pi_2, 0.0),     // x axis
        measured_state_params(x, frac_pi_2, frac_pi_2), // y axis
        measured_state_params(x, 0.0, 0.0),           // z axis
    ];
    for i in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let mut params = [0.0f64; 9];
        params[0] = rng.random::<f64>() * std::f64::consts::PI;
        params[1] = rng.random::<f64>() * std::f64::consts::TAU;
        params[2] = rng.random::<f64>();
        for slot in 3..9 {
            params[slot] = rng.random::<f64>() * 2.0 - 1.0;
        }
        starts.push(CQParametrization { params }.projected());
    }

    let coarse: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|start| {
            let r = nelder_mead(objective, &start.params, 0.15, SimplexOptions::default());
            (r.fx, r.x)
        })
        .collect();

    // Simplex descent in nine dimensions stalls on the kinks of the trace
    // norm; restarting from the best candidates with shrinking simplexes
    // recovers the last three digits.
    let mut ranked = coarse;
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let polish_opts = SimplexOptions {
        max_evals: 4000,
        ..Default::default()
    };
    ranked
        .iter()
        .take(3)
        .map(|(fx, x)| {
            let mut best = *fx;
            let mut point = x.clone();
            for step in [0.02, 0.002] {
                let r = nelder_mead(objective, &point, step, polish_opts);
                if r.fx < best {
                    best = r.fx;
                    point = r.x;
                }
            }
            best
        })
        .fold(f64::MAX, f64::min)
}
