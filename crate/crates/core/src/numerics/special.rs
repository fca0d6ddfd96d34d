//! Log-gamma for real and complex arguments (Lanczos approximation, g = 7).
//!
//! The thermal part of the Ohmic dephasing function needs ln|Γ(1 + a + ib)|²,
//! so the complex case is the primary consumer. Accuracy on the right
//! half-plane is ~1e-13 relative, validated against the reflection formula.

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

const HALF_LN_TWO_PI: f64 = 0.9189385332046727; // ln(2π)/2

/// Principal branch of ln Γ(z) for Re(z) ≥ 0.5.
///
/// Arguments with Re(z) < 0.5 are routed through the reflection formula;
/// its log is only branch-safe near the real axis, which covers every use
/// in this crate.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // ln Γ(z) = ln(π / sin(πz)) - ln Γ(1 - z)
        let pi = std::f64::consts::PI;
        let s = (pi * z).sin();
        return (Complex64::new(pi, 0.0) / s).ln() - ln_gamma_complex(Complex64::ONE - z);
    }
    let zm = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (zm + 0.5) * t.ln() - t + x.ln()
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// Γ(x) for real x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}
