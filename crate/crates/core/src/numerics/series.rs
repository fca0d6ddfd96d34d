//! Summation of convergent series with a relative-tolerance stopping rule.

/// Default cap on the number of summed terms. Thermal sums decay like a power
/// of the index, so the cap is deliberately generous.
pub const DEFAULT_M_MAX: u64 = 1_000_000;
/// Default relative stopping tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    /// False when the term cap was hit before the stopping rule fired.
    pub converged: bool,
    pub terms_used: u64,
}

/// Sum term(1) + term(2) + ... until |term(m)| ≤ rel_tol·|partial sum| or
/// m reaches `m_max`. The terms must be eventually monotone decreasing in
/// absolute value for the stopping rule to be meaningful.
pub fn sum_series(mut term: impl FnMut(u64) -> f64, rel_tol: f64, m_max: u64) -> SeriesSum {
    let mut sum = 0.0f64;
    for m in 1..=m_max {
        let t = term(m);
        sum += t;
        if t.abs() <= rel_tol * sum.abs() {
            return SeriesSum {
                value: sum,
                converged: true,
                terms_used: m,
            };
        }
    }
    SeriesSum {
        value: sum,
        converged: false,
        terms_used: m_max,
    }
}
