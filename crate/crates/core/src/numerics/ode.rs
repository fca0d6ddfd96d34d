//! Fixed-step classical Runge-Kutta integration.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl OdeTrajectory {
    pub fn last(&self) -> (&f64, &Vec<f64>) {
        (self.times.last().unwrap(), self.states.last().unwrap())
    }
}

/// Integrate y' = deriv(t, y) from `t0` to `t1` with step `dt` (the final
/// step is shortened to land on `t1` exactly). Every accepted state is
/// recorded. A non-finite state aborts with the last valid time.
pub fn ode_rk4<F>(mut deriv: F, y0: &[f64], t0: f64, t1: f64, dt: f64) -> Result<OdeTrajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    assert!(dt > 0.0, "step size must be positive");
    assert!(t1 >= t0);

    let n = y0.len();
    let mut y = y0.to_vec();
    let mut times = vec![t0];
    let mut states = vec![y.clone()];

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    let mut t = t0;
    while t < t1 - 1e-15 * t1.abs().max(1.0) {
        let h = dt.min(t1 - t);

        deriv(t, &y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        deriv(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        deriv(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        deriv(t + h, &tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::OdeNonFinite { t });
        }

        t += h;
        times.push(t);
        states.push(y.clone());
    }

    Ok(OdeTrajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches() {
        let traj = ode_rk4(|_, y, dy| dy[0] = -y[0], &[1.0], 0.0, 1.0, 1e-3).unwrap();
        let (_, y) = traj.last();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn zero_derivative_is_constant() {
        let traj = ode_rk4(|_, _, dy| dy[0] = 0.0, &[0.7], 0.0, 3.0, 0.1).unwrap();
        for s in &traj.states {
            assert_eq!(s[0], 0.7);
        }
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        let exact = (-2.0f64).exp();
        let run = |dt: f64| {
            let traj = ode_rk4(|_, y, dy| dy[0] = -y[0], &[1.0], 0.0, 2.0, dt).unwrap();
            (traj.last().1[0] - exact).abs()
        };
        let e1 = run(0.02);
        let e2 = run(0.01);
        let ratio = e1 / e2;
        // O(dt^4): halving the step should cut the error ~16x (factor-2 slack).
        assert!(
            (8.0..32.0).contains(&ratio),
            "error ratio {ratio} not ~16 (e1={e1:e}, e2={e2:e})"
        );
    }

    #[test]
    fn nan_reports_last_valid_time() {
        let res = ode_rk4(
            |t, y, dy| dy[0] = if t > 0.5 { f64::NAN } else { y[0] },
            &[1.0],
            0.0,
            1.0,
            0.1,
        );
        match res {
            Err(Error::OdeNonFinite { t }) => assert!(t > 0.3 && t < 0.7),
            other => panic!("expected OdeNonFinite, got {other:?}"),
        }
    }
}
