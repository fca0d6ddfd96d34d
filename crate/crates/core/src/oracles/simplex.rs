//! Derivative-free Nelder-Mead simplex descent used by the brute-force
//! oracles. Classic coefficients (reflection 1, expansion 2, contraction
//! 1/2, shrink 1/2) with simplex-size and function-spread stopping rules.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            x_tol: 1e-8,
            f_tol: 1e-12,
            max_evals: 2000,
        }
    }
}

pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

/// Minimize `f` starting from `x0` with initial displacement `step` per
/// coordinate.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    opts: SimplexOptions,
) -> SimplexResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    while evals < opts.max_evals {
        // Order best..worst.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if spread.abs() < opts.f_tol || size < opts.x_tol {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for (idx, v) in simplex.iter().enumerate() {
            if idx == worst {
                continue;
            }
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };

        // Reflect the worst vertex through the centroid.
        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let f_reflected = eval(&reflected, &mut evals);

        if f_reflected < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let f_expanded = eval(&expanded, &mut evals);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if f_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            let contracted = if f_reflected < values[worst] {
                blend(&centroid, &simplex[worst], -0.5)
            } else {
                blend(&centroid, &simplex[worst], 0.5)
            };
            let f_contracted = eval(&contracted, &mut evals);
            if f_contracted < values[worst].min(f_reflected) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best].clone();
                for idx in 0..=n {
                    if idx == best {
                        continue;
                    }
                    simplex[idx] = blend(&anchor, &simplex[idx], 0.5);
                    values[idx] = eval(&simplex[idx], &mut evals);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    SimplexResult {
        x: simplex[best].clone(),
        fx: values[best],
        evals,
    }
}
