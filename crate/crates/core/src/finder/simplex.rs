//! Derivative-free Nelder-Mead minimization in low dimension.
//!
//! The objectives being minimized (eigenvalue gaps, traceless norms) have
//! conical or square-root zeros where gradients are unreliable, so a simplex
//! method with fixed reflect/expand/contract/shrink coefficients is used.
//! Everything is deterministic: no randomness, ties broken by index.

/// Fixed-coefficient Nelder-Mead options.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub reflect: f64,
    pub expand: f64,
    pub contract: f64,
    pub shrink: f64,
    /// Stop when the best value drops to this level.
    pub f_tol: f64,
    /// Stop when the simplex diameter drops to this level.
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            reflect: 1.0,
            expand: 2.0,
            contract: 0.5,
            shrink: 0.5,
            f_tol: 0.0,
            x_tol: 1e-12,
            max_evals: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

/// Minimize `f` starting from `x0` with an axis-aligned initial simplex of
/// edge `step`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    opts: &SimplexOptions,
) -> SimplexResult {
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for a in 0..dim {
        let mut p = x0.to_vec();
        p[a] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();

    loop {
        // Order best..worst (stable: ties keep lower index first).
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
        let reorder_points: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let reorder_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reorder_points;
        values = reorder_values;

        let diameter = simplex[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if values[0] <= opts.f_tol || diameter <= opts.x_tol || evals >= opts.max_evals {
            return SimplexResult { x: simplex[0].clone(), f: values[0], evals };
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|a| simplex[..dim].iter().map(|p| p[a]).sum::<f64>() / dim as f64)
            .collect();
        let worst = values[dim];
        let second_worst = values[dim - 1];
        let lerp = |t: f64| -> Vec<f64> {
            (0..dim)
                .map(|a| centroid[a] + t * (centroid[a] - simplex[dim][a]))
                .collect()
        };

        let reflected = lerp(opts.reflect);
        let fr = eval(&reflected, &mut evals);
        if fr < values[0] {
            let expanded = lerp(opts.reflect * opts.expand);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < second_worst {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let contracted = if fr < worst {
            lerp(opts.reflect * opts.contract)
        } else {
            lerp(-opts.contract)
        };
        let fc = eval(&contracted, &mut evals);
        if fc < worst.min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for i in 1..=dim {
            for a in 0..dim {
                simplex[i][a] = simplex[0][a] + opts.shrink * (simplex[i][a] - simplex[0][a]);
            }
            values[i] = eval(&simplex[i].clone(), &mut evals);
        }
    }
}

/// Two-stage minimize: a full run followed by a restart at the incumbent with
/// a finer initial simplex. Helps on the square-root cusps where a single
/// simplex tends to collapse prematurely.
pub fn minimize_restarted<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    opts: &SimplexOptions,
) -> SimplexResult {
    let first = minimize(&mut f, x0, step, opts);
    if first.f <= opts.f_tol {
        return first;
    }
    let second = minimize(&mut f, &first.x, step * 1e-3, opts);
    let evals = first.evals + second.evals;
    if second.f < first.f {
        SimplexResult { evals, ..second }
    } else {
        SimplexResult { evals, ..first }
    }
}
