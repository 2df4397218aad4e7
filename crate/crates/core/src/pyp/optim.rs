//! Derivative-free minimization (Nelder–Mead simplex).

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadConfig {
    /// Stop once the spread of objective values across the simplex is
    /// below this.
    pub f_tol: f64,
    /// ... and the simplex fits in a box of this side.
    pub x_tol: f64,
    pub max_iter: usize,
    /// Initial simplex offset along each axis.
    pub step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self { f_tol: 1e-8, x_tol: 1e-7, max_iter: 5000, step: 0.1 }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` starting from `x0` with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// Non-finite objective values are treated as `+inf`, so `f` can mark
/// infeasible points by returning NaN or infinity.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> NelderMeadResult {
    let dim = x0.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += cfg.step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[dim].1);
        let size = (1..=dim)
            .flat_map(|j| (0..dim).map(move |i| (j, i)))
            .map(|(j, i)| (simplex[j].0[i] - simplex[0].0[i]).abs())
            .fold(0.0, f64::max);
        if (worst - best).abs() <= cfg.f_tol && size <= cfg.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < best {
            let xe = along(2.0);
            let fe = eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = along(0.5);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < worst.min(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&x_best) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    NelderMeadResult { x, f, iterations, converged }
}
