//! Derivative-free simplex minimization with a projection hook.
//!
//! Every trial point is passed through the caller's projection before it is
//! evaluated, so the search never leaves the feasible set. Coefficients follow
//! the dimension-adaptive choice of Gao and Han, which behaves better than the
//! textbook constants once the dimension exceeds a handful of coordinates.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Objective evaluations allowed.
    pub max_evals: usize,
    /// Stop once the spread of simplex values falls below `f_tol · (1 + |f_best|)`.
    pub f_tol: f64,
    /// ... and the simplex diameter falls below `x_tol`.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            initial_step: 0.1,
            max_evals: 2000,
            f_tol: 1e-12,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
    /// Best value after each iteration; nonincreasing.
    pub trace: Vec<f64>,
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

pub fn minimize<F, P>(mut f: F, mut project: P, x0: &[f64], opts: SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
    P: FnMut(&mut [f64]),
{
    let dim = x0.len();
    assert!(dim >= 1, "simplex search needs at least one coordinate");
    let n = dim as f64;
    let (alpha, beta, gamma, delta) = if dim >= 2 {
        (1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evals = 0usize;
    let mut eval = |x: &mut Vec<f64>, evals: &mut usize| -> f64 {
        project(x);
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    let mut start = x0.to_vec();
    let f0 = eval(&mut start, &mut evals);
    simplex.push(Vertex { x: start, f: f0 });
    for i in 0..dim {
        let mut x = simplex[0].x.clone();
        x[i] += opts.initial_step;
        let fx = eval(&mut x, &mut evals);
        simplex.push(Vertex { x, f: fx });
    }

    let mut trace = Vec::new();
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        trace.push(simplex[0].f);
        let spread = simplex[dim].f - simplex[0].f;
        let diam = simplex[1..]
            .iter()
            .map(|v| {
                v.x.iter()
                    .zip(&simplex[0].x)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.f_tol * (1.0 + simplex[0].f.abs()) && diam <= opts.x_tol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += x / n;
            }
        }
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let worst = simplex[dim].x.clone();

        let mut xr = along(alpha, &worst);
        let fr = eval(&mut xr, &mut evals);
        if fr < simplex[0].f {
            let mut xe = along(alpha * beta, &worst);
            let fe = eval(&mut xe, &mut evals);
            simplex[dim] = if fe < fr {
                Vertex { x: xe, f: fe }
            } else {
                Vertex { x: xr, f: fr }
            };
            continue;
        }
        if fr < simplex[dim - 1].f {
            simplex[dim] = Vertex { x: xr, f: fr };
            continue;
        }
        let (mut xc, outside) = if fr < simplex[dim].f {
            (along(alpha * gamma, &worst), true)
        } else {
            (along(-gamma, &worst), false)
        };
        let fc = eval(&mut xc, &mut evals);
        let accept = if outside { fc <= fr } else { fc < simplex[dim].f };
        if accept {
            simplex[dim] = Vertex { x: xc, f: fc };
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].x.clone();
        for v in simplex.iter_mut().skip(1) {
            let mut x: Vec<f64> = best
                .iter()
                .zip(&v.x)
                .map(|(b, x)| b + delta * (x - b))
                .collect();
            let fx = eval(&mut x, &mut evals);
            *v = Vertex { x, f: fx };
        }
    }
    simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
    let best = simplex.swap_remove(0);
    SimplexResult {
        x: best.x,
        value: best.f,
        evals,
        converged,
        trace,
    }
}
