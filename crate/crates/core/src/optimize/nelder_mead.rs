//! Derivative-free simplex minimization with the standard coefficients
//! (reflection 1, expansion 2, contraction ½, shrink ½). Infinite objective
//! values are allowed and simply rank last.

#[derive(Clone, Debug)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// The simplex collapsed below `xtol` before the evaluation cap.
    pub converged: bool,
}

pub fn nelder_mead<F>(mut f: F, x0: &[f64], scale: f64, max_evals: usize, xtol: f64) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if size < xtol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
        };
        let worst = simplex[n].0.clone();
        let (best_v, second_worst_v, worst_v) = (simplex[0].1, simplex[n - 1].1, simplex[n].1);
        let xr = along(1.0, &worst);
        let vr = eval(&xr, &mut evals);
        if vr < best_v {
            let xe = along(2.0, &worst);
            let ve = eval(&xe, &mut evals);
            simplex[n] = if ve < vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr < second_worst_v {
            simplex[n] = (xr, vr);
            continue;
        }
        // Outside contraction if the reflection helped at all, else inside.
        let (xc, vc) = if vr < worst_v {
            let xc = along(0.5, &worst);
            let vc = eval(&xc, &mut evals);
            (xc, vc)
        } else {
            let xc = along(-0.5, &worst);
            let vc = eval(&xc, &mut evals);
            (xc, vc)
        };
        if vc < worst_v.min(vr) {
            simplex[n] = (xc, vc);
            continue;
        }
        let best = simplex[0].0.clone();
        for k in 1..=n {
            let x: Vec<f64> = best.iter().zip(&simplex[k].0).map(|(b, x)| b + 0.5 * (x - b)).collect();
            let v = eval(&x, &mut evals);
            simplex[k] = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadOutcome { x, value, evaluations: evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], 0.5, 5000, 1e-10);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn respects_cap_and_infinities() {
        // Quadratic bowl walled off by +inf for x < 0.
        let f = |x: &[f64]| if x[0] < 0.0 { f64::INFINITY } else { (x[0] - 1.0).powi(2) + x[1] * x[1] + x[2] * x[2] };
        let r = nelder_mead(f, &[2.0, 1.0, -1.0], 1.0, 200, 1e-12);
        assert!(r.evaluations <= 200 + 3);
        assert!(r.value < 1e-3);
    }
}
