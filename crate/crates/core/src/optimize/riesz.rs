//! Riesz s-energy of the expanded set and its PR+ conjugate-gradient
//! minimization over the basis points.
//!
//! Right multiplication by a group element and negation are isometries that
//! permute the expanded set, so every point of an orbit sees the same
//! neighbourhood. The energy is therefore `2|G| Σ_b Σ_{y≠b} f(|b - y|)`, and
//! its gradient for basis point `b` is `2|G|` times the ordinary gradient at
//! `b` treating the other points as fixed.

use rayon::prelude::*;

use super::{Orbits, PipelineConfig};
use crate::error::{Error, Result};
use crate::quat::{dot4, normalize4};
use crate::symmetry::QuaternionGroup;

#[derive(Clone, Debug)]
pub struct RieszEnergy {
    /// Energy over ordered pairs of the expanded set.
    pub energy: f64,
    /// Tangent-space gradient per basis point.
    pub gradient: Vec<[f64; 4]>,
}

#[derive(Clone, Debug)]
pub struct RieszOutcome {
    pub basis: Vec<[f64; 4]>,
    pub initial_energy: f64,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The line search could not decrease the energy; `basis` is the best
    /// point reached.
    pub line_search_failed: bool,
}

/// `(f(d), f'(d) / d)` from the squared distance.
#[inline]
fn kernel(d2: f64, s: f64) -> (f64, f64) {
    if s == 2.0 {
        let inv = 1.0 / d2;
        (inv, -2.0 * inv * inv)
    } else if s == 0.0 {
        (-0.5 * d2.ln(), -1.0 / d2)
    } else {
        let f = d2.powf(-0.5 * s);
        (f, -s * f / d2)
    }
}

fn evaluate(orbits: &Orbits, s: f64) -> Result<RieszEnergy> {
    let per: Vec<Result<(f64, [f64; 4])>> = (0..orbits.basis.len())
        .into_par_iter()
        .map(|k| {
            let x = orbits.basis[k];
            let own = 2 * k * orbits.elems.len();
            let mut e = 0.0;
            let mut g = [0.0; 4];
            for (i, y) in orbits.points.iter().enumerate() {
                if i == own {
                    continue;
                }
                let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]];
                let d2 = dot4(&d, &d);
                if d2 < 1e-24 {
                    return Err(Error::CoincidentPoints(d2.sqrt()));
                }
                let (f, fp) = kernel(d2, s);
                e += f;
                for c in 0..4 {
                    g[c] += fp * d[c];
                }
            }
            Ok((e, g))
        })
        .collect();
    let mult = orbits.orbit_size() as f64;
    let mut energy = 0.0;
    let mut gradient = Vec::with_capacity(per.len());
    for (k, r) in per.into_iter().enumerate() {
        let (e, g) = r?;
        energy += mult * e;
        let g = g.map(|c| 2.0 * mult * c);
        let x = orbits.basis[k];
        let r = dot4(&g, &x);
        gradient.push([g[0] - r * x[0], g[1] - r * x[1], g[2] - r * x[2], g[3] - r * x[3]]);
    }
    Ok(RieszEnergy { energy, gradient })
}

/// Energy and basis gradient of the expanded set; `s = 0` is the
/// logarithmic energy `Σ log(1/|p - q|)`.
pub fn riesz_energy(basis: &[[f64; 4]], group: &QuaternionGroup, s: f64) -> Result<RieszEnergy> {
    let basis: Vec<[f64; 4]> = basis.iter().map(|b| normalize4(*b)).collect();
    evaluate(&Orbits::new(&basis, group), s)
}

fn inner(a: &[[f64; 4]], b: &[[f64; 4]]) -> f64 {
    a.iter().zip(b).map(|(x, y)| dot4(x, y)).sum()
}

fn project(v: &[[f64; 4]], at: &[[f64; 4]]) -> Vec<[f64; 4]> {
    v.iter()
        .zip(at)
        .map(|(v, x)| {
            let r = dot4(v, x);
            [v[0] - r * x[0], v[1] - r * x[1], v[2] - r * x[2], v[3] - r * x[3]]
        })
        .collect()
}

fn max_len(v: &[[f64; 4]]) -> f64 {
    v.iter().map(|d| dot4(d, d).sqrt()).fold(0.0, f64::max)
}

/// PR+ conjugate gradient with backtracking Armijo steps, retracting to S³
/// by renormalization.
pub fn minimize_riesz(basis: &[[f64; 4]], group: &QuaternionGroup, config: &PipelineConfig) -> Result<RieszOutcome> {
    if config.s < 0.0 {
        return Err(Error::Degenerate(format!("negative Riesz exponent {}", config.s)));
    }
    let s = config.s;
    let mut orbits = Orbits::new(&basis.iter().map(|b| normalize4(*b)).collect::<Vec<_>>(), group);
    let mut cur = evaluate(&orbits, s)?;
    let initial_energy = cur.energy;
    let g0 = inner(&cur.gradient, &cur.gradient).sqrt();
    let mut out = RieszOutcome {
        basis: orbits.basis.clone(),
        initial_energy,
        energy: initial_energy,
        iterations: 0,
        converged: g0 < 1e-300,
        line_search_failed: false,
    };
    if out.converged {
        return Ok(out);
    }
    let mut d: Vec<[f64; 4]> = cur.gradient.iter().map(|g| g.map(|c| -c)).collect();
    // Cap any single move at a fraction of a radian.
    const MAX_MOVE: f64 = 0.2;
    let mut step = 0.05 / max_len(&d);

    for it in 0..config.cg_max_iters {
        let mut gd = inner(&cur.gradient, &d);
        if gd >= 0.0 {
            d = cur.gradient.iter().map(|g| g.map(|c| -c)).collect();
            gd = -inner(&cur.gradient, &cur.gradient);
        }
        let mut a = step.min(MAX_MOVE / max_len(&d));
        let accepted = loop {
            let mut trial = orbits.clone();
            for k in 0..trial.basis.len() {
                let x = trial.basis[k];
                let n = normalize4([x[0] + a * d[k][0], x[1] + a * d[k][1], x[2] + a * d[k][2], x[3] + a * d[k][3]]);
                trial.set_basis(k, n);
            }
            match evaluate(&trial, s) {
                Ok(e) if e.energy <= cur.energy + 1e-4 * a * gd => break Some((trial, e)),
                _ => {}
            }
            a *= 0.5;
            if a * max_len(&d) < 1e-16 {
                break None;
            }
        };
        let Some((next, ev)) = accepted else {
            out.line_search_failed = true;
            break;
        };
        let g_old = project(&cur.gradient, &next.basis);
        let d_old = project(&d, &next.basis);
        let num = inner(&ev.gradient, &ev.gradient) - inner(&ev.gradient, &g_old);
        let beta = (num / inner(&cur.gradient, &cur.gradient)).max(0.0);
        d = ev.gradient.iter().zip(&d_old).map(|(g, p)| std::array::from_fn(|c| -g[c] + beta * p[c])).collect();
        orbits = next;
        cur = ev;
        step = 2.0 * a;
        out.iterations = it + 1;
        if inner(&cur.gradient, &cur.gradient).sqrt() < config.cg_tolerance * g0 {
            out.converged = true;
            break;
        }
    }
    out.basis = orbits.basis;
    out.energy = cur.energy;
    Ok(out)
}
