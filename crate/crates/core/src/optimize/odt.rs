//! Optimal-Delaunay smoothing: each point moves to the volume-weighted mean
//! of the circumcentres of its incident simplices, renormalized to S³.
//! Only basis points are moved; their orbit copies follow by symmetry.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::Orbits;
use crate::delaunay::cross_product_4d;
use crate::error::Result;
use crate::quat::{dot4, normalize4};
use crate::symmetry::QuaternionGroup;

#[derive(Clone, Debug)]
pub struct OdtOutcome {
    /// Basis with the smallest covering radius seen, the input included.
    pub basis: Vec<[f64; 4]>,
    pub theta: f64,
    pub initial_theta: f64,
    pub rounds: usize,
    /// Largest basis-point move (radians) of the last round.
    pub max_displacement: f64,
    /// Set when a triangulation failed mid-way and smoothing stopped early.
    pub warning: Option<String>,
}

/// Tensor Gauss rule on the unit cube collapsed onto the reference
/// tetrahedron: barycentric weights of three vertices plus the weight.
fn tetra_rule() -> &'static [([f64; 3], f64)] {
    static RULE: OnceLock<Vec<([f64; 3], f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        // 5-point Gauss-Legendre on [0, 1].
        let a: f64 = 0.538_469_310_105_683_1;
        let b: f64 = 0.906_179_845_938_664;
        let nodes: [f64; 5] = [-b, -a, 0.0, a, b].map(|x| 0.5 * (1.0 + x));
        let weights = [0.236_926_885_056_189_1, 0.478_628_670_499_366_5, 0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1]
            .map(|w| 0.5 * w);
        let mut rule = Vec::with_capacity(125);
        for (i, &s) in nodes.iter().enumerate() {
            for (j, &t) in nodes.iter().enumerate() {
                for (k, &r) in nodes.iter().enumerate() {
                    let l1 = s;
                    let l2 = (1.0 - s) * t;
                    let l3 = (1.0 - s) * (1.0 - t) * r;
                    let w = weights[i] * weights[j] * weights[k] * (1.0 - s).powi(2) * (1.0 - t);
                    rule.push(([l1, l2, l3], w));
                }
            }
        }
        rule
    })
}

/// Volume of the spherical tetrahedron with unit vertices `v`, by quadrature
/// of the gnomonic volume element `(1 + |u|²)⁻²` about the vertex mean.
pub fn spherical_tetra_volume(v: [&[f64; 4]; 4]) -> f64 {
    let c = normalize4(std::array::from_fn(|k| v[0][k] + v[1][k] + v[2][k] + v[3][k]));
    let u: [[f64; 4]; 4] = std::array::from_fn(|i| {
        let h = dot4(v[i], &c);
        std::array::from_fn(|k| v[i][k] / h - c[k])
    });
    let e: [[f64; 4]; 3] = std::array::from_fn(|i| std::array::from_fn(|k| u[i + 1][k] - u[0][k]));
    let jac = match cross_product_4d(&e[0], &e[1], &e[2]) {
        Ok(n) => dot4(&n, &n).sqrt(),
        Err(_) => return 0.0,
    };
    let mut sum = 0.0;
    for (l, w) in tetra_rule() {
        let mut r2 = 0.0;
        for k in 0..4 {
            let x = u[0][k] + l[0] * e[0][k] + l[1] * e[1][k] + l[2] * e[2][k];
            r2 += x * x;
        }
        sum += w / ((1.0 + r2) * (1.0 + r2));
    }
    jac * sum
}

fn angle(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
    2.0 * (0.5 * dot4(&d, &d).sqrt()).min(1.0).asin()
}

/// Up to `iterations` Jacobi-style rounds; stops early once no basis point
/// moves more than 1e-10 rad. On very coarse sets the full step can
/// overshoot, so a round that raises the covering radius halves the step
/// taken in later rounds.
pub fn odt_smooth(basis: &[[f64; 4]], group: &QuaternionGroup, iterations: usize) -> Result<OdtOutcome> {
    let mut orbits = Orbits::new(basis, group);
    let mut tri = orbits.triangulate()?;
    let initial_theta = tri.covering_radius;
    let mut out = OdtOutcome {
        basis: basis.to_vec(),
        theta: initial_theta,
        initial_theta,
        rounds: 0,
        max_displacement: 0.0,
        warning: None,
    };
    let m = orbits.elems.len();
    let mut relax = 1.0;
    let mut prev_theta = initial_theta;
    for round in 0..iterations {
        let weighted: Vec<(f64, [f64; 4])> = tri
            .simplices
            .par_iter()
            .map(|s| {
                let v = s.vertices.map(|i| &orbits.points[i as usize]);
                (spherical_tetra_volume(v), s.circumcentre)
            })
            .collect();
        let mut acc = vec![[0.0; 4]; orbits.basis.len()];
        for (s, (vol, x)) in tri.simplices.iter().zip(&weighted) {
            for &v in &s.vertices {
                let v = v as usize;
                // Representative copy: identity element, positive sign.
                if v % (2 * m) == 0 {
                    for c in 0..4 {
                        acc[v / (2 * m)][c] += vol * x[c];
                    }
                }
            }
        }
        let mut disp: f64 = 0.0;
        for (k, a) in acc.iter().enumerate() {
            if dot4(a, a) > 0.0 {
                let x = orbits.basis[k];
                let t = normalize4(*a);
                let q = normalize4(std::array::from_fn(|c| x[c] + relax * (t[c] - x[c])));
                disp = disp.max(angle(&q, &x));
                orbits.set_basis(k, q);
            }
        }
        out.rounds = round + 1;
        out.max_displacement = disp;
        tri = match orbits.triangulate() {
            Ok(t) => t,
            Err(e) => {
                out.warning = Some(format!("triangulation failed in round {}: {e}", round + 1));
                break;
            }
        };
        if tri.covering_radius > prev_theta {
            relax = (relax * 0.5f64).max(1.0 / 64.0);
        }
        prev_theta = tri.covering_radius;
        if tri.covering_radius < out.theta {
            out.theta = tri.covering_radius;
            out.basis = orbits.basis.clone();
        }
        if disp < 1e-10 {
            break;
        }
    }
    Ok(out)
}
