//! Simplex-wise local refinement.
//!
//! Simplices are visited from the largest circumradius down. The basis
//! points owning a simplex's vertices are moved together by Nelder-Mead in
//! Rodrigues-Frank coordinates about the simplex, after rotating it to the
//! identity. The objective re-triangulates a cap around the simplex and
//! takes the largest circumradius among the simplices that changed: those
//! incident to a moved vertex and those whose cap swallowed an old position.
//! A move is accepted only if it lowers that maximum, so the covering radius
//! never increases.

use super::nelder_mead::nelder_mead;
use super::Orbits;
use crate::delaunay::facet_circumcentre;
use crate::error::Result;
use crate::hull::convex_hull_4d;
use crate::quat::{dot4, from_rf, hamilton, normalize4, to_rf, Quaternion, RfVector};
use crate::symmetry::QuaternionGroup;

const NM_EVALS: usize = 200;
/// Neighbourhood radius in units of the covering radius, beyond the simplex.
const REGION_MARGIN: f64 = 2.5;
/// Past this radius the whole set is used.
const WHOLE_SET_DEG: f64 = 80.0;

#[derive(Clone, Debug)]
pub struct RefineOutcome {
    pub basis: Vec<[f64; 4]>,
    pub theta: f64,
    pub initial_theta: f64,
    pub passes: usize,
    pub visited: usize,
    pub accepted: usize,
}

fn conj(q: &[f64; 4]) -> [f64; 4] {
    [q[0], -q[1], -q[2], -q[3]]
}

fn acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// A cap of the expanded set around one simplex, with the moving points.
struct Neighbourhood<'a> {
    orbits: &'a Orbits,
    centre: [f64; 4],
    radius: Option<f64>,
    /// Expanded-set index of each local point.
    members: Vec<usize>,
    /// For each local point, the active slot of its basis point.
    slot: Vec<Option<usize>>,
    /// Local points that are vertices of the simplex being refined. Every
    /// other copy of an active basis point sees an isometric image of their
    /// neighbourhood, so only simplices at these need checking.
    carrier: Vec<bool>,
    /// Carrier positions before the move.
    old: Vec<[f64; 4]>,
    /// Per active slot: basis index, element index, sign of the simplex
    /// vertex that carries the variables.
    active: Vec<(usize, usize, f64)>,
    frame: [f64; 4],
}

impl Neighbourhood<'_> {
    /// Basis points for the variables `x` (3 RF coordinates per slot).
    fn basis_for(&self, x: &[f64]) -> Vec<[f64; 4]> {
        self.active
            .iter()
            .enumerate()
            .map(|(a, &(_, g, sign))| {
                let l = from_rf(RfVector([x[3 * a], x[3 * a + 1], x[3 * a + 2]])).to_array();
                let p = hamilton(&self.frame, &l);
                let b = hamilton(&p, &conj(&self.orbits.elems[g]));
                normalize4(b.map(|c| sign * c))
            })
            .collect()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let moved = self.basis_for(x);
        let pts: Vec<[f64; 4]> = self
            .members
            .iter()
            .zip(&self.slot)
            .map(|(&i, s)| match s {
                Some(a) => {
                    let (_, g, sign) = self.orbits.owner(i);
                    hamilton(&moved[*a], &self.orbits.elems[g]).map(|c| sign * c)
                }
                None => self.orbits.points[i],
            })
            .collect();
        let Ok(hull) = convex_hull_4d(&pts) else {
            return f64::INFINITY;
        };
        let mut worst: f64 = 0.0;
        for f in &hull.facets {
            let touches = f.iter().any(|&v| self.carrier[v as usize]);
            let n = facet_circumcentre(&pts, f);
            let swallowed = |n: &[f64; 4]| {
                let h = dot4(n, &pts[f[0] as usize]);
                self.old.iter().any(|q| dot4(n, q) > h + 1e-12)
            };
            match n {
                None if touches => return f64::INFINITY,
                None => continue,
                Some(n) if touches || swallowed(&n) => {
                    let h = dot4(&n, &pts[f[0] as usize]);
                    if h <= 0.0 {
                        return f64::INFINITY;
                    }
                    let phi = acos(h);
                    if let Some(r) = self.radius {
                        // The simplex is only trustworthy if its cap lies
                        // inside the neighbourhood.
                        if acos(dot4(&n, &self.centre)) + phi > r {
                            return f64::INFINITY;
                        }
                    }
                    worst = worst.max(phi);
                }
                Some(_) => {}
            }
        }
        worst
    }
}

/// Tries to improve one simplex; returns the new basis points on success.
/// `local` is the largest circumradius among simplices at the simplex's
/// vertices, which sizes the neighbourhood.
fn refine_simplex(orbits: &Orbits, vertices: [u32; 4], local: f64, theta: f64) -> Option<Vec<(usize, [f64; 4])>> {
    let p = vertices.map(|v| orbits.points[v as usize]);
    let n = facet_circumcentre(&orbits.points, &vertices)?;
    let phi = acos(dot4(&n, &p[0]));

    let mut active: Vec<(usize, usize, f64)> = Vec::with_capacity(4);
    let mut carriers = Vec::with_capacity(4);
    for &v in &vertices {
        let o = orbits.owner(v as usize);
        if !active.iter().any(|a| a.0 == o.0) {
            active.push(o);
            carriers.push(v as usize);
        }
    }
    let frame = normalize4(std::array::from_fn(|k| p[0][k] + p[1][k] + p[2][k] + p[3][k]));
    let mut x0 = Vec::with_capacity(3 * active.len());
    for &c in &carriers {
        let local = hamilton(&conj(&frame), &orbits.points[c]);
        let rf = to_rf(Quaternion::from_array_unchecked(local)).ok()?;
        x0.extend_from_slice(&rf.0);
    }

    // A tight cap first; if simplices at the start already reach past it,
    // a wider one.
    for r in [phi + 2.0 * local + 0.25 * theta, phi + REGION_MARGIN * theta] {
        let radius = (r < WHOLE_SET_DEG.to_radians()).then_some(r);
        let members: Vec<usize> = match radius {
            Some(r) => (0..orbits.points.len()).filter(|&i| dot4(&orbits.points[i], &n) >= r.cos()).collect(),
            None => (0..orbits.points.len()).collect(),
        };
        if members.len() < 5 {
            continue;
        }
        let slot: Vec<Option<usize>> =
            members.iter().map(|&i| active.iter().position(|a| a.0 == orbits.owner(i).0)).collect();
        let carrier: Vec<bool> = members.iter().map(|i| vertices.contains(&(*i as u32))).collect();
        let old: Vec<[f64; 4]> = p.to_vec();
        let hood =
            Neighbourhood { orbits, centre: n, radius, members, slot, carrier, old, active: active.clone(), frame };
        let f0 = hood.objective(&x0);
        if !f0.is_finite() {
            if radius.is_none() {
                return None;
            }
            continue;
        }
        let best = nelder_mead(|x| hood.objective(x), &x0, 0.1 * phi, NM_EVALS, 1e-12);
        if best.value < f0 - 1e-12 {
            let moved = hood.basis_for(&best.x);
            return Some(hood.active.iter().zip(moved).map(|(a, b)| (a.0, b)).collect());
        }
        return None;
    }
    None
}

/// Up to `passes` sweeps over the simplices of the current triangulation.
pub fn local_refine(basis: &[[f64; 4]], group: &QuaternionGroup, passes: usize) -> Result<RefineOutcome> {
    let mut orbits = Orbits::new(basis, group);
    let mut tri = orbits.triangulate()?;
    let mut out = RefineOutcome {
        basis: basis.to_vec(),
        theta: tri.covering_radius,
        initial_theta: tri.covering_radius,
        passes: 0,
        visited: 0,
        accepted: 0,
    };
    for pass in 0..passes {
        let theta = tri.covering_radius;
        let stars = tri.stars(orbits.points.len());
        let mut order: Vec<usize> = (0..tri.simplices.len()).collect();
        order.sort_by(|&a, &b| tri.simplices[b].circumradius.total_cmp(&tri.simplices[a].circumradius));
        // One representative per orbit of simplices.
        let mut seen = std::collections::HashSet::new();
        let mut accepted = 0;
        for &i in &order {
            let s = &tri.simplices[i];
            let mut key = s.vertices.map(|v| orbits.owner(v as usize).0);
            key.sort_unstable();
            if !seen.insert((key, (s.circumradius * 1e10).round() as i64)) {
                continue;
            }
            out.visited += 1;
            let local = s
                .vertices
                .iter()
                .flat_map(|&v| stars[v as usize].iter())
                .map(|&j| tri.simplices[j as usize].circumradius)
                .fold(0.0, f64::max);
            if let Some(moves) = refine_simplex(&orbits, s.vertices, local, theta) {
                for (k, b) in moves {
                    orbits.set_basis(k, b);
                }
                accepted += 1;
            }
        }
        out.passes = pass + 1;
        out.accepted += accepted;
        match orbits.triangulate() {
            Ok(t) if t.covering_radius <= out.theta => {
                out.theta = t.covering_radius;
                out.basis = orbits.basis.clone();
                tri = t;
            }
            _ => break,
        }
        if accepted == 0 {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{laue_group, GroupName};

    #[test]
    fn six_hundred_cell_is_stationary() {
        let g = laue_group(GroupName::I2);
        let out = local_refine(&[[1.0, 0.0, 0.0, 0.0]], &g, 2).unwrap();
        assert_eq!(out.accepted, 0);
        assert!((out.theta.to_degrees() - 22.238756).abs() < 1e-5);
    }

    #[test]
    fn random_set_improves() {
        let g = laue_group(GroupName::I2);
        let b: Vec<[f64; 4]> = crate::quat::sample_uniform(4, 3).iter().map(|q| q.to_array()).collect();
        let out = local_refine(&b, &g, 2).unwrap();
        assert!(out.accepted > 0);
        assert!(out.theta < out.initial_theta);
    }
}
