//! Delaunay triangulation of points on S³ and the exact covering radius.
//!
//! The Delaunay simplices of a point set on the sphere are the facets of its
//! convex hull. The circumcentre of a simplex is the unit normal of the
//! hyperplane through its vertices, computed as the 4-fold cross product of
//! its edge vectors, and the covering radius is the largest circumradius.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::cofactor_normal;
use crate::hull::{convex_hull_4d, Hull};
use crate::quat::{dot4, norm4};
use crate::symmetry::OrientationSet;

/// Relative size below which a cross product is treated as degenerate.
const DEGENERATE_REL: f64 = 1e-10;

/// Vector orthogonal to `s1, s2, s3` whose length is the 3-volume of the
/// parallelepiped they span.
pub fn cross_product_4d(s1: &[f64; 4], s2: &[f64; 4], s3: &[f64; 4]) -> Result<[f64; 4]> {
    let (n, _) = cofactor_normal(s1, s2, s3);
    let scale = norm4(s1) * norm4(s2) * norm4(s3);
    if norm4(&n) < 1e-12 || norm4(&n) <= DEGENERATE_REL * scale {
        return Err(Error::Degenerate("linearly dependent cross-product arguments".into()));
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalSimplex {
    pub vertices: [u32; 4],
    /// Unit circumcentre, on the empty side of the simplex hyperplane.
    pub circumcentre: [f64; 4],
    /// Angular circumradius in radians.
    pub circumradius: f64,
}

#[derive(Clone, Debug)]
pub struct TriangulationS3 {
    pub simplices: Vec<SphericalSimplex>,
    /// Adjacency: `neighbors[i][k]` is the simplex across from vertex `k`.
    pub neighbors: Vec<[u32; 4]>,
    /// Points that are not a vertex of any simplex. Empty for points in
    /// general position; may be non-empty on degenerate faces.
    pub unused_points: Vec<u32>,
    /// Covering radius in radians.
    pub covering_radius: f64,
}

impl TriangulationS3 {
    /// Incident simplices per point.
    pub fn stars(&self, n_points: usize) -> Vec<Vec<u32>> {
        let mut stars = vec![Vec::new(); n_points];
        for (i, s) in self.simplices.iter().enumerate() {
            for &v in &s.vertices {
                stars[v as usize].push(i as u32);
            }
        }
        stars
    }

    pub fn max_simplex(&self) -> Option<&SphericalSimplex> {
        self.simplices.iter().max_by(|a, b| a.circumradius.total_cmp(&b.circumradius))
    }
}

/// Circumcentre from the oriented facet vertex order (outward normal).
pub(crate) fn facet_circumcentre(points: &[[f64; 4]], f: &[u32; 4]) -> Option<[f64; 4]> {
    let p0 = &points[f[0] as usize];
    let d = |k: usize| {
        let p = &points[f[k] as usize];
        [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2], p[3] - p0[3]]
    };
    let n = cross_product_4d(&d(1), &d(2), &d(3)).ok()?;
    let len = norm4(&n);
    Some([n[0] / len, n[1] / len, n[2] / len, n[3] / len])
}

fn equidistant(points: &[[f64; 4]], f: &[u32; 4], x: &[f64; 4]) -> bool {
    let c0 = dot4(x, &points[f[0] as usize]);
    f[1..].iter().all(|&v| (dot4(x, &points[v as usize]) - c0).abs() < 1e-10)
}

/// Builds simplices from hull facets. Flat facets on a degenerate face take
/// the hyperplane of a coplanar neighbour.
pub fn simplices_from_hull(points: &[[f64; 4]], hull: &Hull) -> Result<Vec<SphericalSimplex>> {
    let centres: Vec<Option<[f64; 4]>> =
        hull.facets.par_iter().map(|f| facet_circumcentre(points, f)).collect();
    let mut out = Vec::with_capacity(hull.facets.len());
    for (i, f) in hull.facets.iter().enumerate() {
        let x = match centres[i] {
            Some(x) => x,
            None => borrow_centre(points, hull, &centres, i).ok_or_else(|| {
                Error::Degenerate(format!("simplex {f:?} has no well-defined circumcentre"))
            })?,
        };
        let c = dot4(&x, &points[f[0] as usize]).clamp(-1.0, 1.0);
        out.push(SphericalSimplex { vertices: *f, circumcentre: x, circumradius: c.acos() });
    }
    Ok(out)
}

fn borrow_centre(points: &[[f64; 4]], hull: &Hull, centres: &[Option<[f64; 4]>], start: usize) -> Option<[f64; 4]> {
    let f = &hull.facets[start];
    let mut queue = vec![start];
    let mut seen = vec![start];
    let mut head = 0;
    while head < queue.len() && seen.len() < 256 {
        let g = queue[head];
        head += 1;
        if let Some(x) = centres[g] {
            if equidistant(points, f, &x) {
                return Some(x);
            }
        }
        for &h in &hull.neighbors[g] {
            let h = h as usize;
            if !seen.contains(&h) {
                seen.push(h);
                queue.push(h);
            }
        }
    }
    None
}

pub fn triangulate(points: &[[f64; 4]]) -> Result<TriangulationS3> {
    let hull = convex_hull_4d(points)?;
    let simplices = simplices_from_hull(points, &hull)?;
    let covering_radius = simplices.iter().map(|s| s.circumradius).fold(0.0, f64::max);
    Ok(TriangulationS3 { simplices, neighbors: hull.neighbors, unused_points: hull.interior, covering_radius })
}

/// Covering radius θ and maximum misorientation α_max = 2θ, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringMeasure {
    pub theta: f64,
    pub alpha_max: f64,
}

pub fn covering_radius(set: &OrientationSet) -> Result<CoveringMeasure> {
    let theta = triangulate(&set.points)?.covering_radius;
    Ok(CoveringMeasure { theta, alpha_max: 2.0 * theta })
}
