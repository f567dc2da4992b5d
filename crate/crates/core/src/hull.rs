//! Convex hull of points in R⁴.
//!
//! Incremental construction with conflict lists: every unprocessed point is
//! attached to one facet it can see, the furthest point of a facet is
//! inserted next, its visible region is found by a walk over facet
//! adjacency, and the horizon is coned to the new point. Visibility uses the
//! filtered exact predicate from [`crate::exact`], so degenerate inputs
//! (such as the highly symmetric polytopes) produce a consistent simplicial
//! complex. Coplanar facets of a degenerate face come out fan-triangulated.

use crate::error::{Error, Result};
use crate::exact::{cofactor_normal, orient, orient_filter};

const NONE: u32 = u32::MAX;

/// A simplicial hull: oriented facets (outward by the predicate's sign
/// convention) and, for each facet, the neighbour opposite each vertex.
#[derive(Clone, Debug)]
pub struct Hull {
    pub facets: Vec<[u32; 4]>,
    pub neighbors: Vec<[u32; 4]>,
    /// Input points that are not vertices of any facet (interior points or
    /// points lost to symbolic perturbation on a degenerate face).
    pub interior: Vec<u32>,
}

impl Hull {
    /// Number of distinct edges, for Euler-characteristic checks.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(self.facets.len() * 6);
        for f in &self.facets {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((f[i].min(f[j]), f[i].max(f[j])));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }
}

struct Facet {
    v: [u32; 4],
    nb: [u32; 4],
    normal: [f64; 4],
    abs_normal: [f64; 4],
    inv_norm: f64,
    outside: Vec<u32>,
    alive: bool,
}

struct Builder<'a> {
    pts: &'a [[f64; 4]],
    facets: Vec<Facet>,
    stamp: Vec<u32>,
    visible_flag: Vec<bool>,
    epoch: u32,
}

impl<'a> Builder<'a> {
    fn make_facet(&self, v: [u32; 4]) -> Facet {
        let p0 = &self.pts[v[0] as usize];
        let d = |k: usize| {
            let p = &self.pts[v[k] as usize];
            [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2], p[3] - p0[3]]
        };
        let (normal, abs_normal) = cofactor_normal(&d(1), &d(2), &d(3));
        let n = (normal.iter().map(|x| x * x).sum::<f64>()).sqrt();
        Facet {
            v,
            nb: [NONE; 4],
            normal,
            abs_normal,
            inv_norm: if n > 0.0 { 1.0 / n } else { 0.0 },
            outside: Vec::new(),
            alive: true,
        }
    }

    /// Whether point `p` lies strictly beyond facet `f` (symbolically perturbed).
    fn sees(&self, f: usize, p: u32) -> bool {
        let fc = &self.facets[f];
        let base = &self.pts[fc.v[0] as usize];
        let q = &self.pts[p as usize];
        let s = match orient_filter(&fc.normal, &fc.abs_normal, base, q) {
            Some(s) => s,
            None => {
                let v = fc.v;
                orient(
                    [
                        &self.pts[v[0] as usize],
                        &self.pts[v[1] as usize],
                        &self.pts[v[2] as usize],
                        &self.pts[v[3] as usize],
                        q,
                    ],
                    [v[0], v[1], v[2], v[3], p],
                )
            }
        };
        s > 0
    }

    fn distance(&self, f: usize, p: u32) -> f64 {
        let fc = &self.facets[f];
        let b = &self.pts[fc.v[0] as usize];
        let q = &self.pts[p as usize];
        let d = [q[0] - b[0], q[1] - b[1], q[2] - b[2], q[3] - b[3]];
        (fc.normal[0] * d[0] + fc.normal[1] * d[1] + fc.normal[2] * d[2] + fc.normal[3] * d[3]) * fc.inv_norm
    }
}

/// Picks five affinely independent points spread far apart.
fn initial_simplex(pts: &[[f64; 4]], avoid_antipodes: bool) -> Result<[u32; 5]> {
    let n = pts.len();
    let dist2 = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
    let i0 = (0..n).max_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0])).unwrap();
    // Antipodal pairs in the start simplex put facets through the origin,
    // which makes every other antipodal pair exactly degenerate against them.
    let antipodal = |a: &[f64; 4], b: &[f64; 4]| {
        let s: f64 = (0..4).map(|k| (a[k] + b[k]).powi(2)).sum();
        avoid_antipodes && s <= 1e-24 * (0..4).map(|k| a[k] * a[k]).sum::<f64>()
    };
    let i1 = (0..n)
        .filter(|&i| !antipodal(&pts[i], &pts[i0]))
        .max_by(|&a, &b| dist2(&pts[a], &pts[i0]).total_cmp(&dist2(&pts[b], &pts[i0])))
        .unwrap_or(i0);

    // Greedy Gram-Schmidt: each next point maximizes distance to the affine
    // span of the ones chosen so far.
    let mut chosen = vec![i0, i1];
    let mut basis: Vec<[f64; 4]> = Vec::new();
    let origin = pts[i0];
    let push_dir = |basis: &mut Vec<[f64; 4]>, p: &[f64; 4]| -> f64 {
        let mut v = [p[0] - origin[0], p[1] - origin[1], p[2] - origin[2], p[3] - origin[3]];
        for b in basis.iter() {
            let d: f64 = (0..4).map(|k| v[k] * b[k]).sum();
            for k in 0..4 {
                v[k] -= d * b[k];
            }
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 0.0 {
            basis.push([v[0] / nrm, v[1] / nrm, v[2] / nrm, v[3] / nrm]);
        }
        nrm
    };
    push_dir(&mut basis, &pts[i1]);
    let scale = dist2(&pts[i0], &pts[i1]).sqrt();
    if scale == 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    for _ in 0..3 {
        let resid = |p: &[f64; 4]| {
            let mut v = [p[0] - origin[0], p[1] - origin[1], p[2] - origin[2], p[3] - origin[3]];
            for b in basis.iter() {
                let d: f64 = (0..4).map(|k| v[k] * b[k]).sum();
                for k in 0..4 {
                    v[k] -= d * b[k];
                }
            }
            v.iter().map(|x| x * x).sum::<f64>()
        };
        let best = (0..n)
            .filter(|i| !chosen.contains(i) && !chosen.iter().any(|&c| antipodal(&pts[*i], &pts[c])))
            .max_by(|&a, &b| resid(&pts[a]).total_cmp(&resid(&pts[b])))
            .ok_or_else(|| Error::Degenerate("points lie in a 3-flat".into()))?;
        if resid(&pts[best]).sqrt() < 1e-12 * scale {
            return Err(Error::Degenerate("points lie in a 3-flat".into()));
        }
        push_dir(&mut basis, &pts[best]);
        chosen.push(best);
    }
    Ok([chosen[0] as u32, chosen[1] as u32, chosen[2] as u32, chosen[3] as u32, chosen[4] as u32])
}

pub fn convex_hull_4d(pts: &[[f64; 4]]) -> Result<Hull> {
    if pts.len() < 5 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    if pts.len() >= NONE as usize {
        return Err(Error::Degenerate("too many points".into()));
    }
    // Some sets (the 16-cell) have no antipode-free full-dimensional simplex.
    let simplex = initial_simplex(pts, true).or_else(|_| initial_simplex(pts, false))?;
    let cap = 32 * pts.len();
    let mut b = Builder {
        pts,
        facets: Vec::with_capacity(cap),
        stamp: Vec::with_capacity(cap),
        visible_flag: Vec::with_capacity(cap),
        epoch: 0,
    };

    // Facet k is opposite simplex vertex k, oriented so that vertex k is beneath.
    for k in 0..5 {
        let mut v: Vec<u32> = (0..5).filter(|&i| i != k).map(|i| simplex[i]).collect();
        let o = simplex[k];
        let s = orient(
            [&pts[v[0] as usize], &pts[v[1] as usize], &pts[v[2] as usize], &pts[v[3] as usize], &pts[o as usize]],
            [v[0], v[1], v[2], v[3], o],
        );
        if s > 0 {
            v.swap(0, 1);
        }
        let f = b.make_facet([v[0], v[1], v[2], v[3]]);
        b.facets.push(f);
    }
    for k in 0..5 {
        for slot in 0..4 {
            // The neighbour across the ridge missing v[slot] is the facet
            // opposite that vertex.
            let missing = b.facets[k].v[slot];
            let other = simplex.iter().position(|&s| s == missing).unwrap();
            b.facets[k].nb[slot] = other as u32;
        }
    }

    let mut interior = Vec::new();
    for p in 0..pts.len() as u32 {
        if simplex.contains(&p) {
            continue;
        }
        match (0..5).find(|&f| b.sees(f, p)) {
            Some(f) => b.facets[f].outside.push(p),
            None => interior.push(p),
        }
    }

    let mut pending: Vec<usize> = (0..5).filter(|&f| !b.facets[f].outside.is_empty()).collect();
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize)> = Vec::new();
    let mut new_facets: Vec<usize> = Vec::new();
    // Open ridges of the new cone; the horizon is small, so a flat list.
    let mut ridge_map: Vec<((u32, u32), usize, usize)> = Vec::new();
    let mut orphans: Vec<u32> = Vec::new();

    while let Some(f0) = pending.pop() {
        if !b.facets[f0].alive || b.facets[f0].outside.is_empty() {
            continue;
        }
        let (apex_pos, _) = b.facets[f0]
            .outside
            .iter()
            .enumerate()
            .map(|(i, &p)| (i, b.distance(f0, p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let apex = b.facets[f0].outside.swap_remove(apex_pos);

        // Visible region by walking adjacency from f0.
        b.epoch += 1;
        if b.stamp.len() < b.facets.len() {
            b.stamp.resize(b.facets.len(), 0);
            b.visible_flag.resize(b.facets.len(), false);
        }
        visible.clear();
        horizon.clear();
        b.stamp[f0] = b.epoch;
        b.visible_flag[f0] = true;
        visible.push(f0);
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for slot in 0..4 {
                let g = b.facets[f].nb[slot] as usize;
                if b.stamp[g] != b.epoch {
                    b.stamp[g] = b.epoch;
                    let vis = b.sees(g, apex);
                    b.visible_flag[g] = vis;
                    if vis {
                        visible.push(g);
                    }
                }
                if !b.visible_flag[g] {
                    horizon.push((f, slot));
                }
            }
        }

        // Cone the horizon to the apex.
        new_facets.clear();
        ridge_map.clear();
        for &(f, slot) in &horizon {
            let mut v = b.facets[f].v;
            v[slot] = apex;
            let mut nf = b.make_facet(v);
            let outer = b.facets[f].nb[slot];
            nf.nb[slot] = outer;
            let id = b.facets.len();
            b.facets.push(nf);
            let of = &mut b.facets[outer as usize];
            let back = of.nb.iter().position(|&x| x as usize == f).expect("adjacency is symmetric");
            of.nb[back] = id as u32;
            new_facets.push(id);

            for s in 0..4 {
                if s == slot {
                    continue;
                }
                // Ridge opposite v[s] contains the apex and the two vertices
                // other than v[s] and v[slot]... keyed by those two.
                let mut key = [NONE; 2];
                let mut k = 0;
                for (t, &x) in v.iter().enumerate() {
                    if t != s && t != slot {
                        key[k] = x;
                        k += 1;
                    }
                }
                let key = (key[0].min(key[1]), key[0].max(key[1]));
                match ridge_map.iter().position(|r| r.0 == key) {
                    Some(i) => {
                        let (_, other, other_slot) = ridge_map.swap_remove(i);
                        b.facets[id].nb[s] = other as u32;
                        b.facets[other].nb[other_slot] = id as u32;
                    }
                    None => ridge_map.push((key, id, s)),
                }
            }
        }
        debug_assert!(ridge_map.is_empty(), "horizon is not a closed 2-manifold");

        // Redistribute conflict points.
        orphans.clear();
        for &f in &visible {
            b.facets[f].alive = false;
            orphans.append(&mut b.facets[f].outside);
        }
        for &p in &orphans {
            match new_facets.iter().copied().find(|&f| b.sees(f, p)) {
                Some(f) => b.facets[f].outside.push(p),
                None => interior.push(p),
            }
        }
        for &f in &new_facets {
            if !b.facets[f].outside.is_empty() {
                pending.push(f);
            }
        }
    }

    // Compact the alive facets.
    let mut remap = vec![NONE; b.facets.len()];
    let mut facets = Vec::new();
    for (i, f) in b.facets.iter().enumerate() {
        if f.alive {
            remap[i] = facets.len() as u32;
            facets.push(f.v);
        }
    }
    let neighbors = b
        .facets
        .iter()
        .filter(|f| f.alive)
        .map(|f| f.nb.map(|g| remap[g as usize]))
        .collect();
    interior.sort_unstable();
    Ok(Hull { facets, neighbors, interior })
}
