//! Empirical error of an orientation set: the misorientation from random
//! orientations to their nearest set member, and the covering radius of
//! uniformly random sets for comparison.

use std::io::Write;

use rayon::prelude::*;

use crate::delaunay::triangulate;
use crate::error::{Error, Result};
use crate::quat::{dot4, random_quaternion, Quaternion};
use crate::rng::seeded;
use crate::symmetry::{expand_orbit, laue_group, GroupName, OrientationSet};

const LEAF: usize = 8;
/// Samples per RNG stream, so results do not depend on the thread count.
const CHUNK: usize = 1 << 14;

#[derive(Clone, Debug)]
enum Node {
    Leaf { start: u32, end: u32 },
    Split { dim: u8, value: f64, left: u32, right: u32 },
}

/// Static kd-tree over points in R⁴ with exact nearest-neighbour queries.
/// For unit vectors the Euclidean nearest point is the one with the largest
/// inner product.
#[derive(Clone, Debug)]
pub struct NnIndex {
    points: Vec<[f64; 4]>,
    order: Vec<u32>,
    nodes: Vec<Node>,
}

impl NnIndex {
    pub fn new(points: Vec<[f64; 4]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty);
        }
        let mut idx = NnIndex { order: (0..points.len() as u32).collect(), points, nodes: Vec::new() };
        let n = idx.order.len();
        idx.build(0, n);
        Ok(idx)
    }

    fn build(&mut self, start: usize, end: usize) -> u32 {
        let id = self.nodes.len() as u32;
        if end - start <= LEAF {
            self.nodes.push(Node::Leaf { start: start as u32, end: end as u32 });
            return id;
        }
        let slice = &mut self.order[start..end];
        let pts = &self.points;
        let spread = |d: usize| {
            let (lo, hi) = slice.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = pts[i as usize][d];
                (lo.min(v), hi.max(v))
            });
            hi - lo
        };
        let dim = (0..4).max_by(|&a, &b| spread(a).total_cmp(&spread(b))).unwrap();
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| pts[a as usize][dim].total_cmp(&pts[b as usize][dim]));
        let value = pts[slice[mid] as usize][dim];
        self.nodes.push(Node::Split { dim: dim as u8, value, left: 0, right: 0 });
        let left = self.build(start, start + mid);
        let right = self.build(start + mid, end);
        self.nodes[id as usize] = Node::Split { dim: dim as u8, value, left, right };
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64; 4] {
        &self.points[i]
    }

    /// Index of the nearest point and its squared distance; ties go to the
    /// smaller index.
    pub fn nearest(&self, q: &[f64; 4]) -> (usize, f64) {
        let mut best = (f64::INFINITY, u32::MAX);
        self.search(0, q, &mut best);
        (best.1 as usize, best.0)
    }

    fn search(&self, node: u32, q: &[f64; 4], best: &mut (f64, u32)) {
        match self.nodes[node as usize] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start as usize..end as usize] {
                    let p = &self.points[i as usize];
                    let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2], q[3] - p[3]];
                    let d2 = dot4(&d, &d);
                    if d2 < best.0 || (d2 == best.0 && i < best.1) {
                        *best = (d2, i);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = q[dim as usize] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, best);
                if diff * diff <= best.0 {
                    self.search(far, q, best);
                }
            }
        }
    }
}

/// Index over the expanded, antipodally closed point set, so `q` and `-q`
/// find the same rotation.
pub fn build_nn_index(set: &OrientationSet) -> Result<NnIndex> {
    NnIndex::new(set.points.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorHistogram {
    /// `bins + 1` edges in degrees, spanning `[0, 2θ]`.
    pub bin_edges_deg: Vec<f64>,
    pub counts: Vec<u64>,
    pub samples: u64,
    pub max_deg: f64,
    pub mean_deg: f64,
}

/// Misorientation from `samples` uniform random orientations to their
/// nearest set member, binned over `[0, 2θ]`. Errors past the last edge
/// (only possible through rounding) land in the last bin.
pub fn error_histogram(set: &OrientationSet, samples: usize, bins: usize, seed: u64) -> Result<ErrorHistogram> {
    if samples == 0 || bins == 0 {
        return Err(Error::Degenerate("samples and bins must be positive".into()));
    }
    let theta = match set.covering_radius {
        Some(t) => t,
        None => triangulate(&set.points)?.covering_radius,
    };
    let index = build_nn_index(set)?;
    let top = 2.0 * theta.to_degrees();
    let width = top / bins as f64;

    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(Vec<u64>, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeded(seed, c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut counts = vec![0u64; bins];
            let (mut max, mut sum) = (0.0f64, 0.0);
            for _ in 0..count {
                let q = random_quaternion(&mut rng).to_array();
                let (i, _) = index.nearest(&q);
                let e = (2.0 * dot4(&q, index.point(i)).abs().min(1.0).acos()).to_degrees();
                let b = if width > 0.0 { ((e / width) as usize).min(bins - 1) } else { 0 };
                counts[b] += 1;
                max = max.max(e);
                sum += e;
            }
            (counts, max, sum)
        })
        .collect();

    let mut counts = vec![0u64; bins];
    let (mut max, mut sum) = (0.0f64, 0.0);
    for (c, m, s) in partial {
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
        max = max.max(m);
        sum += s;
    }
    Ok(ErrorHistogram {
        bin_edges_deg: (0..=bins).map(|k| k as f64 * width).collect(),
        counts,
        samples: samples as u64,
        max_deg: max,
        mean_deg: sum / samples as f64,
    })
}

pub fn write_histogram_csv<W: Write>(mut w: W, h: &ErrorHistogram) -> Result<()> {
    writeln!(w, "# so3cover-histogram v1")?;
    writeln!(w, "bin_left_deg,count")?;
    for (edge, count) in h.bin_edges_deg.iter().zip(&h.counts) {
        writeln!(w, "{edge:.6},{count}")?;
    }
    writeln!(w, "max_deg={:.6} mean_deg={:.6} samples={}", h.max_deg, h.mean_deg, h.samples)?;
    w.flush()?;
    Ok(())
}

/// Covering radius (radians) of each of `trials` uniformly random antipodal
/// sets of `n` points (`n / 2` rotations). Trial `t` uses stream `t`.
pub fn random_covering_radii(n: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 5 || n % 2 != 0 {
        let suggestion = n.max(6).next_multiple_of(2);
        return Err(Error::InvalidCount { n, group: "C1".into(), order: 1, suggestion });
    }
    let c1 = laue_group(GroupName::C1);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded(seed, t as u64);
            let basis: Vec<Quaternion> = (0..n / 2).map(|_| random_quaternion(&mut rng)).collect();
            Ok(triangulate(&expand_orbit(&basis, &c1).points)?.covering_radius)
        })
        .collect()
}

/// Mean covering radius (radians) of random sets of `n` points.
pub fn random_baseline(n: usize, trials: usize, seed: u64) -> Result<f64> {
    let r = random_covering_radii(n, trials.max(1), seed)?;
    Ok(r.iter().sum::<f64>() / r.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::sample_uniform;

    fn brute(points: &[[f64; 4]], q: &[f64; 4]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in points.iter().enumerate() {
            let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2], q[3] - p[3]];
            let d2 = dot4(&d, &d);
            if d2 < best.0 {
                best = (d2, i);
            }
        }
        best.1
    }

    #[test]
    fn kd_tree_matches_linear_scan() {
        let set = expand_orbit(&sample_uniform(1, 500), &laue_group(GroupName::D2));
        let idx = build_nn_index(&set).unwrap();
        for q in sample_uniform(2, 10_000) {
            let q = q.to_array();
            assert_eq!(idx.nearest(&q).0, brute(&set.points, &q));
        }
        // Members are their own nearest points.
        for (i, p) in set.points.iter().enumerate().step_by(37) {
            assert_eq!(idx.nearest(p), (i, 0.0));
        }
    }

    #[test]
    fn antipodes_give_the_same_error() {
        let set = expand_orbit(&sample_uniform(3, 50), &laue_group(GroupName::C1));
        let idx = build_nn_index(&set).unwrap();
        for q in sample_uniform(4, 100) {
            let a = q.to_array();
            let b = a.map(|c| -c);
            let ea = dot4(&a, idx.point(idx.nearest(&a).0)).abs();
            let eb = dot4(&b, idx.point(idx.nearest(&b).0)).abs();
            assert_eq!(ea, eb);
        }
    }

    #[test]
    fn empty_index_is_an_error() {
        assert!(matches!(NnIndex::new(Vec::new()), Err(Error::Empty)));
    }

    #[test]
    fn histogram_is_deterministic_and_bounded() {
        let set = expand_orbit(&sample_uniform(5, 200), &laue_group(GroupName::C1));
        let theta = triangulate(&set.points).unwrap().covering_radius;
        let a = error_histogram(&set, 40_000, 50, 9).unwrap();
        let b = error_histogram(&set, 40_000, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 40_000);
        assert!(a.max_deg <= 2.0 * theta.to_degrees() + 1e-6);
        assert!(a.mean_deg < a.max_deg);
        let mut csv = Vec::new();
        write_histogram_csv(&mut csv, &a).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("# so3cover-histogram v1\nbin_left_deg,count\n0.000000,"));
        assert!(text.lines().last().unwrap().starts_with("max_deg="));
        assert_eq!(text.lines().count(), 53);
    }

    #[test]
    fn baseline_single_trial_matches_direct_measurement() {
        let mean = random_baseline(120, 1, 3).unwrap();
        let mut rng = seeded(3, 0);
        let basis: Vec<Quaternion> = (0..60).map(|_| random_quaternion(&mut rng)).collect();
        let direct = triangulate(&expand_orbit(&basis, &laue_group(GroupName::C1)).points).unwrap().covering_radius;
        assert_eq!(mean, direct);
        assert_eq!(random_baseline(120, 5, 3).unwrap(), random_baseline(120, 5, 3).unwrap());
        assert!(random_baseline(7, 1, 0).is_err());
    }

    #[test]
    fn random_sets_are_far_from_the_600_cell() {
        let mean = random_baseline(120, 100, 1).unwrap().to_degrees();
        assert!(mean > 1.5 * 22.238756, "{mean}");
    }
}
