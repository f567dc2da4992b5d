//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn unit(a: [f64; 4]) -> [f64; 4] {
    let n = dot(&a, &a).sqrt();
    a.map(|x| x / n)
}

/// Hamilton product written out from the quaternion multiplication table.
pub fn qmul(p: &[f64; 4], q: &[f64; 4]) -> [f64; 4] {
    let (a1, b1, c1, d1) = (p[0], p[1], p[2], p[3]);
    let (a2, b2, c2, d2) = (q[0], q[1], q[2], q[3]);
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Uniform point on S³ as a normalized standard Gaussian (Box-Muller).
pub fn gaussian_quat(r: &mut impl Rng) -> [f64; 4] {
    loop {
        let mut g = [0.0; 4];
        for pair in g.chunks_exact_mut(2) {
            let u1: f64 = r.gen::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = r.gen();
            let rad = (-2.0 * u1.ln()).sqrt();
            pair[0] = rad * (2.0 * PI * u2).cos();
            pair[1] = rad * (2.0 * PI * u2).sin();
        }
        if dot(&g, &g) > 1e-20 {
            return unit(g);
        }
    }
}

/// Angle on S³ between two unit vectors.
pub fn arc(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Monte Carlo estimate of the covering radius of an antipodal point set by
/// linear scan: the largest distance from a uniform sample to its nearest
/// point. Also returns the resolution `r`, the radius of a cap expected to
/// hold 10 samples; with high probability the true radius is below the
/// estimate plus `r`.
pub fn monte_carlo_max_min(points: &[[f64; 4]], samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let mut worst: f64 = 1.0;
    for _ in 0..samples {
        let q = gaussian_quat(&mut r);
        let best = points.iter().map(|p| dot(&q, p)).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.min(best);
    }
    let target = 10.0 * 2.0 * PI * PI / samples as f64;
    // Bisect C(r) = π (2r − sin 2r) = target.
    let (mut lo, mut hi) = (0.0, PI / 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if PI * (2.0 * mid - (2.0 * mid).sin()) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (worst.clamp(-1.0, 1.0).acos(), 0.5 * (lo + hi))
}

/// Number of facets of the convex hull by brute force over all 4-subsets;
/// general position is assumed.
pub fn brute_force_facets(points: &[[f64; 4]]) -> usize {
    let n = points.len();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let normal = null_vector([&points[a], &points[b], &points[c], &points[d]]);
                    let h = dot(&normal, &points[a]);
                    let mut pos = false;
                    let mut neg = false;
                    for (i, p) in points.iter().enumerate() {
                        if [a, b, c, d].contains(&i) {
                            continue;
                        }
                        let s = dot(&normal, p) - h;
                        pos |= s > 1e-12;
                        neg |= s < -1e-12;
                    }
                    if !(pos && neg) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Normal of the hyperplane through four points, by Gaussian elimination on
/// the 3×4 system of edge vectors.
fn null_vector(v: [&[f64; 4]; 4]) -> [f64; 4] {
    let mut m: Vec<[f64; 4]> = (1..4).map(|i| std::array::from_fn(|k| v[i][k] - v[0][k])).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..4 {
        if row == 3 {
            break;
        }
        let p = (row..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        if m[p][col].abs() < 1e-14 {
            continue;
        }
        m.swap(row, p);
        for r in 0..3 {
            if r != row {
                let f = m[r][col] / m[row][col];
                for k in 0..4 {
                    m[r][k] -= f * m[row][k];
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..4).find(|c| !pivots.contains(c)).unwrap();
    let mut x = [0.0; 4];
    x[free] = 1.0;
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free] / m[r][c];
    }
    x
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Vertices of the regular spherical tetrahedron with circumradius `theta`
/// centred on the identity.
pub fn regular_tet_vertices(theta: f64) -> [[f64; 4]; 4] {
    let s = 1.0 / 3f64.sqrt();
    let dirs = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    dirs.map(|d| [theta.cos(), theta.sin() * d[0], theta.sin() * d[1], theta.sin() * d[2]])
}

/// Volume of a spherical tetrahedron: gnomonic projection onto the tangent
/// space at the vertex mean, where the S³ volume element is
/// `(1 + |u|²)⁻²`, integrated by an `order`³ collapsed Gauss rule.
pub fn spherical_tet_volume_quadrature(v: &[[f64; 4]; 4], order: usize) -> f64 {
    let c = unit(std::array::from_fn(|k| v.iter().map(|p| p[k]).sum()));
    // Orthonormal frame of the tangent space at c.
    let mut frame: Vec<[f64; 4]> = Vec::new();
    for e in 0..4 {
        let mut t = [0.0; 4];
        t[e] = 1.0;
        let d = dot(&t, &c);
        for k in 0..4 {
            t[k] -= d * c[k];
        }
        for f in &frame {
            let d = dot(&t, f);
            for k in 0..4 {
                t[k] -= d * f[k];
            }
        }
        if dot(&t, &t) > 1e-8 {
            frame.push(unit(t));
        }
        if frame.len() == 3 {
            break;
        }
    }
    let proj: Vec<[f64; 3]> = v
        .iter()
        .map(|p| {
            let g: [f64; 4] = std::array::from_fn(|k| p[k] / dot(p, &c));
            [dot(&g, &frame[0]), dot(&g, &frame[1]), dot(&g, &frame[2])]
        })
        .collect();
    let e: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|k| proj[i + 1][k] - proj[0][k]));
    let det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    let rule: Vec<(f64, f64)> = gauss_legendre(order).into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    let mut sum = 0.0;
    for &(a, wa) in &rule {
        for &(b, wb) in &rule {
            for &(g, wg) in &rule {
                // Duffy map of the unit cube onto the simplex.
                let l1 = a;
                let l2 = (1.0 - a) * b;
                let l3 = (1.0 - a) * (1.0 - b) * g;
                let jac = (1.0 - a) * (1.0 - a) * (1.0 - b);
                let u: [f64; 3] = std::array::from_fn(|k| proj[0][k] + l1 * e[0][k] + l2 * e[1][k] + l3 * e[2][k]);
                let r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
                sum += wa * wb * wg * jac / ((1.0 + r2) * (1.0 + r2));
            }
        }
    }
    det.abs() * sum
}

/// Riesz s = 2 energy of an explicit point set over ordered pairs, with
/// compensated summation.
pub fn brute_riesz_energy(points: &[[f64; 4]]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d2: f64 = (0..4).map(|k| (p[k] - q[k]).powi(2)).sum();
            let t = 1.0 / d2;
            let s = sum + t;
            comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
            sum = s;
        }
    }
    sum + comp
}

/// Orbit `b ⊗ g` with antipodes, for basis `b` and group elements `g`.
pub fn expand(basis: &[[f64; 4]], elements: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    for b in basis {
        for g in elements {
            let p = qmul(b, g);
            out.push(p);
            out.push(p.map(|x| -x));
        }
    }
    out
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd(pub f64, pub f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd(s, b - (s - a))
}

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd(x, 0.0)
    }
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = two_sum(self.1, o.1);
        let s = quick_two_sum(s.0, s.1 + t.0);
        quick_two_sum(s.0, s.1 + t.1)
    }
    pub fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }
    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        quick_two_sum(p, e + (self.0 * o.1 + self.1 * o.0))
    }
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.0 / o.0;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.0 / o.0;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }
    pub fn sqrt(self) -> Dd {
        if self.0 <= 0.0 {
            return Dd::default();
        }
        let x = Dd::from(self.0.sqrt());
        // One Newton step doubles the precision.
        x.add(self.sub(x.mul(x)).div(x.add(x)))
    }
    pub fn value(self) -> f64 {
        self.0 + self.1
    }
}

pub type Dd4 = [Dd; 4];

pub fn dd4(a: &[f64; 4]) -> Dd4 {
    a.map(Dd::from)
}

pub fn dd_dot(a: &Dd4, b: &Dd4) -> Dd {
    (0..4).fold(Dd::default(), |s, k| s.add(a[k].mul(b[k])))
}

pub fn dd_unit(a: Dd4) -> Dd4 {
    let n = dd_dot(&a, &a).sqrt();
    a.map(|x| x.div(n))
}

pub fn dd_qmul(p: &Dd4, q: &Dd4) -> Dd4 {
    let m = |i: usize, j: usize| p[i].mul(q[j]);
    [
        m(0, 0).sub(m(1, 1)).sub(m(2, 2)).sub(m(3, 3)),
        m(0, 1).add(m(1, 0)).add(m(2, 3)).sub(m(3, 2)),
        m(0, 2).sub(m(1, 3)).add(m(2, 0)).add(m(3, 1)),
        m(0, 3).add(m(1, 2)).sub(m(2, 1)).add(m(3, 0)),
    ]
}

/// Riesz s = 2 energy over ordered pairs of the orbit `basis ⊗ elements`
/// with antipodes, in double-double arithmetic throughout.
pub fn dd_riesz_energy(basis: &[Dd4], elements: &[[f64; 4]]) -> Dd {
    let mut pts: Vec<Dd4> = Vec::new();
    for b in basis {
        for g in elements {
            let p = dd_qmul(b, &dd4(g));
            pts.push(p);
            pts.push(p.map(Dd::neg));
        }
    }
    let mut sum = Dd::default();
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if i != j {
                let d: Dd4 = std::array::from_fn(|k| p[k].sub(q[k]));
                sum = sum.add(Dd::from(1.0).div(dd_dot(&d, &d)));
            }
        }
    }
    sum
}

/// Largest deviation between `gradient` and central differences of the
/// energy with step `h`, along a tangent frame at each basis point. The
/// energy is evaluated in double-double so that its rounding does not swamp
/// the difference quotient.
pub fn riesz_fd_error(basis: &[[f64; 4]], elements: &[[f64; 4]], gradient: &[[f64; 4]], h: f64) -> f64 {
    let base: Vec<Dd4> = basis.iter().map(dd4).collect();
    let mut worst: f64 = 0.0;
    for (b, p) in basis.iter().enumerate() {
        // Gram-Schmidt on the coordinate axes.
        let mut frame: Vec<[f64; 4]> = Vec::new();
        for e in 0..4 {
            let mut t = [0.0; 4];
            t[e] = 1.0;
            for f in std::iter::once(p).chain(frame.iter()) {
                let d = dot(&t, f);
                for k in 0..4 {
                    t[k] -= d * f[k];
                }
            }
            if dot(&t, &t) > 1e-6 && frame.len() < 3 {
                frame.push(unit(t));
            }
        }
        for t in &frame {
            let shifted = |s: f64| {
                let mut v = base.clone();
                v[b] = dd_unit(std::array::from_fn(|k| Dd::from(p[k]).add(Dd::from(s).mul(Dd::from(t[k])))));
                dd_riesz_energy(&v, elements)
            };
            let fd = shifted(h).sub(shifted(-h)).value() / (2.0 * h);
            worst = worst.max((fd - dot(&gradient[b], t)).abs());
        }
    }
    worst
}
