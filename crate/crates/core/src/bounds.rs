//! Simplex bound on S³.
//!
//! The conjectured lowest covering density is attained by regular spherical
//! tetrahedra with a cap of radius θ at each vertex. Its density compares the
//! four cap–tetrahedron intersections with the tetrahedron volume; solving
//! `N = 2π² τ(θ*) / C₃(θ*)` gives the smallest covering radius `θ*` any set
//! of `N` points could reach. Angles are radians unless a name says `_deg`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::dilog::dilog;
use crate::error::{Error, Result};

/// Surface area of S³.
pub const SPHERE_AREA: f64 = 2.0 * PI * PI;

/// Below this the volume formula loses all precision to cancellation.
const MIN_RELIABLE_VOLUME: f64 = 1e-11;

/// Volume of a cap of angular radius `theta` on S³.
pub fn cap_volume(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta, "[0, π]"));
    }
    Ok(PI * (2.0 * theta - (2.0 * theta).sin()))
}

/// Edge arc of the regular spherical tetrahedron with circumradius `theta`.
pub fn edge_length(theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    ((4.0 * c2 - 1.0) / 3.0).clamp(-1.0, 1.0).acos()
}

pub fn dihedral_angle(theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    ((4.0 * c2 - 1.0) / (8.0 * c2 + 1.0)).clamp(-1.0, 1.0).acos()
}

/// Solid angle at a vertex of the regular tetrahedron.
pub fn solid_angle(theta: f64) -> f64 {
    3.0 * dihedral_angle(theta) - PI
}

#[derive(Clone, Copy, Debug)]
pub struct RegularTetrahedronGeometry {
    pub theta: f64,
    pub edge: f64,
    pub dihedral: f64,
    pub solid_angle: f64,
    pub q: Complex64,
    pub l: Complex64,
    pub z0: Complex64,
    pub volume: f64,
}

/// Regular spherical tetrahedron of circumradius `theta`, with its volume
/// from the equal-dihedral form of Murakami's formula.
pub fn regular_tetrahedron(theta: f64) -> Result<RegularTetrahedronGeometry> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::AngleOutOfRange(theta, "(0, π/2)"));
    }
    let psi = dihedral_angle(theta);
    let e = |k: f64| Complex64::from_polar(1.0, -k * psi);
    let q = 3.0 * e(2.0) + 4.0 * e(3.0) + e(6.0);
    let cp = psi.cos();
    let root = ((cp + 1.0).powi(3) * (1.0 - 3.0 * cp)).max(0.0).sqrt();
    let z0 = (-6.0 * psi.sin().powi(2) + 2.0 * root) / q;
    let l = 0.5 * (dilog(z0) + 3.0 * dilog(z0 * e(4.0)) - 4.0 * dilog(-z0 * e(3.0)) - 3.0 * psi * psi);
    let raw = -l.re + PI * ((-q).arg() + 3.0 * psi) - 1.5 * PI * PI;
    let volume = raw.rem_euclid(SPHERE_AREA);
    if !volume.is_finite() || volume < MIN_RELIABLE_VOLUME || volume >= SPHERE_AREA {
        return Err(Error::VolumeBranch { theta, raw });
    }
    Ok(RegularTetrahedronGeometry {
        theta,
        edge: edge_length(theta),
        dihedral: psi,
        solid_angle: 3.0 * psi - PI,
        q,
        l,
        z0,
        volume,
    })
}

pub fn regular_tet_volume(theta: f64) -> Result<f64> {
    Ok(regular_tetrahedron(theta)?.volume)
}

/// Density `N C₃(θ) / 2π²` of `n` caps of radius `theta`.
pub fn covering_density(n: usize, theta: f64) -> Result<f64> {
    Ok(n as f64 * cap_volume(theta)? / SPHERE_AREA)
}

/// Density of the regular-tetrahedron cell: four cap sectors over its volume.
pub fn simplex_bound_density(theta: f64) -> Result<f64> {
    let t = regular_tetrahedron(theta)?;
    Ok(4.0 * cap_volume(theta)? * (t.solid_angle / (4.0 * PI)) / t.volume)
}

/// Point count at which the simplex bound equals `theta`.
pub fn bound_point_count(theta: f64) -> Result<f64> {
    Ok(SPHERE_AREA * simplex_bound_density(theta)? / cap_volume(theta)?)
}

/// Simplex-bound covering radius θ* for `n` points on S³ (`n` counts both
/// `q` and `-q`).
pub fn lower_bound_radius(n: usize) -> Result<f64> {
    if n < 5 {
        return Err(Error::TooFewPoints(n));
    }
    let target = n as f64;
    // The count diverges as θ → 0; the low end is taken as above any target
    // rather than evaluated where the volume is pure cancellation noise. At
    // 90° the formula is singular, and the count there tends to 4.
    let mut lo = 0.001f64.to_radians();
    let mut hi = 89.9f64.to_radians();
    if bound_point_count(hi)? > target {
        return Err(Error::Bracket(format!("count at 89.9° exceeds {n}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let c = bound_point_count(mid).map_err(|e| Error::Bracket(format!("N = {n}: {e}")))?;
        if c > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let residual = (bound_point_count(theta)? - target).abs();
    if residual > 1e-6 * target {
        return Err(Error::Bracket(format!("N = {n}: residual {residual:e} at θ = {theta}")));
    }
    Ok(theta)
}

/// Percent excess `100 (θ / θ* - 1)` of a measured radius over the bound.
pub fn optimality_gap(n: usize, theta: f64) -> Result<f64> {
    Ok(100.0 * (theta / lower_bound_radius(n)? - 1.0))
}

/// Quality summary of a point set. `n` counts points on S³; angles in
/// degrees. The gap is relative to a conjectured bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringReport {
    pub n: usize,
    pub theta_deg: f64,
    pub theta_star_deg: f64,
    pub gap_percent: f64,
    pub density: f64,
}

impl CoveringReport {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        let star = lower_bound_radius(n)?;
        Ok(CoveringReport {
            n,
            theta_deg: theta.to_degrees(),
            theta_star_deg: star.to_degrees(),
            gap_percent: 100.0 * (theta / star - 1.0),
            density: covering_density(n, theta)?,
        })
    }
}

impl fmt::Display for CoveringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "rotations={}", self.n / 2)?;
        writeln!(f, "theta_deg={:.10}", self.theta_deg)?;
        writeln!(f, "alpha_max_deg={:.10}", 2.0 * self.theta_deg)?;
        writeln!(f, "theta_star_deg={:.4}", self.theta_star_deg)?;
        writeln!(f, "gap_percent_conjectured={:.2}", self.gap_percent)?;
        write!(f, "density={:.6}", self.density)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIX_HUNDRED_CELL_DEG: f64 = 22.238756093;

    #[test]
    fn cap_volume_values() {
        assert!((cap_volume(PI / 2.0).unwrap() - PI * PI).abs() < 1e-12);
        assert!((cap_volume(PI).unwrap() - SPHERE_AREA).abs() < 1e-12);
        let small = cap_volume(0.01).unwrap();
        let euclid = 4.0 * PI / 3.0 * 1e-6;
        assert!((small / euclid - 1.0).abs() < 0.01);
        assert!(cap_volume(-0.1).is_err());
        assert!(cap_volume(3.2).is_err());
    }

    #[test]
    fn edge_and_angles() {
        assert!((edge_length(PI / 3.0).to_degrees() - 90.0).abs() < 1e-12);
        let t = 1e-5;
        assert!((edge_length(t) / t - (8.0f64 / 3.0).sqrt()).abs() < 1e-6);
        let th = SIX_HUNDRED_CELL_DEG.to_radians();
        assert!((edge_length(th).to_degrees() - 36.0).abs() < 0.01);
        assert!((dihedral_angle(th).to_degrees() - 72.0).abs() < 0.01);
        assert!((solid_angle(PI / 3.0) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn euclidean_limit() {
        let t = 1e-4;
        assert!((solid_angle(t) - (23.0f64 / 27.0).acos()).abs() < 1e-6);
        assert!((dihedral_angle(t) - (1.0f64 / 3.0).acos()).abs() < 1e-6);
    }

    #[test]
    fn tessellating_volumes() {
        let v16 = regular_tet_volume(PI / 3.0).unwrap();
        assert!((v16 - PI * PI / 8.0).abs() < 1e-9);
        let v600 = regular_tet_volume(SIX_HUNDRED_CELL_DEG.to_radians()).unwrap();
        assert!((v600 - SPHERE_AREA / 600.0).abs() < 1e-9);
        // Five cells fill S³ in the 5-cell.
        let v5 = regular_tet_volume(0.25f64.acos()).unwrap();
        assert!((v5 - SPHERE_AREA / 5.0).abs() < 1e-9);
    }

    #[test]
    fn bound_is_tight_at_tessellations() {
        let th = SIX_HUNDRED_CELL_DEG.to_radians();
        let tau = covering_density(120, th).unwrap();
        assert!((tau - 1.4448).abs() < 1e-3);
        assert!((simplex_bound_density(th).unwrap() - tau).abs() < 1e-4);
        let tau16 = covering_density(8, PI / 3.0).unwrap();
        assert!((simplex_bound_density(PI / 3.0).unwrap() - tau16).abs() < 1e-9);
        assert!((covering_density(1, PI).unwrap() - 1.0).abs() < 1e-15);
        assert!(optimality_gap(8, PI / 3.0).unwrap().abs() < 1e-6);
        assert!(optimality_gap(120, th).unwrap().abs() < 1e-5);
    }

    #[test]
    fn lower_bound_values() {
        for (n, want) in [(8, 60.0), (120, 22.24), (1920, 8.73), (180000, 1.92)] {
            let got = lower_bound_radius(n).unwrap().to_degrees();
            assert!((got - want).abs() < 0.01, "N={n}: {got}");
        }
        assert!((lower_bound_radius(5).unwrap() - 0.25f64.acos()).abs() < 1e-9);
        assert!(lower_bound_radius(4).is_err());
        assert!((optimality_gap(1920, 9.05f64.to_radians()).unwrap() - 3.68).abs() < 0.01);
        assert!((optimality_gap(99960, 2.44f64.to_radians()).unwrap() - 4.64).abs() < 0.1);
    }

    #[test]
    fn lower_bound_is_decreasing() {
        let mut prev = f64::INFINITY;
        let mut n = 5.0f64;
        while n <= 1e6 {
            let t = lower_bound_radius(n as usize).unwrap();
            assert!(t < prev, "not decreasing at N={n}");
            prev = t;
            n *= 1.3;
        }
    }

    #[test]
    fn report_fields() {
        let r = CoveringReport::new(8, PI / 3.0).unwrap();
        assert!((r.theta_deg - 60.0).abs() < 1e-12);
        assert!(r.gap_percent.abs() < 1e-6);
        let text = r.to_string();
        assert!(text.contains("theta_star_deg=60.0000"));
        assert!(text.contains("alpha_max_deg=120.0000000000"));
    }
}
