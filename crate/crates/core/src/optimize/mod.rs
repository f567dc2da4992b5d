//! Covering-radius reduction pipeline.
//!
//! Variables are the basis points; the group only enters through orbit
//! expansion, so every stage preserves symmetry exactly. One restart runs
//! random init → Riesz energy minimization → ODT smoothing → local
//! refinement; a stage that would raise the covering radius is rolled back.

mod nelder_mead;
mod odt;
mod refine;
mod riesz;

pub use nelder_mead::{nelder_mead, NelderMeadOutcome};
pub use odt::{odt_smooth, spherical_tetra_volume, OdtOutcome};
pub use refine::{local_refine, RefineOutcome};
pub use riesz::{minimize_riesz, riesz_energy, RieszEnergy, RieszOutcome};

use rayon::prelude::*;

use crate::bounds::CoveringReport;
use crate::delaunay::{triangulate, TriangulationS3};
use crate::error::{Error, Result};
use crate::quat::{canonical4, hamilton, random_quaternion, Quaternion};
use crate::rng::seeded;
use crate::symmetry::{expand_orbit, OrientationSet, QuaternionGroup};

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Riesz exponent; 0 selects the logarithmic energy.
    pub s: f64,
    /// Stop when the gradient norm falls below this fraction of its start.
    pub cg_tolerance: f64,
    pub cg_max_iters: usize,
    pub odt_iterations: usize,
    pub refine_passes: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Print `stage=... restart=... theta_deg=...` lines to stderr.
    pub progress: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            s: 2.0,
            cg_tolerance: 1e-8,
            cg_max_iters: 2000,
            odt_iterations: 50,
            refine_passes: 3,
            restarts: 10,
            seed: 0,
            progress: false,
        }
    }
}

/// The expanded point set without deduplication: point `2 (b m + g)` is
/// `basis[b] ⊗ elems[g]` and its antipode follows, `m = elems.len()`.
#[derive(Clone, Debug)]
pub(crate) struct Orbits {
    pub elems: Vec<[f64; 4]>,
    pub basis: Vec<[f64; 4]>,
    pub points: Vec<[f64; 4]>,
}

impl Orbits {
    pub fn new(basis: &[[f64; 4]], group: &QuaternionGroup) -> Self {
        let elems: Vec<[f64; 4]> = group.elements.iter().map(|e| e.to_array()).collect();
        let mut o = Orbits { elems, basis: basis.to_vec(), points: vec![[0.0; 4]; 2 * basis.len() * group.len()] };
        for k in 0..basis.len() {
            o.refresh(k);
        }
        o
    }

    pub fn orbit_size(&self) -> usize {
        2 * self.elems.len()
    }

    /// Basis index, element index and sign of point `i`.
    pub fn owner(&self, i: usize) -> (usize, usize, f64) {
        let m = self.elems.len();
        (i / (2 * m), (i / 2) % m, if i % 2 == 0 { 1.0 } else { -1.0 })
    }

    pub fn set_basis(&mut self, k: usize, q: [f64; 4]) {
        self.basis[k] = q;
        self.refresh(k);
    }

    fn refresh(&mut self, k: usize) {
        let m = self.elems.len();
        for g in 0..m {
            let p = hamilton(&self.basis[k], &self.elems[g]);
            self.points[2 * (k * m + g)] = p;
            self.points[2 * (k * m + g) + 1] = [-p[0], -p[1], -p[2], -p[3]];
        }
    }

    pub fn triangulate(&self) -> Result<TriangulationS3> {
        triangulate(&self.points)
    }
}

fn to_quaternions(basis: &[[f64; 4]]) -> Vec<Quaternion> {
    basis.iter().map(|b| Quaternion::from_array_unchecked(*b)).collect()
}

/// Number of basis points for `n` points on S³, or the nearest valid `n`.
pub fn basis_size(n: usize, group: &QuaternionGroup) -> Result<usize> {
    let orbit = 2 * group.len();
    if n >= 5 && n % orbit == 0 {
        return Ok(n / orbit);
    }
    let min = 5usize.div_ceil(orbit) * orbit;
    let down = (n / orbit) * orbit;
    let up = down + orbit;
    let suggestion = if down >= min && n - down < up - n { down } else { up.max(min) };
    Err(Error::InvalidCount { n, group: group.name.to_string(), order: group.len(), suggestion })
}

/// Covering radius after each stage of one restart, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageTrace {
    pub restart: usize,
    pub random: f64,
    pub riesz: f64,
    pub odt: f64,
    pub refine: f64,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub set: OrientationSet,
    pub report: CoveringReport,
    /// One trace per restart, in restart order.
    pub traces: Vec<StageTrace>,
    pub best_restart: usize,
}

fn announce(config: &PipelineConfig, stage: &str, restart: usize, theta: f64) {
    if config.progress {
        eprintln!("stage={stage} restart={restart} theta_deg={:.6}", theta.to_degrees());
    }
}

/// One restart from a random basis drawn from stream `restart`.
pub fn run_restart(
    m: usize,
    group: &QuaternionGroup,
    config: &PipelineConfig,
    restart: usize,
) -> Result<(Vec<[f64; 4]>, StageTrace)> {
    let mut rng = seeded(config.seed, restart as u64);
    let basis: Vec<[f64; 4]> = (0..m).map(|_| random_quaternion(&mut rng).to_array()).collect();
    let theta0 = Orbits::new(&basis, group).triangulate()?.covering_radius;
    announce(config, "random", restart, theta0);

    // Each stage is kept only if it does not raise the covering radius.
    let r = minimize_riesz(&basis, group, config)?;
    let theta_r = Orbits::new(&r.basis, group).triangulate()?.covering_radius;
    let (basis, theta1) = if theta_r <= theta0 { (r.basis, theta_r) } else { (basis, theta0) };
    announce(config, "riesz", restart, theta1);

    let o = odt_smooth(&basis, group, config.odt_iterations)?;
    let (basis, theta2) = if o.theta <= theta1 { (o.basis, o.theta) } else { (basis, theta1) };
    announce(config, "odt", restart, theta2);

    let f = local_refine(&basis, group, config.refine_passes)?;
    let (basis, theta3) = if f.theta <= theta2 { (f.basis, f.theta) } else { (basis, theta2) };
    announce(config, "refine", restart, theta3);

    Ok((basis, StageTrace { restart, random: theta0, riesz: theta1, odt: theta2, refine: theta3 }))
}

/// Best of `config.restarts` independent pipelines for `n` points on S³
/// (`n / 2` rotations) with symmetry `group`. Deterministic for a fixed seed.
pub fn generate(n: usize, group: &QuaternionGroup, config: &PipelineConfig) -> Result<Generated> {
    let m = basis_size(n, group)?;
    let restarts = config.restarts.max(1);
    let runs: Vec<Result<(Vec<[f64; 4]>, StageTrace)>> =
        (0..restarts).into_par_iter().map(|r| run_restart(m, group, config, r)).collect();
    let mut traces = Vec::with_capacity(restarts);
    let mut best: Option<(Vec<[f64; 4]>, usize, f64)> = None;
    for run in runs {
        let (basis, trace) = run?;
        if best.as_ref().is_none_or(|b| trace.refine < b.2) {
            best = Some((basis, trace.restart, trace.refine));
        }
        traces.push(trace);
    }
    let (basis, best_restart, _) = best.expect("at least one restart");
    // Canonical sign so a written basis reloads to bit-identical points.
    let basis: Vec<[f64; 4]> = basis.into_iter().map(canonical4).collect();
    let mut set = expand_orbit(&to_quaternions(&basis), group);
    let theta = triangulate(&set.points)?.covering_radius;
    set.covering_radius = Some(theta);
    let report = CoveringReport::new(set.len(), theta)?;
    Ok(Generated { set, report, traces, best_restart })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{laue_group, GroupName};

    #[test]
    fn count_validation() {
        let c1 = laue_group(GroupName::C1);
        assert_eq!(basis_size(8, &c1).unwrap(), 4);
        match basis_size(7, &c1) {
            Err(Error::InvalidCount { suggestion, .. }) => assert_eq!(suggestion, 8),
            other => panic!("{other:?}"),
        }
        match basis_size(2, &c1) {
            Err(Error::InvalidCount { suggestion, .. }) => assert_eq!(suggestion, 6),
            other => panic!("{other:?}"),
        }
        let i = laue_group(GroupName::I2);
        assert_eq!(basis_size(120, &i).unwrap(), 1);
        assert_eq!(basis_size(1920, &i).unwrap(), 16);
        match basis_size(1000, &i) {
            Err(Error::InvalidCount { suggestion, .. }) => assert_eq!(suggestion, 960),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orbits_layout() {
        let g = laue_group(GroupName::D2);
        let b = [crate::quat::sample_uniform(5, 1)[0].to_array()];
        let o = Orbits::new(&b, &g);
        assert_eq!(o.points.len(), 8);
        let (k, e, s) = o.owner(5);
        assert_eq!((k, e, s), (0, 2, -1.0));
        let want = hamilton(&b[0], &g.elements[2].to_array());
        for c in 0..4 {
            assert_eq!(o.points[5][c], -want[c]);
        }
    }

    #[test]
    fn six_hundred_cell_from_any_seed() {
        let g = laue_group(GroupName::I2);
        let cfg = PipelineConfig { restarts: 1, seed: 7, ..Default::default() };
        let out = generate(120, &g, &cfg).unwrap();
        assert!((out.report.theta_deg - 22.238756).abs() < 1e-4);
        assert!(out.report.gap_percent.abs() < 0.01);
    }
}
