//! Command-line front end. Reports are `key=value` lines on stdout, angles in
//! degrees; stage progress goes to stderr.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{lower_bound_radius, simplex_bound_density, CoveringReport};
use crate::delaunay::triangulate;
use crate::error::Error;
use crate::evaluate::{error_histogram, random_covering_radii, write_histogram_csv};
use crate::io::{load_qset, save_qset};
use crate::optimize::{generate, PipelineConfig};
use crate::symmetry::{laue_group, table_subgroups, verify_group, GroupName};

/// Exit status for bad flags, unreadable or malformed input.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when a computation fails on valid input.
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "so3cover", version, about = "Near-optimal orientation sets on SO(3)")]
pub struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "SO3COVER_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a set and report its covering radius.
    Generate(GenerateArgs),
    /// Report the covering radius of a `.qset` file.
    Measure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Conjectured lower bound on the covering radius for n points.
    Bound {
        #[arg(long)]
        n: usize,
    },
    /// Check group tables; all groups and their subgroup relations if none is given.
    Verify {
        #[arg(long)]
        group: Option<GroupName>,
    },
    /// Histogram of the misorientation to the nearest set member.
    Histogram(HistogramArgs),
    /// Covering radius of uniformly random sets.
    Baseline {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Points on S³, i.e. twice the number of rotations.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "C1")]
    pub group: GroupName,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write every rotation instead of the basis.
    #[arg(long)]
    pub expanded: bool,
    #[arg(long, default_value_t = 3)]
    pub refine_passes: usize,
    #[arg(long, default_value_t = 50)]
    pub odt_iterations: usize,
    /// Suppress stage lines on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: Error,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

fn usage(error: Error) -> CliError {
    CliError { code: EXIT_USAGE, error }
}

fn failure(error: Error) -> CliError {
    // Problems with the request itself are usage errors wherever they surface.
    let code = match error {
        Error::InvalidCount { .. } | Error::UnknownGroup(_) | Error::Parse { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    };
    CliError { code, error }
}

fn io_err(e: std::io::Error) -> CliError {
    usage(Error::Io(e))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if cli.threads > 0 {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Measure { input } => {
            let file = load_qset(&input).map_err(usage)?;
            let theta = triangulate(&file.set.points).map_err(failure)?.covering_radius;
            let report = CoveringReport::new(file.set.len(), theta).map_err(failure)?;
            writeln!(out, "group={}", file.group).map_err(io_err)?;
            writeln!(out, "{report}").map_err(io_err)?;
            if let Some(stored) = file.theta_deg {
                writeln!(out, "stored_theta_deg={stored:.10}").map_err(io_err)?;
            }
            Ok(())
        }
        Command::Bound { n } => {
            let star = lower_bound_radius(n).map_err(usage)?;
            writeln!(out, "n={n}").map_err(io_err)?;
            writeln!(out, "theta_star_deg={:.4}", star.to_degrees()).map_err(io_err)?;
            writeln!(out, "density_bound={:.6}", simplex_bound_density(star).map_err(failure)?).map_err(io_err)
        }
        Command::Verify { group } => cmd_verify(group, out),
        Command::Histogram(a) => {
            let file = load_qset(&a.input).map_err(usage)?;
            let h = error_histogram(&file.set, a.samples, a.bins, a.seed).map_err(failure)?;
            match &a.out {
                Some(p) => write_histogram_csv(BufWriter::new(File::create(p).map_err(io_err)?), &h).map_err(usage)?,
                None => write_histogram_csv(&mut *out, &h).map_err(usage)?,
            }
            if a.out.is_some() {
                writeln!(out, "samples={}", h.samples).map_err(io_err)?;
                writeln!(out, "max_deg={:.10}", h.max_deg).map_err(io_err)?;
                writeln!(out, "mean_deg={:.10}", h.mean_deg).map_err(io_err)?;
            }
            Ok(())
        }
        Command::Baseline { n, trials, seed } => {
            let radii = random_covering_radii(n, trials.max(1), seed).map_err(failure)?;
            let mean = radii.iter().sum::<f64>() / radii.len() as f64;
            let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
            let star = lower_bound_radius(n).map_err(failure)?;
            writeln!(out, "n={n}").map_err(io_err)?;
            writeln!(out, "trials={}", radii.len()).map_err(io_err)?;
            writeln!(out, "theta_mean_deg={:.10}", mean.to_degrees()).map_err(io_err)?;
            writeln!(out, "theta_min_deg={:.10}", lo.to_degrees()).map_err(io_err)?;
            writeln!(out, "theta_max_deg={:.10}", hi.to_degrees()).map_err(io_err)?;
            writeln!(out, "gap_percent_conjectured={:.2}", 100.0 * (mean / star - 1.0)).map_err(io_err)
        }
    }
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let group = laue_group(a.group);
    let config = PipelineConfig {
        restarts: a.restarts,
        seed: a.seed,
        refine_passes: a.refine_passes,
        odt_iterations: a.odt_iterations,
        progress: !a.quiet,
        ..PipelineConfig::default()
    };
    let g = generate(a.n, &group, &config).map_err(failure)?;
    if let Some(p) = &a.out {
        save_qset(p, &g.set, a.expanded).map_err(usage)?;
    }
    writeln!(out, "group={}", a.group).map_err(io_err)?;
    writeln!(out, "{}", g.report).map_err(io_err)?;
    writeln!(out, "restarts={}", g.traces.len()).map_err(io_err)?;
    writeln!(out, "best_restart={}", g.best_restart).map_err(io_err)
}

fn cmd_verify(group: Option<GroupName>, out: &mut dyn Write) -> Result<(), CliError> {
    let names: Vec<GroupName> = match group {
        Some(g) => vec![g],
        None => GroupName::ALL.to_vec(),
    };
    let mut ok = true;
    for name in &names {
        let g = laue_group(*name);
        let report = verify_group(&g);
        ok &= report.passed();
        writeln!(out, "{report}").map_err(io_err)?;
    }
    if group.is_none() {
        // Subset relations implied by the tables must hold element-wise.
        for sup in GroupName::ALL {
            let sup_g = laue_group(sup);
            for sub in table_subgroups(sup) {
                let holds = laue_group(sub).is_subgroup_of(&sup_g);
                ok &= holds;
                writeln!(out, "subgroup={sub}<={sup} status={}", if holds { "pass" } else { "fail" })
                    .map_err(io_err)?;
            }
        }
        writeln!(out, "overall={}", if ok { "pass" } else { "fail" }).map_err(io_err)?;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError { code: EXIT_FAILURE, error: Error::Degenerate("group verification failed".into()) })
    }
}
