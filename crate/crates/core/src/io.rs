//! `.qset` orientation-set files.
//!
//! ```text
//! # so3cover-qset v1
//! group=2I
//! n=1920
//! theta_deg=9.1502496739611896e0
//! expanded=false
//! 9.8362540184366870e-1 1.2032010837045700e-1 ...
//! ```
//!
//! Header lines are `key=value`; `theta_deg` is optional. Each body row is a
//! unit quaternion `w x y z` with 17 significant digits in canonical sign.
//! With `expanded=false` the rows are the basis and `n` is the size of its
//! orbit under the group; with `expanded=true` the rows are every rotation of
//! the set (one of each `±q` pair) and `n` is twice the row count.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::quat::{canonical4, norm4, Quaternion};
use crate::symmetry::{expand_orbit, laue_group, GroupName, OrientationSet};

pub const MAGIC: &str = "# so3cover-qset v1";

/// A loaded file. For expanded files `set` carries the trivial group and
/// `group` is the label from the header.
#[derive(Clone, Debug)]
pub struct QsetFile {
    pub group: GroupName,
    pub n: usize,
    pub theta_deg: Option<f64>,
    pub expanded: bool,
    pub set: OrientationSet,
}

fn row(q: &[f64; 4]) -> String {
    let c = canonical4(*q);
    format!("{:.16e} {:.16e} {:.16e} {:.16e}", c[0], c[1], c[2], c[3])
}

pub fn write_qset<W: Write>(mut w: W, set: &OrientationSet, expanded: bool) -> Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "group={}", set.group.name)?;
    writeln!(w, "n={}", set.len())?;
    if let Some(t) = set.covering_radius {
        writeln!(w, "theta_deg={:.16e}", t.to_degrees())?;
    }
    writeln!(w, "expanded={expanded}")?;
    if expanded {
        // Points come in ± pairs; the canonical row is the same for both.
        let mut rows: Vec<String> = set.points.iter().map(row).collect();
        rows.sort();
        rows.dedup();
        for r in rows {
            writeln!(w, "{r}")?;
        }
    } else {
        for b in &set.basis {
            writeln!(w, "{}", row(&b.to_array()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_qset(path: impl AsRef<Path>, set: &OrientationSet, expanded: bool) -> Result<()> {
    write_qset(BufWriter::new(File::create(path)?), set, expanded)
}

pub fn read_qset<R: BufRead>(r: R) -> Result<QsetFile> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut group = None;
    let mut n = None;
    let mut theta_deg = None;
    let mut expanded = None;
    let mut rows: Vec<[f64; 4]> = Vec::new();
    let mut saw_magic = false;
    for (i, line) in r.lines().enumerate() {
        let ln = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if !saw_magic {
            if t != MAGIC {
                return Err(err(ln, format!("expected '{MAGIC}'")));
            }
            saw_magic = true;
            continue;
        }
        if t.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = t.split_once('=') {
            if !rows.is_empty() {
                return Err(err(ln, "header line after data".into()));
            }
            let v = v.trim();
            match k.trim() {
                "group" => group = Some(v.parse::<GroupName>().map_err(|e| err(ln, e.to_string()))?),
                "n" => n = Some(v.parse::<usize>().map_err(|e| err(ln, format!("n: {e}")))?),
                "theta_deg" => theta_deg = Some(v.parse::<f64>().map_err(|e| err(ln, format!("theta_deg: {e}")))?),
                "expanded" => expanded = Some(v.parse::<bool>().map_err(|e| err(ln, format!("expanded: {e}")))?),
                other => return Err(err(ln, format!("unknown header key '{other}'"))),
            }
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(err(ln, format!("expected 4 fields, found {}", fields.len())));
        }
        let mut q = [0.0; 4];
        for (c, f) in q.iter_mut().zip(&fields) {
            *c = f.parse().map_err(|_| err(ln, format!("not a number: '{f}'")))?;
        }
        let norm = norm4(&q);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(err(ln, format!("row is not unit norm (|q| = {norm:.17})")));
        }
        rows.push(q);
    }
    if !saw_magic {
        return Err(Error::Empty);
    }
    let group = group.ok_or_else(|| err(0, "missing 'group'".into()))?;
    let n = n.ok_or_else(|| err(0, "missing 'n'".into()))?;
    let expanded = expanded.ok_or_else(|| err(0, "missing 'expanded'".into()))?;
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    let basis: Vec<Quaternion> = rows.iter().map(|q| Quaternion::from_array_unchecked(*q)).collect();
    let mut set = if expanded {
        expand_orbit(&basis, &laue_group(GroupName::C1))
    } else {
        expand_orbit(&basis, &laue_group(group))
    };
    if set.len() != n {
        return Err(err(0, format!("header n={n} but the rows expand to {} points", set.len())));
    }
    set.covering_radius = theta_deg.map(f64::to_radians);
    Ok(QsetFile { group, n, theta_deg, expanded, set })
}

pub fn load_qset(path: impl AsRef<Path>) -> Result<QsetFile> {
    read_qset(BufReader::new(File::open(path)?))
}
