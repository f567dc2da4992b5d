//! Binary quaternion groups for the Laue classes, orbit expansion of a basis
//! set, and rebasing onto a subgroup.
//!
//! Group elements are stored modulo sign (canonical `w > 0` representative).
//! The antipodal images are added only when a basis is expanded into a point
//! set, so an expanded set always has `2 · |basis| · |elements|` points for a
//! generic basis.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quat::{canonical4, hamilton, normalize4, quat_multiply, Quaternion};

/// Component-wise tolerance used when comparing canonical quaternions.
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupName {
    C1,
    C2,
    C3,
    C4,
    C6,
    D2,
    D3,
    D4,
    D6,
    T,
    O,
    I2,
}

impl GroupName {
    pub const ALL: [GroupName; 12] = [
        GroupName::C1,
        GroupName::C2,
        GroupName::C3,
        GroupName::C4,
        GroupName::C6,
        GroupName::D2,
        GroupName::D3,
        GroupName::D4,
        GroupName::D6,
        GroupName::T,
        GroupName::O,
        GroupName::I2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupName::C1 => "C1",
            GroupName::C2 => "C2",
            GroupName::C3 => "C3",
            GroupName::C4 => "C4",
            GroupName::C6 => "C6",
            GroupName::D2 => "D2",
            GroupName::D3 => "D3",
            GroupName::D4 => "D4",
            GroupName::D6 => "D6",
            GroupName::T => "T",
            GroupName::O => "O",
            GroupName::I2 => "2I",
        }
    }

    /// Number of elements modulo sign.
    pub fn order(self) -> usize {
        match self {
            GroupName::C1 => 1,
            GroupName::C2 => 2,
            GroupName::C3 => 3,
            GroupName::C4 | GroupName::D2 => 4,
            GroupName::C6 | GroupName::D3 => 6,
            GroupName::D4 => 8,
            GroupName::D6 | GroupName::T => 12,
            GroupName::O => 24,
            GroupName::I2 => 60,
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupName::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// A finite quaternion group acting on basis points by right multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionGroup {
    pub name: GroupName,
    /// Canonical-sign representatives; the identity is always first.
    pub elements: Vec<Quaternion>,
}

impl QuaternionGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        position_of(&self.elements, q).is_some()
    }

    pub fn is_subgroup_of(&self, other: &QuaternionGroup) -> bool {
        self.elements.iter().all(|e| other.contains(*e))
    }
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
const S3: f64 = 0.866_025_403_784_438_6; // sqrt(3) / 2

// Element table for the subsets of O, one membership flag per group in the
// column order O, T, D4, D2, C4, C2, C1.
#[rustfmt::skip]
const CUBIC_TABLE: [([f64; 4], [bool; 7]); 24] = [
    ([1.0, 0.0, 0.0, 0.0],   [true, true, true, true, true, true, true]),
    ([0.0, 0.0, 0.0, 1.0],   [true, true, true, true, true, true, false]),
    ([0.0, 1.0, 0.0, 0.0],   [true, true, true, true, false, false, false]),
    ([0.0, 0.0, 1.0, 0.0],   [true, true, true, true, false, false, false]),
    ([H, 0.0, 0.0, H],       [true, false, true, false, true, false, false]),
    ([H, 0.0, 0.0, -H],      [true, false, true, false, true, false, false]),
    ([0.0, H, H, 0.0],       [true, false, true, false, false, false, false]),
    ([0.0, -H, H, 0.0],      [true, false, true, false, false, false, false]),
    ([0.5, 0.5, -0.5, 0.5],  [true, true, false, false, false, false, false]),
    ([0.5, 0.5, 0.5, -0.5],  [true, true, false, false, false, false, false]),
    ([0.5, 0.5, -0.5, -0.5], [true, true, false, false, false, false, false]),
    ([0.5, -0.5, -0.5, -0.5],[true, true, false, false, false, false, false]),
    ([0.5, -0.5, 0.5, 0.5],  [true, true, false, false, false, false, false]),
    ([0.5, -0.5, 0.5, -0.5], [true, true, false, false, false, false, false]),
    ([0.5, -0.5, -0.5, 0.5], [true, true, false, false, false, false, false]),
    ([0.5, 0.5, 0.5, 0.5],   [true, true, false, false, false, false, false]),
    ([H, H, 0.0, 0.0],       [true, false, false, false, false, false, false]),
    ([H, -H, 0.0, 0.0],      [true, false, false, false, false, false, false]),
    ([H, 0.0, H, 0.0],       [true, false, false, false, false, false, false]),
    ([H, 0.0, -H, 0.0],      [true, false, false, false, false, false, false]),
    ([0.0, H, 0.0, H],       [true, false, false, false, false, false, false]),
    ([0.0, -H, 0.0, H],      [true, false, false, false, false, false, false]),
    ([0.0, 0.0, H, H],       [true, false, false, false, false, false, false]),
    ([0.0, 0.0, -H, H],      [true, false, false, false, false, false, false]),
];

const CUBIC_COLUMNS: [GroupName; 7] = [
    GroupName::O,
    GroupName::T,
    GroupName::D4,
    GroupName::D2,
    GroupName::C4,
    GroupName::C2,
    GroupName::C1,
];

// Subsets of D6, columns D6, D3, C6, C3, C1.
#[rustfmt::skip]
const HEXAGONAL_TABLE: [([f64; 4], [bool; 5]); 12] = [
    ([1.0, 0.0, 0.0, 0.0],  [true, true, true, true, true]),
    ([0.5, 0.0, 0.0, S3],   [true, true, true, true, false]),
    ([0.5, 0.0, 0.0, -S3],  [true, true, true, true, false]),
    ([0.0, 0.0, 0.0, 1.0],  [true, false, true, false, false]),
    ([S3, 0.0, 0.0, 0.5],   [true, false, true, false, false]),
    ([S3, 0.0, 0.0, -0.5],  [true, false, true, false, false]),
    ([0.0, 1.0, 0.0, 0.0],  [true, true, false, false, false]),
    ([0.0, -0.5, S3, 0.0],  [true, true, false, false, false]),
    ([0.0, 0.5, S3, 0.0],   [true, true, false, false, false]),
    ([0.0, S3, 0.5, 0.0],   [true, false, false, false, false]),
    ([0.0, -S3, 0.5, 0.0],  [true, false, false, false, false]),
    ([0.0, 0.0, 1.0, 0.0],  [true, false, false, false, false]),
];

const HEXAGONAL_COLUMNS: [GroupName; 5] =
    [GroupName::D6, GroupName::D3, GroupName::C6, GroupName::C3, GroupName::C1];

fn from_table<const K: usize>(
    table: &[([f64; 4], [bool; K])],
    columns: &[GroupName; K],
    name: GroupName,
) -> Option<Vec<Quaternion>> {
    let col = columns.iter().position(|c| *c == name)?;
    Some(
        table
            .iter()
            .filter(|(_, mask)| mask[col])
            .map(|(q, _)| Quaternion::from_array_unchecked(canonical4(normalize4(*q))))
            .collect(),
    )
}

/// Generators of the binary icosahedral group: a threefold element shared
/// with T and a fivefold golden-ratio element.
fn icosahedral_generators() -> Vec<Quaternion> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    vec![
        Quaternion::from_array_unchecked([0.5, 0.5, 0.5, 0.5]),
        Quaternion::from_array_unchecked(normalize4([phi / 2.0, 0.5, 1.0 / (2.0 * phi), 0.0])),
    ]
}

fn snap(q: Quaternion) -> Quaternion {
    let a = q.to_array().map(|c| if c.abs() < 1e-14 { 0.0 } else { c });
    Quaternion::from_array_unchecked(canonical4(a))
}

/// Closes a generator set under multiplication (modulo sign).
pub fn close_group(generators: &[Quaternion], limit: usize) -> Result<Vec<Quaternion>> {
    let mut elements = vec![Quaternion::IDENTITY];
    for g in generators {
        let g = snap(*g);
        if position_of(&elements, g).is_none() {
            elements.push(g);
        }
    }
    let mut frontier = 0;
    while frontier < elements.len() {
        let a = elements[frontier];
        let mut i = 0;
        while i < elements.len() {
            for c in [snap(quat_multiply(a, elements[i])), snap(quat_multiply(elements[i], a))] {
                if position_of(&elements, c).is_none() {
                    if elements.len() >= limit {
                        return Err(Error::GroupClosure(limit));
                    }
                    elements.push(c);
                }
            }
            i += 1;
        }
        frontier += 1;
    }
    Ok(elements)
}

pub fn laue_group(name: GroupName) -> QuaternionGroup {
    let elements = match name {
        GroupName::I2 => close_group(&icosahedral_generators(), 120)
            .expect("icosahedral generators close to a finite group"),
        GroupName::C3 | GroupName::C6 | GroupName::D3 | GroupName::D6 => {
            from_table(&HEXAGONAL_TABLE, &HEXAGONAL_COLUMNS, name).expect("hexagonal column")
        }
        _ => from_table(&CUBIC_TABLE, &CUBIC_COLUMNS, name).expect("cubic column"),
    };
    QuaternionGroup { name, elements }
}

/// Parses a group label and returns its element list.
pub fn laue_group_by_name(name: &str) -> Result<QuaternionGroup> {
    Ok(laue_group(name.parse()?))
}

/// Groups whose elements are a subset of `name`'s elements, per the
/// cubic (O) and hexagonal (D6) families.
pub fn table_subgroups(name: GroupName) -> Vec<GroupName> {
    let pick = |columns: &[GroupName], table: &dyn Fn(usize, usize) -> bool, rows: usize| {
        let sup = columns.iter().position(|c| *c == name)?;
        Some(
            columns
                .iter()
                .enumerate()
                .filter(|(col, _)| (0..rows).all(|r| !table(r, *col) || table(r, sup)))
                .map(|(_, g)| *g)
                .collect::<Vec<_>>(),
        )
    };
    let cubic = pick(&CUBIC_COLUMNS, &|r, c| CUBIC_TABLE[r].1[c], CUBIC_TABLE.len());
    let hex = pick(&HEXAGONAL_COLUMNS, &|r, c| HEXAGONAL_TABLE[r].1[c], HEXAGONAL_TABLE.len());
    let mut out: Vec<GroupName> = cubic.into_iter().chain(hex).flatten().collect();
    out.sort();
    out.dedup();
    out
}

/// Outcome of [`verify_group`].
#[derive(Clone, Debug, Default)]
pub struct GroupReport {
    pub name: String,
    pub order: usize,
    pub expected_order: usize,
    pub has_identity: bool,
    pub non_unit: Vec<usize>,
    pub duplicates: Vec<(usize, usize)>,
    /// `(i, j, product)` where `elements[i] ⊗ elements[j]` is not in the set.
    pub missing_products: Vec<(usize, usize, Quaternion)>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.has_identity
            && self.order == self.expected_order
            && self.non_unit.is_empty()
            && self.duplicates.is_empty()
            && self.missing_products.is_empty()
    }
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group={}", self.name)?;
        writeln!(f, "elements={}", self.order)?;
        writeln!(f, "expected={}", self.expected_order)?;
        writeln!(f, "identity={}", self.has_identity)?;
        writeln!(f, "closure_violations={}", self.missing_products.len())?;
        for (i, j, q) in self.missing_products.iter().take(5) {
            writeln!(f, "missing_product=e{i}*e{j}={q}")?;
        }
        write!(f, "status={}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Checks identity membership, closure modulo sign and cardinality.
pub fn verify_group(group: &QuaternionGroup) -> GroupReport {
    let els = &group.elements;
    let mut report = GroupReport {
        name: group.name.to_string(),
        order: els.len(),
        expected_order: group.name.order(),
        has_identity: group.contains(Quaternion::IDENTITY),
        ..Default::default()
    };
    for (i, e) in els.iter().enumerate() {
        if (e.norm() - 1.0).abs() > 1e-12 {
            report.non_unit.push(i);
        }
        for (j, f) in els.iter().enumerate().skip(i + 1) {
            if close(e.to_array(), f.to_array()) {
                report.duplicates.push((i, j));
            }
        }
    }
    for (i, a) in els.iter().enumerate() {
        for (j, b) in els.iter().enumerate() {
            let c = quat_multiply(*a, *b);
            if !group.contains(c) {
                report.missing_products.push((i, j, c));
            }
        }
    }
    report
}

fn close(a: [f64; 4], b: [f64; 4]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= DEDUP_TOL)
}

/// Canonical sign decided by the first component clearly away from zero,
/// so rounding noise in a zero `w` cannot flip the representative.
fn canonical_tol(a: [f64; 4]) -> [f64; 4] {
    let flip = a.iter().find(|c| c.abs() > DEDUP_TOL).is_some_and(|c| *c < 0.0);
    if flip {
        [-a[0], -a[1], -a[2], -a[3]]
    } else {
        a
    }
}

fn position_of(list: &[Quaternion], q: Quaternion) -> Option<usize> {
    let c = q.to_array();
    let m = [-c[0], -c[1], -c[2], -c[3]];
    list.iter().position(|e| close(e.to_array(), c) || close(e.to_array(), m))
}

/// Where an expanded point came from: `sign · basis[basis] ⊗ elements[element]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointOrigin {
    pub basis: u32,
    pub element: u32,
    pub negated: bool,
}

/// A basis set, the group acting on it, and the expanded antipodally closed
/// point set.
#[derive(Clone, Debug)]
pub struct OrientationSet {
    pub basis: Vec<Quaternion>,
    pub group: QuaternionGroup,
    pub points: Vec<[f64; 4]>,
    pub origins: Vec<PointOrigin>,
    /// Points dropped as duplicates during expansion (basis on a symmetry axis).
    pub duplicates_removed: usize,
    /// Measured covering radius in radians, when known.
    pub covering_radius: Option<f64>,
}

impl OrientationSet {
    /// Number of points on S³ (twice the number of distinct rotations).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rotation_count(&self) -> usize {
        self.points.len() / 2
    }

    pub fn quaternions(&self) -> impl Iterator<Item = Quaternion> + '_ {
        self.points.iter().map(|p| Quaternion::from_array_unchecked(*p))
    }
}

/// Expands `basis ⊗ group` plus antipodes. The point for basis `b`, element
/// `g` is stored at index `2 (b |G| + g)` (its antipode follows) unless an
/// earlier point coincides with it.
pub fn expand_orbit(basis: &[Quaternion], group: &QuaternionGroup) -> OrientationSet {
    let mut points = Vec::with_capacity(2 * basis.len() * group.len());
    let mut origins = Vec::with_capacity(points.capacity());
    for (bi, b) in basis.iter().enumerate() {
        for (gi, g) in group.elements.iter().enumerate() {
            let p = canonical4(normalize4(hamilton(&b.to_array(), &g.to_array())));
            points.push(p);
            origins.push(PointOrigin { basis: bi as u32, element: gi as u32, negated: false });
            points.push([-p[0], -p[1], -p[2], -p[3]]);
            origins.push(PointOrigin { basis: bi as u32, element: gi as u32, negated: true });
        }
    }
    let keep = dedup_mask(&points);
    let removed = keep.iter().filter(|k| !**k).count();
    if removed > 0 {
        let mut it = keep.iter();
        points.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        origins.retain(|_| *it.next().unwrap());
    }
    OrientationSet {
        basis: basis.to_vec(),
        group: group.clone(),
        points,
        origins,
        duplicates_removed: removed,
        covering_radius: None,
    }
}

/// `true` for the first occurrence of each point (component tolerance
/// [`DEDUP_TOL`]); sweep over the first component.
fn dedup_mask(points: &[[f64; 4]]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    let mut keep = vec![true; points.len()];
    for (k, &i) in order.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        for &j in &order[k + 1..] {
            if points[j][0] - points[i][0] > DEDUP_TOL {
                break;
            }
            if keep[j] && close(points[i], points[j]) {
                // Keep whichever came first in expansion order.
                if j > i {
                    keep[j] = false;
                } else {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    keep
}

/// Reinterprets a set under a subgroup: the basis becomes
/// `basis ⊗ coset representatives`, the expanded point set is unchanged.
pub fn rebase_to_subgroup(set: &OrientationSet, subgroup: GroupName) -> Result<OrientationSet> {
    let sub = laue_group(subgroup);
    if !sub.is_subgroup_of(&set.group) {
        return Err(Error::NotSubgroup {
            sub: subgroup.to_string(),
            sup: set.group.name.to_string(),
        });
    }
    let reps = left_coset_representatives(&set.group, &sub);
    let basis: Vec<Quaternion> = set
        .basis
        .iter()
        .flat_map(|b| reps.iter().map(move |r| quat_multiply(*b, *r)))
        .collect();
    let mut out = expand_orbit(&basis, &sub);
    out.covering_radius = set.covering_radius;
    Ok(out)
}

/// One representative per left coset `r ⊗ H`, the lexicographically smallest
/// canonical element of each coset, ordered by that representative.
pub fn left_coset_representatives(group: &QuaternionGroup, sub: &QuaternionGroup) -> Vec<Quaternion> {
    let mut assigned = vec![false; group.len()];
    let mut reps = Vec::new();
    for i in 0..group.len() {
        if assigned[i] {
            continue;
        }
        let mut members = Vec::new();
        for h in &sub.elements {
            let c = quat_multiply(group.elements[i], *h);
            if let Some(k) = position_of(&group.elements, c) {
                assigned[k] = true;
                members.push(group.elements[k]);
            }
        }
        let rep = members
            .into_iter()
            .min_by(|a, b| lex_cmp(&a.to_array(), &b.to_array()))
            .expect("coset contains its generator");
        reps.push(rep);
    }
    reps.sort_by(|a, b| lex_cmp(&a.to_array(), &b.to_array()));
    reps
}

fn lex_cmp(a: &[f64; 4], b: &[f64; 4]) -> std::cmp::Ordering {
    for k in 0..4 {
        if (a[k] - b[k]).abs() > DEDUP_TOL {
            return a[k].total_cmp(&b[k]);
        }
    }
    std::cmp::Ordering::Equal
}

/// Sorted canonical copies of a point set, for set-equality comparisons.
pub fn canonical_sorted(points: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut v: Vec<[f64; 4]> = points.iter().map(|p| canonical_tol(*p)).collect();
    v.sort_by(lex_cmp);
    v
}

/// Whether two point sets are equal as sets, up to sign of each point.
pub fn same_point_set(a: &[[f64; 4]], b: &[[f64; 4]]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (a, b) = (canonical_sorted(a), canonical_sorted(b));
    let mut used = vec![false; b.len()];
    // Sorted order makes matches local, but ties within DEDUP_TOL can reorder
    // neighbours, so search a small window.
    for (i, p) in a.iter().enumerate() {
        let lo = i.saturating_sub(8);
        let hi = (i + 9).min(b.len());
        match (lo..hi).find(|&j| !used[j] && close(*p, b[j])) {
            Some(j) => used[j] = true,
            None => match (0..b.len()).find(|&j| !used[j] && close(*p, b[j])) {
                Some(j) => used[j] = true,
                None => return false,
            },
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::sample_uniform;

    #[test]
    fn group_orders() {
        for name in GroupName::ALL {
            let g = laue_group(name);
            assert_eq!(g.len(), name.order(), "{name}");
            assert_eq!(g.elements[0], Quaternion::IDENTITY);
        }
    }

    #[test]
    fn example_elements() {
        assert_eq!(laue_group(GroupName::C1).elements, vec![Quaternion::IDENTITY]);
        let o = laue_group(GroupName::O);
        let halves = o.elements.iter().filter(|q| q.to_array().iter().all(|c| (c.abs() - 0.5).abs() < 1e-15)).count();
        assert_eq!(halves, 8);
        let d6 = laue_group(GroupName::D6);
        assert!(d6.contains(Quaternion::from_array_unchecked([0.5, 0.0, 0.0, 3f64.sqrt() / 2.0])));
    }

    #[test]
    fn every_group_verifies() {
        for name in GroupName::ALL {
            let report = verify_group(&laue_group(name));
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn removed_element_breaks_closure() {
        let mut g = laue_group(GroupName::O);
        let removed = g.elements.remove(5);
        let report = verify_group(&g);
        assert!(!report.passed());
        assert!(!report.missing_products.is_empty());
        assert!(report
            .missing_products
            .iter()
            .any(|(_, _, q)| close(q.canonical().to_array(), removed.canonical().to_array())));
    }

    #[test]
    fn parse_names() {
        assert_eq!("2I".parse::<GroupName>().unwrap(), GroupName::I2);
        assert_eq!("d6".parse::<GroupName>().unwrap(), GroupName::D6);
        let err = "D5".parse::<GroupName>().unwrap_err().to_string();
        assert!(err.contains("C1") && err.contains("2I"));
    }

    #[test]
    fn table_subsets() {
        let o_family = table_subgroups(GroupName::O);
        assert_eq!(
            o_family,
            vec![GroupName::C1, GroupName::C2, GroupName::C4, GroupName::D2, GroupName::D4, GroupName::T, GroupName::O]
        );
        let d6_family = table_subgroups(GroupName::D6);
        assert_eq!(d6_family, vec![GroupName::C1, GroupName::C3, GroupName::C6, GroupName::D3, GroupName::D6]);
        for sub in o_family {
            assert!(laue_group(sub).is_subgroup_of(&laue_group(GroupName::O)));
        }
        for sub in d6_family {
            assert!(laue_group(sub).is_subgroup_of(&laue_group(GroupName::D6)));
        }
        assert!(!laue_group(GroupName::D6).is_subgroup_of(&laue_group(GroupName::O)));
    }

    #[test]
    fn orbit_sizes() {
        let set = expand_orbit(&[Quaternion::IDENTITY], &laue_group(GroupName::C1));
        assert_eq!(set.len(), 2);
        let set = expand_orbit(&[Quaternion::IDENTITY], &laue_group(GroupName::I2));
        assert_eq!(set.len(), 120);
        assert_eq!(set.duplicates_removed, 0);
        let q = sample_uniform(3, 1)[0];
        let set = expand_orbit(&[q], &laue_group(GroupName::O));
        // Binary octahedral orbit: 24 elements modulo sign, doubled by antipodes.
        assert_eq!(set.len(), 48);
    }

    #[test]
    fn orbit_of_a_group_element_is_the_same_set() {
        let o = laue_group(GroupName::O);
        let q = sample_uniform(9, 1)[0];
        let a = expand_orbit(&[q], &o);
        for g in &o.elements {
            let b = expand_orbit(&[quat_multiply(q, *g)], &o);
            assert!(same_point_set(&a.points, &b.points));
        }
    }

    #[test]
    fn basis_on_axis_is_deduplicated() {
        // The identity is fixed by nothing, but a basis equal to a group
        // element duplicates its own orbit when listed twice.
        let o = laue_group(GroupName::O);
        let set = expand_orbit(&[Quaternion::IDENTITY, o.elements[3]], &o);
        assert_eq!(set.len(), 48);
        assert_eq!(set.duplicates_removed, 48);
    }

    #[test]
    fn rebase_keeps_points() {
        let basis = sample_uniform(1, 3);
        let o_set = expand_orbit(&basis, &laue_group(GroupName::O));
        let c1 = rebase_to_subgroup(&o_set, GroupName::C1).unwrap();
        assert_eq!(c1.basis.len(), 3 * 24);
        assert!(same_point_set(&o_set.points, &c1.points));

        let d6_set = expand_orbit(&basis, &laue_group(GroupName::D6));
        let c3 = rebase_to_subgroup(&d6_set, GroupName::C3).unwrap();
        assert_eq!(c3.basis.len(), 3 * 4);
        assert!(same_point_set(&d6_set.points, &c3.points));

        assert!(matches!(rebase_to_subgroup(&o_set, GroupName::D6), Err(Error::NotSubgroup { .. })));
    }

    #[test]
    fn coset_representatives_are_deterministic() {
        let o = laue_group(GroupName::O);
        let c4 = laue_group(GroupName::C4);
        let a = left_coset_representatives(&o, &c4);
        let b = left_coset_representatives(&o, &c4);
        assert_eq!(a.len(), 6);
        assert_eq!(a, b);
    }
}
