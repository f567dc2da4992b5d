//! Orientation predicate for five points in R⁴.
//!
//! `orient(p0..p4)` is the sign of the 5×5 determinant with rows
//! `[p_i, 1]`, equal to `det(p1-p0, p2-p0, p3-p0, p4-p0)`. A floating-point
//! evaluation is trusted when it clears a forward error bound; otherwise the
//! determinant is recomputed exactly on big integers. Exact zeros are broken
//! by simulation of simplicity: the coordinate `c` of the point with the
//! `r`-th smallest global index is perturbed by `ε^(2^(4r + c))`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Relative error bound factor for the floating-point filter.
const FILTER_EPS: f64 = 1e-14;

#[inline]
fn sub(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Cofactors of the last row of the 4×4 matrix whose first three rows are
/// `r0, r1, r2`, with the matching absolute-value permanents. `dot(n, d)` is
/// the determinant with `d` as the last row.
pub fn cofactor_normal(r0: &[f64; 4], r1: &[f64; 4], r2: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
    let mut n = [0.0; 4];
    let mut na = [0.0; 4];
    for j in 0..4 {
        let cols: [usize; 3] = match j {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        let [a, b, c] = cols;
        let m = r0[a] * (r1[b] * r2[c] - r1[c] * r2[b]) - r0[b] * (r1[a] * r2[c] - r1[c] * r2[a])
            + r0[c] * (r1[a] * r2[b] - r1[b] * r2[a]);
        let p = r0[a].abs() * ((r1[b] * r2[c]).abs() + (r1[c] * r2[b]).abs())
            + r0[b].abs() * ((r1[a] * r2[c]).abs() + (r1[c] * r2[a]).abs())
            + r0[c].abs() * ((r1[a] * r2[b]).abs() + (r1[b] * r2[a]).abs());
        // Row 3, column j: sign (-1)^(3 + j).
        let s = if (3 + j) % 2 == 0 { 1.0 } else { -1.0 };
        n[j] = s * m;
        na[j] = p;
    }
    (n, na)
}

/// Filtered floating-point orientation: `Some(sign)` when certain.
#[inline]
pub fn orient_filter(normal: &[f64; 4], abs_normal: &[f64; 4], base: &[f64; 4], p: &[f64; 4]) -> Option<i8> {
    let d = sub(p, base);
    let v = normal[0] * d[0] + normal[1] * d[1] + normal[2] * d[2] + normal[3] * d[3];
    let bound = FILTER_EPS
        * (abs_normal[0] * d[0].abs() + abs_normal[1] * d[1].abs() + abs_normal[2] * d[2].abs() + abs_normal[3] * d[3].abs());
    if v > bound {
        Some(1)
    } else if v < -bound {
        Some(-1)
    } else {
        None
    }
}

/// Orientation of five points, never zero for distinct ids.
pub fn orient(points: [&[f64; 4]; 5], ids: [u32; 5]) -> i8 {
    let d1 = sub(points[1], points[0]);
    let d2 = sub(points[2], points[0]);
    let d3 = sub(points[3], points[0]);
    let (n, na) = cofactor_normal(&d1, &d2, &d3);
    if let Some(s) = orient_filter(&n, &na, points[0], points[4]) {
        return s;
    }
    orient_exact_sos(points, ids)
}

/// Exact sign of the unperturbed determinant (may be zero).
pub fn orient_exact(points: [&[f64; 4]; 5]) -> i8 {
    let m = exact_matrix(points);
    sign(&det(m))
}

/// Exact sign with symbolic perturbation.
pub fn orient_exact_sos(points: [&[f64; 4]; 5], ids: [u32; 5]) -> i8 {
    // Sort rows by global id; the determinant sign flips with each swap.
    let mut order = [0usize, 1, 2, 3, 4];
    order.sort_by_key(|&i| ids[i]);
    let parity = permutation_parity(&order);
    let sorted: [&[f64; 4]; 5] = std::array::from_fn(|r| points[order[r]]);
    let m = exact_matrix(sorted);

    let base = sign(&det(m.clone()));
    if base != 0 {
        return base * parity;
    }
    // Monomials in increasing order of their exponent; the bits of `mask`
    // are entries (row, col) = (k / 4, k % 4).
    for mask in 1u32..(1 << 20) {
        let mut rows = 0u8;
        let mut cols = 0u8;
        let mut valid = true;
        let mut bits = mask;
        while bits != 0 {
            let k = bits.trailing_zeros();
            bits &= bits - 1;
            let (r, c) = ((k / 4) as u8, (k % 4) as u8);
            if rows & (1 << r) != 0 || cols & (1 << c) != 0 {
                valid = false;
                break;
            }
            rows |= 1 << r;
            cols |= 1 << c;
        }
        if !valid {
            continue;
        }
        let mut mm = m.clone();
        let mut bits = mask;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (r, c) = (k / 4, k % 4);
            for (j, e) in mm[r].iter_mut().enumerate() {
                *e = if j == c { BigInt::from(1) } else { BigInt::zero() };
            }
        }
        // The unit rows break the common scaling, which only matters for the
        // magnitude: every remaining row shares the same positive scale.
        let s = sign(&det(mm));
        if s != 0 {
            return s * parity;
        }
    }
    unreachable!("perturbed determinant has a non-zero leading term")
}

fn permutation_parity(order: &[usize; 5]) -> i8 {
    let mut inv = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            if order[i] > order[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// `(mantissa, exponent)` with `value = mantissa · 2^exponent`.
fn decompose(v: f64) -> (i64, i32) {
    if v == 0.0 {
        return (0, 0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & 0x000f_ffff_ffff_ffff) as i64;
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    (sign * mant, e)
}

/// Homogeneous 5×5 matrix `[p_i, 1]` scaled to integers by a common power of two.
fn exact_matrix(points: [&[f64; 4]; 5]) -> Vec<Vec<BigInt>> {
    let mut parts = [[(0i64, 0i32); 5]; 5];
    let mut min_exp = i32::MAX;
    for (r, p) in points.iter().enumerate() {
        for c in 0..5 {
            let v = if c < 4 { p[c] } else { 1.0 };
            let d = decompose(v);
            if d.0 != 0 {
                min_exp = min_exp.min(d.1);
            }
            parts[r][c] = d;
        }
    }
    parts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(m, e)| if m == 0 { BigInt::zero() } else { BigInt::from(m) << ((e - min_exp) as usize) })
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant.
fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut neg = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    neg = !neg;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if neg {
        -d
    } else {
        d
    }
}
