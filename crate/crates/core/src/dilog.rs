//! Complex dilogarithm on the principal branch (cut along [1, ∞)).
//!
//! The plane is reduced by inversion and reflection to `|z| ≤ 1, Re z ≤ ½`,
//! where the Bernoulli series in `u = -ln(1 - z)` converges fast
//! (`|u| < 1.8` there, radius of convergence 2π).

use std::f64::consts::PI;

use num_complex::Complex64;

const PI2_6: f64 = PI * PI / 6.0;

/// `B_{2k} / (2k + 1)!` for k = 1..15.
const COEFFS: [f64; 15] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    1.0 / 526_901_760.0,
    -4.064_761_645_144_225_6e-11,
    8.921_691_020_456_452e-13,
    -1.993_929_586_072_107_4e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_218_621_026_187e-19,
    -5.581_785_874_325_009e-21,
    1.309_150_755_418_321_3e-22,
    -3.087_419_802_426_740_3e-24,
    7.315_975_652_702_203e-26,
];

fn series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in COEFFS.iter().rev() {
        acc = acc * u2 + c;
    }
    u - u2 * 0.25 + u * u2 * acc
}

/// Principal-branch `Li₂(z)`. On the cut, `z = x + 0i` with `x > 1` gives
/// `Im Li₂ = -π ln x`.
pub fn dilog(z: Complex64) -> Complex64 {
    if z.re == 1.0 && z.im == 0.0 {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        // Li₂(z) = -Li₂(1/z) - π²/6 - ½ ln²(-z); `+ 0.0` maps -0 to +0 so
        // real z > 1 takes arg(-z) = π.
        let mz = Complex64::new(-z.re, -z.im + 0.0);
        let l = mz.ln();
        return -dilog(z.inv()) - PI2_6 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        // Li₂(z) = -Li₂(1 - z) + π²/6 - ln z · ln(1 - z)
        let w = Complex64::new(1.0, 0.0) - z;
        let lz = z.ln();
        return -series(-lz) + PI2_6 - lz * w.ln();
    }
    series(-(Complex64::new(1.0, 0.0) - z).ln())
}
