//! Gamma function and the half-integer-degree Legendre function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments away from the non-positive integers.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Legendre function of the first kind `P_nu(z)` for real degree
/// `nu` in `[0, 2]` and `z >= 1`, from the Laplace integral
///
/// `P_nu(z) = (1/pi) int_0^pi (z + sqrt(z^2 - 1) cos(phi))^nu dphi`.
///
/// The integrand is factored as `z^nu (1 + s cos(phi))^nu` with
/// `s = sqrt(1 - 1/z^2)`, which keeps the quadrature bounded by `2^nu`
/// whatever the size of `z`.
pub fn legendre_p(nu: f64, z: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&nu) {
        return Err(Error::Domain {
            function: "legendre_p",
            value: nu,
            reason: "degree must lie in [0, 2]",
        });
    }
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::Domain {
            function: "legendre_p",
            value: z,
            reason: "argument must be finite and at least 1",
        });
    }
    if nu == 0.0 {
        return Ok(1.0);
    }
    let s = (1.0 - 1.0 / (z * z)).max(0.0).sqrt();
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-14,
        max_intervals: 500,
    };
    let r = integrate(|phi| (1.0 + s * phi.cos()).max(0.0).powf(nu), 0.0, PI, opts);
    Ok(z.powf(nu) * r.value / PI)
}
