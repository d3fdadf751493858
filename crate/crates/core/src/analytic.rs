//! Closed-form and special-function rate expressions for the ring layout.
//!
//! For a user at distance `r_u` from the centre and a ring of radius `r`
//! the ring-averaged path loss tends, as M grows, to
//!
//! ```text
//! I0 = |r^2 - r_u^2|^(-v/2) * P_{v/2-1}(z),   z = (r^2 + r_u^2) / |r^2 - r_u^2|
//! ```
//!
//! and the zero-forcing rate to `log2(1 + P M I0)`. Replacing the Legendre
//! factor by `z^(v/2-1)` or `C(v) z^(v/2-1)` gives the two closed-form
//! bounds; which one is the upper bound flips at `v = 4`.
//!
//! Every expression diverges at `r_u = r`; that point is reported as
//! [`Error::Singular`] instead of returning infinity.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{distances, CellGeometry, RingLayout};
use crate::params::SystemParams;
use crate::special::{gamma, legendre_p};

/// `log2(1 + x)`, accurate for small `x`.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRate {
    pub rate_bits: f64,
    pub i0: f64,
    pub z: f64,
}

/// Which of the two closed-form bounds lies above the exact asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundOrdering {
    /// `b1 >= rate >= b2`, for `2 <= v < 4` (except `v = 2`).
    B1Upper,
    /// `b1 <= rate <= b2`, for `4 < v <= 6`.
    B1Lower,
    /// `b1 = b2 = rate`, at `v = 2` and `v = 4`.
    Equal,
}

impl BoundOrdering {
    pub fn for_exponent(v: f64) -> Self {
        if v == 2.0 || v == 4.0 {
            BoundOrdering::Equal
        } else if v < 4.0 {
            BoundOrdering::B1Upper
        } else {
            BoundOrdering::B1Lower
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundOrdering::B1Upper => "b1_upper",
            BoundOrdering::B1Lower => "b1_lower",
            BoundOrdering::Equal => "equal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub b1_bits: f64,
    pub b2_bits: f64,
    pub coefficient: f64,
    pub ordering: BoundOrdering,
}

impl BoundPair {
    pub fn lower(&self) -> f64 {
        self.b1_bits.min(self.b2_bits)
    }

    pub fn upper(&self) -> f64 {
        self.b1_bits.max(self.b2_bits)
    }
}

/// `C(v) = 2^(3(v/2-1)) Gamma(v/2 - 1/2)^2 / (pi Gamma(v - 1))`.
///
/// Equals one at `v = 2` and `v = 4`; `|log2 C(v)| < 0.6` on `[2, 6]`.
pub fn bound_coefficient(v: f64) -> f64 {
    2f64.powf(3.0 * (0.5 * v - 1.0)) * gamma(0.5 * v - 0.5).powi(2) / (PI * gamma(v - 1.0))
}

/// Large-M rate of user `k` for an arbitrary layout: `log2(1 + P sum_m beta_mk)`.
pub fn general_asymptotic_rate(beta_column: &[f64], power: f64) -> f64 {
    log2_1p(power * beta_column.iter().sum::<f64>())
}

/// Large-M rate with all antennas co-located: `log2(1 + P M beta)`.
pub fn centralized_rate(beta: f64, power: f64, antennas: usize) -> f64 {
    log2_1p(power * antennas as f64 * beta)
}

fn check_radii(r: f64, r_u: f64) -> Result<()> {
    if !(r >= 0.0 && r_u >= 0.0 && r.is_finite() && r_u.is_finite()) {
        return Err(Error::Domain {
            function: "circle_i0",
            value: if r >= 0.0 { r_u } else { r },
            reason: "radii must be finite and non-negative",
        });
    }
    if r == r_u {
        return Err(Error::Singular { user_radius: r_u });
    }
    Ok(())
}

/// `z = (r^2 + r_u^2) / |r^2 - r_u^2|`, always at least 1.
pub fn legendre_argument(r: f64, r_u: f64) -> Result<f64> {
    check_radii(r, r_u)?;
    let (r2, u2) = (r * r, r_u * r_u);
    Ok(((r2 + u2) / (r2 - u2).abs()).max(1.0))
}

/// `P_nu(z)` for `nu = v/2 - 1` in `[0, 2]` and `z >= 1`.
pub fn legendre_halfint(nu_deg: f64, z: f64) -> Result<f64> {
    legendre_p(nu_deg, z)
}

/// Limit of the ring-averaged path loss `(1/M) sum_m D_m^(-v)` as M grows.
pub fn circle_i0(r: f64, r_u: f64, v: f64) -> Result<f64> {
    crate::channel::check_exponent(v)?;
    let z = legendre_argument(r, r_u)?;
    let diff = (r * r - r_u * r_u).abs();
    Ok(diff.powf(-0.5 * v) * legendre_halfint(0.5 * v - 1.0, z)?)
}

/// Asymptotic rate `log2(1 + P_eff M I0)` of a user at distance `r_u`.
pub fn circle_rate(params: &SystemParams, r_u: f64) -> Result<AsymptoticRate> {
    let r = params.ring_radius();
    let i0 = circle_i0(r, r_u, params.exponent)?;
    let z = legendre_argument(r, r_u)?;
    let gain = params.effective_power() * params.antennas as f64 * i0;
    Ok(AsymptoticRate {
        rate_bits: log2_1p(gain),
        i0,
        z,
    })
}

/// The `z^(v/2-1)` replacement for the Legendre factor, expressed as
/// `(r_u^2 + r^2)^(v/2-1) / |r_u^2 - r^2|^(v-1)`.
pub fn bound_gain(r: f64, r_u: f64, v: f64) -> Result<f64> {
    check_radii(r, r_u)?;
    let (r2, u2) = (r * r, r_u * r_u);
    Ok((r2 + u2).powf(0.5 * v - 1.0) / (u2 - r2).abs().powf(v - 1.0))
}

/// Both closed-form bounds on the asymptotic rate.
pub fn rate_bounds(params: &SystemParams, r_u: f64) -> Result<BoundPair> {
    rate_bounds_with_coefficient(params, r_u, bound_coefficient(params.exponent))
}

/// As [`rate_bounds`] with an explicit coefficient in place of `C(v)`.
pub fn rate_bounds_with_coefficient(
    params: &SystemParams,
    r_u: f64,
    coefficient: f64,
) -> Result<BoundPair> {
    let v = params.exponent;
    crate::channel::check_exponent(v)?;
    let gain = params.effective_power()
        * params.antennas as f64
        * bound_gain(params.ring_radius(), r_u, v)?;
    Ok(BoundPair {
        b1_bits: log2_1p(gain),
        b2_bits: log2_1p(gain * coefficient),
        coefficient,
        ordering: BoundOrdering::for_exponent(v),
    })
}

/// Exact finite-M average `(1/M) sum_m D_m^(-v)` for a user at angle 0.
pub fn riemann_i0(layout: &RingLayout, r_u: f64, v: f64) -> Result<f64> {
    crate::channel::check_exponent(v)?;
    let r = layout.ring_radius_m();
    let geom = CellGeometry::new(r.max(r_u).max(f64::MIN_POSITIVE), r)?;
    let user = geom.user(r_u, 0.0)?;
    let d = distances(layout, &user);
    let mut sum = 0.0;
    for (m, &dm) in d.iter().enumerate() {
        if !(dm > 0.0) {
            return Err(Error::NonPositiveDistance {
                antenna: m,
                user: 0,
                distance: dm,
            });
        }
        sum += dm.powf(-v);
    }
    Ok(sum / d.len() as f64)
}

/// Upper bound on `riemann_i0 - circle_i0`:
/// `(2/M) [|r - r_u|^(-v) - (r + r_u)^(-v)]`.
pub fn riemann_error_bound(antennas: usize, r: f64, r_u: f64, v: f64) -> f64 {
    2.0 / antennas as f64 * ((r - r_u).abs().powf(-v) - (r + r_u).powf(-v))
}
