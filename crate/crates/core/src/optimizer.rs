//! Ring radius maximizing the closed-form cell-average rate.
//!
//! Setting the derivative of the average bound to zero and substituting
//! `t = R^2 / r^2 - 1` gives
//!
//! ```text
//! t^(3 + 2/(v-2)) + 2 t^(2 + 2/(v-2)) - 1 = 0
//! ```
//!
//! whose left side increases strictly on (0, 1) from -1 to 2, so the root
//! `t0` is unique and `r_opt = R / sqrt(t0 + 1)`. Neither the power nor
//! the antenna count appears.

use crate::average::average_bound_b1;
use crate::error::{invalid, Result};
use crate::params::SystemParams;

const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSolution {
    pub t0: f64,
    pub r_opt_m: f64,
    /// `r_opt / R = 1 / sqrt(t0 + 1)`.
    pub ratio: f64,
    /// Left side of the optimality equation at `t0`.
    pub residual: f64,
    /// Set at `v = 2`, where the equation degenerates and the limit
    /// `t0 = 1` is returned.
    pub limit: bool,
}

/// Left side of the optimality equation, `x^(a+1) + 2 x^a - 1` with
/// `a = 2 + 2/(v-2)`.
pub fn optimality_polynomial(x: f64, v: f64) -> f64 {
    let a = 2.0 + 2.0 / (v - 2.0);
    x.powf(a + 1.0) + 2.0 * x.powf(a) - 1.0
}

/// Stationarity condition in terms of `r`:
/// `(R^2/r^2 + 1)^((v/2-1)/(v-1)) (R^2/r^2 - 1) - 1`.
pub fn stationarity_residual(r: f64, cell_radius: f64, v: f64) -> f64 {
    let q = (cell_radius / r).powi(2);
    (q + 1.0).powf((0.5 * v - 1.0) / (v - 1.0)) * (q - 1.0) - 1.0
}

/// Bracketed root of `f` on `[lo, hi]` with `f(lo) < 0 < f(hi)`: secant steps
/// safeguarded by bisection.
fn increasing_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let (mut flo, mut fhi) = (f(lo), f(hi));
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        x = if secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        // Alternate a bisection in to guarantee the bracket shrinks.
        let fx = f(x);
        if fx.abs() <= tol {
            return x;
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol {
            return mid;
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    x
}

pub fn solve_radius(v: f64, cell_radius: f64) -> Result<RadiusSolution> {
    if !(cell_radius.is_finite() && cell_radius > 0.0) {
        return Err(invalid("cell_radius_m", "must be positive"));
    }
    if !(2.0..=6.0).contains(&v) {
        return Err(invalid(
            "exponent_v",
            format!("must lie in [2, 6], got {v}"),
        ));
    }
    if v == 2.0 {
        let ratio = std::f64::consts::FRAC_1_SQRT_2;
        return Ok(RadiusSolution {
            t0: 1.0,
            r_opt_m: cell_radius * ratio,
            ratio,
            residual: 0.0,
            limit: true,
        });
    }
    let t0 = increasing_root(|x| optimality_polynomial(x, v), 0.0, 1.0, RESIDUAL_TOL);
    let ratio = 1.0 / (t0 + 1.0).sqrt();
    Ok(RadiusSolution {
        t0,
        r_opt_m: cell_radius * ratio,
        ratio,
        residual: optimality_polynomial(t0, v),
        limit: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    /// `(r, bar_b1)` on the grid, ascending in `r`.
    pub rows: Vec<(f64, f64)>,
    pub grid_step_m: f64,
    pub argmax_r_m: f64,
    pub solution: RadiusSolution,
    /// Grid argmax lies within one step of `r_opt`.
    pub argmax_within_step: bool,
    /// Finite-difference slope is positive on every grid point below
    /// `r_opt` and negative on every point above.
    pub slope_signs_consistent: bool,
}

/// Evaluates the average bound on `grid_points` equally spaced radii in
/// `(0, R)` and checks the grid against the root of the optimality equation.
pub fn optimality_scan(params: &SystemParams, grid_points: usize) -> Result<ScanReport> {
    if grid_points < 3 {
        return Err(invalid("grid_points", "need at least 3 points"));
    }
    let big_r = params.cell_radius();
    let step = big_r / (grid_points + 1) as f64;
    let eval = |r: f64| -> Result<f64> { average_bound_b1(&params.with_ring_radius(r)?) };
    let mut rows = Vec::with_capacity(grid_points);
    for i in 1..=grid_points {
        let r = step * i as f64;
        rows.push((r, eval(r)?));
    }
    let solution = solve_radius(params.exponent, big_r)?;
    let (argmax_r_m, _) = rows
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    let h = 1e-4 * step;
    let mut slope_signs_consistent = true;
    for &(r, _) in &rows {
        if (r - solution.r_opt_m).abs() < 2.0 * h {
            continue;
        }
        let slope = (eval(r + h)? - eval(r - h)?) / (2.0 * h);
        if (r < solution.r_opt_m) != (slope > 0.0) {
            slope_signs_consistent = false;
        }
    }
    Ok(ScanReport {
        rows,
        grid_step_m: step,
        argmax_r_m,
        argmax_within_step: (argmax_r_m - solution.r_opt_m).abs() <= step,
        solution,
        slope_signs_consistent,
    })
}
