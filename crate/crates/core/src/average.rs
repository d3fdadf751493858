//! Per-user rate averaged over users placed uniformly in the cell.
//!
//! The closed forms integrate the `b1`/`b2` bounds against the radial
//! density `2x / R^2` after replacing `log2(1 + x)` by `log2(x)`; the
//! quadrature path integrates the unapproximated expressions and serves
//! as their reference.

use std::f64::consts::{LOG2_E, PI};

use crate::analytic::{bound_gain, circle_rate, log2_1p};
use crate::channel::check_min_distance;
use crate::error::{invalid, Error, Result};
use crate::geometry::sample_user;
use crate::montecarlo::{
    draw_zf_rates, run_trials, substream, McConfig, RateEstimate, DOMAIN_CELL_TRIALS,
};
use crate::params::SystemParams;
use crate::quad::{integrate, QuadOptions};
use crate::special::gamma;

/// `log(1 + x) ~ log(x)` is trusted when `x` stays above this everywhere.
pub const APPROXIMATION_MIN_GAIN: f64 = 10.0;

/// Placement redraws allowed per trial before giving up.
const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageRateReport {
    pub bar_b1_bits: f64,
    pub bar_b2_bits: f64,
    /// Quadrature of the exact asymptotic rate over the cell.
    pub quadrature_bits: f64,
    pub quadrature_abs_err: f64,
    /// Whether `P M` times the smallest bound gain reaches
    /// [`APPROXIMATION_MIN_GAIN`].
    pub approximation_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value_bits: f64,
    pub abs_err: f64,
    pub converged: bool,
}

/// Per-radius rate to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrand {
    /// Legendre-function asymptote.
    ExactRate,
    /// The `b1` bound, the integrand behind [`average_bound_b1`].
    BoundB1,
}

fn check_interior_ring(params: &SystemParams) -> Result<(f64, f64)> {
    let (big_r, r) = (params.cell_radius(), params.ring_radius());
    if !(r > 0.0 && r < big_r) {
        return Err(Error::Domain {
            function: "average_bound",
            value: r,
            reason: "ring radius must lie strictly inside (0, R)",
        });
    }
    Ok((big_r, r))
}

/// Cell average of the first bound after the high-SNR approximation.
pub fn average_bound_b1(params: &SystemParams) -> Result<f64> {
    let (big_r, r) = check_interior_ring(params)?;
    let v = params.exponent;
    let pm = params.effective_power() * params.antennas as f64;
    let (big_r2, r2) = (big_r * big_r, r * r);
    let rho = r2 / big_r2;
    Ok(
        pm.log2() + (0.5 * v - 1.0) * (1.0 + rho) * (big_r2 + r2).log2()
            - (v - 1.0) * (1.0 - rho) * (big_r2 - r2).log2()
            - (3.0 * v - 4.0) * rho * r.log2()
            + 0.5 * v * LOG2_E,
    )
}

/// `log2(Gamma(v/2 - 1/2)^2 / (pi Gamma(v - 1))) + 3 (v/2 - 1)`, the gap
/// between the two average bounds. Vanishes at `v = 2` and `v = 4`.
pub fn average_bound_increment(v: f64) -> f64 {
    (gamma(0.5 * v - 0.5).powi(2) / (PI * gamma(v - 1.0))).log2() + 3.0 * (0.5 * v - 1.0)
}

/// Cell average of the second bound after the high-SNR approximation.
pub fn average_bound_b2(params: &SystemParams) -> Result<f64> {
    Ok(average_bound_b1(params)? + average_bound_increment(params.exponent))
}

/// Smallest bound gain over `r_u` in `[0, R]`, reached at an endpoint.
fn min_bound_gain(params: &SystemParams) -> Result<f64> {
    let (big_r, r) = (params.cell_radius(), params.ring_radius());
    let at = |x: f64| {
        if x == r {
            Ok(f64::INFINITY)
        } else {
            bound_gain(r, x, params.exponent)
        }
    };
    Ok(at(0.0)?.min(at(big_r)?))
}

/// Whether the `log(1 + x) ~ log(x)` step is justified for `params`.
pub fn approximation_holds(params: &SystemParams) -> Result<bool> {
    let pm = params.effective_power() * params.antennas as f64;
    let ok = pm * min_bound_gain(params)? >= APPROXIMATION_MIN_GAIN;
    if !ok {
        log::warn!(
            "P*M*I0 falls below {APPROXIMATION_MIN_GAIN} inside the cell; the closed-form averages may be inaccurate"
        );
    }
    Ok(ok)
}

/// `(2 / R^2) int_0^R x f(x) dx`, split at `split` when it is interior.
pub fn cell_average<F>(
    cell_radius: f64,
    split: f64,
    mut f: F,
    opts: QuadOptions,
) -> QuadratureEstimate
where
    F: FnMut(f64) -> f64,
{
    let scale = 2.0 / (cell_radius * cell_radius);
    let mut g = |x: f64| scale * x * f(x);
    let pieces: Vec<(f64, f64)> = if split > 0.0 && split < cell_radius {
        vec![(0.0, split), (split, cell_radius)]
    } else {
        vec![(0.0, cell_radius)]
    };
    let mut est = QuadratureEstimate {
        value_bits: 0.0,
        abs_err: 0.0,
        converged: true,
    };
    for (a, b) in pieces {
        let r = integrate(&mut g, a, b, opts);
        est.value_bits += r.value;
        est.abs_err += r.abs_err;
        est.converged &= r.converged;
    }
    est
}

/// Cell average of the asymptotic rate (or of the `b1` bound) by adaptive
/// quadrature, splitting at the logarithmic singularity `r_u = r`.
pub fn average_rate_quadrature(
    params: &SystemParams,
    integrand: Integrand,
) -> Result<QuadratureEstimate> {
    let (big_r, r) = (params.cell_radius(), params.ring_radius());
    let pm = params.effective_power() * params.antennas as f64;
    let opts = QuadOptions {
        abs_tol: 1e-9,
        rel_tol: 1e-11,
        max_intervals: 4000,
    };
    let mut failure = None;
    let est = cell_average(
        big_r,
        r,
        |x| {
            let value = match integrand {
                Integrand::ExactRate => circle_rate(params, x).map(|a| a.rate_bits),
                Integrand::BoundB1 => bound_gain(r, x, params.exponent).map(|g| log2_1p(pm * g)),
            };
            value.unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NAN
            })
        },
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !est.converged {
        log::warn!(
            "cell-average quadrature stopped before reaching tolerance (error estimate {:.3e})",
            est.abs_err
        );
    }
    Ok(est)
}

/// Both closed-form averages plus the quadrature reference.
pub fn average_report(params: &SystemParams) -> Result<AverageRateReport> {
    let q = average_rate_quadrature(params, Integrand::ExactRate)?;
    Ok(AverageRateReport {
        bar_b1_bits: average_bound_b1(params)?,
        bar_b2_bits: average_bound_b2(params)?,
        quadrature_bits: q.value_bits,
        quadrature_abs_err: q.abs_err,
        approximation_ok: approximation_holds(params)?,
    })
}

/// Monte Carlo cell average: every trial places `params.users` users
/// uniformly in the cell, draws Rayleigh fading and averages the ZF rates
/// of all users.
pub fn average_rate_montecarlo(params: &SystemParams, cfg: &McConfig) -> Result<RateEstimate> {
    if params.antennas < params.users {
        return Err(Error::TooFewAntennas {
            antennas: params.antennas,
            users: params.users,
        });
    }
    let layout = params.layout();
    let geom = params.geometry;
    let (samples, rejected) = run_trials(cfg, |t| {
        let mut rng = substream(cfg.master_seed, DOMAIN_CELL_TRIALS, t as u64);
        let mut attempts = 0;
        let users = loop {
            let users: Vec<_> = (0..params.users)
                .map(|_| sample_user(&geom, &mut rng))
                .collect();
            if check_min_distance(&layout, &users, params.min_distance_m).is_ok() {
                break users;
            }
            attempts += 1;
            if attempts >= MAX_PLACEMENT_ATTEMPTS {
                return Err(invalid(
                    "min_distance_m",
                    "could not place users outside the antenna exclusion zones",
                ));
            }
        };
        let (rates, rej) = draw_zf_rates(params, &layout, &users, &mut rng, t)?;
        Ok((rates.iter().sum::<f64>() / rates.len() as f64, rej))
    })?;
    Ok(RateEstimate::from_samples(&samples, rejected))
}

/// `|bar_b1 - bar_b2|`, identical to `|log2 C(v)|`.
pub fn average_bound_gap(v: f64) -> f64 {
    average_bound_increment(v).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::bound_coefficient;
    use crate::params::PowerNormalization;
    use approx::assert_relative_eq;

    fn params(v: f64, r: f64) -> SystemParams {
        SystemParams::reference()
            .with_exponent(v)
            .unwrap()
            .with_ring_radius(r)
            .unwrap()
    }

    #[test]
    fn domain_errors_at_ring_extremes() {
        assert!(average_bound_b1(&params(3.6, 0.0)).is_err());
        assert!(average_bound_b1(&params(3.6, 1000.0)).is_err());
        assert!(average_bound_b2(&params(3.6, 0.0)).is_err());
    }

    #[test]
    fn small_ring_limit() {
        // r -> 0: log2(P M R^-v e^(v/2))
        let p = params(3.6, 1e-3);
        let pm = p.effective_power() * 300.0;
        let limit = (pm * 1000f64.powf(-3.6) * (1.8f64).exp()).log2();
        assert!((average_bound_b1(&p).unwrap() - limit).abs() < 1e-5);
    }

    #[test]
    fn increments_vanish_at_two_and_four() {
        assert!(average_bound_increment(2.0).abs() < 1e-12);
        assert!(average_bound_increment(4.0).abs() < 1e-12);
        let p = params(2.0, 500.0);
        assert_relative_eq!(
            average_bound_b1(&p).unwrap(),
            average_bound_b2(&p).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn increment_equals_log_coefficient() {
        for i in 0..=40 {
            let v = 2.0 + 0.1 * i as f64;
            assert!((average_bound_increment(v) - bound_coefficient(v).log2()).abs() < 1e-12);
            assert!(average_bound_gap(v) < 0.6);
        }
    }

    #[test]
    fn constant_integrand_averages_to_itself() {
        let est = cell_average(1000.0, 500.0, |_| 3.25, QuadOptions::default());
        assert_relative_eq!(est.value_bits, 3.25, max_relative = 1e-13);
    }

    #[test]
    fn closed_form_matches_bound_quadrature_at_high_gain() {
        // P M scaled so that P M I0 >= 1e3 over the whole cell.
        for &(v, r) in &[
            (2.5, 250.0),
            (3.6, 500.0),
            (4.0, 500.0),
            (5.0, 750.0),
            (6.0, 500.0),
        ] {
            let p = params(v, r);
            let floor = bound_gain(r, 0.0, v)
                .unwrap()
                .min(bound_gain(r, 1000.0, v).unwrap());
            let p = SystemParams {
                normalization: PowerNormalization::Raw,
                power: 1e3 / floor / 300.0,
                ..p
            };
            let q = average_rate_quadrature(&p, Integrand::BoundB1).unwrap();
            assert!(q.converged);
            let gap = (q.value_bits - average_bound_b1(&p).unwrap()).abs();
            assert!(gap < 0.05, "v={v} r={r}: {gap}");
        }
    }

    // The approximated integral log2(P M gain), written out with ln and
    // substituted t = r_u^2, before the closed form is taken.
    fn log_integral(p: &SystemParams) -> f64 {
        let (big_r, r, v) = (p.cell_radius(), p.ring_radius(), p.exponent);
        let pm = p.effective_power() * p.antennas as f64;
        let f = |t: f64| {
            (pm.ln() + (0.5 * v - 1.0) * (t + r * r).ln() - (v - 1.0) * (t - r * r).abs().ln())
                * LOG2_E
        };
        let opts = QuadOptions::default();
        let a = integrate(f, 0.0, r * r, opts).value;
        let b = integrate(f, r * r, big_r * big_r, opts).value;
        (a + b) / (big_r * big_r)
    }

    #[test]
    fn closed_form_equals_log_integral() {
        for &(v, r) in &[
            (2.5, 300.0),
            (3.6, 500.0),
            (4.0, 500.0),
            (5.0, 800.0),
            (6.0, 950.0),
        ] {
            let p = params(v, r);
            assert_relative_eq!(
                average_bound_b1(&p).unwrap(),
                log_integral(&p),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn exact_average_between_bounds() {
        for v in [2.5, 3.0, 3.6, 4.5, 5.5] {
            for r in [250.0, 500.0, 750.0] {
                let p = params(v, r);
                let rep = average_report(&p).unwrap();
                let (lo, hi) = if rep.bar_b1_bits < rep.bar_b2_bits {
                    (rep.bar_b1_bits, rep.bar_b2_bits)
                } else {
                    (rep.bar_b2_bits, rep.bar_b1_bits)
                };
                assert!(
                    lo - 0.05 <= rep.quadrature_bits && rep.quadrature_bits <= hi + 0.05,
                    "v={v} r={r}: {rep:?}"
                );
                assert!(rep.approximation_ok);
            }
        }
    }

    #[test]
    fn weak_signal_flags_approximation() {
        let p = SystemParams {
            normalization: PowerNormalization::Raw,
            power: 1.0,
            ..params(3.6, 500.0)
        };
        assert!(!approximation_holds(&p).unwrap());
    }

    #[test]
    fn average_has_single_interior_maximum() {
        let p = SystemParams::reference();
        let values: Vec<f64> = (1..=50)
            .map(|i| {
                average_bound_b1(&p.with_ring_radius(1000.0 * i as f64 / 51.0).unwrap()).unwrap()
            })
            .collect();
        let peak = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(peak > 0 && peak < 49);
        assert!(values[..=peak].windows(2).all(|w| w[1] > w[0]));
        assert!(values[peak..].windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn single_user_montecarlo_runs() {
        let p = SystemParams {
            users: 1,
            ..SystemParams::reference().with_antennas(30).unwrap()
        };
        let cfg = McConfig {
            trials: 50,
            master_seed: 4,
            workers: None,
        };
        let est = average_rate_montecarlo(&p, &cfg).unwrap();
        assert!(est.mean_rate_bits.is_finite() && est.mean_rate_bits > 0.0);
    }

    #[test]
    fn montecarlo_grows_with_antennas() {
        let cfg = McConfig {
            trials: 400,
            master_seed: 12,
            workers: None,
        };
        let a =
            average_rate_montecarlo(&SystemParams::reference().with_antennas(100).unwrap(), &cfg)
                .unwrap();
        let b =
            average_rate_montecarlo(&SystemParams::reference().with_antennas(200).unwrap(), &cfg)
                .unwrap();
        assert!(b.mean_rate_bits - b.half_width_95 > a.mean_rate_bits + a.half_width_95);
    }
}
