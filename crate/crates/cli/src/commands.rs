//! Single-record commands: one user, the cell average, the optimal radius.

use ringmimo::analytic::{circle_rate, rate_bounds};
use ringmimo::average::{average_rate_montecarlo, average_report};
use ringmimo::montecarlo::{ergodic_rate, population_around, RateEstimate};
use ringmimo::optimizer::solve_radius;
use ringmimo::SystemParams;

use crate::config::ScenarioConfig;
use crate::record::{Field, Record};
use crate::CliError;

/// Default distance of the tagged user from the cell center, in meters.
pub const DEFAULT_USER_RADIUS_M: f64 = 300.0;

/// Ergodic ZF rate of a user at `(r_u, angle)` among `K - 1` seeded
/// companions; `None` when `trials == 0`.
pub fn user_montecarlo(
    params: &SystemParams,
    cfg: &ScenarioConfig,
    r_u: f64,
    angle_rad: f64,
    workers: Option<usize>,
) -> Result<Option<RateEstimate>, CliError> {
    if cfg.trials == 0 {
        return Ok(None);
    }
    let tagged = params.geometry.user(r_u, angle_rad)?;
    let users = population_around(params, tagged, cfg.master_seed)?;
    Ok(Some(ergodic_rate(params, &users, &cfg.mc(workers), 0)?))
}

pub fn average_montecarlo(
    params: &SystemParams,
    cfg: &ScenarioConfig,
    workers: Option<usize>,
) -> Result<Option<RateEstimate>, CliError> {
    if cfg.trials == 0 {
        return Ok(None);
    }
    Ok(Some(average_rate_montecarlo(params, &cfg.mc(workers))?))
}

fn push_mc(rec: &mut Record, mc: Option<RateEstimate>) {
    if let Some(est) = mc {
        rec.push("mc", Field::Num(est.mean_rate_bits))
            .push("mc_half_width", Field::Num(est.half_width_95))
            .push("mc_trials", Field::Int(est.trials_used as u64))
            .push("mc_rejected_draws", Field::Int(est.rejected_draws as u64));
    }
}

pub fn rate_user(
    cfg: &ScenarioConfig,
    r_u: f64,
    angle_rad: f64,
    workers: Option<usize>,
) -> Result<Record, CliError> {
    let params = cfg.params()?;
    let asy = circle_rate(&params, r_u)?;
    let bounds = rate_bounds(&params, r_u)?;
    let mc = user_montecarlo(&params, cfg, r_u, angle_rad, workers)?;
    let mut rec = Record::default();
    rec.push("user_radius_m", Field::Num(r_u))
        .push("asymptotic", Field::Num(asy.rate_bits))
        .push("i0", Field::Num(asy.i0))
        .push("z", Field::Num(asy.z))
        .push("b1", Field::Num(bounds.b1_bits))
        .push("b2", Field::Num(bounds.b2_bits))
        .push("coefficient", Field::Num(bounds.coefficient))
        .push("ordering", Field::Text(bounds.ordering.as_str().into()));
    push_mc(&mut rec, mc);
    Ok(rec)
}

pub fn rate_average(cfg: &ScenarioConfig, workers: Option<usize>) -> Result<Record, CliError> {
    let params = cfg.params()?;
    let report = average_report(&params)?;
    let mc = average_montecarlo(&params, cfg, workers)?;
    let mut rec = Record::default();
    rec.push("bar_b1", Field::Num(report.bar_b1_bits))
        .push("bar_b2", Field::Num(report.bar_b2_bits))
        .push("quadrature", Field::Num(report.quadrature_bits))
        .push("quadrature_err", Field::Num(report.quadrature_abs_err))
        .push("mc", Field::opt(mc.map(|e| e.mean_rate_bits)))
        .push("mc_half_width", Field::opt(mc.map(|e| e.half_width_95)))
        .push(
            "approximation_ok",
            Field::Text(report.approximation_ok.to_string()),
        );
    Ok(rec)
}

pub fn optimize(cfg: &ScenarioConfig) -> Result<Record, CliError> {
    let s = solve_radius(cfg.exponent_v, cfg.cell_radius_m)?;
    let mut rec = Record::default();
    rec.push("exponent_v", Field::Num(cfg.exponent_v))
        .push("t0", Field::Num(s.t0))
        .push("r_opt_m", Field::Num(s.r_opt_m))
        .push("ratio", Field::Num(s.ratio))
        .push("residual", Field::Num(s.residual))
        .push("limit", Field::Text(s.limit.to_string()));
    Ok(rec)
}
