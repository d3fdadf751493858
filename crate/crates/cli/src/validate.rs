//! Acceptance checks with measured values, one JSON line per criterion.

use ringmimo::analytic::{
    bound_coefficient, bound_gain, circle_i0, circle_rate, rate_bounds_with_coefficient,
    riemann_error_bound, riemann_i0, BoundOrdering,
};
use ringmimo::average::{
    average_bound_b1, average_bound_increment, average_rate_montecarlo, average_rate_quadrature,
    Integrand,
};
use ringmimo::geometry::{build_ring, CellGeometry};
use ringmimo::montecarlo::{
    ergodic_rate, lln_probe, population_around, substream, LlnProbeConfig, McConfig,
    ProbeDistribution, RateEstimate,
};
use ringmimo::optimizer::{solve_radius, stationarity_residual};
use ringmimo::{PowerNormalization, SystemParams};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{ScenarioConfig, DEFAULT_SEED};
use crate::sweep::{run_sweep, Axis, Metric, SweepSpec};

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "closed_form_equivalence"),
    (2, "bound_ordering_and_gap"),
    (3, "coefficient_identities"),
    (4, "riemann_convergence"),
    (5, "montecarlo_vs_asymptote"),
    (6, "cell_average_sandwich"),
    (7, "quadrature_vs_closed_form"),
    (8, "radius_optimum"),
    (9, "three_quarter_ring_robustness"),
    (10, "percentage_improvements"),
    (11, "lln_probe"),
    (12, "determinism"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub master_seed: u64,
    /// Monte Carlo trials per point.
    pub trials: usize,
    pub workers: Option<usize>,
    /// Multiplies `C(v)` wherever the bound coefficient enters a check.
    /// Anything other than 1 is a deliberate fault.
    pub coefficient_scale: f64,
    /// Restrict the run to these criterion numbers.
    pub only: Option<Vec<u8>>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            master_seed: DEFAULT_SEED,
            trials: 2000,
            workers: None,
            coefficient_scale: 1.0,
            only: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measured: Map<String, Value>,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }

    /// `PASS 1 closed_form_equivalence: detail`.
    pub fn summary(&self) -> String {
        format!(
            "{} {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.detail
        )
    }
}

type CheckResult = Result<(bool, Map<String, Value>, String), String>;

#[derive(Default)]
struct Measured(Map<String, Value>);

impl Measured {
    fn num(&mut self, key: &str, x: f64) -> &mut Self {
        let v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        self.0.insert(key.to_string(), v);
        self
    }

    fn int(&mut self, key: &str, n: usize) -> &mut Self {
        self.0.insert(key.to_string(), Value::from(n));
        self
    }

    fn flag(&mut self, key: &str, b: bool) -> &mut Self {
        self.0.insert(key.to_string(), Value::Bool(b));
        self
    }

    fn done(self, passed: bool, detail: String) -> CheckResult {
        Ok((passed, self.0, detail))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn reference() -> SystemParams {
    SystemParams::reference()
}

fn coefficient(v: f64, opts: &ValidateOptions) -> f64 {
    bound_coefficient(v) * opts.coefficient_scale
}

fn mc(opts: &ValidateOptions) -> McConfig {
    McConfig {
        trials: opts.trials,
        master_seed: opts.master_seed,
        workers: opts.workers,
    }
}

fn closed_form_i0(r: f64, r_u: f64, v: f64) -> f64 {
    let (a, b) = (r * r, r_u * r_u);
    let d = (a - b).abs();
    match v as u32 {
        2 => 1.0 / d,
        4 => (a + b) / d.powi(3),
        _ => (a * a + 4.0 * a * b + b * b) / d.powi(5),
    }
}

fn c1_closed_forms(_: &ValidateOptions) -> CheckResult {
    let mut worst: f64 = 0.0;
    for v in [2.0, 4.0, 6.0] {
        for r in [150.0, 400.0, 700.0, 900.0] {
            for r_u in [0.0, 120.0, 333.0, 610.0, 980.0] {
                let got = circle_i0(r, r_u, v).map_err(err)?;
                let want = closed_form_i0(r, r_u, v);
                worst = worst.max(((got - want) / want).abs());
            }
        }
    }
    let mut m = Measured::default();
    m.num("max_relative_error", worst)
        .int("points_per_exponent", 20);
    m.done(
        worst <= 1e-9,
        format!("max relative error {worst:.3e} (limit 1e-9)"),
    )
}

fn c2_bounds(opts: &ValidateOptions) -> CheckResult {
    const TOL: f64 = 1e-9;
    let mut gap_max: f64 = 0.0;
    let mut equality_err: f64 = 0.0;
    let mut violations = 0usize;
    let mut points = 0usize;
    for i in 0..=16 {
        let v = 2.0 + 0.25 * i as f64;
        let p = reference().with_exponent(v).map_err(err)?;
        for r_u in [
            0.0, 100.0, 200.0, 300.0, 400.0, 600.0, 700.0, 800.0, 900.0, 1000.0,
        ] {
            let rate = circle_rate(&p, r_u).map_err(err)?.rate_bits;
            let b = rate_bounds_with_coefficient(&p, r_u, coefficient(v, opts)).map_err(err)?;
            points += 1;
            gap_max = gap_max.max((b.b1_bits - b.b2_bits).abs());
            let ok = match b.ordering {
                BoundOrdering::B1Upper => b.b1_bits + TOL >= rate && rate + TOL >= b.b2_bits,
                BoundOrdering::B1Lower => b.b1_bits <= rate + TOL && rate <= b.b2_bits + TOL,
                BoundOrdering::Equal => {
                    let e = (b.b1_bits - rate).abs().max((b.b2_bits - rate).abs());
                    equality_err = equality_err.max(e);
                    e <= TOL
                }
            };
            if !ok {
                violations += 1;
            }
        }
    }
    let passed = violations == 0 && gap_max <= 0.6 && equality_err <= TOL;
    let mut m = Measured::default();
    m.int("points", points)
        .int("sandwich_violations", violations)
        .num("max_gap_bits", gap_max)
        .num("max_equality_error_bits", equality_err);
    m.done(
        passed,
        format!(
            "{violations} violations over {points} points, max gap {gap_max:.4} bits, equality error {equality_err:.2e}"
        ),
    )
}

fn c3_coefficient(opts: &ValidateOptions) -> CheckResult {
    let e2 = (coefficient(2.0, opts) - 1.0).abs();
    let e4 = (coefficient(4.0, opts) - 1.0).abs();
    let mut m = Measured::default();
    m.num("c2_minus_one", e2).num("c4_minus_one", e4);
    m.done(
        e2 <= 1e-12 && e4 <= 1e-12,
        format!("|C(2)-1| = {e2:.2e}, |C(4)-1| = {e4:.2e} (limit 1e-12)"),
    )
}

fn c4_riemann(_: &ValidateOptions) -> CheckResult {
    let r = 500.0;
    let g = CellGeometry::new(1000.0, r).map_err(err)?;
    let ms = [64usize, 128, 256, 512];
    let rings: Vec<_> = ms
        .iter()
        .map(|&m| build_ring(&g, m))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut bound_violations = 0usize;
    let mut worst_ratio: f64 = 0.0;
    let mut resolved = 0usize;
    let mut points = 0usize;
    for v in [2.0, 3.6, 6.0] {
        for r_u in [
            0.0, 100.0, 300.0, 450.0, 480.0, 490.0, 495.0, 505.0, 510.0, 550.0, 700.0, 1000.0,
        ] {
            let exact = circle_i0(r, r_u, v).map_err(err)?;
            let mut errs = Vec::with_capacity(ms.len());
            for (ring, &m) in rings.iter().zip(&ms) {
                let e = (riemann_i0(ring, r_u, v).map_err(err)? - exact).abs();
                // The bound holds in exact arithmetic; summing M terms adds
                // up to about M ulps of rounding, which dominates where the
                // bound vanishes (user at the center).
                let roundoff = m as f64 * f64::EPSILON * exact;
                if e > riemann_error_bound(m, r, r_u, v) + roundoff {
                    bound_violations += 1;
                }
                errs.push(e);
                points += 1;
            }
            // The contraction test needs errors above round-off at every M;
            // far from the ring the sum is already exact at M = 64.
            if errs.iter().all(|&e| e > 1e3 * f64::EPSILON * exact) {
                resolved += 1;
                for w in errs.windows(2) {
                    worst_ratio = worst_ratio.max(w[1] / w[0]);
                }
            }
        }
    }
    let passed = bound_violations == 0 && resolved >= 3 && worst_ratio <= 0.75;
    let mut m = Measured::default();
    m.int("points", points)
        .int("bound_violations", bound_violations)
        .int("positions_above_roundoff", resolved)
        .num("max_error_ratio", worst_ratio);
    m.done(
        passed,
        format!(
            "{bound_violations} bound violations over {points} sums; worst successive ratio {worst_ratio:.3} on {resolved} resolved positions"
        ),
    )
}

fn user_estimate(
    p: &SystemParams,
    r_u: f64,
    opts: &ValidateOptions,
) -> Result<RateEstimate, String> {
    let tagged = p.geometry.user(r_u, 0.0).map_err(err)?;
    let users = population_around(p, tagged, opts.master_seed).map_err(err)?;
    ergodic_rate(p, &users, &mc(opts), 0).map_err(err)
}

fn c5_montecarlo(opts: &ValidateOptions) -> CheckResult {
    let r_u = 300.0;
    let p = reference();
    let asy = circle_rate(&p, r_u).map_err(err)?.rate_bits;
    let est = user_estimate(&p, r_u, opts)?;
    let diff = (est.mean_rate_bits - asy).abs();
    let allowed = (0.02 * asy).max(est.half_width_95);
    let mut gaps = Vec::new();
    for m in [50, 100, 200, 400] {
        let pm = p.with_antennas(m).map_err(err)?;
        let a = circle_rate(&pm, r_u).map_err(err)?.rate_bits;
        gaps.push((user_estimate(&pm, r_u, opts)?.mean_rate_bits - a).abs());
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let mut m = Measured::default();
    m.num("asymptotic_bits", asy)
        .num("mc_bits", est.mean_rate_bits)
        .num("mc_half_width", est.half_width_95)
        .num("abs_difference", diff)
        .num("allowed", allowed)
        .num("gap_m50", gaps[0])
        .num("gap_m100", gaps[1])
        .num("gap_m200", gaps[2])
        .num("gap_m400", gaps[3])
        .flag("gaps_decreasing", decreasing);
    m.done(
        diff <= allowed && decreasing,
        format!(
            "M=300: MC {:.4} vs asymptote {asy:.4} (|diff| {diff:.4} <= {allowed:.4}); gaps over M=50..400 {:?}",
            est.mean_rate_bits,
            gaps.iter().map(|g| (g * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn c6_cell_sandwich(opts: &ValidateOptions) -> CheckResult {
    let p = reference();
    let b1 = average_bound_b1(&p).map_err(err)?;
    let b2 = b1 + average_bound_increment(p.exponent) + opts.coefficient_scale.log2();
    let est = average_rate_montecarlo(&p, &mc(opts)).map_err(err)?;
    let slack = est.half_width_95 + 0.2;
    let inside =
        est.mean_rate_bits >= b1.min(b2) - slack && est.mean_rate_bits <= b1.max(b2) + slack;
    let mut gap_max: f64 = 0.0;
    for i in 0..=400 {
        let v = 2.0 + 0.01 * i as f64;
        gap_max = gap_max.max((average_bound_increment(v) + opts.coefficient_scale.log2()).abs());
    }
    let mut m = Measured::default();
    m.num("bar_b1", b1)
        .num("bar_b2", b2)
        .num("mc", est.mean_rate_bits)
        .num("mc_half_width", est.half_width_95)
        .num("max_average_gap_bits", gap_max);
    m.done(
        inside && gap_max < 0.6,
        format!(
            "MC {:.4} vs [{:.4}, {:.4}] with slack {slack:.3}; max |bar_b1 - bar_b2| {gap_max:.4}",
            est.mean_rate_bits,
            b1.min(b2),
            b1.max(b2)
        ),
    )
}

fn c7_quadrature(_: &ValidateOptions) -> CheckResult {
    const TARGET_GAIN: f64 = 1e3;
    let mut worst: f64 = 0.0;
    let mut points = 0usize;
    for i in 0..=8 {
        let v = 2.0 + 0.5 * i as f64;
        for r in [250.0, 500.0, 750.0] {
            let base = reference()
                .with_exponent(v)
                .map_err(err)?
                .with_ring_radius(r)
                .map_err(err)?;
            let min_gain = bound_gain(r, 0.0, v)
                .map_err(err)?
                .min(bound_gain(r, base.cell_radius(), v).map_err(err)?);
            let p = SystemParams {
                normalization: PowerNormalization::Raw,
                power: TARGET_GAIN / (base.antennas as f64 * min_gain),
                ..base
            };
            let closed = average_bound_b1(&p).map_err(err)?;
            let quad = average_rate_quadrature(&p, Integrand::BoundB1).map_err(err)?;
            worst = worst.max((closed - quad.value_bits).abs());
            points += 1;
        }
    }
    let mut m = Measured::default();
    m.int("points", points)
        .num("min_pm_gain", TARGET_GAIN)
        .num("max_abs_difference_bits", worst);
    m.done(
        worst <= 0.05,
        format!("max |closed form - quadrature| {worst:.2e} bits over {points} (v, r) pairs"),
    )
}

fn c8_optimum(_: &ValidateOptions) -> CheckResult {
    let big_r = 1000.0;
    let r35 = solve_radius(3.5, big_r).map_err(err)?.ratio;
    let r4 = solve_radius(4.0, big_r).map_err(err)?.ratio;
    let (mut lo, mut hi, mut worst_res) = (f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..=400 {
        let v = 2.0 + 0.01 * i as f64;
        let s = solve_radius(v, big_r).map_err(err)?;
        lo = lo.min(s.ratio);
        hi = hi.max(s.ratio);
        if !s.limit {
            worst_res = worst_res.max(stationarity_residual(s.r_opt_m, big_r, v).abs());
        }
    }
    let checks = [
        (r35 - 0.758).abs() <= 0.002,
        (r4 - 0.763).abs() <= 0.003,
        (r4 - 0.766).abs() <= 0.01,
        lo >= 0.70 && hi <= 0.78,
        worst_res <= 1e-9,
    ];
    let mut m = Measured::default();
    m.num("ratio_v3_5", r35)
        .num("ratio_v4", r4)
        .num("min_ratio", lo)
        .num("max_ratio", hi)
        .num("max_stationarity_residual", worst_res);
    m.done(
        checks.iter().all(|&c| c),
        format!(
            "v=3.5 -> {r35:.4}, v=4 -> {r4:.4}, range [{lo:.4}, {hi:.4}], residual {worst_res:.1e}"
        ),
    )
}

fn c9_three_quarter(_: &ValidateOptions) -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 0..=7 {
        let v = 2.5 + 0.5 * i as f64;
        let p = reference().with_exponent(v).map_err(err)?;
        let s = solve_radius(v, p.cell_radius()).map_err(err)?;
        let best = average_bound_b1(&p.with_ring_radius(s.r_opt_m).map_err(err)?).map_err(err)?;
        let fixed = average_bound_b1(&p.with_ring_radius(0.75 * p.cell_radius()).map_err(err)?)
            .map_err(err)?;
        worst = worst.max((best - fixed) / best);
    }
    let mut m = Measured::default();
    m.num("max_relative_loss", worst);
    m.done(
        worst < 0.05,
        format!("max loss at r = 0.75R is {:.3}%", 100.0 * worst),
    )
}

fn c10_improvements(opts: &ValidateOptions) -> CheckResult {
    let base = reference();
    let avg = |p: &SystemParams| {
        average_rate_montecarlo(p, &mc(opts))
            .map(|e| e.mean_rate_bits)
            .map_err(err)
    };
    let m100 = base.with_antennas(100).map_err(err)?;
    let m400 = base.with_antennas(400).map_err(err)?;
    let (a100, a400) = (avg(&m100)?, avg(&m400)?);
    let p4 = m100.with_power_db(4.0).map_err(err)?;
    let p14 = m100.with_power_db(14.0).map_err(err)?;
    let (a4, a14) = (avg(&p4)?, avg(&p14)?);
    let antenna_gain = 100.0 * (a400 / a100 - 1.0);
    let power_gain = 100.0 * (a14 / a4 - 1.0);
    let closed = |p: &SystemParams| average_bound_b1(p).map_err(err);
    let antenna_closed = 100.0 * (closed(&m400)? / closed(&m100)? - 1.0);
    let power_closed = 100.0 * (closed(&p14)? / closed(&p4)? - 1.0);
    let mut m = Measured::default();
    m.num("antenna_gain_percent", antenna_gain)
        .num("power_gain_percent", power_gain)
        .num("antenna_gain_closed_form_percent", antenna_closed)
        .num("power_gain_closed_form_percent", power_closed);
    m.done(
        (antenna_gain - 15.0).abs() <= 3.0 && (power_gain - 35.0).abs() <= 5.0,
        format!(
            "M 100->400: +{antenna_gain:.2}% (target 15 +/- 3); P 4->14 dB: +{power_gain:.2}% (target 35 +/- 5)"
        ),
    )
}

const DOMAIN_PROBE: u64 = 11;

/// Path-loss profile of a user 300 m from the center of a 500 m ring of
/// `m` antennas, scaled to unit mean.
fn ring_profile(m: usize) -> Result<Vec<f64>, String> {
    let g = CellGeometry::new(1000.0, 500.0).map_err(err)?;
    let ring = build_ring(&g, m).map_err(err)?;
    let user = g.user(300.0, 0.0).map_err(err)?;
    let beta: Vec<f64> = ringmimo::geometry::distances(&ring, &user)
        .into_iter()
        .map(|d| d.powf(-3.6))
        .collect();
    let mean = beta.iter().sum::<f64>() / m as f64;
    Ok(beta.into_iter().map(|b| b / mean).collect())
}

fn c11_lln(opts: &ValidateOptions) -> CheckResult {
    const TRIALS: usize = 2000;
    let mut m = Measured::default();
    let mut envelope_violations = 0usize;
    let mut worst_ratio_err: f64 = 0.0;
    let mut stream = 0u64;
    let mut run = |len: usize, eps: f64, p: ProbeDistribution| {
        stream += 1;
        let cfg = LlnProbeConfig {
            trials: TRIALS,
            epsilon: eps,
            p,
            q: ProbeDistribution::Gaussian,
        };
        let mut rng = substream(opts.master_seed, DOMAIN_PROBE, stream);
        lln_probe(&ring_profile(len)?, &cfg, &mut rng).map_err(err)
    };
    for (name, dist) in [
        ("gaussian", ProbeDistribution::Gaussian),
        ("unit_modulus", ProbeDistribution::UnitModulus),
    ] {
        let mut short_msd = (0.0, 0.0);
        for (len, eps) in [(1000usize, 0.1), (1000, 0.2), (2000, 0.1), (2000, 0.2)] {
            let r = run(len, eps, dist)?;
            if r.deviation_exceed_fraction > r.deviation_envelope.min(1.0)
                || r.cross_exceed_fraction > r.cross_envelope.min(1.0)
            {
                envelope_violations += 1;
            }
            if eps == 0.1 {
                m.num(
                    &format!("{name}_m{len}_deviation_exceed"),
                    r.deviation_exceed_fraction,
                )
                .num(
                    &format!("{name}_m{len}_deviation_envelope"),
                    r.deviation_envelope,
                )
                .num(
                    &format!("{name}_m{len}_cross_exceed"),
                    r.cross_exceed_fraction,
                )
                .num(&format!("{name}_m{len}_cross_envelope"), r.cross_envelope);
                if len == 1000 {
                    short_msd = (r.mean_square_deviation, r.mean_square_cross);
                } else {
                    let dev_ratio = r.mean_square_deviation / short_msd.0;
                    let cross_ratio = r.mean_square_cross / short_msd.1;
                    m.num(&format!("{name}_deviation_msd_ratio"), dev_ratio)
                        .num(&format!("{name}_cross_msd_ratio"), cross_ratio);
                    worst_ratio_err = worst_ratio_err
                        .max((dev_ratio / 0.5 - 1.0).abs())
                        .max((cross_ratio / 0.5 - 1.0).abs());
                }
            }
        }
    }
    m.int("envelope_violations", envelope_violations)
        .num("max_msd_ratio_relative_error", worst_ratio_err);
    m.done(
        envelope_violations == 0 && worst_ratio_err <= 0.2,
        format!(
            "{envelope_violations} Chebyshev envelope violations; mean-square ratio for M 1000->2000 within {:.1}% of 1/2",
            100.0 * worst_ratio_err
        ),
    )
}

fn c12_determinism(opts: &ValidateOptions) -> CheckResult {
    let cfg = ScenarioConfig {
        antenna_count: 100,
        trials: opts.trials.min(200),
        master_seed: opts.master_seed,
        ..ScenarioConfig::default()
    };
    let spec = SweepSpec {
        axis: Axis::UserRadius,
        metric: Metric::User,
        values: vec![100.0, 300.0, 500.0, 700.0, 950.0],
        user_radius_m: 300.0,
        user_angle_rad: 0.0,
    };
    let table = |w| run_sweep(&cfg, &spec, w).map(|t| t.to_csv()).map_err(err);
    let one = table(Some(1))?;
    let four = table(Some(4))?;
    let again = table(Some(4))?;
    let default_pool = table(None)?;
    let avg_cfg = ScenarioConfig {
        antenna_count: 50,
        ..cfg.clone()
    };
    let avg_spec = SweepSpec {
        axis: Axis::PowerDb,
        metric: Metric::Average,
        values: vec![0.0, 10.0],
        ..spec.clone()
    };
    let avg = |w| {
        run_sweep(&avg_cfg, &avg_spec, w)
            .map(|t| t.to_csv())
            .map_err(err)
    };
    let avg_same = avg(Some(1))? == avg(Some(3))?;
    let same = one == four && four == again && four == default_pool;
    let mut m = Measured::default();
    m.int("csv_bytes", one.len())
        .flag("user_sweep_identical", same)
        .flag("average_sweep_identical", avg_same);
    m.done(
        same && avg_same,
        format!(
            "sweep CSV identical across 1, 4 and default workers: {same}; cell-average sweep identical across 1 and 3 workers: {avg_same}"
        ),
    )
}

pub fn run_criterion(id: u8, opts: &ValidateOptions) -> Option<CriterionOutcome> {
    let &(criterion, name) = CRITERIA.iter().find(|(i, _)| *i == id)?;
    let check: fn(&ValidateOptions) -> CheckResult = match id {
        1 => c1_closed_forms,
        2 => c2_bounds,
        3 => c3_coefficient,
        4 => c4_riemann,
        5 => c5_montecarlo,
        6 => c6_cell_sandwich,
        7 => c7_quadrature,
        8 => c8_optimum,
        9 => c9_three_quarter,
        10 => c10_improvements,
        11 => c11_lln,
        _ => c12_determinism,
    };
    let start = std::time::Instant::now();
    let outcome = match check(opts) {
        Ok((passed, measured, detail)) => CriterionOutcome {
            criterion,
            name,
            passed,
            measured,
            detail,
        },
        Err(e) => CriterionOutcome {
            criterion,
            name,
            passed: false,
            measured: Map::new(),
            detail: format!("error: {e}"),
        },
    };
    log::info!("criterion {id} finished in {:.1?}", start.elapsed());
    Some(outcome)
}

pub fn selected(opts: &ValidateOptions) -> Vec<u8> {
    CRITERIA
        .iter()
        .map(|(i, _)| *i)
        .filter(|i| opts.only.as_ref().is_none_or(|o| o.contains(i)))
        .collect()
}

/// Runs the selected criteria in order, calling `each` as every one finishes.
pub fn run_all<F: FnMut(&CriterionOutcome)>(
    opts: &ValidateOptions,
    mut each: F,
) -> Vec<CriterionOutcome> {
    selected(opts)
        .into_iter()
        .filter_map(|id| {
            let o = run_criterion(id, opts)?;
            each(&o);
            Some(o)
        })
        .collect()
}
