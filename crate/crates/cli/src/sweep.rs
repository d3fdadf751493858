//! One-dimensional parameter sweeps written as CSV tables.

use std::str::FromStr;

use ringmimo::analytic::{circle_rate, rate_bounds};
use ringmimo::average::{average_bound_b1, average_bound_b2, average_rate_quadrature, Integrand};

use crate::commands::{average_montecarlo, user_montecarlo};
use crate::config::ScenarioConfig;
use crate::record::format_sig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    UserRadius,
    RingRadius,
    Antennas,
    PowerDb,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::UserRadius => "user_radius",
            Axis::RingRadius => "ring_radius",
            Axis::Antennas => "antennas",
            Axis::PowerDb => "power_db",
        }
    }

    pub fn default_metric(&self) -> Metric {
        match self {
            Axis::UserRadius => Metric::User,
            _ => Metric::Average,
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "user_radius" | "user-radius" => Ok(Axis::UserRadius),
            "ring_radius" | "ring-radius" => Ok(Axis::RingRadius),
            "antennas" => Ok(Axis::Antennas),
            "power_db" | "power-db" => Ok(Axis::PowerDb),
            _ => Err(format!(
                "unknown axis `{s}` (expected user_radius|ring_radius|antennas|power_db)"
            )),
        }
    }
}

/// Quantity tabulated per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Rate of the tagged user.
    User,
    /// Cell-average rate; the asymptotic column holds the quadrature of the
    /// exact asymptote.
    Average,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "user" => Ok(Metric::User),
            "average" => Ok(Metric::Average),
            _ => Err(format!("unknown metric `{s}` (expected user|average)")),
        }
    }
}

/// Evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Usage("sweep range must be finite".into()));
    }
    match steps {
        0 => Err(CliError::Usage("--steps must be at least 1".into())),
        1 => Ok(vec![from]),
        n => Ok((0..n)
            .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub asymptotic_bits: Option<f64>,
    pub b1_bits: Option<f64>,
    pub b2_bits: Option<f64>,
    pub mc_bits: Option<f64>,
    pub mc_half_width: Option<f64>,
    /// Why some cells are empty.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub swept_name: String,
    pub metric: Metric,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn header(&self) -> [String; 7] {
        [
            self.swept_name.clone(),
            "asymptotic_bits".into(),
            "b1_bits".into(),
            "b2_bits".into(),
            "mc_bits".into(),
            "mc_half_width".into(),
            "note".into(),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let cell = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
        w.write_record(self.header()).expect("writing to memory");
        for row in &self.rows {
            w.write_record([
                format_sig(row.value),
                cell(row.asymptotic_bits),
                cell(row.b1_bits),
                cell(row.b2_bits),
                cell(row.mc_bits),
                cell(row.mc_half_width),
                row.note.clone().unwrap_or_default(),
            ])
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    /// Row with the largest value in `column` (`b1`, `asymptotic` or `mc`).
    pub fn argmax(&self, column: fn(&SweepRow) -> Option<f64>) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| column(r).is_some())
            .max_by(|a, b| column(a).unwrap().total_cmp(&column(b).unwrap()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub metric: Metric,
    pub values: Vec<f64>,
    /// Tagged-user radius for axes other than `user_radius`.
    pub user_radius_m: f64,
    pub user_angle_rad: f64,
}

fn apply_axis(cfg: &ScenarioConfig, axis: Axis, x: f64) -> Result<ScenarioConfig, String> {
    let mut c = cfg.clone();
    match axis {
        Axis::UserRadius => {}
        Axis::RingRadius => c.ring_radius_m = x,
        Axis::Antennas => {
            if x < 1.0 || x.fract() != 0.0 {
                return Err(format!("antenna count must be a positive integer, got {x}"));
            }
            c.antenna_count = x as usize;
        }
        Axis::PowerDb => c.power_db = x,
    }
    Ok(c)
}

fn note_push(note: &mut Option<String>, msg: String) {
    match note {
        Some(n) if n.contains(&msg) => {}
        Some(n) => {
            n.push_str("; ");
            n.push_str(&msg);
        }
        None => *note = Some(msg),
    }
}

fn keep(note: &mut Option<String>, r: ringmimo::Result<f64>) -> Option<f64> {
    match r {
        Ok(v) if v.is_finite() => Some(v),
        Ok(v) => {
            note_push(note, format!("non-finite value {v}"));
            None
        }
        Err(e) => {
            note_push(note, e.to_string());
            None
        }
    }
}

fn eval_row(
    cfg: &ScenarioConfig,
    spec: &SweepSpec,
    x: f64,
    workers: Option<usize>,
) -> Result<SweepRow, CliError> {
    let mut row = SweepRow {
        value: x,
        asymptotic_bits: None,
        b1_bits: None,
        b2_bits: None,
        mc_bits: None,
        mc_half_width: None,
        note: None,
    };
    let scenario = match apply_axis(cfg, spec.axis, x) {
        Ok(c) => c,
        Err(msg) => {
            row.note = Some(format!("excluded: {msg}"));
            return Ok(row);
        }
    };
    let params = match scenario.params() {
        Ok(p) => p,
        Err(e) => {
            row.note = Some(format!("excluded: {e}"));
            return Ok(row);
        }
    };
    match spec.metric {
        Metric::User => {
            let r_u = if spec.axis == Axis::UserRadius {
                x
            } else {
                spec.user_radius_m
            };
            if r_u == params.ring_radius() {
                row.note = Some("singular: user on the antenna ring".into());
                return Ok(row);
            }
            row.asymptotic_bits = keep(
                &mut row.note,
                circle_rate(&params, r_u).map(|a| a.rate_bits),
            );
            match rate_bounds(&params, r_u) {
                Ok(b) => {
                    row.b1_bits = keep(&mut row.note, Ok(b.b1_bits));
                    row.b2_bits = keep(&mut row.note, Ok(b.b2_bits));
                }
                Err(e) => note_push(&mut row.note, e.to_string()),
            }
            match user_montecarlo(&params, &scenario, r_u, spec.user_angle_rad, workers) {
                Ok(Some(est)) => {
                    row.mc_bits = Some(est.mean_rate_bits);
                    row.mc_half_width = Some(est.half_width_95);
                }
                Ok(None) => {}
                Err(e) => note_push(&mut row.note, e.to_string()),
            }
        }
        Metric::Average => {
            row.asymptotic_bits = keep(
                &mut row.note,
                average_rate_quadrature(&params, Integrand::ExactRate).map(|q| q.value_bits),
            );
            row.b1_bits = keep(&mut row.note, average_bound_b1(&params));
            row.b2_bits = keep(&mut row.note, average_bound_b2(&params));
            match average_montecarlo(&params, &scenario, workers) {
                Ok(Some(est)) => {
                    row.mc_bits = Some(est.mean_rate_bits);
                    row.mc_half_width = Some(est.half_width_95);
                }
                Ok(None) => {}
                Err(e) => note_push(&mut row.note, e.to_string()),
            }
        }
    }
    Ok(row)
}

/// Evaluates every sweep value in ascending order. Duplicate values are
/// dropped. Rows that cannot be evaluated keep empty cells and a note.
pub fn run_sweep(
    cfg: &ScenarioConfig,
    spec: &SweepSpec,
    workers: Option<usize>,
) -> Result<SweepTable, CliError> {
    cfg.params()?;
    let mut values = spec.values.clone();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage("sweep values must be finite".into()));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut rows = Vec::with_capacity(values.len());
    for &x in &values {
        log::info!("{} = {}", spec.axis.as_str(), x);
        rows.push(eval_row(cfg, spec, x, workers)?);
    }
    let evaluated = rows
        .iter()
        .any(|r| r.asymptotic_bits.is_some() || r.b1_bits.is_some() || r.mc_bits.is_some());
    if !evaluated {
        return Err(CliError::Usage(
            "sweep range is empty after excluding singular and out-of-domain points".into(),
        ));
    }
    let swept_name = match spec.axis {
        Axis::UserRadius => "user_radius_m",
        Axis::RingRadius => "ring_radius_m",
        Axis::Antennas => "antenna_count",
        Axis::PowerDb => "power_db",
    };
    Ok(SweepTable {
        swept_name: swept_name.into(),
        metric: spec.metric,
        rows,
    })
}
