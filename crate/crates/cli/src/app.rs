//! Argument parsing and dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, DEFAULT_USER_RADIUS_M};
use crate::config::{ScenarioConfig, SEED_ENV};
use crate::sweep::{linspace, run_sweep, Axis, Metric, SweepSpec};
use crate::validate::{run_all, ValidateOptions};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ringmimo",
    version,
    about = "Uplink rates of a ring-shaped distributed massive MIMO array"
)]
pub struct Cli {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Scenario overrides; each one wins over the config file.
#[derive(Debug, Args, Default)]
pub struct ScenarioArgs {
    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "METERS")]
    pub cell_radius: Option<f64>,
    #[arg(long, global = true, value_name = "METERS")]
    pub ring_radius: Option<f64>,
    #[arg(long, global = true, value_name = "M")]
    pub antennas: Option<usize>,
    #[arg(long, global = true, value_name = "K")]
    pub users: Option<usize>,
    /// Path-loss exponent v in [2, 6].
    #[arg(long, global = true, value_name = "V")]
    pub exponent: Option<f64>,
    #[arg(long, global = true, value_name = "DB")]
    pub power_db: Option<f64>,
    /// `midpoint` scales power by (R/2)^v, `raw` uses it unchanged.
    #[arg(long, global = true)]
    pub normalization: Option<String>,
    /// Monte Carlo trials per point; 0 skips Monte Carlo.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Master seed (default from the RINGMIMO_SEED environment variable).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "METERS")]
    pub min_distance: Option<f64>,
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Worker threads for Monte Carlo; results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic rate, bounds and Monte Carlo rate of one user.
    RateUser {
        #[arg(long, default_value_t = DEFAULT_USER_RADIUS_M)]
        user_radius: f64,
        #[arg(long, default_value_t = 0.0)]
        user_angle: f64,
    },
    /// Cell-average rate: closed-form bounds, quadrature and Monte Carlo.
    RateAverage,
    /// Tabulate rates over one parameter.
    Sweep {
        /// user_radius, ring_radius, antennas or power_db.
        #[arg(long)]
        axis: Axis,
        #[arg(long, requires_all = ["to", "steps"], conflicts_with = "values")]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Explicit comma-separated sweep values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// user or average; defaults to user for user_radius, else average.
        #[arg(long)]
        metric: Option<Metric>,
        #[arg(long, default_value_t = DEFAULT_USER_RADIUS_M)]
        user_radius: f64,
        #[arg(long, default_value_t = 0.0)]
        user_angle: f64,
    },
    /// Ring radius maximizing the cell-average rate.
    Optimize,
    /// Run the acceptance checks; exits with status 2 if any fails.
    Validate {
        /// Comma-separated criterion numbers to run.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// Scale the bound coefficient by this factor (fault injection).
        #[arg(long, hide = true)]
        corrupt_coefficient: Option<f64>,
    },
    /// Print the effective configuration in config-file format.
    ShowConfig,
}

impl ScenarioArgs {
    /// Defaults, then `RINGMIMO_SEED`, then the config file, then flags.
    pub fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = ScenarioConfig::from_env()?;
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        macro_rules! apply {
            ($($flag:ident => $field:ident),*) => {$(
                if let Some(v) = self.$flag.clone() { cfg.$field = v; }
            )*};
        }
        apply!(
            cell_radius => cell_radius_m,
            ring_radius => ring_radius_m,
            antennas => antenna_count,
            users => user_count,
            exponent => exponent_v,
            power_db => power_db,
            trials => trials,
            seed => master_seed,
            min_distance => min_distance_m
        );
        if let Some(n) = &self.normalization {
            cfg.set("power_normalization", n)?;
        }
        if let Some(p) = &self.output {
            cfg.output_path = Some(p.clone());
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(cfg)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

/// Executes `cli`, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = cli.scenario.resolve()?;
    let workers = cli.scenario.workers;
    log::debug!("seed {} (env {SEED_ENV})", cfg.master_seed);
    match &cli.command {
        Command::RateUser {
            user_radius,
            user_angle,
        } => {
            let rec = commands::rate_user(&cfg, *user_radius, *user_angle, workers)?;
            emit(out, &rec.to_text())?;
            if let Some(p) = &cfg.output_path {
                write_file(p, &rec.to_csv())?;
            }
        }
        Command::RateAverage => {
            let rec = commands::rate_average(&cfg, workers)?;
            emit(out, &rec.to_text())?;
            if let Some(p) = &cfg.output_path {
                write_file(p, &rec.to_csv())?;
            }
        }
        Command::Optimize => {
            let rec = commands::optimize(&cfg)?;
            emit(out, &rec.to_text())?;
            if let Some(p) = &cfg.output_path {
                write_file(p, &rec.to_csv())?;
            }
        }
        Command::Sweep {
            axis,
            from,
            to,
            steps,
            values,
            metric,
            user_radius,
            user_angle,
        } => {
            let values = match (values, from, to, steps) {
                (Some(v), _, _, _) => v.clone(),
                (None, Some(a), Some(b), Some(n)) => linspace(*a, *b, *n)?,
                _ => {
                    return Err(CliError::Usage(
                        "sweep needs either --values or --from/--to/--steps".into(),
                    ))
                }
            };
            let spec = SweepSpec {
                axis: *axis,
                metric: metric.unwrap_or_else(|| axis.default_metric()),
                values,
                user_radius_m: *user_radius,
                user_angle_rad: *user_angle,
            };
            let csv = run_sweep(&cfg, &spec, workers)?.to_csv();
            match &cfg.output_path {
                Some(p) => write_file(p, &csv)?,
                None => emit(out, &csv)?,
            }
        }
        Command::Validate {
            only,
            corrupt_coefficient,
        } => {
            let opts = ValidateOptions {
                master_seed: cfg.master_seed,
                trials: cfg.trials.max(1),
                workers,
                coefficient_scale: corrupt_coefficient.unwrap_or(1.0),
                only: only.clone(),
            };
            let mut lines = String::new();
            let mut write_err = None;
            let outcomes = run_all(&opts, |o| {
                let line = o.to_json_line();
                eprintln!("{}", o.summary());
                if let Err(e) = emit(out, &format!("{line}\n")) {
                    write_err.get_or_insert(e);
                }
                lines.push_str(&line);
                lines.push('\n');
            });
            if let Some(e) = write_err {
                return Err(e);
            }
            if let Some(p) = &cfg.output_path {
                write_file(p, &lines)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if outcomes.is_empty() {
                return Err(CliError::Usage("no criteria selected".into()));
            }
            if failed > 0 {
                return Err(CliError::Acceptance {
                    failed,
                    total: outcomes.len(),
                });
            }
        }
        Command::ShowConfig => {
            let text = cfg.to_text();
            emit(out, &text)?;
            if let Some(p) = &cfg.output_path {
                write_file(p, &text)?;
            }
        }
    }
    Ok(())
}
