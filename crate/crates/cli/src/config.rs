//! Scenario configuration: a flat `key = value` file with `#` comments.
//!
//! Precedence, lowest first: built-in defaults, the `RINGMIMO_SEED`
//! environment variable (seed only), the config file, command-line flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ringmimo::montecarlo::{McConfig, DEFAULT_TRIALS};
use ringmimo::{db_to_linear, PowerNormalization, SystemParams};
use thiserror::Error;

pub const SEED_ENV: &str = "RINGMIMO_SEED";
pub const DEFAULT_SEED: u64 = 20_151_001;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("`{key}`: cannot parse `{value}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("`{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub cell_radius_m: f64,
    pub ring_radius_m: f64,
    pub antenna_count: usize,
    pub user_count: usize,
    pub exponent_v: f64,
    pub power_db: f64,
    pub power_normalization: PowerNormalization,
    pub trials: usize,
    pub master_seed: u64,
    pub min_distance_m: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            cell_radius_m: 1000.0,
            ring_radius_m: 500.0,
            antenna_count: 300,
            user_count: 9,
            exponent_v: 3.6,
            power_db: 10.0,
            power_normalization: PowerNormalization::Midpoint,
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            min_distance_m: ringmimo::channel::DEFAULT_MIN_DISTANCE_M,
            output_path: None,
        }
    }
}

pub const KEYS: [&str; 11] = [
    "cell_radius_m",
    "ring_radius_m",
    "antenna_count",
    "user_count",
    "exponent_v",
    "power_db",
    "power_normalization",
    "trials",
    "master_seed",
    "min_distance_m",
    "output_path",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl ScenarioConfig {
    /// Defaults with the seed taken from `RINGMIMO_SEED` when set.
    pub fn from_env() -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Ok(s) = std::env::var(SEED_ENV) {
            cfg.master_seed = parse_num(SEED_ENV, s.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "cell_radius_m" => self.cell_radius_m = parse_num(key, value)?,
            "ring_radius_m" => self.ring_radius_m = parse_num(key, value)?,
            "antenna_count" => self.antenna_count = parse_num(key, value)?,
            "user_count" => self.user_count = parse_num(key, value)?,
            "exponent_v" => self.exponent_v = parse_num(key, value)?,
            "power_db" => self.power_db = parse_num(key, value)?,
            "power_normalization" => {
                self.power_normalization = value.parse().map_err(|reason| ConfigError::Value {
                    key: key.to_string(),
                    value: value.to_string(),
                    reason,
                })?
            }
            "trials" => self.trials = parse_num(key, value)?,
            "master_seed" => self.master_seed = parse_num(key, value)?,
            "min_distance_m" => self.min_distance_m = parse_num(key, value)?,
            "output_path" => {
                self.output_path = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: 0,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line: i + 1,
                    key: key.to_string(),
                });
            }
            self.set(key, value.trim())?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.merge_str(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.merge_str(text)?;
        Ok(cfg)
    }

    /// Serializes every field; `parse(to_text())` reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cell_radius_m = {}", self.cell_radius_m);
        let _ = writeln!(s, "ring_radius_m = {}", self.ring_radius_m);
        let _ = writeln!(s, "antenna_count = {}", self.antenna_count);
        let _ = writeln!(s, "user_count = {}", self.user_count);
        let _ = writeln!(s, "exponent_v = {}", self.exponent_v);
        let _ = writeln!(s, "power_db = {}", self.power_db);
        let _ = writeln!(
            s,
            "power_normalization = {}",
            self.power_normalization.as_str()
        );
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "min_distance_m = {}", self.min_distance_m);
        let out = self
            .output_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default();
        let _ = writeln!(s, "output_path = {out}");
        s
    }

    pub fn params(&self) -> Result<SystemParams, ConfigError> {
        let geometry =
            ringmimo::geometry::CellGeometry::new(self.cell_radius_m, self.ring_radius_m)
                .map_err(|e| invalid_from(&e))?;
        let mut p = SystemParams::new(
            geometry,
            self.antenna_count,
            self.user_count,
            self.exponent_v,
            db_to_linear(self.power_db),
            self.power_normalization,
        )
        .map_err(|e| invalid_from(&e))?;
        p.min_distance_m = self.min_distance_m;
        p.validate().map_err(|e| invalid_from(&e))?;
        if !self.power_db.is_finite() {
            return Err(ConfigError::Invalid {
                key: "power_db",
                reason: "must be finite".into(),
            });
        }
        Ok(p)
    }

    pub fn mc(&self, workers: Option<usize>) -> McConfig {
        McConfig {
            trials: self.trials,
            master_seed: self.master_seed,
            workers,
        }
    }
}

fn invalid_from(e: &ringmimo::Error) -> ConfigError {
    match e {
        ringmimo::Error::InvalidParameter { name, reason } => ConfigError::Invalid {
            key: name,
            reason: reason.clone(),
        },
        other => ConfigError::Invalid {
            key: "scenario",
            reason: other.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ScenarioConfig {
            cell_radius_m: 1234.5,
            ring_radius_m: 0.1 + 0.2,
            antenna_count: 77,
            user_count: 3,
            exponent_v: 2.75,
            power_db: -3.3,
            power_normalization: PowerNormalization::Raw,
            trials: 12,
            master_seed: u64::MAX,
            min_distance_m: 0.5,
            output_path: Some(PathBuf::from("out/table.csv")),
        };
        assert_eq!(ScenarioConfig::parse(&cfg.to_text()).unwrap(), cfg);
        let d = ScenarioConfig::default();
        assert_eq!(ScenarioConfig::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = ScenarioConfig::parse(
            "# scenario\n\nantenna_count = 150  # fewer antennas\n  power_db=20\n",
        )
        .unwrap();
        assert_eq!(cfg.antenna_count, 150);
        assert_eq!(cfg.power_db, 20.0);
        assert_eq!(cfg.ring_radius_m, 500.0);
    }

    #[test]
    fn field_level_errors() {
        let e = ScenarioConfig::parse("antenna_count = many").unwrap_err();
        assert!(e.to_string().contains("antenna_count"));
        let e = ScenarioConfig::parse("bogus = 1").unwrap_err();
        assert!(matches!(e, ConfigError::UnknownKey { line: 1, .. }));
        let e = ScenarioConfig::parse("no equals sign").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 1, .. }));
        let cfg = ScenarioConfig::parse("ring_radius_m = 2000").unwrap();
        let e = cfg.params().unwrap_err();
        assert!(e.to_string().contains("ring_radius_m"), "{e}");
        let cfg = ScenarioConfig::parse("exponent_v = 7").unwrap();
        assert!(cfg.params().unwrap_err().to_string().contains("exponent_v"));
    }
}
