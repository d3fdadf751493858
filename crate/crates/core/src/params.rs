use crate::channel::{check_exponent, DEFAULT_MIN_DISTANCE_M};
use crate::error::{invalid, Result};
use crate::geometry::{build_ring, CellGeometry, RingLayout};

/// How the configured per-user power is scaled before use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PowerNormalization {
    /// Use the configured power as is.
    Raw,
    /// Multiply by `(R/2)^v`, so that a user 500 m from an antenna in a
    /// 1000 m cell is received at SNR `P`.
    #[default]
    Midpoint,
}

impl PowerNormalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            PowerNormalization::Raw => "raw",
            PowerNormalization::Midpoint => "midpoint",
        }
    }
}

impl std::str::FromStr for PowerNormalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw" => Ok(Self::Raw),
            "midpoint" => Ok(Self::Midpoint),
            other => Err(format!(
                "unknown power normalization `{other}` (expected raw|midpoint)"
            )),
        }
    }
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Everything that fixes one scenario: cell, ring, antenna and user counts,
/// path-loss exponent and transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub geometry: CellGeometry,
    pub antennas: usize,
    pub users: usize,
    pub exponent: f64,
    /// Linear per-user transmit power before normalization.
    pub power: f64,
    pub normalization: PowerNormalization,
    pub min_distance_m: f64,
}

impl SystemParams {
    pub fn new(
        geometry: CellGeometry,
        antennas: usize,
        users: usize,
        exponent: f64,
        power: f64,
        normalization: PowerNormalization,
    ) -> Result<Self> {
        let p = Self {
            geometry,
            antennas,
            users,
            exponent,
            power,
            normalization,
            min_distance_m: DEFAULT_MIN_DISTANCE_M,
        };
        p.validate()?;
        Ok(p)
    }

    /// R = 1000 m, r = 500 m, M = 300, K = 9, v = 3.6, P = 10 dB with
    /// midpoint normalization.
    pub fn reference() -> Self {
        Self {
            geometry: CellGeometry::new(1000.0, 500.0).expect("valid geometry"),
            antennas: 300,
            users: 9,
            exponent: 3.6,
            power: db_to_linear(10.0),
            normalization: PowerNormalization::Midpoint,
            min_distance_m: DEFAULT_MIN_DISTANCE_M,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.antennas == 0 {
            return Err(invalid("antenna_count", "must be at least 1"));
        }
        if self.users == 0 {
            return Err(invalid("user_count", "must be at least 1"));
        }
        check_exponent(self.exponent)?;
        if !(self.power.is_finite() && self.power > 0.0) {
            return Err(invalid(
                "power",
                format!("must be positive, got {}", self.power),
            ));
        }
        if !(self.min_distance_m.is_finite() && self.min_distance_m >= 0.0) {
            return Err(invalid("min_distance_m", "must be non-negative"));
        }
        Ok(())
    }

    pub fn cell_radius(&self) -> f64 {
        self.geometry.cell_radius_m()
    }

    pub fn ring_radius(&self) -> f64 {
        self.geometry.ring_radius_m()
    }

    /// Per-user power after normalization.
    pub fn effective_power(&self) -> f64 {
        match self.normalization {
            PowerNormalization::Raw => self.power,
            PowerNormalization::Midpoint => {
                self.power * (0.5 * self.cell_radius()).powf(self.exponent)
            }
        }
    }

    pub fn layout(&self) -> RingLayout {
        build_ring(&self.geometry, self.antennas).expect("antenna count validated")
    }

    pub fn with_ring_radius(mut self, r: f64) -> Result<Self> {
        self.geometry = CellGeometry::new(self.cell_radius(), r)?;
        Ok(self)
    }

    pub fn with_antennas(mut self, m: usize) -> Result<Self> {
        self.antennas = m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_exponent(mut self, v: f64) -> Result<Self> {
        self.exponent = v;
        self.validate()?;
        Ok(self)
    }

    pub fn with_power_db(mut self, db: f64) -> Result<Self> {
        self.power = db_to_linear(db);
        self.validate()?;
        Ok(self)
    }
}
