//! Cell geometry: the circular cell, the evenly spaced antenna ring and
//! user positions.
//!
//! Angles are stored absolutely. Only the difference between an antenna
//! angle and a user angle enters the distance, so one layout serves every
//! user in the cell.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{invalid, Result};

/// A circular cell of radius `cell_radius_m` with the antenna ring of radius
/// `ring_radius_m` centred on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    cell_radius_m: f64,
    ring_radius_m: f64,
}

impl CellGeometry {
    pub fn new(cell_radius_m: f64, ring_radius_m: f64) -> Result<Self> {
        if !(cell_radius_m.is_finite() && cell_radius_m > 0.0) {
            return Err(invalid(
                "cell_radius_m",
                format!("must be positive, got {cell_radius_m}"),
            ));
        }
        if !(ring_radius_m.is_finite() && (0.0..=cell_radius_m).contains(&ring_radius_m)) {
            return Err(invalid(
                "ring_radius_m",
                format!("must lie in [0, {cell_radius_m}], got {ring_radius_m}"),
            ));
        }
        Ok(Self {
            cell_radius_m,
            ring_radius_m,
        })
    }

    pub fn cell_radius_m(&self) -> f64 {
        self.cell_radius_m
    }

    pub fn ring_radius_m(&self) -> f64 {
        self.ring_radius_m
    }

    /// Places a user at polar coordinates inside this cell.
    pub fn user(&self, radius_m: f64, angle_rad: f64) -> Result<UserLocation> {
        if !(radius_m.is_finite() && (0.0..=self.cell_radius_m).contains(&radius_m)) {
            return Err(invalid(
                "user_radius_m",
                format!("must lie in [0, {}], got {radius_m}", self.cell_radius_m),
            ));
        }
        if !angle_rad.is_finite() {
            return Err(invalid("user_angle_rad", "must be finite"));
        }
        Ok(UserLocation {
            radius_m,
            angle_rad: angle_rad.rem_euclid(TAU),
        })
    }
}

/// `antenna_count` antennas evenly spaced on the ring, antenna 0 at angle 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RingLayout {
    ring_radius_m: f64,
    angles_rad: Vec<f64>,
    positions: Vec<(f64, f64)>,
}

impl RingLayout {
    pub fn antenna_count(&self) -> usize {
        self.angles_rad.len()
    }

    pub fn ring_radius_m(&self) -> f64 {
        self.ring_radius_m
    }

    pub fn angles_rad(&self) -> &[f64] {
        &self.angles_rad
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    /// Angular spacing between neighbouring antennas.
    pub fn spacing_rad(&self) -> f64 {
        TAU / self.antenna_count() as f64
    }
}

/// A user at distance `radius_m` from the cell centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLocation {
    radius_m: f64,
    angle_rad: f64,
}

impl UserLocation {
    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn angle_rad(&self) -> f64 {
        self.angle_rad
    }

    pub fn cartesian(&self) -> (f64, f64) {
        let (s, c) = self.angle_rad.sin_cos();
        (self.radius_m * c, self.radius_m * s)
    }
}

pub fn build_ring(geom: &CellGeometry, antenna_count: usize) -> Result<RingLayout> {
    if antenna_count == 0 {
        return Err(invalid("antenna_count", "must be at least 1"));
    }
    let r = geom.ring_radius_m;
    let step = TAU / antenna_count as f64;
    let angles_rad: Vec<f64> = (0..antenna_count).map(|m| m as f64 * step).collect();
    let positions = angles_rad
        .iter()
        .map(|a| {
            let (s, c) = a.sin_cos();
            (r * c, r * s)
        })
        .collect();
    Ok(RingLayout {
        ring_radius_m: r,
        angles_rad,
        positions,
    })
}

/// Euclidean distance between antenna `m` (0-based) and `user`.
///
/// Panics if `m` is out of range.
pub fn antenna_user_distance(layout: &RingLayout, user: &UserLocation, m: usize) -> f64 {
    let (ax, ay) = layout.positions[m];
    let (ux, uy) = user.cartesian();
    (ax - ux).hypot(ay - uy)
}

/// Distances from `user` to every antenna, in antenna order.
pub fn distances(layout: &RingLayout, user: &UserLocation) -> Vec<f64> {
    let (ux, uy) = user.cartesian();
    layout
        .positions
        .iter()
        .map(|&(ax, ay)| (ax - ux).hypot(ay - uy))
        .collect()
}

/// Maps a pair of uniform variates to a user uniformly distributed over the
/// disc: radius `R * sqrt(u_radius)`, angle `2 * pi * u_angle`.
pub fn user_from_uniforms(geom: &CellGeometry, u_radius: f64, u_angle: f64) -> UserLocation {
    let u = u_radius.clamp(0.0, 1.0);
    UserLocation {
        radius_m: geom.cell_radius_m * u.sqrt(),
        angle_rad: (TAU * u_angle).rem_euclid(TAU),
    }
}

/// Draws a user uniformly over the cell area (radial density `2x / R^2`).
pub fn sample_user<R: Rng + ?Sized>(geom: &CellGeometry, rng: &mut R) -> UserLocation {
    let u_radius: f64 = rng.random();
    let u_angle: f64 = rng.random();
    user_from_uniforms(geom, u_radius, u_angle)
}
