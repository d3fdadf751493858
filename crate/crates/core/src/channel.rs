//! Path loss and Rayleigh fading; assembly of the M x K uplink channel.
//!
//! Matrices are stored column-major: column `k` holds the M coefficients
//! from user `k` to every antenna.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::geometry::{distances, RingLayout, UserLocation};

/// Default exclusion radius around every antenna, in meters.
pub const DEFAULT_MIN_DISTANCE_M: f64 = 1.0;

pub const MIN_EXPONENT: f64 = 2.0;
pub const MAX_EXPONENT: f64 = 6.0;

pub fn check_exponent(v: f64) -> Result<()> {
    if (MIN_EXPONENT..=MAX_EXPONENT).contains(&v) {
        Ok(())
    } else {
        Err(invalid(
            "exponent_v",
            format!("must lie in [2, 6], got {v}"),
        ))
    }
}

/// Large-scale gain `d^(-v)`.
pub fn path_loss(d: f64, v: f64) -> Result<f64> {
    check_exponent(v)?;
    if !(d > 0.0) {
        return Err(Error::Domain {
            function: "path_loss",
            value: d,
            reason: "distance must be positive",
        });
    }
    Ok(d.powf(-v))
}

/// Path-loss coefficients `beta[m, k] = d[m, k]^(-v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLossMatrix {
    antennas: usize,
    users: usize,
    exponent: f64,
    values: Vec<f64>,
}

impl PathLossMatrix {
    pub fn from_geometry(layout: &RingLayout, users: &[UserLocation], v: f64) -> Result<Self> {
        check_exponent(v)?;
        let antennas = layout.antenna_count();
        let mut values = Vec::with_capacity(antennas * users.len());
        for (k, user) in users.iter().enumerate() {
            for (m, d) in distances(layout, user).into_iter().enumerate() {
                let beta = path_loss(d, v).map_err(|_| Error::NonPositiveDistance {
                    antenna: m,
                    user: k,
                    distance: d,
                })?;
                values.push(beta);
            }
        }
        Ok(Self {
            antennas,
            users: users.len(),
            exponent: v,
            values,
        })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn get(&self, m: usize, k: usize) -> f64 {
        self.values[k * self.antennas + m]
    }

    /// Path-loss column of user `k`.
    pub fn column(&self, k: usize) -> &[f64] {
        &self.values[k * self.antennas..(k + 1) * self.antennas]
    }
}

/// One realization of `G = H ∘ sqrt(beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    matrix: Vec<Complex64>,
    fading: Vec<Complex64>,
    path_loss: PathLossMatrix,
}

impl ChannelRealization {
    /// Builds `G` from explicit fading coefficients (column-major, M x K).
    pub fn from_parts(path_loss: PathLossMatrix, fading: Vec<Complex64>) -> Result<Self> {
        if fading.len() != path_loss.values.len() {
            return Err(invalid(
                "fading",
                format!(
                    "expected {} coefficients, got {}",
                    path_loss.values.len(),
                    fading.len()
                ),
            ));
        }
        let matrix = fading
            .iter()
            .zip(&path_loss.values)
            .map(|(h, b)| h * b.sqrt())
            .collect();
        Ok(Self {
            matrix,
            fading,
            path_loss,
        })
    }

    /// Wraps an arbitrary M x K matrix (column-major) with unit path loss.
    /// Used to evaluate the detector on hand-built channels.
    pub fn from_matrix(antennas: usize, users: usize, matrix: Vec<Complex64>) -> Result<Self> {
        if matrix.len() != antennas * users {
            return Err(invalid("matrix", "length must equal antennas * users"));
        }
        let path_loss = PathLossMatrix {
            antennas,
            users,
            exponent: MIN_EXPONENT,
            values: vec![1.0; antennas * users],
        };
        Ok(Self {
            fading: matrix.clone(),
            matrix,
            path_loss,
        })
    }

    pub fn antennas(&self) -> usize {
        self.path_loss.antennas
    }

    pub fn users(&self) -> usize {
        self.path_loss.users
    }

    pub fn get(&self, m: usize, k: usize) -> Complex64 {
        self.matrix[k * self.antennas() + m]
    }

    /// Channel vector `g_k`.
    pub fn column(&self, k: usize) -> &[Complex64] {
        let m = self.antennas();
        &self.matrix[k * m..(k + 1) * m]
    }

    pub fn fading(&self) -> &[Complex64] {
        &self.fading
    }

    pub fn path_loss(&self) -> &PathLossMatrix {
        &self.path_loss
    }
}

/// Rejects user placements closer than `min_distance_m` to any antenna.
pub fn check_min_distance(
    layout: &RingLayout,
    users: &[UserLocation],
    min_distance_m: f64,
) -> Result<()> {
    for (k, user) in users.iter().enumerate() {
        for (m, d) in distances(layout, user).into_iter().enumerate() {
            if d < min_distance_m {
                return Err(Error::TooClose {
                    user: k,
                    antenna: m,
                    distance: d,
                    min_distance: min_distance_m,
                });
            }
        }
    }
    Ok(())
}

/// One CN(0, 1) sample: real and imaginary parts each with variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Assembles a channel with fading taken from `fading`, called once per
/// coefficient in column-major order.
pub fn draw_channel_with<F>(
    layout: &RingLayout,
    users: &[UserLocation],
    v: f64,
    min_distance_m: f64,
    mut fading: F,
) -> Result<ChannelRealization>
where
    F: FnMut() -> Complex64,
{
    check_min_distance(layout, users, min_distance_m)?;
    let beta = PathLossMatrix::from_geometry(layout, users, v)?;
    let h = (0..beta.values.len()).map(|_| fading()).collect();
    ChannelRealization::from_parts(beta, h)
}

/// Rayleigh-faded channel drawn from `rng`.
pub fn draw_channel<R: Rng + ?Sized>(
    layout: &RingLayout,
    users: &[UserLocation],
    v: f64,
    min_distance_m: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    draw_channel_with(layout, users, v, min_distance_m, || complex_gaussian(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_ring, CellGeometry};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (RingLayout, Vec<UserLocation>) {
        let g = CellGeometry::new(1000.0, 500.0).unwrap();
        let ring = build_ring(&g, 4).unwrap();
        let users = vec![g.user(300.0, 0.3).unwrap(), g.user(800.0, 2.0).unwrap()];
        (ring, users)
    }

    #[test]
    fn path_loss_values() {
        assert_eq!(path_loss(1.0, 3.6).unwrap(), 1.0);
        assert_eq!(path_loss(2.0, 2.0).unwrap(), 0.25);
        // 500^-3.6 to 30 digits: 1.92179909437028997e-10
        assert_relative_eq!(
            path_loss(500.0, 3.6).unwrap(),
            1.921_799_094_370_29e-10,
            max_relative = 1e-13
        );
        assert!(path_loss(0.0, 3.6).is_err());
        assert!(path_loss(-1.0, 3.6).is_err());
        assert!(path_loss(10.0, 1.9).is_err());
        assert!(path_loss(10.0, 6.1).is_err());
    }

    #[test]
    fn path_loss_monotonicity() {
        for &d in &[0.3, 0.9] {
            assert!(path_loss(d, 3.0).unwrap() < path_loss(d, 3.5).unwrap());
        }
        for &d in &[1.5, 400.0] {
            assert!(path_loss(d, 3.0).unwrap() > path_loss(d, 3.5).unwrap());
            assert!(path_loss(d, 3.0).unwrap() > path_loss(d * 1.01, 3.0).unwrap());
        }
    }

    #[test]
    fn zero_distance_names_pair() {
        let g = CellGeometry::new(1000.0, 500.0).unwrap();
        let ring = build_ring(&g, 4).unwrap();
        let users = [g.user(300.0, 0.0).unwrap(), g.user(500.0, 0.0).unwrap()];
        match PathLossMatrix::from_geometry(&ring, &users, 3.0) {
            Err(Error::NonPositiveDistance {
                antenna: 0,
                user: 1,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match check_min_distance(&ring, &users, 1.0) {
            Err(Error::TooClose {
                user: 1,
                antenna: 0,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_fading_gives_sqrt_path_loss() {
        let (ring, users) = setup();
        let ch = draw_channel_with(&ring, &users, 3.6, 1.0, || Complex64::new(1.0, 0.0)).unwrap();
        for k in 0..2 {
            for m in 0..4 {
                assert_relative_eq!(ch.get(m, k).re, ch.path_loss().get(m, k).sqrt());
                assert_eq!(ch.get(m, k).im, 0.0);
            }
        }
    }

    #[test]
    fn same_seed_same_channel() {
        let (ring, users) = setup();
        let a = draw_channel(&ring, &users, 3.6, 1.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = draw_channel(&ring, &users, 3.6, 1.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn second_moments_match_path_loss() {
        let (ring, users) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let mut power = [0.0f64; 8];
        let mut cross = Complex64::new(0.0, 0.0);
        let mut cross_sq = 0.0;
        for _ in 0..n {
            let ch = draw_channel(&ring, &users, 2.0, 1.0, &mut rng).unwrap();
            for k in 0..2 {
                for m in 0..4 {
                    power[k * 4 + m] += ch.get(m, k).norm_sqr();
                }
            }
            let c = ch.get(0, 0) * ch.get(1, 1).conj();
            cross += c;
            cross_sq += c.norm_sqr();
        }
        let beta = PathLossMatrix::from_geometry(&ring, &users, 2.0).unwrap();
        for k in 0..2 {
            for m in 0..4 {
                let mean = power[k * 4 + m] / n as f64;
                assert!((mean / beta.get(m, k) - 1.0).abs() < 0.02, "m={m} k={k}");
            }
        }
        let mean = cross / n as f64;
        let se = (cross_sq / n as f64 / n as f64).sqrt();
        assert!(mean.norm() < 3.0 * se, "cross moment {mean} vs se {se}");
    }
}
