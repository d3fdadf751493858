//! Zero-forcing detection and Monte Carlo estimation of ergodic rates.
//!
//! Each trial draws from its own ChaCha8 stream keyed by
//! `(master_seed, trial index)`, and per-trial results are reduced in
//! trial order, so estimates are bit-identical for any worker count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{check_min_distance, complex_gaussian, draw_channel, ChannelRealization};
use crate::error::{Error, Result};
use crate::geometry::{sample_user, UserLocation};
use crate::params::SystemParams;

/// Gram matrices with a condition estimate above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Consecutive singular draws tolerated within one trial.
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 10;

pub const DEFAULT_TRIALS: usize = 2000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            master_seed: 1,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean_rate_bits: f64,
    /// Half-width of the normal 95% confidence interval; zero for a single trial.
    pub half_width_95: f64,
    pub trials_used: usize,
    /// Channel draws discarded as numerically singular.
    pub rejected_draws: usize,
}

impl RateEstimate {
    pub fn from_samples(samples: &[f64], rejected_draws: usize) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let half_width_95 = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            Z95 * (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean_rate_bits: mean,
            half_width_95,
            trials_used: n,
            rejected_draws,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent random stream for `index` within `domain`.
///
/// The key is derived from `(master_seed, domain)`; `index` selects the
/// ChaCha stream, so streams never overlap.
pub fn substream(master_seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(domain)));
    rng.set_stream(index);
    rng
}

pub(crate) const DOMAIN_USER_TRIALS: u64 = 1;
pub(crate) const DOMAIN_CELL_TRIALS: u64 = 2;
const DOMAIN_PLACEMENT: u64 = 3;
const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

/// Diagonal of `(G^H G)^(-1)` via Cholesky. Returns `None` when the Gram
/// matrix is not numerically positive definite or its condition estimate
/// exceeds [`MAX_CONDITION`].
pub fn inverse_gram_diagonal(channel: &ChannelRealization) -> Option<Vec<f64>> {
    let k = channel.users();
    let m = channel.antennas();
    // Lower triangle of the Gram matrix, row-major k x k.
    let mut a = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        let gi = channel.column(i);
        for j in 0..=i {
            let gj = channel.column(j);
            let mut s = Complex64::new(0.0, 0.0);
            for t in 0..m {
                s += gi[t] * gj[t].conj();
            }
            // A[i][j] = g_i^H g_j = conj(sum g_i g_j^*)
            a[i * k + j] = s.conj();
        }
    }
    // In-place Cholesky, A = L L^H.
    let mut l = vec![Complex64::new(0.0, 0.0); k * k];
    for j in 0..k {
        let mut d = a[j * k + j].re;
        for p in 0..j {
            d -= l[j * k + p].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[j * k + j] = Complex64::new(djj, 0.0);
        for i in (j + 1)..k {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p].conj();
            }
            l[i * k + j] = s / djj;
        }
    }
    let (lo, hi) = (0..k)
        .map(|j| l[j * k + j].re)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    if (hi / lo).powi(2) > MAX_CONDITION {
        return None;
    }
    // W = L^{-1} by forward substitution; (A^{-1})_cc = sum_{i >= c} |W_ic|^2.
    let mut w = vec![Complex64::new(0.0, 0.0); k * k];
    for c in 0..k {
        w[c * k + c] = Complex64::new(1.0, 0.0) / l[c * k + c];
        for i in (c + 1)..k {
            let mut s = Complex64::new(0.0, 0.0);
            for p in c..i {
                s += l[i * k + p] * w[p * k + c];
            }
            w[i * k + c] = -s / l[i * k + i];
        }
    }
    Some(
        (0..k)
            .map(|c| (c..k).map(|i| w[i * k + c].norm_sqr()).sum())
            .collect(),
    )
}

/// ZF rates of all users: `log2(1 + P / [(G^H G)^(-1)]_kk)`.
pub fn zf_rates(channel: &ChannelRealization, power: f64) -> Result<Vec<f64>> {
    let diag = inverse_gram_diagonal(channel).ok_or(Error::SingularGram {
        trial: 0,
        consecutive: 1,
    })?;
    Ok(diag.iter().map(|d| (1.0 + power / d).log2()).collect())
}

/// ZF rate of user `k` on one channel realization.
pub fn zf_instantaneous_rate(channel: &ChannelRealization, power: f64, k: usize) -> Result<f64> {
    if k >= channel.users() {
        return Err(crate::error::invalid("k", "user index out of range"));
    }
    Ok(zf_rates(channel, power)?[k])
}

/// Runs `trial` for every index under `cfg`, returning per-trial values in
/// index order plus the summed rejection count.
pub(crate) fn run_trials<F>(cfg: &McConfig, trial: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(usize) -> Result<(f64, usize)> + Sync,
{
    if cfg.trials == 0 {
        return Err(crate::error::invalid("trials", "must be at least 1"));
    }
    let run =
        || -> Result<Vec<(f64, usize)>> { (0..cfg.trials).into_par_iter().map(&trial).collect() };
    let out = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| crate::error::invalid("workers", e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let rejected = out.iter().map(|(_, r)| r).sum();
    Ok((out.into_iter().map(|(v, _)| v).collect(), rejected))
}

/// Draws a channel and its ZF rates, redrawing the fading on singular Gram
/// matrices up to [`MAX_CONSECUTIVE_REJECTIONS`] times.
pub(crate) fn draw_zf_rates<R: Rng>(
    params: &SystemParams,
    layout: &crate::geometry::RingLayout,
    users: &[UserLocation],
    rng: &mut R,
    trial: usize,
) -> Result<(Vec<f64>, usize)> {
    let power = params.effective_power();
    for attempt in 0..MAX_CONSECUTIVE_REJECTIONS {
        let ch = draw_channel(layout, users, params.exponent, params.min_distance_m, rng)?;
        if let Some(diag) = inverse_gram_diagonal(&ch) {
            let rates = diag.iter().map(|d| (1.0 + power / d).log2()).collect();
            return Ok((rates, attempt));
        }
    }
    Err(Error::SingularGram {
        trial,
        consecutive: MAX_CONSECUTIVE_REJECTIONS,
    })
}

/// Ergodic ZF rate of user `k` among `users`, averaged over fading.
pub fn ergodic_rate(
    params: &SystemParams,
    users: &[UserLocation],
    cfg: &McConfig,
    k: usize,
) -> Result<RateEstimate> {
    if params.antennas < users.len() {
        return Err(Error::TooFewAntennas {
            antennas: params.antennas,
            users: users.len(),
        });
    }
    if k >= users.len() {
        return Err(crate::error::invalid("k", "user index out of range"));
    }
    let layout = params.layout();
    check_min_distance(&layout, users, params.min_distance_m)?;
    let (samples, rejected) = run_trials(cfg, |t| {
        let mut rng = substream(cfg.master_seed, DOMAIN_USER_TRIALS, t as u64);
        let (rates, rej) = draw_zf_rates(params, &layout, users, &mut rng, t)?;
        Ok((rates[k], rej))
    })?;
    Ok(RateEstimate::from_samples(&samples, rejected))
}

/// User set with `tagged` at index 0 and `params.users - 1` further users
/// placed uniformly in the cell from a placement stream keyed by
/// `master_seed`. Placements violating the antenna exclusion radius are
/// redrawn.
pub fn population_around(
    params: &SystemParams,
    tagged: UserLocation,
    master_seed: u64,
) -> Result<Vec<UserLocation>> {
    let layout = params.layout();
    check_min_distance(
        &layout,
        std::slice::from_ref(&tagged),
        params.min_distance_m,
    )?;
    let mut rng = substream(master_seed, DOMAIN_PLACEMENT, 0);
    let mut users = Vec::with_capacity(params.users.max(1));
    users.push(tagged);
    while users.len() < params.users {
        let mut attempts = 0;
        let u = loop {
            let u = sample_user(&params.geometry, &mut rng);
            if check_min_distance(&layout, std::slice::from_ref(&u), params.min_distance_m).is_ok()
            {
                break u;
            }
            attempts += 1;
            if attempts >= MAX_PLACEMENT_ATTEMPTS {
                return Err(crate::error::invalid(
                    "min_distance_m",
                    "could not place users outside the antenna exclusion zones",
                ));
            }
        };
        users.push(u);
    }
    Ok(users)
}

// ---------------------------------------------------------------------------
// Law-of-large-numbers probe for long i.n.i.d. vectors
// ---------------------------------------------------------------------------

/// Entry distribution for the probe vectors, scaled to the requested variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeDistribution {
    /// CN(0, sigma^2); `E|x|^4 = 2 sigma^4`.
    Gaussian,
    /// `sigma * e^{j theta}` with uniform phase; `E|x|^4 = sigma^4`.
    UnitModulus,
    /// Identically zero.
    Zero,
}

impl ProbeDistribution {
    fn sample<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> Complex64 {
        match self {
            ProbeDistribution::Gaussian => complex_gaussian(rng) * sigma,
            ProbeDistribution::UnitModulus => {
                let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(sigma, theta)
            }
            ProbeDistribution::Zero => Complex64::new(0.0, 0.0),
        }
    }

    /// `E|x|^4 / sigma^4`.
    pub fn kurtosis(&self) -> f64 {
        match self {
            ProbeDistribution::Gaussian => 2.0,
            ProbeDistribution::UnitModulus => 1.0,
            ProbeDistribution::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlnProbeConfig {
    pub trials: usize,
    /// Threshold for the exceedance fractions and Chebyshev envelopes.
    pub epsilon: f64,
    pub p: ProbeDistribution,
    pub q: ProbeDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlnProbeReport {
    pub length: usize,
    pub trials: usize,
    /// Mean of `| |p|^2 / M - mean(sigma^2) |`.
    pub mean_deviation: f64,
    pub mean_square_deviation: f64,
    /// Fraction of trials with deviation at least `epsilon`.
    pub deviation_exceed_fraction: f64,
    /// Chebyshev bound `C / (M eps^2)` with `C = max_i E|p_i|^4`.
    pub deviation_envelope: f64,
    /// Mean of `|p^H q| / M`.
    pub mean_cross: f64,
    pub mean_square_cross: f64,
    pub cross_exceed_fraction: f64,
    /// Chebyshev bound `C / (M eps^2)` with `C = max_i E|p_i|^2 E|q_i|^2`.
    pub cross_envelope: f64,
}

/// Empirical check that `|p|^2 / M` concentrates on the mean variance and
/// `p^H q / M` on zero for independent long vectors with entry variances
/// `variance_profile`.
pub fn lln_probe<R: Rng + ?Sized>(
    variance_profile: &[f64],
    cfg: &LlnProbeConfig,
    rng: &mut R,
) -> Result<LlnProbeReport> {
    let m = variance_profile.len();
    if m == 0 {
        return Err(crate::error::invalid(
            "variance_profile",
            "must be non-empty",
        ));
    }
    if cfg.trials == 0 {
        return Err(crate::error::invalid("trials", "must be at least 1"));
    }
    if variance_profile
        .iter()
        .any(|s| !(*s >= 0.0) || !s.is_finite())
    {
        return Err(crate::error::invalid(
            "variance_profile",
            "entries must be finite and non-negative",
        ));
    }
    let mf = m as f64;
    let target = variance_profile.iter().sum::<f64>() / mf;
    let sigmas: Vec<f64> = variance_profile.iter().map(|s| s.sqrt()).collect();
    let (mut dev_sum, mut dev_sq, mut dev_exceed) = (0.0, 0.0, 0usize);
    let (mut cr_sum, mut cr_sq, mut cr_exceed) = (0.0, 0.0, 0usize);
    let mut p = vec![Complex64::new(0.0, 0.0); m];
    for _ in 0..cfg.trials {
        for (x, &s) in p.iter_mut().zip(&sigmas) {
            *x = cfg.p.sample(s, rng);
        }
        let mut norm = 0.0;
        let mut cross = Complex64::new(0.0, 0.0);
        for (x, &s) in p.iter().zip(&sigmas) {
            norm += x.norm_sqr();
            cross += x.conj() * cfg.q.sample(s, rng);
        }
        let dev = (norm / mf - target).abs();
        let cr = cross.norm() / mf;
        dev_sum += dev;
        dev_sq += dev * dev;
        cr_sum += cr;
        cr_sq += cr * cr;
        if dev >= cfg.epsilon {
            dev_exceed += 1;
        }
        if cr >= cfg.epsilon {
            cr_exceed += 1;
        }
    }
    let max_var = variance_profile.iter().copied().fold(0.0, f64::max);
    let t = cfg.trials as f64;
    let eps2 = cfg.epsilon * cfg.epsilon;
    Ok(LlnProbeReport {
        length: m,
        trials: cfg.trials,
        mean_deviation: dev_sum / t,
        mean_square_deviation: dev_sq / t,
        deviation_exceed_fraction: dev_exceed as f64 / t,
        deviation_envelope: cfg.p.kurtosis() * max_var * max_var / (mf * eps2),
        mean_cross: cr_sum / t,
        mean_square_cross: cr_sq / t,
        cross_exceed_fraction: cr_exceed as f64 / t,
        cross_envelope: max_var * max_var / (mf * eps2),
    })
}
