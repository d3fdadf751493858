use thiserror::Error;

/// Errors raised by the rate, geometry and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("antenna {antenna} is {distance} m from user {user}; path loss undefined for non-positive distance")]
    NonPositiveDistance {
        antenna: usize,
        user: usize,
        distance: f64,
    },

    #[error("user {user} is {distance:.3} m from antenna {antenna}, below the minimum distance {min_distance} m")]
    TooClose {
        user: usize,
        antenna: usize,
        distance: f64,
        min_distance: f64,
    },

    #[error("singular point: user radius {user_radius} m coincides with the ring radius, where the asymptotic rate diverges")]
    Singular { user_radius: f64 },

    #[error("argument {value} outside the domain of {function}: {reason}")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Gram matrix numerically singular in {consecutive} consecutive draws (trial {trial})")]
    SingularGram { trial: usize, consecutive: usize },

    #[error("need at least as many antennas as users (M = {antennas}, K = {users})")]
    TooFewAntennas { antennas: usize, users: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
