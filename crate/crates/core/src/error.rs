use core::fmt;

/// Errors raised by the solver.
#[derive(Clone, Debug, PartialEq)]
pub enum GameError {
    /// A NaN or infinite value reached a constructor.
    NonFinite(&'static str),
    /// A state vector whose squared norm is not 1.
    NotNormalized { norm_sqr: f64 },
    /// An amplitude outside `[0, 1]`.
    AmplitudeOutOfRange(f64),
    /// An operator expected to be self-adjoint is not (largest asymmetry reported).
    NotSelfAdjoint { deviation: f64 },
    /// A closed-form formula was applied outside its domain.
    Domain { quantity: &'static str, value: f64 },
    /// Grid or quadrature parameters are unusable.
    InvalidGrid(&'static str),
    /// The discretised game would be too expensive to enumerate.
    GridTooLarge { size: usize, limit: usize },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::NonFinite(what) => write!(f, "non-finite {what}"),
            GameError::NotNormalized { norm_sqr } => {
                write!(f, "state is not normalized (squared norm {norm_sqr})")
            }
            GameError::AmplitudeOutOfRange(a) => write!(f, "amplitude {a} outside [0, 1]"),
            GameError::NotSelfAdjoint { deviation } => {
                write!(f, "operator is not self-adjoint (max deviation {deviation:e})")
            }
            GameError::Domain { quantity, value } => {
                write!(f, "{quantity} = {value} is outside [0, 1]")
            }
            GameError::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            GameError::GridTooLarge { size, limit } => {
                write!(f, "grid of {size} strategies exceeds the limit of {limit}")
            }
        }
    }
}

impl core::error::Error for GameError {}
