use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("distance {0} outside [0, 1]")]
    DistanceOutOfRange(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The linear part of the channel has no usable inverse.
    #[error("singular channel: smallest singular value {smallest_singular_value:.3e} <= {threshold:.1e}")]
    SingularChannel {
        smallest_singular_value: f64,
        threshold: f64,
    },

    #[error("time ordering violated: tau = {tau} > t = {t}")]
    TimeOrder { tau: f64, t: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("every interval of the grid is non-invertible; no divisibility verdict possible")]
    UndeterminedClassification,

    #[error("family is not unital on the grid: |c| reaches {max_translation:.3e} at t = {at}")]
    NonUnitalInput { max_translation: f64, at: f64 },

    #[error("witness scans and divisibility verdicts disagree: {0}")]
    InconsistentScan(String),

    #[error("channel table: {0}")]
    Table(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
