use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported builtin layout '{0}'")]
    UnsupportedBuiltin(String),

    #[error("degenerate target: width must be positive, got {0}")]
    DegenerateTarget(f64),

    #[error("negative amplitude {0}")]
    NegativeAmplitude(f64),

    #[error("no binding for symbol {0:?} in layout '{1}'")]
    NoBinding(char, String),

    #[error("unknown key '{0}'")]
    UnknownKey(String),

    #[error("no supported content in text")]
    NoSupportedContent,

    #[error("sequence compiled for layout '{sequence}' cannot run on layout '{layout}'")]
    LayoutMismatch { sequence: String, layout: String },

    #[error("invalid motor parameters: {0}")]
    InvalidParams(String),

    #[error("invalid session log: {0}")]
    InvalidSession(String),

    #[error("session log has no events")]
    NoEvents,

    #[error("duration must be positive, got {0} ms")]
    InvalidDuration(f64),

    #[error("calibration needs at least one free parameter")]
    NoFreeFields,

    #[error("calibration needs at least one observation")]
    NoObservations,

    #[error("nothing to aggregate")]
    NothingToAggregate,

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
