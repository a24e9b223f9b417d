use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A point at (or numerically on) the sensor origin has no bearing.
    #[error("zero-range point has no defined bearing or elevation")]
    ZeroRange,

    /// The point lies on the vertical axis of the sonar (elevation of ±π/2).
    #[error("point directly above or below the sonar cannot be projected")]
    DegenerateProjection,

    #[error("invalid sonar parameters: {0}")]
    InvalidSonar(String),

    #[error("sensor coincides with the centre of asset {0}")]
    CoincidentWithAsset(usize),

    #[error("map error: {0}")]
    Map(String),

    #[error("unknown asset id {0}")]
    UnknownAsset(usize),

    #[error("all particle weights vanished")]
    DegenerateWeights,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("mission error: {0}")]
    Mission(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
