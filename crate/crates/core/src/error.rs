use std::path::PathBuf;

use thiserror::Error;

use crate::fuel::FuelError;
use crate::geometry::GeometryError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fuel(#[from] FuelError),
    #[error("ground speed {ground_speed_kts:.3} kts on the {segment} segment is not positive")]
    NonpositiveGroundSpeed {
        segment: &'static str,
        ground_speed_kts: f64,
    },
    #[error("speed grid is empty: {0}")]
    EmptyGrid(String),
    #[error("config error (line {line}): {message}")]
    Config { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
