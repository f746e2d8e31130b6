use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] lerw_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown preset `{0}`; expected one of {1}")]
    UnknownPreset(String, String),
    #[error("config file describes preset `{found}`, not `{expected}`")]
    PresetMismatch { expected: String, found: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsatisfiable budget: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> LabError {
    let path = path.into();
    move |source| LabError::Io { path, source }
}
