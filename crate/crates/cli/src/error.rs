use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("unsupported format `{0}` (expected json, dot or graphml)")]
    UnsupportedFormat(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid graph JSON at byte {offset}: {message}")]
    GraphParse { path: PathBuf, offset: usize, message: String },
    #[error(transparent)]
    Data(#[from] gmapper::data::DataError),
    #[error(transparent)]
    Pipeline(#[from] gmapper::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage and configuration mistakes, 2 for unreadable or invalid
    /// input data, 3 for failures while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::UnsupportedFormat(_) => 1,
            CliError::Read { .. } | CliError::GraphParse { .. } | CliError::Data(_) => 2,
            CliError::Pipeline(_) | CliError::Write { .. } => 3,
        }
    }
}

macro_rules! pipeline_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Pipeline(e.into())
            }
        }
    )*};
}

pipeline_error!(
    gmapper::cover::CoverError,
    gmapper::mapper::MapperError,
    gmapper::clustering::ClusteringError
);
