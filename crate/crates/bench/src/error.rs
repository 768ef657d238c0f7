use std::io;
use std::path::{Path, PathBuf};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hdrbench_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {reason}")]
    InvalidInput { path: PathBuf, reason: String },

    #[error("unknown method `{name}`; available: {available}")]
    UnknownMethod { name: String, available: String },

    #[error("{image_id}: {source}")]
    Image {
        image_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io { path: path.as_ref().to_path_buf(), source }
    }

    pub fn format(path: impl AsRef<Path>, message: impl ToString) -> Self {
        Error::Format { path: path.as_ref().to_path_buf(), message: message.to_string() }
    }

    pub fn json(path: impl AsRef<Path>, source: serde_json::Error) -> Self {
        Error::Json { path: path.as_ref().to_path_buf(), source }
    }

    pub fn invalid(path: impl AsRef<Path>, reason: impl ToString) -> Self {
        Error::InvalidInput { path: path.as_ref().to_path_buf(), reason: reason.to_string() }
    }

    pub fn for_image(self, image_id: impl Into<String>) -> Self {
        Error::Image { image_id: image_id.into(), source: Box::new(self) }
    }

    /// Process exit code: 3 for I/O failures (including unreadable image
    /// files), 2 for validation errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Format { .. } => 3,
            Error::Image { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
