use std::path::PathBuf;

/// Errors raised by file handling and the command layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image {path}: {detail}")]
    Format { path: PathBuf, detail: String },

    #[error("model file {path} has version {found:?}; supported versions: {supported}")]
    Version {
        path: PathBuf,
        found: String,
        supported: String,
    },

    #[error("corrupt model file {path}: {detail}")]
    Corrupt { path: PathBuf, detail: String },

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Degenerate(String),

    #[error(transparent)]
    Core(#[from] qaq_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit codes of the command-line tool.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const DEGENERATE: i32 = 3;
    pub const INCOMPATIBLE: i32 = 4;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use qaq_core::Error as Core;
        match self {
            Error::Io { .. } | Error::Format { .. } | Error::Corrupt { .. } | Error::Input(_) => exit::INPUT,
            Error::Degenerate(_) => exit::DEGENERATE,
            Error::Version { .. } => exit::INCOMPATIBLE,
            Error::Core(e) => match e {
                Core::Dimension(_) | Core::Domain(_) => exit::INPUT,
                Core::DegenerateInput(_) | Core::Selection { .. } | Core::InsufficientData { .. } => {
                    exit::DEGENERATE
                }
                Core::IncompatibleModel { .. } => exit::INCOMPATIBLE,
            },
        }
    }
}
