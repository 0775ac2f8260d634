use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] landau_core::Error),
    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}` is not used by `{command}`")]
    UnusedKey { key: String, command: &'static str },
    #[error("{key}: {msg}")]
    BadValue { key: String, msg: String },
    #[error("malformed meta line: {0}")]
    Meta(String),
    #[error("LANDAU_LAB_THREADS must be a positive integer, got `{0}`")]
    Threads(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn bad(key: &str, msg: impl Into<String>) -> CliError {
    CliError::BadValue { key: key.to_string(), msg: msg.into() }
}
