use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A cell could not be interpreted. `row` is 1-based and counts data rows after the header.
    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("response column `{0}` not found in header")]
    MissingResponseColumn(String),

    #[error("{0} usable rows after validation; at least 2 are required")]
    TooFewRows(usize),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid scale: {0}")]
    InvalidScale(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid population spec at `{path}`: {message}")]
    InvalidSpec { path: String, message: String },

    #[error("attribute sets differ: {0}")]
    AttributeMismatch(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            path: path.into(),
            message: message.into(),
        }
    }
}
