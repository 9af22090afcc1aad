use std::path::PathBuf;

/// Broad error class used to pick the process exit code.
///
/// `Validation` covers everything detected while reading or validating
/// input files (manifest, schema, term lists, scorecards, config).
/// `Computation` covers errors raised while computing or emitting results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Computation,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: invalid UTF-8 byte sequence at offset {offset}")]
    InvalidUtf8 { path: PathBuf, offset: usize },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("empty corpus: manifest lists no documents")]
    EmptyCorpus,

    #[error("corpus validation failed:\n{}", format_entry_errors(.errors))]
    CorpusInvalid { errors: Vec<(String, String)> },

    #[error("schema: duplicate id {id:?}")]
    SchemaDuplicateId { id: String },

    #[error("schema: main variable {id:?} has no scoreable items")]
    SchemaEmptyMain { id: String },

    #[error("schema: invalid pattern on {id:?}: {message}")]
    SchemaInvalidPattern { id: String, message: String },

    #[error("schema: {message}")]
    SchemaInvalid { message: String },

    #[error("unknown sub-variable id {id:?}")]
    UnknownSubVariable { id: String },

    #[error("unknown main variable id {id:?}")]
    UnknownMainVariable { id: String },

    #[error("scorecard for {doc_id:?} is incomplete; missing: {}", missing.join(", "))]
    IncompleteScorecard { doc_id: String, missing: Vec<String> },

    #[error("scorecard value for {doc_id:?}/{subvar_id:?} must be 0 or 1, got {value:?}")]
    InvalidScoreValue {
        doc_id: String,
        subvar_id: String,
        value: String,
    },

    #[error("{what} must not be empty")]
    EmptyInput { what: &'static str },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("duplicate term {term:?} in co-word term list")]
    DuplicateTerm { term: String },

    #[error("cluster count {k} is outside 1..={n}")]
    ClusterCountOutOfRange { k: usize, n: usize },

    #[error("chart data invalid: {message}")]
    ChartData { message: String },

    #[error("duplicate release date {date} in trend series")]
    DuplicateDate { date: String },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Class used by the CLI to choose between the validation and
    /// computation exit codes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. }
            | Error::InvalidUtf8 { .. }
            | Error::Parse { .. }
            | Error::EmptyCorpus
            | Error::CorpusInvalid { .. }
            | Error::SchemaDuplicateId { .. }
            | Error::SchemaEmptyMain { .. }
            | Error::SchemaInvalidPattern { .. }
            | Error::SchemaInvalid { .. }
            | Error::UnknownSubVariable { .. }
            | Error::InvalidScoreValue { .. }
            | Error::Csv { .. } => ErrorClass::Validation,
            Error::UnknownMainVariable { .. }
            | Error::IncompleteScorecard { .. }
            | Error::EmptyInput { .. }
            | Error::InvalidParameter { .. }
            | Error::OutOfRange { .. }
            | Error::DuplicateTerm { .. }
            | Error::ClusterCountOutOfRange { .. }
            | Error::ChartData { .. }
            | Error::DuplicateDate { .. } => ErrorClass::Computation,
        }
    }
}

fn format_entry_errors(errors: &[(String, String)]) -> String {
    errors
        .iter()
        .map(|(id, msg)| format!("  entry {id}: {msg}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
