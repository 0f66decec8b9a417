use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}, column {col}: {msg}")]
    Name {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}, column {col}: {msg}")]
    Shape {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<CliError>,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] copycat_core::Error),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
}

impl CliError {
    /// 0 success, 1 failed checks, 2 usage or model errors, 3 numeric
    /// degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(..) => 1,
            CliError::Degenerate(_) => 3,
            CliError::InFile { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub fn in_file(self, path: &str) -> CliError {
        CliError::InFile {
            path: path.to_string(),
            source: Box::new(self),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
