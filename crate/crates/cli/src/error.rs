use std::io;
use std::path::PathBuf;

/// A cell or record that could not be read as part of a table.
#[derive(Debug, thiserror::Error)]
#[error("{path}: line {line}, column {column}: {reason} ({value:?})")]
pub struct ParseError {
    pub path: String,
    pub line: u64,
    pub column: usize,
    pub value: String,
    pub reason: &'static str,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{context}: {source}")]
    Input { context: String, source: chi_audit_core::Error },
    #[error("numerical failure in {context}: {source}")]
    Numerical { context: String, source: chi_audit_core::Error },
    #[error("unknown dataset {0:?}; available: example1, example2, example3, cancer")]
    UnknownDataset(String),
    #[error("writing output: {0}")]
    Output(#[source] io::Error),
}

impl CliError {
    /// Attaches `context` to a core error, sorting it into input or
    /// numerical failures.
    pub fn core(context: impl Into<String>, source: chi_audit_core::Error) -> Self {
        let context = context.into();
        if source.is_numerical() {
            CliError::Numerical { context, source }
        } else {
            CliError::Input { context, source }
        }
    }

    /// 2 for bad input or usage, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical { .. } => 3,
            _ => 2,
        }
    }
}
