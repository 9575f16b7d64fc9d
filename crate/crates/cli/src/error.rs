use std::fmt;

use thiserror::Error;

/// A message attached to a dotted path inside the input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub path: String,
    pub message: String,
}

impl Located {
    pub fn new(path: &str, message: &str) -> Self {
        Located { path: path.to_string(), message: message.to_string() }
    }
}

impl fmt::Display for Located {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input:\n{}", list(.0))]
    Input(Vec<Located>),

    #[error("{0}")]
    Precondition(Located),

    #[error("corpus mismatch:\n{}", .0.join("\n"))]
    Mismatch(Vec<String>),
}

fn list(errors: &[Located]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Mismatch(_) => 1,
            CliError::Precondition(_) => 2,
        }
    }

    /// Classifies a core error raised while working on the block at `path`.
    pub fn from_core(path: &str, e: gcorners::Error) -> Self {
        use gcorners::Error as E;
        let loc = Located::new(path, &e.to_string());
        match e {
            E::Precondition(_) | E::Bound { .. } | E::OutOfRange { .. } => CliError::Precondition(loc),
            _ => CliError::Input(vec![loc]),
        }
    }
}
