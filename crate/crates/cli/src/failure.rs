use std::fmt;

use cellfree_sim::SimError;
use maxmin_core::Error;

/// Exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Code {
    Usage = 1,
    Validation = 2,
    Numerical = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub code: Code,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: Code::Usage, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: Code::Validation, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Failure { code: Code::Numerical, message: message.into() }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) | Error::BadMatrix(_) => Failure::numerical(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Core(inner) => inner.into(),
            SimError::Singular { .. } | SimError::ZeroCombiner { .. } | SimError::Unserved { .. } => {
                Failure::numerical(e.to_string())
            }
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::validation(e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;
