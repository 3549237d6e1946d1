use thiserror::Error;

use crate::problem::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem instance: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("invalid matrix: {0}")]
    BadMatrix(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("constraint index {index} out of range (instance has {count} constraints)")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid bisection bracket [{lo}, {hi}]: {reason}")]
    InvalidBracket { lo: f64, hi: f64, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("document error: {0}")]
    Document(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
