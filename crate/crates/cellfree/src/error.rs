use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("AP count {0} is not a perfect square")]
    NonSquareGrid(usize),
    #[error("singular system in {context} (relative residual {residual:e})")]
    Singular { context: String, residual: f64 },
    #[error("combiner of user {} has zero norm over all samples", .user + 1)]
    ZeroCombiner { user: usize },
    #[error("user {} receives no useful signal (d = 0) and cannot be served", .user + 1)]
    Unserved { user: usize },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] maxmin_core::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
