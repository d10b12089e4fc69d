use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid partial coefficients: {0}")]
    InvalidPartial(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("graph has {edges} edges, over the exhaustive limit of {limit}; use Monte Carlo sampling instead")]
    ExhaustiveLimit { edges: usize, limit: usize },

    #[error("degenerate anchors: {0}")]
    DegenerateAnchors(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("oracle failed to measure k = {k}: {message}")]
    Oracle { k: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
