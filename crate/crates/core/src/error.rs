//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("presentation is invalid: {0}")]
    InvalidPresentation(String),

    #[error("series arithmetic error: {0}")]
    Series(String),

    #[error("no integral solution: {0}")]
    NoSolution(String),
}
