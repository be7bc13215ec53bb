use thiserror::Error;

use crate::algebra::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not symmetric: |g[{i}][{j}] - g[{j}][{i}]| = {residual:e}")]
    NotSymmetric { i: usize, j: usize, residual: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("Gram-Schmidt degeneracy at basis vector {index} (norm {norm:e})")]
    Degenerate { index: usize, norm: f64 },

    #[error("vectors span a degenerate plane (relative Gram determinant {relative_det:e})")]
    DegeneratePlane { relative_det: f64 },

    #[error("zero vector where a direction is required")]
    ZeroVector,

    #[error("algebra fails validation: {}", summarize(.0))]
    Invalid(Vec<Violation>),

    #[error("invalid family parameters: {0}")]
    InvalidSpec(String),

    #[error("Jacobi closure violated at triples {triples:?}")]
    ClosureViolation {
        triples: Vec<((usize, usize, usize), f64)>,
    },

    #[error("algebra belongs to neither supported family: {0}")]
    UnsupportedFamily(String),

    #[error("{0}")]
    Other(String),
}

fn summarize(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    if violations.len() > 5 {
        format!("{} (+{} more)", shown.join("; "), violations.len() - 5)
    } else {
        shown.join("; ")
    }
}
