//! Left-invariant Riemannian geometry of Lie algebras and their tangent
//! lifts, together with closed-form curvature tables for two families of
//! solvable Lie algebras and a harness that checks every table entry against
//! the generic computation.

pub mod algebra;
pub mod error;
pub mod families;
pub mod geometry;
pub mod harness;
pub mod lift;
pub mod linalg;
pub mod sampling;

pub use algebra::{
    gram_schmidt, solve_spd, InnerProduct, MetricLieAlgebra, Provenance, StructureConstants,
    Validation, Vector, Violation,
};
pub use error::{Error, Result};
pub use geometry::{ConnectionCoefficients, CurvatureTensor, Geometry};
pub use lift::{lifted_connection_closed_form, tangent_lift, LiftIndexing, LiftKind};

/// Numerical thresholds shared by validation, comparison and degeneracy checks.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    /// Jacobi residual bound, relative to the squared largest structure constant.
    pub jacobi: f64,
    /// Absolute max-norm bound for claimed-vs-computed comparisons.
    pub cmp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            jacobi: 1e-10,
            cmp: 1e-9,
        }
    }
}
