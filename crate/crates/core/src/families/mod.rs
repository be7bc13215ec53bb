//! The two parametric families and their closed-form curvature tables.
//!
//! * special algebras: an abelian ideal `𝔲` plus `b ⟂ 𝔲` with `[b, x] = x`;
//! * one-dimensional-commutator algebras: a unit `e` spanning `[𝔤, 𝔤]`,
//!   `Γ = e^⊥`, `[x, e] = g(a, x) e` and `[x, y] = g(f(x), y) e` on `Γ`.

mod claims;
mod one_dim;
mod special;

pub use claims::{Claim, ClaimValue, ClosedFormSet, Gating, Query, Space};
pub use one_dim::{
    build_one_dim_commutator, g2_closed_forms, random_one_dim_commutator, OneDimCommutatorSpec,
    G2_REGISTRY,
};
pub use special::{
    build_special, random_special, special_closed_forms, SpecialGroupSpec, SPECIAL_REGISTRY,
};

/// Number of seeded random samples drawn per sampled formula.
pub const RANDOM_SAMPLES: u64 = 20;

/// `u` for a one-dimensional ideal, `u1, ..., un` otherwise.
fn ideal_labels(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["u".to_string()]
    } else {
        (1..=n).map(|i| format!("u{i}")).collect()
    }
}
