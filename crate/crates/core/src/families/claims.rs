use serde::Serialize;

use crate::algebra::Vector;

/// Which algebra a claim lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Base,
    Lifted,
}

/// Whether a failing claim counts against the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gating {
    /// The formula's hypotheses hold for these arguments.
    Required,
    /// Evaluated outside the formula's stated hypotheses.
    ReportOnly,
}

/// The geometric quantity a claim asserts a value for, with its arguments
/// in the coordinates of the claim's [`Space`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "quantity", rename_all = "snake_case")]
pub enum Query {
    /// `∇_x y`
    Connection { x: Vector, y: Vector },
    /// `R(x, y) z`
    Curvature { x: Vector, y: Vector, z: Vector },
    /// `K(x, y)`
    Sectional { x: Vector, y: Vector },
    /// `Ric(x, y)`
    Ricci { x: Vector, y: Vector },
    /// `Ric(x, x)`
    RicciDirection { x: Vector },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Scalar(f64),
    Vector(Vector),
}

impl ClaimValue {
    pub fn coords(&self) -> &[f64] {
        match self {
            ClaimValue::Scalar(s) => std::slice::from_ref(s),
            ClaimValue::Vector(v) => v.coords(),
        }
    }
}

/// One formula evaluated at one argument tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub formula_id: String,
    pub argument_desc: String,
    pub space: Space,
    pub query: Query,
    pub value: ClaimValue,
    pub gating: Gating,
}

/// Claims in canonical order: registry order, then argument order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ClosedFormSet {
    pub claims: Vec<Claim>,
}

impl ClosedFormSet {
    /// Distinct formula ids in first-appearance order.
    pub fn formula_ids(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.claims {
            if !out.contains(&c.formula_id.as_str()) {
                out.push(&c.formula_id);
            }
        }
        out
    }

    pub fn entries(&self, formula_id: &str) -> impl Iterator<Item = &Claim> {
        let id = formula_id.to_string();
        self.claims.iter().filter(move |c| c.formula_id == id)
    }

    /// Restores registry order (stable within a formula).
    pub(crate) fn sort_by_registry(&mut self, registry: &[&str]) {
        let rank = |id: &str| {
            registry
                .iter()
                .position(|r| *r == id)
                .unwrap_or_else(|| panic!("formula id {id} missing from registry"))
        };
        self.claims.sort_by_key(|c| rank(&c.formula_id));
    }
}
