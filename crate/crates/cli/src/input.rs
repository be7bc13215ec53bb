//! The JSON input schema: a family instance or a generic algebra.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use tanlie_core::families::{OneDimCommutatorSpec, SpecialGroupSpec};
use tanlie_core::harness::{FamilySpec, Fixture, FixtureInstance};
use tanlie_core::{InnerProduct, MetricLieAlgebra, Provenance, StructureConstants};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyFile {
    Special {
        n: usize,
        lambda: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_metric: Option<Vec<Vec<f64>>>,
    },
    OneDimCommutator {
        n: usize,
        a: Vec<f64>,
        f: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericFile {
    pub generic: GenericAlgebra,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericAlgebra {
    pub dimension: usize,
    pub structure_constants: Vec<Triplet>,
    pub metric: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// `[e_i, e_j]` has `value` as its `k`-th coordinate; only `i < j` is listed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triplet {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// A parsed and validated input.
#[derive(Debug, Clone)]
pub enum Input {
    Family(FamilySpec),
    Generic(MetricLieAlgebra),
}

impl Input {
    pub fn algebra(&self) -> Result<MetricLieAlgebra> {
        match self {
            Input::Family(f) => Ok(f.build()?),
            Input::Generic(m) => Ok(m.clone()),
        }
    }
}

pub fn read_spec(path: &Path, tol_jacobi: f64) -> Result<Input> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_spec(&text, tol_jacobi).with_context(|| format!("invalid spec {}", path.display()))
}

pub fn parse_spec(text: &str, tol_jacobi: f64) -> Result<Input> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| anyhow!("JSON syntax error: {e}"))?;
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("top level must be an object"))?;
    match (obj.contains_key("family"), obj.contains_key("generic")) {
        (true, false) => Ok(Input::Family(family_spec(family_file_from(value)?)?)),
        (false, true) => {
            let file: GenericFile = deserialize(value)?;
            Ok(Input::Generic(generic_algebra(file.generic, tol_jacobi)?))
        }
        (true, true) => bail!("exactly one of `family` and `generic` may be given"),
        (false, false) => bail!("expected a `family` or `generic` key"),
    }
}

fn deserialize<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("schema error at `{path}`: {}", e.into_inner())
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecialFields {
    n: usize,
    lambda: f64,
    #[serde(default)]
    u_metric: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OneDimFields {
    n: usize,
    a: Vec<f64>,
    f: Vec<Vec<f64>>,
}

// Dispatches on the tag by hand: serde's internally tagged enums buffer
// their content and lose field paths in error messages.
fn family_file_from(mut value: serde_json::Value) -> Result<FamilyFile> {
    let obj = value.as_object_mut().expect("checked by caller");
    let tag = obj.remove("family").expect("checked by caller");
    match tag.as_str() {
        Some("special") => {
            let SpecialFields {
                n,
                lambda,
                u_metric,
            } = deserialize(value)?;
            Ok(FamilyFile::Special {
                n,
                lambda,
                u_metric,
            })
        }
        Some("one_dim_commutator") => {
            let OneDimFields { n, a, f } = deserialize(value)?;
            Ok(FamilyFile::OneDimCommutator { n, a, f })
        }
        _ => bail!(
            "schema error at `family`: expected \"special\" or \"one_dim_commutator\", found {tag}"
        ),
    }
}

fn family_spec(file: FamilyFile) -> Result<FamilySpec> {
    Ok(match file {
        FamilyFile::Special {
            n,
            lambda,
            u_metric,
        } => {
            let metric = u_metric
                .map(|rows| InnerProduct::from_rows(&rows).context("u_metric"))
                .transpose()?;
            FamilySpec::Special(SpecialGroupSpec::new(n, lambda, metric)?)
        }
        FamilyFile::OneDimCommutator { n, a, f } => {
            FamilySpec::OneDimCommutator(OneDimCommutatorSpec::new(n, a, &f)?)
        }
    })
}

fn generic_algebra(g: GenericAlgebra, tol_jacobi: f64) -> Result<MetricLieAlgebra> {
    let n = g.dimension;
    let sc = StructureConstants::from_upper_triplets(
        n,
        g.structure_constants
            .iter()
            .map(|t| (t.i, t.j, t.k, t.value)),
    )
    .context("structure_constants")?;
    if g.metric.len() != n {
        bail!("metric has {} rows, expected {n}", g.metric.len());
    }
    let metric = InnerProduct::from_rows(&g.metric).context("metric")?;
    let labels = g
        .labels
        .unwrap_or_else(|| MetricLieAlgebra::default_labels(n));
    let mla = MetricLieAlgebra::new(sc, metric, labels, Provenance::Generic)?;
    let validation = mla.validate(tol_jacobi);
    if !validation.is_ok() {
        let list: Vec<String> = validation
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect();
        bail!("algebra fails validation:\n  {}", list.join("\n  "));
    }
    Ok(mla)
}

/// The generic file describing `mla` (sparse upper-triangular constants).
pub fn generic_file(mla: &MetricLieAlgebra) -> GenericFile {
    GenericFile {
        generic: GenericAlgebra {
            dimension: mla.dim(),
            structure_constants: mla
                .structure()
                .upper_triplets()
                .into_iter()
                .map(|(i, j, k, value)| Triplet { i, j, k, value })
                .collect(),
            metric: mla.metric().rows(),
            labels: Some(mla.labels().to_vec()),
        },
    }
}

pub fn family_file(spec: &FamilySpec) -> FamilyFile {
    match spec {
        FamilySpec::Special(s) => FamilyFile::Special {
            n: s.n(),
            lambda: s.lambda(),
            u_metric: (!s.u_metric().is_identity()).then(|| s.u_metric().rows()),
        },
        FamilySpec::OneDimCommutator(s) => FamilyFile::OneDimCommutator {
            n: s.n(),
            a: s.a().to_vec(),
            f: s.f_rows(),
        },
    }
}

pub fn fixture_json(fixture: &Fixture) -> Result<String> {
    let text = match &fixture.instance {
        FixtureInstance::Family(f) => serde_json::to_string_pretty(&family_file(f))?,
        FixtureInstance::Generic(m) => serde_json::to_string_pretty(&generic_file(m))?,
    };
    Ok(text + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_defaults_to_identity_metric() {
        let input = parse_spec(r#"{"family":"special","n":1,"lambda":1.0}"#, 1e-10).unwrap();
        let Input::Family(FamilySpec::Special(s)) = input else {
            panic!("expected a special spec");
        };
        assert!(s.u_metric().is_identity());
    }

    #[test]
    fn schema_errors_carry_field_paths() {
        let err = parse_spec(
            r#"{"generic":{"dimension":2,"structure_constants":[{"i":0,"j":1,"k":"x","value":1}],"metric":[[1,0],[0,1]]}}"#,
            1e-10,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("generic.structure_constants[0].k"),
            "{err}"
        );
    }

    #[test]
    fn closure_violation_names_the_triple() {
        let err = parse_spec(
            r#"{"family":"one_dim_commutator","n":3,"a":[1,0,0],"f":[[0,0,0],[0,0,1],[0,-1,0]]}"#,
            1e-10,
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("(0, 1, 2)"), "{err:#}");
    }

    #[test]
    fn jacobi_failure_lists_violations() {
        // [e0,e1]=e1, [e0,e2]=e0, [e1,e2]=0 is not a Lie algebra
        let err = parse_spec(
            r#"{"generic":{"dimension":3,"structure_constants":[{"i":0,"j":1,"k":1,"value":1},{"i":0,"j":2,"k":0,"value":1}],"metric":[[1,0,0],[0,1,0],[0,0,1]]}}"#,
            1e-10,
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("Jacobi"), "{err:#}");
    }

    #[test]
    fn rejects_both_keys_and_syntax() {
        assert!(parse_spec(r#"{"family":"special","generic":{}}"#, 1e-10).is_err());
        assert!(parse_spec("{", 1e-10).is_err());
        assert!(parse_spec(r#"{"family":"special","n":1,"lambda":1.0,"x":1}"#, 1e-10).is_err());
    }
}
