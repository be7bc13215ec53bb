//! Checks closed-form claims against the generic geometry of the constructed
//! algebra and collects the verdicts into a report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{InnerProduct, MetricLieAlgebra, StructureConstants, Vector};
use crate::error::{Error, Result};
use crate::families::{
    build_one_dim_commutator, build_special, g2_closed_forms, special_closed_forms, Claim,
    ClaimValue, ClosedFormSet, Gating, OneDimCommutatorSpec, Query, Space, SpecialGroupSpec,
};
use crate::geometry::{
    constant_sectional_check, ConnectionCoefficients, ConstantSectional, Geometry,
};
use crate::lift::{lifted_connection_closed_form, tangent_lift, LiftIndexing};

/// Random planes sampled by the constant-curvature check inside a suite.
pub const CONSTANT_SECTIONAL_TRIALS: usize = 100;

/// A parametric family instance accepted by [`run_paper_suite`].
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Special(SpecialGroupSpec),
    OneDimCommutator(OneDimCommutatorSpec),
}

impl FamilySpec {
    pub fn build(&self) -> Result<MetricLieAlgebra> {
        match self {
            FamilySpec::Special(s) => build_special(s),
            FamilySpec::OneDimCommutator(s) => build_one_dim_commutator(s),
        }
    }

    pub fn closed_forms(&self, seed: u64) -> Result<ClosedFormSet> {
        match self {
            FamilySpec::Special(s) => special_closed_forms(s, seed),
            FamilySpec::OneDimCommutator(s) => g2_closed_forms(s, seed),
        }
    }

    pub fn parameters(&self) -> InstanceParameters {
        match self {
            FamilySpec::Special(s) => InstanceParameters::Special {
                n: s.n(),
                lambda: s.lambda(),
                u_metric: s.u_metric().rows(),
            },
            FamilySpec::OneDimCommutator(s) => InstanceParameters::OneDimCommutator {
                n: s.n(),
                a: s.a().to_vec(),
                f: s.f_rows(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InstanceParameters {
    Special {
        n: usize,
        lambda: f64,
        u_metric: Vec<Vec<f64>>,
    },
    OneDimCommutator {
        n: usize,
        a: Vec<f64>,
        f: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceDesc {
    /// Fixture name or input path, when known.
    pub name: Option<String>,
    pub parameters: InstanceParameters,
    pub provenance: String,
    pub dimension: usize,
    pub lifted_dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The oracle could not evaluate the arguments (e.g. a degenerate plane).
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonEntry {
    pub formula_id: String,
    pub argument_desc: String,
    pub space: Space,
    pub claimed: ClaimValue,
    pub oracle: Option<ClaimValue>,
    pub abs_diff: Option<f64>,
    pub status: Status,
    pub gating: Gating,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ComparisonEntry {
    fn compared(
        formula_id: &str,
        argument_desc: String,
        space: Space,
        gating: Gating,
        claimed: ClaimValue,
        oracle: ClaimValue,
        tol: f64,
    ) -> Self {
        let diff = claimed
            .coords()
            .iter()
            .zip(oracle.coords())
            .fold(0.0f64, |m, (c, o)| {
                let d = (c - o).abs();
                if d.is_nan() {
                    f64::NAN
                } else {
                    m.max(d)
                }
            });
        let status = if diff <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            formula_id: formula_id.to_string(),
            argument_desc,
            space,
            claimed,
            oracle: Some(oracle),
            abs_diff: Some(diff),
            status,
            gating,
            error: None,
        }
    }

    fn errored(claim: &Claim, err: Error) -> Self {
        Self {
            formula_id: claim.formula_id.clone(),
            argument_desc: claim.argument_desc.clone(),
            space: claim.space,
            claimed: claim.value.clone(),
            oracle: None,
            abs_diff: None,
            status: Status::Error,
            gating: claim.gating,
            error: Some(err.to_string()),
        }
    }

    pub fn is_required_failure(&self) -> bool {
        self.gating == Gating::Required && self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub per_formula: BTreeMap<String, Tally>,
    pub total: Tally,
    /// Failing entries whose gating is `required`.
    pub required_failures: usize,
}

impl Summary {
    pub fn tally(entries: &[ComparisonEntry]) -> Self {
        let mut s = Summary::default();
        for e in entries {
            let t = s.per_formula.entry(e.formula_id.clone()).or_default();
            for t in [t, &mut s.total] {
                match e.status {
                    Status::Pass => t.pass += 1,
                    Status::Fail => t.fail += 1,
                    Status::Error => t.error += 1,
                }
            }
            if e.is_required_failure() {
                s.required_failures += 1;
            }
        }
        s
    }
}

/// Two formulas claiming different values for the same geometric quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conflict {
    pub first: ConflictSide,
    pub second: ConflictSide,
    /// Oracle value of the shared quantity (taken from the first side).
    pub oracle: Option<ClaimValue>,
    /// Number of sides whose entry passed (at most one when the claims
    /// differ by more than twice the tolerance).
    pub passing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictSide {
    pub formula_id: String,
    pub argument_desc: String,
    pub claimed: ClaimValue,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub instance: InstanceDesc,
    pub tolerance: f64,
    pub seed: u64,
    pub entries: Vec<ComparisonEntry>,
    pub summary: Summary,
    pub conflicts: Vec<Conflict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_sectional: Option<ConstantSectional>,
}

impl ComparisonReport {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.instance.name = Some(name.into());
        self
    }

    pub fn all_required_pass(&self) -> bool {
        self.summary.required_failures == 0
    }
}

/// One entry per basis pair `(i, j)`, comparing `∇_{e_i} e_j`.
pub fn compare_connection(
    claimed: &ConnectionCoefficients,
    oracle: &ConnectionCoefficients,
    labels: &[String],
    id_for_pair: impl Fn(usize, usize) -> String,
    tol: f64,
) -> Result<Vec<ComparisonEntry>> {
    let n = oracle.dim();
    if claimed.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: claimed.dim(),
        });
    }
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: labels.len(),
        });
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(ComparisonEntry::compared(
                &id_for_pair(i, j),
                format!("{}, {}", labels[i], labels[j]),
                Space::Lifted,
                Gating::Required,
                ClaimValue::Vector(Vector::new(claimed.pair(i, j).to_vec())),
                ClaimValue::Vector(Vector::new(oracle.pair(i, j).to_vec())),
                tol,
            ));
        }
    }
    Ok(out)
}

/// Compares each claim with the oracle of the algebra its space refers to.
pub fn compare_claims(
    claims: &ClosedFormSet,
    base: &Geometry,
    lifted: &Geometry,
    tol: f64,
) -> Vec<ComparisonEntry> {
    claims
        .claims
        .iter()
        .map(|c| {
            let geo = match c.space {
                Space::Base => base,
                Space::Lifted => lifted,
            };
            match evaluate(geo, &c.query) {
                Ok(oracle) => ComparisonEntry::compared(
                    &c.formula_id,
                    c.argument_desc.clone(),
                    c.space,
                    c.gating,
                    c.value.clone(),
                    oracle,
                    tol,
                ),
                Err(e) => ComparisonEntry::errored(c, e),
            }
        })
        .collect()
}

/// The oracle's value for a query.
pub fn evaluate(geo: &Geometry, query: &Query) -> Result<ClaimValue> {
    let n = geo.dim();
    let check = |v: &Vector| {
        if v.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                actual: v.dim(),
            })
        }
    };
    Ok(match query {
        Query::Connection { x, y } => {
            check(x)?;
            check(y)?;
            ClaimValue::Vector(geo.nabla(x, y))
        }
        Query::Curvature { x, y, z } => {
            check(x)?;
            check(y)?;
            check(z)?;
            ClaimValue::Vector(geo.curvature_at(x, y, z))
        }
        Query::Sectional { x, y } => ClaimValue::Scalar(geo.sectional(x, y)?),
        Query::Ricci { x, y } => ClaimValue::Scalar(geo.ricci(x, y)?),
        Query::RicciDirection { x } => ClaimValue::Scalar(geo.ricci_direction(x)?),
    })
}

/// Builds the instance, runs the oracle on it and on its lift, and compares
/// the lifted-connection closed form and every family claim against it.
pub fn run_paper_suite(spec: &FamilySpec, seed: u64, tol: f64) -> Result<ComparisonReport> {
    let base_alg = spec.build()?;
    let lifted_alg = tangent_lift(&base_alg)?;
    let base = Geometry::compute(&base_alg)?;
    let lifted = Geometry::compute(&lifted_alg)?;
    let ix = LiftIndexing::new(base_alg.dim());

    let closed = lifted_connection_closed_form(&base_alg)?;
    let mut entries = compare_connection(
        &closed,
        &lifted.connection,
        lifted_alg.labels(),
        |i, j| {
            let (ki, _) = ix.split(i);
            let (kj, _) = ix.split(j);
            format!("E4.nabla_x{}_y{}", ki.suffix(), kj.suffix())
        },
        tol,
    )?;

    let claims = spec.closed_forms(seed)?;
    entries.extend(compare_claims(&claims, &base, &lifted, tol));

    let conflicts = find_conflicts(&claims, &entries, ix, tol);

    let constant_sectional = match spec {
        FamilySpec::Special(_) => Some(constant_sectional_check(
            &base_alg,
            &base.curvature,
            CONSTANT_SECTIONAL_TRIALS,
            seed,
            tol,
        )?),
        FamilySpec::OneDimCommutator(_) => None,
    };

    let summary = Summary::tally(&entries);
    Ok(ComparisonReport {
        instance: InstanceDesc {
            name: None,
            parameters: spec.parameters(),
            provenance: base_alg.provenance().to_string(),
            dimension: base_alg.dim(),
            lifted_dimension: lifted_alg.dim(),
        },
        tolerance: tol,
        seed,
        entries,
        summary,
        conflicts,
        constant_sectional,
    })
}

/// A canonical key for the quantity a claim refers to. Sectional curvature,
/// connection and curvature of complete lifts coincide with the base values
/// (complete lifts span a totally geodesic subalgebra), so lifted queries on
/// complete lifts are keyed as their base counterparts.
fn quantity_key(claim: &Claim, ix: LiftIndexing) -> (String, Vec<u64>) {
    let n = ix.base_dim();
    let restrict = |v: &Vector| -> Option<Vec<f64>> {
        if v[n..].iter().all(|c| *c == 0.0) {
            Some(v[..n].to_vec())
        } else {
            None
        }
    };
    let (tag, args): (&str, Vec<&Vector>) = match &claim.query {
        Query::Connection { x, y } => ("connection", vec![x, y]),
        Query::Curvature { x, y, z } => ("curvature", vec![x, y, z]),
        Query::Sectional { x, y } => ("sectional", vec![x, y]),
        Query::Ricci { x, y } => ("ricci", vec![x, y]),
        Query::RicciDirection { x } => ("ricci_direction", vec![x]),
    };
    let liftable = !matches!(
        claim.query,
        Query::Ricci { .. } | Query::RicciDirection { .. }
    );
    let mut space = match claim.space {
        Space::Base => "base",
        Space::Lifted => "lifted",
    };
    let mut coords: Vec<f64> = args.iter().flat_map(|v| v.iter().copied()).collect();
    if claim.space == Space::Lifted && liftable {
        let restricted: Option<Vec<Vec<f64>>> = args.iter().map(|v| restrict(v)).collect();
        if let Some(r) = restricted {
            space = "base";
            coords = r.into_iter().flatten().collect();
        }
    }
    let key = format!("{space}/{tag}");
    (key, coords.iter().map(|c| (c + 0.0).to_bits()).collect())
}

/// Pairs of entries from different formulas that refer to the same quantity
/// but claim values more than `2 tol` apart. Vector claims on lifted
/// complete arguments are compared in base coordinates.
fn find_conflicts(
    claims: &ClosedFormSet,
    entries: &[ComparisonEntry],
    ix: LiftIndexing,
    tol: f64,
) -> Vec<Conflict> {
    let offset = entries.len() - claims.claims.len();
    let mut groups: BTreeMap<(String, Vec<u64>), Vec<usize>> = BTreeMap::new();
    for (k, c) in claims.claims.iter().enumerate() {
        groups.entry(quantity_key(c, ix)).or_default().push(k);
    }
    let n = ix.base_dim();
    // base vector claims are compared as their complete lifts
    let lifted_value = |c: &Claim| -> Vec<f64> {
        match (&c.value, c.space) {
            (ClaimValue::Vector(v), Space::Base) => {
                let mut out = v.to_vec();
                out.extend(std::iter::repeat_n(0.0, n));
                out
            }
            (v, _) => v.coords().to_vec(),
        }
    };
    let mut found: Vec<(usize, usize)> = Vec::new();
    for members in groups.values() {
        for (p, &i) in members.iter().enumerate() {
            for &j in &members[p + 1..] {
                let (a, b) = (&claims.claims[i], &claims.claims[j]);
                if a.formula_id == b.formula_id {
                    continue;
                }
                let (va, vb) = (lifted_value(a), lifted_value(b));
                let gap = va
                    .iter()
                    .zip(&vb)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                if va.len() == vb.len() && gap > 2.0 * tol {
                    found.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    found.sort_unstable();
    found
        .into_iter()
        .map(|(i, j)| {
            let (ea, eb) = (&entries[offset + i], &entries[offset + j]);
            let side = |e: &ComparisonEntry| ConflictSide {
                formula_id: e.formula_id.clone(),
                argument_desc: e.argument_desc.clone(),
                claimed: e.claimed.clone(),
                status: e.status,
            };
            Conflict {
                first: side(ea),
                second: side(eb),
                oracle: ea.oracle.clone(),
                passing: [ea, eb].iter().filter(|e| e.status == Status::Pass).count(),
            }
        })
        .collect()
}

/// A built-in test instance.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub instance: FixtureInstance,
}

#[derive(Debug, Clone)]
pub enum FixtureInstance {
    Family(FamilySpec),
    Generic(MetricLieAlgebra),
}

impl Fixture {
    pub fn algebra(&self) -> Result<MetricLieAlgebra> {
        match &self.instance {
            FixtureInstance::Family(f) => f.build(),
            FixtureInstance::Generic(m) => Ok(m.clone()),
        }
    }
}

/// `f = a wᵀ − w aᵀ` as rows.
pub fn wedge_rows(a: &[f64], w: &[f64]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(w)
        .map(|(ai, wi)| a.iter().zip(w).map(|(aj, wj)| ai * wj - wi * aj).collect())
        .collect()
}

/// `[e_i, e_j] = ε_ijk e_k` with the identity metric.
pub fn so3() -> MetricLieAlgebra {
    let sc = StructureConstants::from_upper_triplets(
        3,
        [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
    )
    .expect("valid triplets");
    MetricLieAlgebra::new(
        sc,
        InnerProduct::identity(3),
        MetricLieAlgebra::default_labels(3),
        crate::algebra::Provenance::Generic,
    )
    .expect("dimensions match")
}

pub fn fixtures() -> Vec<Fixture> {
    let special = |n, lambda, metric: Option<InnerProduct>| {
        FixtureInstance::Family(FamilySpec::Special(
            SpecialGroupSpec::new(n, lambda, metric).expect("fixture is valid"),
        ))
    };
    let one_dim = |n, a: Vec<f64>, f: Vec<Vec<f64>>| {
        FixtureInstance::Family(FamilySpec::OneDimCommutator(
            OneDimCommutatorSpec::new(n, a, &f).expect("fixture is valid"),
        ))
    };
    vec![
        Fixture {
            name: "hyperbolic2",
            instance: special(1, 1.0, None),
        },
        Fixture {
            name: "special_n2",
            instance: special(2, 1.0, None),
        },
        Fixture {
            name: "special_scaled",
            instance: special(
                2,
                2.0,
                Some(InnerProduct::diagonal(&[1.0, 4.0]).expect("SPD")),
            ),
        },
        Fixture {
            name: "heisenberg",
            instance: one_dim(2, vec![0.0, 0.0], vec![vec![0.0, 1.0], vec![-1.0, 0.0]]),
        },
        Fixture {
            name: "g2_affine",
            instance: one_dim(2, vec![1.0, 0.0], vec![vec![0.0; 2]; 2]),
        },
        Fixture {
            name: "g2_mixed",
            instance: one_dim(
                3,
                vec![1.0, 0.0, 0.0],
                wedge_rows(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            ),
        },
        Fixture {
            name: "so3",
            instance: FixtureInstance::Generic(so3()),
        },
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}

/// Recognizes a generic algebra as a family instance, rewritten in an
/// adapted orthonormal basis.
///
/// Special: the derived algebra is an abelian ideal of codimension one and
/// the unit normal `b₀` acts on it as `μ·id`, `μ ≠ 0`; then `b = b₀/μ` and
/// `λ = 1/μ²`. One-dimensional commutator: the derived algebra is a line,
/// spanned by the unit `e`.
pub fn classify(mla: &MetricLieAlgebra) -> Result<FamilySpec> {
    let n = mla.dim();
    let g = mla.metric();
    let scale = mla.structure().max_abs();
    if scale == 0.0 {
        return Err(Error::UnsupportedFamily(
            "abelian algebra: the derived algebra is zero".into(),
        ));
    }
    let eps = 1e-10 * scale;
    let brackets = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| Vector::new(mla.structure().basis_bracket(i, j).to_vec()));
    let derived = span(g, brackets, eps);

    if derived.len() + 1 == n {
        if let Some(spec) = as_special(mla, &derived, eps)? {
            return Ok(FamilySpec::Special(spec));
        }
    }
    if derived.len() == 1 {
        return as_one_dim(mla, &derived[0]).map(FamilySpec::OneDimCommutator);
    }
    Err(Error::UnsupportedFamily(format!(
        "derived algebra has dimension {} in dimension {n}; neither a codimension-one \
         abelian ideal with scalar action nor a one-dimensional commutator",
        derived.len()
    )))
}

/// Orthonormal basis of the span, dropping vectors whose residual norm is
/// at most `eps`.
fn span(g: &InnerProduct, vectors: impl IntoIterator<Item = Vector>, eps: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v;
        for _ in 0..2 {
            for q in &out {
                w = w.axpy(-g.apply(q, &w), q);
            }
        }
        let norm = g.norm(&w);
        if norm > eps {
            out.push(w.scale(1.0 / norm));
        }
    }
    out
}

fn complement(g: &InnerProduct, subspace: &[Vector]) -> Vec<Vector> {
    let n = g.dim();
    let mut all = span(
        g,
        subspace
            .iter()
            .cloned()
            .chain((0..n).map(|i| Vector::basis(n, i))),
        1e-8,
    );
    all.split_off(subspace.len())
}

fn as_special(
    mla: &MetricLieAlgebra,
    ideal: &[Vector],
    eps: f64,
) -> Result<Option<SpecialGroupSpec>> {
    let g = mla.metric();
    for (p, x) in ideal.iter().enumerate() {
        for y in &ideal[p + 1..] {
            if mla.bracket(x, y).max_abs() > eps {
                return Ok(None);
            }
        }
    }
    let normal = &complement(g, ideal)[0];
    let mu = g.apply(&mla.bracket(normal, &ideal[0]), &ideal[0]);
    if mu.abs() <= eps {
        return Ok(None);
    }
    for x in ideal {
        if (&mla.bracket(normal, x) - &x.scale(mu)).max_abs() > eps {
            return Ok(None);
        }
    }
    SpecialGroupSpec::new(ideal.len(), 1.0 / (mu * mu), None).map(Some)
}

fn as_one_dim(mla: &MetricLieAlgebra, e: &Vector) -> Result<OneDimCommutatorSpec> {
    let g = mla.metric();
    let gamma = complement(g, std::slice::from_ref(e));
    let m = gamma.len();
    let a: Vec<f64> = gamma
        .iter()
        .map(|u| g.apply(&mla.bracket(u, e), e))
        .collect();
    let mut f = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = g.apply(&mla.bracket(&gamma[i], &gamma[j]), e);
            f[i][j] = v;
            f[j][i] = -v;
        }
    }
    OneDimCommutatorSpec::new(m, a, &f)
}
