use rand::Rng;

use super::claims::{Claim, ClaimValue, ClosedFormSet, Gating, Query, Space};
use super::{ideal_labels, RANDOM_SAMPLES};
use crate::algebra::{
    orthonormalize, InnerProduct, MetricLieAlgebra, Provenance, StructureConstants, Vector,
};
use crate::error::{Error, Result};
use crate::lift::{LiftIndexing, LiftKind};
use crate::sampling;

/// Formula ids emitted by [`special_closed_forms`], in report order.
pub const SPECIAL_REGISTRY: &[&str] = &[
    "C1.K_base",
    "E5.nabla_b_b",
    "E5.nabla_b_x",
    "E5.nabla_x_y",
    "E5.nabla_x_b",
    "L1.nabla_bc_bc",
    "L1.nabla_bc_bv",
    "L1.nabla_bv_bc",
    "L1.nabla_bv_bv",
    "L1.nabla_bc_xc",
    "L1.nabla_bc_xv",
    "L1.nabla_xc_bc",
    "L1.nabla_bv_xc",
    "L1.nabla_xv_bc",
    "L1.nabla_xv_bv",
    "L1.nabla_bv_xv",
    "L1.nabla_xc_bv",
    "L1.nabla_xc_yc",
    "L1.nabla_xv_yv",
    "L1.nabla_xc_yv",
    "L1.nabla_xv_yc",
    "L2.R_xc_yv_zc",
    "L2.R_xc_yc_zv",
    "L2.R_xc_yc_zc",
    "L2.R_xc_yv_zv",
    "L2.R_xv_yv_zc",
    "L2.R_xv_yv_zv",
    "L2.R_xc_yc_bc",
    "L2.R_xc_yc_bv",
    "L2.R_xc_yv_bc",
    "L2.R_xc_yv_bv",
    "L2.R_xv_yv_bc",
    "L2.R_xv_yv_bv",
    "L2.R_xc_bv_yc",
    "L2.R_xc_bc_yv",
    "L2.R_xv_bc_yc",
    "L2.R_xv_bv_yv",
    "L2.R_xc_bc_yc",
    "L2.R_xc_bv_yv",
    "L2.R_xv_bv_yc",
    "L2.R_xv_bc_yv",
    "T1.K_xc_yc",
    "T1.K_xv_yv",
    "T1.K_xc_bc",
    "T1.K_xc_bv",
    "T1.K_xv_bc",
    "T1.K_xv_bv",
    "T1.K_xc_yv",
    "E12.Ric_xc_yc",
    "E12.Ric_xv_yv",
    "E12.Ric_xc_bc",
    "E12.Ric_xc_bv",
    "E12.Ric_xv_bv",
    "E12.Ric_xv_bc",
    "E12.Ric_xc_yv",
];

/// Parameters of a special algebra: `dim 𝔲 = n`, `g(b, b) = lambda` and the
/// metric on `𝔲`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialGroupSpec {
    n: usize,
    lambda: f64,
    u_metric: InnerProduct,
}

impl SpecialGroupSpec {
    /// `u_metric` defaults to the identity.
    pub fn new(n: usize, lambda: f64, u_metric: Option<InnerProduct>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let u_metric = u_metric.unwrap_or_else(|| InnerProduct::identity(n));
        if u_metric.dim() != n {
            return Err(Error::InvalidSpec(format!(
                "u_metric has dimension {}, expected {n}",
                u_metric.dim()
            )));
        }
        Ok(Self {
            n,
            lambda,
            u_metric,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn u_metric(&self) -> &InnerProduct {
        &self.u_metric
    }
}

/// Basis `u_1, ..., u_n, b` with `[b, u_i] = u_i` and metric `u_metric ⊕ λ`.
pub fn build_special(spec: &SpecialGroupSpec) -> Result<MetricLieAlgebra> {
    let n = spec.n;
    let sc = StructureConstants::from_upper_triplets(n + 1, (0..n).map(|i| (i, n, i, -1.0)))?;
    let b_metric = InnerProduct::diagonal(&[spec.lambda])?;
    let metric = InnerProduct::block_diagonal(&[&spec.u_metric, &b_metric]);
    let mut labels = ideal_labels(n);
    labels.push("b".into());
    let mla = MetricLieAlgebra::new(
        sc,
        metric,
        labels,
        Provenance::Special {
            n,
            lambda: spec.lambda,
        },
    )?;
    mla.validate(crate::Tolerances::default().jacobi)
        .into_result()?;
    Ok(mla)
}

/// `λ ~ U[0.25, 4]`, `u_metric = AᵀA + I` with `A_ij ~ U[-1, 1]`.
pub fn random_special(n: usize, seed: u64) -> SpecialGroupSpec {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = sampling::stream("random_special", &[n as u64, seed]);
    let lambda = rng.gen_range(0.25..=4.0);
    let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut s: f64 = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum();
            if i == j {
                s += 1.0;
            }
            g[i * n + j] = s;
            g[j * n + i] = s;
        }
    }
    let u_metric = InnerProduct::new(n, g).expect("AᵀA + I is SPD");
    SpecialGroupSpec::new(n, lambda, Some(u_metric)).expect("generated spec is valid")
}

/// A lifted argument: `None` stands for `b`.
type Arg<'a> = (LiftKind, Option<&'a Vector>);

struct Tables<'a> {
    spec: &'a SpecialGroupSpec,
    base: MetricLieAlgebra,
    ix: LiftIndexing,
    seed: u64,
    /// `g`-orthonormal basis of `𝔲`, in base coordinates.
    u_orthonormal: Vec<Vector>,
    set: ClosedFormSet,
}

/// Every closed form for the special family, evaluated on basis arguments
/// and on seeded random samples.
pub fn special_closed_forms(spec: &SpecialGroupSpec, seed: u64) -> Result<ClosedFormSet> {
    let base = build_special(spec)?;
    let n = spec.n;
    let u_orthonormal = orthonormalize(base.metric(), (0..n).map(|i| base.basis(i)))?;
    let mut t = Tables {
        spec,
        ix: LiftIndexing::new(n + 1),
        base,
        seed,
        u_orthonormal,
        set: ClosedFormSet::default(),
    };
    t.base_constant_curvature()?;
    t.base_connection();
    t.lifted_connection();
    t.lifted_curvature();
    t.lifted_sectional()?;
    t.lifted_ricci();
    t.set.sort_by_registry(SPECIAL_REGISTRY);
    Ok(t.set)
}

impl<'a> Tables<'a> {
    fn n(&self) -> usize {
        self.spec.n
    }

    fn lambda(&self) -> f64 {
        self.spec.lambda
    }

    fn b(&self) -> Vector {
        self.base.basis(self.n())
    }

    fn u(&self, i: usize) -> Vector {
        self.base.basis(i)
    }

    fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        self.base.inner(x, y)
    }

    fn lift(&self, kind: LiftKind, x: &[f64]) -> Vector {
        self.ix.embed(kind, x)
    }

    fn lift_arg(&self, (kind, x): Arg) -> Vector {
        match x {
            Some(x) => self.lift(kind, x),
            None => self.lift(kind, &self.b()),
        }
    }

    fn lifted_zero(&self) -> Vector {
        Vector::zeros(2 * (self.n() + 1))
    }

    fn label(&self, i: usize) -> &str {
        &self.base.labels()[i]
    }

    fn lifted_label(&self, kind: LiftKind, i: usize) -> String {
        self.ix.label(self.label(i), kind)
    }

    fn push(
        &mut self,
        id: &str,
        desc: String,
        space: Space,
        query: Query,
        value: ClaimValue,
        gating: Gating,
    ) {
        self.set.claims.push(Claim {
            formula_id: id.to_string(),
            argument_desc: desc,
            space,
            query,
            value,
            gating,
        });
    }

    fn random_u(&self, rng: &mut impl Rng) -> Vector {
        let mut v = sampling::uniform_vector(rng, self.n()).into_inner();
        v.push(0.0);
        Vector::new(v)
    }

    /// A `g`-orthonormal pair in `𝔲`; requires `n >= 2`.
    fn random_orthonormal_pair(&self, rng: &mut impl Rng) -> (Vector, Vector) {
        loop {
            let x = self.random_u(rng);
            let y = self.random_u(rng);
            if let Ok(v) = orthonormalize(self.base.metric(), [x, y]) {
                let mut it = v.into_iter();
                return (it.next().unwrap(), it.next().unwrap());
            }
        }
    }

    fn is_orthogonal(&self, x: &[f64], y: &[f64]) -> bool {
        self.g(x, y).abs() <= 1e-12 * (self.g(x, x) * self.g(y, y)).sqrt()
    }

    /// Constant sectional curvature `−1/λ` of the base algebra.
    fn base_constant_curvature(&mut self) -> Result<()> {
        let d = self.n() + 1;
        let value = -1.0 / self.lambda();
        for i in 0..d {
            for j in (i + 1)..d {
                let desc = format!("{}, {}", self.label(i), self.label(j));
                let query = Query::Sectional {
                    x: self.base.basis(i),
                    y: self.base.basis(j),
                };
                self.push(
                    "C1.K_base",
                    desc,
                    Space::Base,
                    query,
                    ClaimValue::Scalar(value),
                    Gating::Required,
                );
            }
        }
        for k in 0..RANDOM_SAMPLES {
            let mut rng = sampling::stream("C1.K_base", &[self.seed, k]);
            let x = sampling::uniform_vector(&mut rng, d);
            let y = sampling::uniform_vector(&mut rng, d);
            self.push(
                "C1.K_base",
                format!("sample {k}"),
                Space::Base,
                Query::Sectional { x, y },
                ClaimValue::Scalar(value),
                Gating::Required,
            );
        }
        Ok(())
    }

    fn base_connection(&mut self) {
        let n = self.n();
        let lam = self.lambda();
        let b = self.b();
        for p in 0..=n {
            for q in 0..=n {
                let (x, y) = (self.base.basis(p), self.base.basis(q));
                let (id, value) = match (p == n, q == n) {
                    (true, true) => ("E5.nabla_b_b", Vector::zeros(n + 1)),
                    (true, false) => ("E5.nabla_b_x", Vector::zeros(n + 1)),
                    (false, false) => ("E5.nabla_x_y", b.scale(self.g(&x, &y) / lam)),
                    (false, true) => ("E5.nabla_x_b", -&x),
                };
                let desc = format!("{}, {}", self.label(p), self.label(q));
                self.push(
                    id,
                    desc,
                    Space::Base,
                    Query::Connection { x, y },
                    ClaimValue::Vector(value),
                    Gating::Required,
                );
            }
        }
    }

    fn l1(&self, p: Arg, q: Arg) -> (&'static str, Vector) {
        use LiftKind::{Complete as C, Vertical as V};
        let lam = self.lambda();
        let zero = self.lifted_zero();
        match (p, q) {
            ((C, None), (C, None)) => ("L1.nabla_bc_bc", zero),
            ((C, None), (V, None)) => ("L1.nabla_bc_bv", zero),
            ((V, None), (C, None)) => ("L1.nabla_bv_bc", zero),
            ((V, None), (V, None)) => ("L1.nabla_bv_bv", zero),
            ((C, None), (C, Some(_))) => ("L1.nabla_bc_xc", zero),
            ((C, None), (V, Some(_))) => ("L1.nabla_bc_xv", zero),
            ((C, Some(x)), (C, None)) => ("L1.nabla_xc_bc", -&self.lift(C, x)),
            ((V, None), (C, Some(x))) => ("L1.nabla_bv_xc", self.lift(V, x).scale(0.5)),
            ((V, Some(x)), (C, None)) => ("L1.nabla_xv_bc", -&self.lift(V, x)),
            ((V, Some(x)), (V, None)) => ("L1.nabla_xv_bv", self.lift(C, x).scale(-0.5)),
            ((V, None), (V, Some(x))) => ("L1.nabla_bv_xv", self.lift(C, x).scale(-0.5)),
            ((C, Some(x)), (V, None)) => ("L1.nabla_xc_bv", self.lift(V, x).scale(-0.5)),
            ((C, Some(x)), (C, Some(y))) => (
                "L1.nabla_xc_yc",
                self.lift(C, &self.b()).scale(self.g(x, y) / lam),
            ),
            ((V, Some(x)), (V, Some(y))) => (
                "L1.nabla_xv_yv",
                self.lift(C, &self.b()).scale(self.g(x, y) / lam),
            ),
            ((C, Some(x)), (V, Some(y))) => (
                "L1.nabla_xc_yv",
                self.lift(V, &self.b()).scale(self.g(x, y) / (2.0 * lam)),
            ),
            ((V, Some(x)), (C, Some(y))) => (
                "L1.nabla_xv_yc",
                self.lift(V, &self.b()).scale(self.g(x, y) / (2.0 * lam)),
            ),
        }
    }

    /// Basis arguments of the lifted algebra as `(kind, base index)`.
    fn lifted_basis(&self) -> Vec<(LiftKind, usize)> {
        (0..self.ix.lifted_dim())
            .map(|p| self.ix.split(p))
            .collect()
    }

    fn arg_of<'s>(&self, kind: LiftKind, i: usize, store: &'s [Vector]) -> Arg<'s> {
        if i == self.n() {
            (kind, None)
        } else {
            (kind, Some(&store[i]))
        }
    }

    fn lifted_connection(&mut self) {
        let units: Vec<Vector> = (0..self.n()).map(|i| self.u(i)).collect();
        let basis = self.lifted_basis();
        for &(kp, p) in &basis {
            for &(kq, q) in &basis {
                let a = self.arg_of(kp, p, &units);
                let b = self.arg_of(kq, q, &units);
                let (id, value) = self.l1(a, b);
                let desc = format!("{}, {}", self.lifted_label(kp, p), self.lifted_label(kq, q));
                let query = Query::Connection {
                    x: self.lift_arg(a),
                    y: self.lift_arg(b),
                };
                self.push(
                    id,
                    desc,
                    Space::Lifted,
                    query,
                    ClaimValue::Vector(value),
                    Gating::Required,
                );
            }
        }
    }

    /// Printed curvature patterns; `None` when the pattern is not stated.
    fn l2(&self, p: Arg, q: Arg, r: Arg) -> Option<(&'static str, Vector)> {
        use LiftKind::{Complete as C, Vertical as V};
        let lam = self.lambda();
        let zero = self.lifted_zero();
        let bc = self.lift(C, &self.b());
        let bv = self.lift(V, &self.b());
        // (1/s)(g(x,z) y^ky − t g(y,z) x^kx)
        let combo = |x: &Vector, y: &Vector, z: &Vector, kx, ky, s: f64, t: f64| {
            self.lift(ky, y)
                .scale(self.g(x, z) / s)
                .axpy(-t * self.g(y, z) / s, &self.lift(kx, x))
        };
        Some(match (p, q, r) {
            ((C, Some(x)), (V, Some(y)), (C, Some(z))) => {
                ("L2.R_xc_yv_zc", combo(x, y, z, V, V, 4.0 * lam, 1.0))
            }
            ((C, Some(x)), (C, Some(y)), (V, Some(z))) => {
                ("L2.R_xc_yc_zv", combo(x, y, z, V, V, 4.0 * lam, 1.0))
            }
            ((C, Some(x)), (C, Some(y)), (C, Some(z))) => {
                ("L2.R_xc_yc_zc", combo(x, y, z, C, C, lam, 1.0))
            }
            ((C, Some(x)), (V, Some(y)), (V, Some(z))) => {
                ("L2.R_xc_yv_zv", combo(x, y, z, C, C, 4.0 * lam, 4.0))
            }
            ((V, Some(x)), (V, Some(y)), (C, Some(z))) => {
                ("L2.R_xv_yv_zc", combo(x, y, z, C, C, 4.0 * lam, 1.0))
            }
            ((V, Some(x)), (V, Some(y)), (V, Some(z))) => {
                ("L2.R_xv_yv_zv", combo(x, y, z, V, V, lam, 1.0))
            }
            ((C, Some(_)), (C, Some(_)), (C, None)) => ("L2.R_xc_yc_bc", zero),
            ((C, Some(_)), (C, Some(_)), (V, None)) => ("L2.R_xc_yc_bv", zero),
            ((C, Some(_)), (V, Some(_)), (C, None)) => ("L2.R_xc_yv_bc", zero),
            ((C, Some(_)), (V, Some(_)), (V, None)) => ("L2.R_xc_yv_bv", zero),
            ((V, Some(_)), (V, Some(_)), (C, None)) => ("L2.R_xv_yv_bc", zero),
            ((V, Some(_)), (V, Some(_)), (V, None)) => ("L2.R_xv_yv_bv", zero),
            // (4/3)R(x^c,b^v)y^c = 2R(x^c,b^c)y^v = 2R(x^v,b^c)y^c = −4R(x^v,b^v)y^v = g(x,y)/λ b^v
            ((C, Some(x)), (V, None), (C, Some(y))) => {
                ("L2.R_xc_bv_yc", bv.scale(0.75 * self.g(x, y) / lam))
            }
            ((C, Some(x)), (C, None), (V, Some(y))) => {
                ("L2.R_xc_bc_yv", bv.scale(0.5 * self.g(x, y) / lam))
            }
            ((V, Some(x)), (C, None), (C, Some(y))) => {
                ("L2.R_xv_bc_yc", bv.scale(0.5 * self.g(x, y) / lam))
            }
            ((V, Some(x)), (V, None), (V, Some(y))) => {
                ("L2.R_xv_bv_yv", bv.scale(-0.25 * self.g(x, y) / lam))
            }
            // R(x^c,b^c)y^c = 2R(x^c,b^v)y^v = 2R(x^v,b^v)y^c = R(x^v,b^c)y^v = g(x,y)/λ b^c
            ((C, Some(x)), (C, None), (C, Some(y))) => {
                ("L2.R_xc_bc_yc", bc.scale(self.g(x, y) / lam))
            }
            ((C, Some(x)), (V, None), (V, Some(y))) => {
                ("L2.R_xc_bv_yv", bc.scale(0.5 * self.g(x, y) / lam))
            }
            ((V, Some(x)), (V, None), (C, Some(y))) => {
                ("L2.R_xv_bv_yc", bc.scale(0.5 * self.g(x, y) / lam))
            }
            ((V, Some(x)), (C, None), (V, Some(y))) => {
                ("L2.R_xv_bc_yv", bc.scale(self.g(x, y) / lam))
            }
            _ => return None,
        })
    }

    fn lifted_curvature(&mut self) {
        let units: Vec<Vector> = (0..self.n()).map(|i| self.u(i)).collect();
        let basis = self.lifted_basis();
        for &(kp, p) in &basis {
            for &(kq, q) in &basis {
                for &(kr, r) in &basis {
                    let a = self.arg_of(kp, p, &units);
                    let b = self.arg_of(kq, q, &units);
                    let c = self.arg_of(kr, r, &units);
                    let Some((id, value)) = self.l2(a, b, c) else {
                        continue;
                    };
                    let desc = format!(
                        "{}, {}, {}",
                        self.lifted_label(kp, p),
                        self.lifted_label(kq, q),
                        self.lifted_label(kr, r)
                    );
                    let query = Query::Curvature {
                        x: self.lift_arg(a),
                        y: self.lift_arg(b),
                        z: self.lift_arg(c),
                    };
                    self.push(
                        id,
                        desc,
                        Space::Lifted,
                        query,
                        ClaimValue::Vector(value),
                        Gating::Required,
                    );
                }
            }
        }
    }

    fn lifted_sectional(&mut self) -> Result<()> {
        use LiftKind::{Complete as C, Vertical as V};
        let n = self.n();
        let lam = self.lambda();
        let b = self.b();

        // Constant entries on two vectors of 𝔲.
        for (id, kx, ky) in [("T1.K_xc_yc", C, C), ("T1.K_xv_yv", V, V)] {
            if n == 1 {
                // No 2-plane inside a one-dimensional 𝔲; recorded so the
                // formula still appears, and reported as degenerate.
                let u = self.u(0);
                self.push(
                    id,
                    format!("{}, {}", self.lifted_label(kx, 0), self.lifted_label(ky, 0)),
                    Space::Lifted,
                    Query::Sectional {
                        x: self.lift(kx, &u),
                        y: self.lift(ky, &u),
                    },
                    ClaimValue::Scalar(-1.0 / lam),
                    Gating::Required,
                );
                continue;
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let (x, y) = (self.u(i), self.u(j));
                    let gating = if self.is_orthogonal(&x, &y) {
                        Gating::Required
                    } else {
                        Gating::ReportOnly
                    };
                    self.push(
                        id,
                        format!("{}, {}", self.lifted_label(kx, i), self.lifted_label(ky, j)),
                        Space::Lifted,
                        Query::Sectional {
                            x: self.lift(kx, &x),
                            y: self.lift(ky, &y),
                        },
                        ClaimValue::Scalar(-1.0 / lam),
                        gating,
                    );
                }
            }
            for k in 0..RANDOM_SAMPLES {
                let mut rng = sampling::stream(id, &[self.seed, k]);
                let (x, y) = self.random_orthonormal_pair(&mut rng);
                self.push(
                    id,
                    format!("sample {k} (orthonormal)"),
                    Space::Lifted,
                    Query::Sectional {
                        x: self.lift(kx, &x),
                        y: self.lift(ky, &y),
                    },
                    ClaimValue::Scalar(-1.0 / lam),
                    Gating::Required,
                );
                let (x, y) = (self.random_u(&mut rng), self.random_u(&mut rng));
                self.push(
                    id,
                    format!("sample {k} (general)"),
                    Space::Lifted,
                    Query::Sectional {
                        x: self.lift(kx, &x),
                        y: self.lift(ky, &y),
                    },
                    ClaimValue::Scalar(-1.0 / lam),
                    Gating::ReportOnly,
                );
            }
        }

        // Planes through b^c or b^v.
        let b_planes = [
            ("T1.K_xc_bc", C, C, -1.0 / lam),
            ("T1.K_xc_bv", C, V, -0.75 / lam),
            ("T1.K_xv_bc", V, C, -1.0 / lam),
            ("T1.K_xv_bv", V, V, 0.25 / lam),
        ];
        for (id, kx, kb, value) in b_planes {
            let mut args: Vec<(String, Vector)> = (0..n)
                .map(|i| (self.lifted_label(kx, i), self.u(i)))
                .collect();
            for k in 0..RANDOM_SAMPLES {
                let mut rng = sampling::stream(id, &[self.seed, k]);
                args.push((format!("sample {k}"), self.random_u(&mut rng)));
            }
            for (desc, x) in args {
                let desc = if desc.starts_with("sample") {
                    desc
                } else {
                    format!("{desc}, {}", self.ix.label("b", kb))
                };
                self.push(
                    id,
                    desc,
                    Space::Lifted,
                    Query::Sectional {
                        x: self.lift(kx, &x),
                        y: self.lift(kb, &b),
                    },
                    ClaimValue::Scalar(value),
                    Gating::Required,
                );
            }
        }

        // K(x^c, y^v) = −1/λ + g(x,y)² / (4λ g(x,x) g(y,y)) for any x, y in 𝔲.
        let mixed = |x: &Vector, y: &Vector| {
            -1.0 / lam + self.g(x, y).powi(2) / (4.0 * lam * self.g(x, x) * self.g(y, y))
        };
        let mut args: Vec<(String, Vector, Vector)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                args.push((
                    format!("{}, {}", self.lifted_label(C, i), self.lifted_label(V, j)),
                    self.u(i),
                    self.u(j),
                ));
            }
        }
        for k in 0..RANDOM_SAMPLES {
            let mut rng = sampling::stream("T1.K_xc_yv", &[self.seed, k]);
            let (x, y) = (self.random_u(&mut rng), self.random_u(&mut rng));
            args.push((format!("sample {k}"), x, y));
        }
        let rows: Vec<_> = args
            .into_iter()
            .map(|(desc, x, y)| {
                let value = mixed(&x, &y);
                (desc, x, y, value)
            })
            .collect();
        for (desc, x, y, value) in rows {
            self.push(
                "T1.K_xc_yv",
                desc,
                Space::Lifted,
                Query::Sectional {
                    x: self.lift(C, &x),
                    y: self.lift(V, &y),
                },
                ClaimValue::Scalar(value),
                Gating::Required,
            );
        }
        Ok(())
    }

    fn lifted_ricci(&mut self) {
        use LiftKind::{Complete as C, Vertical as V};
        let n = self.n();
        let lam = self.lambda();
        let nf = n as f64;
        // The closed form presumes {u_i, b} orthonormal, which forces λ = 1.
        let gating = if lam == 1.0 {
            Gating::Required
        } else {
            Gating::ReportOnly
        };
        let projected = |x: &Vector, y: &Vector| -> f64 {
            self.u_orthonormal
                .iter()
                .map(|u| self.g(x, u) * self.g(u, y))
                .sum()
        };
        let b = self.b();
        let mut rows: Vec<(&str, LiftKind, Vector, LiftKind, Vector, f64)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (self.u(i), self.u(j));
                let gxy = self.g(&x, &y);
                let p = projected(&x, &y);
                rows.push((
                    "E12.Ric_xc_yc",
                    C,
                    x.clone(),
                    C,
                    y.clone(),
                    -(1.75 + 2.0 * nf / lam) * gxy + 1.25 / lam * p,
                ));
                rows.push((
                    "E12.Ric_xv_yv",
                    V,
                    x.clone(),
                    V,
                    y.clone(),
                    -(0.75 + 2.0 * nf / lam) * gxy + 1.25 / lam * p,
                ));
                rows.push(("E12.Ric_xc_yv", C, x, V, y, 0.0));
            }
        }
        for i in 0..n {
            let x = self.u(i);
            rows.push(("E12.Ric_xc_bc", C, x.clone(), C, b.clone(), 0.0));
            rows.push(("E12.Ric_xc_bv", C, x.clone(), V, b.clone(), 0.0));
            rows.push(("E12.Ric_xv_bv", V, x.clone(), V, b.clone(), 0.0));
            rows.push(("E12.Ric_xv_bc", V, x, C, b.clone(), 0.0));
        }
        for (id, kx, x, ky, y, value) in rows {
            let ix = x.iter().position(|c| *c != 0.0).expect("basis vector");
            let iy = y.iter().position(|c| *c != 0.0).expect("basis vector");
            let desc = format!(
                "{}, {}",
                self.lifted_label(kx, ix),
                self.lifted_label(ky, iy)
            );
            self.push(
                id,
                desc,
                Space::Lifted,
                Query::Ricci {
                    x: self.lift(kx, &x),
                    y: self.lift(ky, &y),
                },
                ClaimValue::Scalar(value),
                gating,
            );
        }
    }
}
