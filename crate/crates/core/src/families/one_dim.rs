use rand::Rng;

use super::claims::{Claim, ClaimValue, ClosedFormSet, Gating, Query, Space};
use super::{ideal_labels, RANDOM_SAMPLES};
use crate::algebra::{
    orthonormalize, InnerProduct, MetricLieAlgebra, Provenance, StructureConstants, Vector,
};
use crate::error::{Error, Result};
use crate::lift::{LiftIndexing, LiftKind};
use crate::sampling;

/// Formula ids emitted by [`g2_closed_forms`], in report order.
pub const G2_REGISTRY: &[&str] = &[
    "E16.nabla_e_e",
    "E16.nabla_e_x",
    "E16.nabla_x_e",
    "E16.nabla_x_y",
    "L3.K_xy",
    "L3.K_xe",
    "L4.nabla_ec_ec",
    "L4.nabla_ev_ev",
    "L4.nabla_ec_ev",
    "L4.nabla_ev_ec",
    "L4.nabla_ec_xc",
    "L4.nabla_xc_ec",
    "L4.nabla_xv_ev",
    "L4.nabla_ev_xv",
    "L4.nabla_ev_xc",
    "L4.nabla_xc_ev",
    "L4.nabla_ec_xv",
    "L4.nabla_xv_ec",
    "L4.nabla_xc_yc",
    "L4.nabla_xc_yv",
    "L4.nabla_xv_yc",
    "L4.nabla_xv_yv",
    "L5.R_xc_yc_zc",
    "L5.R_xc_yc_zv",
    "L5.R_xc_yv_yv",
    "L5.R_xv_yv_yv",
    "L5.R_xc_ev_ev",
    "L5.R_xv_ec_ec",
    "L5.R_xv_ev_ev",
    "E20.K_xc_yc",
    "E20.K_xc_yv",
    "E20.K_xc_ec",
    "E20.K_xc_ev",
    "E20.K_xv_ec",
    "E20.K_xv_ev",
    "E20.K_xv_yv",
    "E21.r_ec",
    "E21.r_ev",
    "E21.r_xc",
    "E21.r_xv",
];

/// Closure residuals above this bound reject a spec.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

/// Parameters of a one-dimensional-commutator algebra in an orthonormal
/// basis `u_1, ..., u_n` of `Γ`.
///
/// `f[i][j] = g(f(u_i), u_j)`, i.e. row `i` holds the coordinates of
/// `f(u_i)`, so `[u_i, u_j] = f[i][j] e`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneDimCommutatorSpec {
    n: usize,
    a: Vector,
    f: Vec<f64>,
}

impl OneDimCommutatorSpec {
    pub fn new(n: usize, a: Vec<f64>, f_rows: &[Vec<f64>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if a.len() != n {
            return Err(Error::InvalidSpec(format!(
                "a has {} entries, expected {n}",
                a.len()
            )));
        }
        if f_rows.len() != n || f_rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec(format!("f must be {n}x{n}")));
        }
        let f: Vec<f64> = f_rows.iter().flatten().copied().collect();
        for i in 0..n {
            for j in i..n {
                if f[i * n + j] != -f[j * n + i] {
                    return Err(Error::InvalidSpec(format!(
                        "f is not skew-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let spec = Self {
            n,
            a: Vector::new(a),
            f,
        };
        if spec.a.is_zero() && spec.f.iter().all(|x| *x == 0.0) {
            return Err(Error::InvalidSpec(
                "a and f are both zero; the commutator would be trivial".into(),
            ));
        }
        let bad: Vec<_> = spec
            .closure_residuals()
            .into_iter()
            .filter(|(_, r)| r.abs() > CLOSURE_TOLERANCE)
            .collect();
        if !bad.is_empty() {
            return Err(Error::ClosureViolation { triples: bad });
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Vector {
        &self.a
    }

    pub fn f_rows(&self) -> Vec<Vec<f64>> {
        self.f.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `a_i f_jk + a_j f_ki + a_k f_ij` for every `i < j < k`.
    pub fn closure_residuals(&self) -> Vec<((usize, usize, usize), f64)> {
        closure_residuals(self.n, &self.a, &self.f)
    }

    /// `f(x)` for `x` in `Γ`-coordinates.
    pub fn apply_f(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| x[i] * self.f[i * n + j]).sum())
            .collect()
    }
}

fn closure_residuals(n: usize, a: &[f64], f: &[f64]) -> Vec<((usize, usize, usize), f64)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let r = a[i] * f[j * n + k] + a[j] * f[k * n + i] + a[k] * f[i * n + j];
                out.push(((i, j, k), r));
            }
        }
    }
    out
}

/// Basis `u_1, ..., u_n, e`, orthonormal, with `[u_i, e] = a_i e` and
/// `[u_i, u_j] = f[i][j] e`.
pub fn build_one_dim_commutator(spec: &OneDimCommutatorSpec) -> Result<MetricLieAlgebra> {
    let n = spec.n;
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = spec.f[i * n + j];
            if v != 0.0 {
                triplets.push((i, j, n, v));
            }
        }
        if spec.a[i] != 0.0 {
            triplets.push((i, n, n, spec.a[i]));
        }
    }
    let sc = StructureConstants::from_upper_triplets(n + 1, triplets)?;
    let mut labels = ideal_labels(n);
    labels.push("e".into());
    let mla = MetricLieAlgebra::new(
        sc,
        InnerProduct::identity(n + 1),
        labels,
        Provenance::OneDimCommutator { n },
    )?;
    mla.validate(crate::Tolerances::default().jacobi)
        .into_result()?;
    Ok(mla)
}

/// With probability ½ a nilpotent spec (`a = 0`, random skew `f`), otherwise
/// a random `a ≠ 0` with `f = a wᵀ − w aᵀ`. All-zero draws are redrawn.
pub fn random_one_dim_commutator(n: usize, seed: u64) -> OneDimCommutatorSpec {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = sampling::stream("random_one_dim_commutator", &[n as u64, seed]);
    loop {
        let nilpotent = rng.gen_bool(0.5);
        let mut f = vec![0.0; n * n];
        let a = if nilpotent {
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.gen_range(-1.0..=1.0);
                    f[i * n + j] = v;
                    f[j * n + i] = -v;
                }
            }
            vec![0.0; n]
        } else {
            let a = sampling::uniform_vector(&mut rng, n);
            let w = sampling::uniform_vector(&mut rng, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = a[i] * w[j] - w[i] * a[j];
                    f[i * n + j] = v;
                    f[j * n + i] = -v;
                }
            }
            a.into_inner()
        };
        let rows: Vec<Vec<f64>> = f.chunks(n).map(|r| r.to_vec()).collect();
        if let Ok(spec) = OneDimCommutatorSpec::new(n, a, &rows) {
            return spec;
        }
    }
}

type Arg<'a> = (LiftKind, Option<&'a Vector>);

struct Tables<'a> {
    spec: &'a OneDimCommutatorSpec,
    base: MetricLieAlgebra,
    ix: LiftIndexing,
    seed: u64,
    set: ClosedFormSet,
}

/// Every closed form for the one-dimensional-commutator family, evaluated
/// verbatim on basis arguments and seeded random samples in `Γ`.
pub fn g2_closed_forms(spec: &OneDimCommutatorSpec, seed: u64) -> Result<ClosedFormSet> {
    let base = build_one_dim_commutator(spec)?;
    let mut t = Tables {
        spec,
        ix: LiftIndexing::new(spec.n + 1),
        base,
        seed,
        set: ClosedFormSet::default(),
    };
    t.base_connection();
    t.base_sectional();
    t.lifted_connection();
    t.lifted_curvature();
    t.lifted_sectional();
    t.lifted_ricci();
    t.set.sort_by_registry(G2_REGISTRY);
    Ok(t.set)
}

impl Tables<'_> {
    fn n(&self) -> usize {
        self.spec.n
    }

    fn e(&self) -> Vector {
        self.base.basis(self.n())
    }

    fn u(&self, i: usize) -> Vector {
        self.base.basis(i)
    }

    /// `a` as a base vector.
    fn a(&self) -> Vector {
        let mut v = self.spec.a.clone().into_inner();
        v.push(0.0);
        Vector::new(v)
    }

    fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        self.base.inner(x, y)
    }

    /// `f` on the `Γ` part of a base vector.
    fn f(&self, x: &[f64]) -> Vector {
        let mut v = self.spec.apply_f(&x[..self.n()]);
        v.push(0.0);
        Vector::new(v)
    }

    fn f2(&self, x: &[f64]) -> Vector {
        self.f(&self.f(x))
    }

    fn lift(&self, kind: LiftKind, x: &[f64]) -> Vector {
        self.ix.embed(kind, x)
    }

    fn lift_arg(&self, (kind, x): Arg) -> Vector {
        match x {
            Some(x) => self.lift(kind, x),
            None => self.lift(kind, &self.e()),
        }
    }

    fn label(&self, i: usize) -> &str {
        &self.base.labels()[i]
    }

    fn lifted_label(&self, kind: LiftKind, i: usize) -> String {
        self.ix.label(self.label(i), kind)
    }

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

    fn units(&self) -> Vec<Vector> {
        (0..self.n()).map(|i| self.u(i)).collect()
    }

    fn push(&mut self, id: &str, desc: String, space: Space, query: Query, value: ClaimValue) {
        self.set.claims.push(Claim {
            formula_id: id.to_string(),
            argument_desc: desc,
            space,
            query,
            value,
            gating: Gating::Required,
        });
    }

    fn random_gamma(&self, rng: &mut impl Rng) -> Vector {
        let mut v = sampling::uniform_vector(rng, self.n()).into_inner();
        v.push(0.0);
        Vector::new(v)
    }

    fn random_unit(&self, rng: &mut impl Rng) -> Vector {
        loop {
            if let Ok(v) = orthonormalize(self.base.metric(), [self.random_gamma(rng)]) {
                return v.into_iter().next().unwrap();
            }
        }
    }

    fn random_orthonormal_pair(&self, rng: &mut impl Rng) -> (Vector, Vector) {
        loop {
            let pair = [self.random_gamma(rng), self.random_gamma(rng)];
            if let Ok(v) = orthonormalize(self.base.metric(), pair) {
                let mut it = v.into_iter();
                return (it.next().unwrap(), it.next().unwrap());
            }
        }
    }

    /// Basis pairs `(u_i, u_j)` with `i < j` and `RANDOM_SAMPLES`
    /// orthonormal pairs; a single degenerate pair when `n = 1`.
    fn orthonormal_pairs(&self, id: &str) -> Vec<(String, Vector, Vector)> {
        let n = self.n();
        if n == 1 {
            return vec![(format!("{0}, {0}", self.label(0)), self.u(0), self.u(0))];
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                out.push((
                    format!("{}, {}", self.label(i), self.label(j)),
                    self.u(i),
                    self.u(j),
                ));
            }
        }
        for k in 0..RANDOM_SAMPLES {
            let mut rng = sampling::stream(id, &[self.seed, k]);
            let (x, y) = self.random_orthonormal_pair(&mut rng);
            out.push((format!("sample {k}"), x, y));
        }
        out
    }

    /// Basis vectors `u_i` and `RANDOM_SAMPLES` random unit vectors of `Γ`.
    fn unit_vectors(&self, id: &str) -> Vec<(String, Vector)> {
        let mut out: Vec<(String, Vector)> = (0..self.n())
            .map(|i| (self.label(i).to_string(), self.u(i)))
            .collect();
        for k in 0..RANDOM_SAMPLES {
            let mut rng = sampling::stream(id, &[self.seed, k]);
            out.push((format!("sample {k}"), self.random_unit(&mut rng)));
        }
        out
    }

    fn base_connection(&mut self) {
        let n = self.n();
        let a = self.a();
        let e = self.e();
        for p in 0..=n {
            for q in 0..=n {
                let (x, y) = (self.base.basis(p), self.base.basis(q));
                let (id, value) = match (p == n, q == n) {
                    (true, true) => ("E16.nabla_e_e", a.clone()),
                    (true, false) => (
                        "E16.nabla_e_x",
                        self.f(&y).scale(-0.5).axpy(-self.g(&y, &a), &e),
                    ),
                    (false, true) => ("E16.nabla_x_e", self.f(&x).scale(-0.5)),
                    (false, false) => ("E16.nabla_x_y", e.scale(0.5 * self.g(&self.f(&x), &y))),
                };
                let desc = format!("{}, {}", self.label(p), self.label(q));
                self.push(
                    id,
                    desc,
                    Space::Base,
                    Query::Connection { x, y },
                    ClaimValue::Vector(value),
                );
            }
        }
    }

    fn base_sectional(&mut self) {
        for (desc, x, y) in self.orthonormal_pairs("L3.K_xy") {
            let value = -0.75 * self.g(&self.f(&x), &y).powi(2);
            self.push(
                "L3.K_xy",
                desc,
                Space::Base,
                Query::Sectional { x, y },
                ClaimValue::Scalar(value),
            );
        }
        let a = self.a();
        for (desc, x) in self.unit_vectors("L3.K_xe") {
            let fx = self.f(&x);
            let value = 0.25 * self.g(&fx, &fx) - self.g(&a, &x).powi(2);
            self.push(
                "L3.K_xe",
                format!("{desc}, e"),
                Space::Base,
                Query::Sectional { x, y: self.e() },
                ClaimValue::Scalar(value),
            );
        }
    }

    fn l4(&self, p: Arg, q: Arg) -> (&'static str, Vector) {
        use LiftKind::{Complete as C, Vertical as V};
        let a = self.a();
        let e = self.e();
        // −½ f(x) − g(x,a) e
        let minus_half_f_minus_ae = |x: &Vector| self.f(x).scale(-0.5).axpy(-self.g(x, &a), &e);
        match (p, q) {
            ((C, None), (C, None)) => ("L4.nabla_ec_ec", self.lift(C, &a)),
            ((V, None), (V, None)) => ("L4.nabla_ev_ev", self.lift(C, &a)),
            ((C, None), (V, None)) => ("L4.nabla_ec_ev", self.lift(V, &a).scale(0.5)),
            ((V, None), (C, None)) => ("L4.nabla_ev_ec", self.lift(V, &a).scale(0.5)),
            ((C, None), (C, Some(x))) => {
                ("L4.nabla_ec_xc", self.lift(C, &minus_half_f_minus_ae(x)))
            }
            ((C, Some(x)), (C, None)) => ("L4.nabla_xc_ec", self.lift(C, &self.f(x)).scale(-0.5)),
            ((V, Some(x)), (V, None)) => (
                "L4.nabla_xv_ev",
                self.lift(C, &self.f(x).axpy(self.g(x, &a), &e)).scale(-0.5),
            ),
            ((V, None), (V, Some(x))) => (
                "L4.nabla_ev_xv",
                self.lift(C, &self.f(x).axpy(self.g(x, &a), &e)).scale(-0.5),
            ),
            ((V, None), (C, Some(x))) => {
                ("L4.nabla_ev_xc", self.lift(V, &minus_half_f_minus_ae(x)))
            }
            ((C, Some(x)), (V, None)) => ("L4.nabla_xc_ev", self.lift(V, &self.f(x)).scale(0.5)),
            ((C, None), (V, Some(x))) => ("L4.nabla_ec_xv", self.lift(V, &self.f(x)).scale(0.5)),
            ((V, Some(x)), (C, None)) => (
                "L4.nabla_xv_ec",
                self.lift(V, &self.f(x).scale(0.5).axpy(self.g(&a, x), &e)),
            ),
            ((C, Some(x)), (C, Some(y))) => (
                "L4.nabla_xc_yc",
                self.lift(C, &e).scale(0.5 * self.g(&self.f(x), y)),
            ),
            ((C, Some(x)), (V, Some(y))) => (
                "L4.nabla_xc_yv",
                self.lift(V, &e).scale(0.5 * self.g(&self.f(x), y)),
            ),
            ((V, Some(x)), (C, Some(y))) => (
                "L4.nabla_xv_yc",
                self.lift(V, &e).scale(0.5 * self.g(&self.f(x), y)),
            ),
            ((V, Some(_)), (V, Some(_))) => ("L4.nabla_xv_yv", Vector::zeros(self.ix.lifted_dim())),
        }
    }

    fn lifted_connection(&mut self) {
        let units = self.units();
        let basis = self.lifted_basis();
        for &(kp, p) in &basis {
            for &(kq, q) in &basis {
                let a = self.arg_of(kp, p, &units);
                let b = self.arg_of(kq, q, &units);
                let (id, value) = self.l4(a, b);
                let desc = format!("{}, {}", self.lifted_label(kp, p), self.lifted_label(kq, q));
                let query = Query::Connection {
                    x: self.lift_arg(a),
                    y: self.lift_arg(b),
                };
                self.push(id, desc, Space::Lifted, query, ClaimValue::Vector(value));
            }
        }
    }

    fn lifted_curvature(&mut self) {
        use LiftKind::{Complete as C, Vertical as V};
        let n = self.n();
        let a = self.a();
        let e = self.e();
        let mut rows: Vec<(&str, String, [Vector; 3], Vector)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.u(i), self.u(j), self.u(k));
                    let (fx, fy, fz) = (self.f(&x), self.f(&y), self.f(&z));
                    // −¼ g(f(y),z) f(x) + ¼ g(f(x),z) f(y)
                    let common = fx
                        .scale(-0.25 * self.g(&fy, &z))
                        .axpy(0.25 * self.g(&fx, &z), &fy);
                    let ccc = common.axpy(0.5, &fz).axpy(self.g(&z, &a), &e);
                    let ccv = common.axpy(-0.5 * self.g(&fx, &y), &fz);
                    rows.push((
                        "L5.R_xc_yc_zc",
                        format!(
                            "{}, {}, {}",
                            self.lifted_label(C, i),
                            self.lifted_label(C, j),
                            self.lifted_label(C, k)
                        ),
                        [self.lift(C, &x), self.lift(C, &y), self.lift(C, &z)],
                        self.lift(C, &ccc),
                    ));
                    rows.push((
                        "L5.R_xc_yc_zv",
                        format!(
                            "{}, {}, {}",
                            self.lifted_label(C, i),
                            self.lifted_label(C, j),
                            self.lifted_label(V, k)
                        ),
                        [self.lift(C, &x), self.lift(C, &y), self.lift(V, &z)],
                        self.lift(V, &ccv),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (self.u(i), self.u(j));
                let (fx, fy) = (self.f(&x), self.f(&y));
                let bxy = self.g(&fx, &y);
                // ¼ g(f(x),y) f(x)^v + ½ g(f(x),y) (f(y) + g(y,a) e)^c
                let value = &self.lift(V, &fx).scale(0.25 * bxy)
                    + &self.lift(C, &fy.axpy(self.g(&y, &a), &e)).scale(0.5 * bxy);
                rows.push((
                    "L5.R_xc_yv_yv",
                    format!(
                        "{}, {}, {}",
                        self.lifted_label(C, i),
                        self.lifted_label(V, j),
                        self.lifted_label(V, j)
                    ),
                    [self.lift(C, &x), self.lift(V, &y), self.lift(V, &y)],
                    value,
                ));
                rows.push((
                    "L5.R_xv_yv_yv",
                    format!(
                        "{}, {}, {}",
                        self.lifted_label(V, i),
                        self.lifted_label(V, j),
                        self.lifted_label(V, j)
                    ),
                    [self.lift(V, &x), self.lift(V, &y), self.lift(V, &y)],
                    Vector::zeros(self.ix.lifted_dim()),
                ));
            }
        }
        for i in 0..n {
            let x = self.u(i);
            let fxa = self.g(&self.f(&x), &a);
            let f2x = self.f2(&x);
            let ax = self.g(&a, &x);
            // (½ g(f(x),a) e − ¼ (f²(x) + g(f(x),a) e) − g(a,x) a)^c
            let cvv = e
                .scale(0.5 * fxa)
                .axpy(-0.25, &f2x.axpy(fxa, &e))
                .axpy(-ax, &a);
            // (½ g(f(x),a) e − ¼ f²(x) − g(a,x) a)^v
            let vcc = e.scale(0.5 * fxa).axpy(-0.25, &f2x).axpy(-ax, &a);
            // (½ g(f(x),a) e − ¼ f²(x) − ½ g(f(x),a) e + ¼ g(x,a) a)^v
            let vvv = e
                .scale(0.5 * fxa)
                .axpy(-0.25, &f2x)
                .axpy(-0.5 * fxa, &e)
                .axpy(0.25 * ax, &a);
            let ec = self.lift(C, &e);
            let ev = self.lift(V, &e);
            rows.push((
                "L5.R_xc_ev_ev",
                format!("{}, e^v, e^v", self.lifted_label(C, i)),
                [self.lift(C, &x), ev.clone(), ev.clone()],
                self.lift(C, &cvv),
            ));
            rows.push((
                "L5.R_xv_ec_ec",
                format!("{}, e^c, e^c", self.lifted_label(V, i)),
                [self.lift(V, &x), ec.clone(), ec],
                self.lift(V, &vcc),
            ));
            rows.push((
                "L5.R_xv_ev_ev",
                format!("{}, e^v, e^v", self.lifted_label(V, i)),
                [self.lift(V, &x), ev.clone(), ev],
                self.lift(V, &vvv),
            ));
        }
        for (id, desc, [x, y, z], value) in rows {
            self.push(
                id,
                desc,
                Space::Lifted,
                Query::Curvature { x, y, z },
                ClaimValue::Vector(value),
            );
        }
    }

    fn lifted_sectional(&mut self) {
        use LiftKind::{Complete as C, Vertical as V};
        let n = self.n();
        let a = self.a();
        let e = self.e();

        let mut rows: Vec<(&str, String, Vector, Vector, f64)> = Vec::new();
        for (id, kx, ky) in [("E20.K_xc_yc", C, C), ("E20.K_xv_yv", V, V)] {
            for (desc, x, y) in self.orthonormal_pairs(id) {
                let value = if kx == C {
                    -0.75 * self.g(&self.f(&x), &y).powi(2)
                } else {
                    0.0
                };
                rows.push((
                    id,
                    lift_desc(&desc, kx, ky),
                    self.lift(kx, &x),
                    self.lift(ky, &y),
                    value,
                ));
            }
        }
        {
            let id = "E20.K_xc_yv";
            let mut args: Vec<(String, Vector, Vector)> = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    args.push((
                        format!("{}, {}", self.label(i), self.label(j)),
                        self.u(i),
                        self.u(j),
                    ));
                }
            }
            if n >= 2 {
                for k in 0..RANDOM_SAMPLES {
                    let mut rng = sampling::stream(id, &[self.seed, k]);
                    let (x, y) = self.random_orthonormal_pair(&mut rng);
                    args.push((format!("sample {k}"), x, y));
                }
            }
            for (desc, x, y) in args {
                let value = -0.5 * self.g(&self.f(&x), &y).powi(2);
                rows.push((
                    id,
                    lift_desc(&desc, C, V),
                    self.lift(C, &x),
                    self.lift(V, &y),
                    value,
                ));
            }
        }
        let e_planes = [
            ("E20.K_xc_ec", C, C),
            ("E20.K_xc_ev", C, V),
            ("E20.K_xv_ec", V, C),
            ("E20.K_xv_ev", V, V),
        ];
        for (id, kx, ke) in e_planes {
            for (desc, x) in self.unit_vectors(id) {
                let fx = self.f(&x);
                let value = match (kx, ke) {
                    (C, C) => -0.25 * self.g(&fx, &fx),
                    (V, V) => 0.25 * self.g(&fx, &fx) + 0.25 * self.g(&x, &a).powi(2),
                    _ => -0.25 * self.g(&self.f2(&x), &x) - self.g(&a, &x).powi(2),
                };
                let desc = if desc.starts_with("sample") {
                    desc
                } else {
                    format!("{}, {}", self.ix.label(&desc, kx), self.ix.label("e", ke))
                };
                rows.push((id, desc, self.lift(kx, &x), self.lift(ke, &e), value));
            }
        }
        for (id, desc, x, y, value) in rows {
            self.push(
                id,
                desc,
                Space::Lifted,
                Query::Sectional { x, y },
                ClaimValue::Scalar(value),
            );
        }
    }

    fn lifted_ricci(&mut self) {
        use LiftKind::{Complete as C, Vertical as V};
        let n = self.n();
        let a = self.a();
        let e = self.e();
        let units = self.units();
        let trace_f2: f64 = units.iter().map(|u| self.g(&self.f2(u), u)).sum();
        let a_sq: f64 = units.iter().map(|u| self.g(&a, u).powi(2)).sum();
        let gaa = self.g(&a, &a);

        let r_ec = -gaa - 0.5 * trace_f2 - 2.0 * a_sq;
        self.push(
            "E21.r_ec",
            "e^c".into(),
            Space::Lifted,
            Query::RicciDirection {
                x: self.lift(C, &e),
            },
            ClaimValue::Scalar(r_ec),
        );
        let r_ev = -0.25 * gaa - 0.5 * trace_f2 - a_sq;
        self.push(
            "E21.r_ev",
            "e^v".into(),
            Space::Lifted,
            Query::RicciDirection {
                x: self.lift(V, &e),
            },
            ClaimValue::Scalar(r_ev),
        );
        for (id, kind) in [("E21.r_xc", C), ("E21.r_xv", V)] {
            for (desc, x) in self.unit_vectors(id) {
                let f2xx = self.g(&self.f2(&x), &x);
                let cross: f64 = units.iter().map(|u| self.g(&self.f2(u), &x).powi(2)).sum();
                let value = if kind == C {
                    -0.5 * f2xx - 1.5 * cross - 2.0 * self.g(&a, &x).powi(2)
                } else {
                    -0.25 * f2xx - 0.75 * cross
                };
                let desc = if desc.starts_with("sample") {
                    desc
                } else {
                    self.ix.label(&desc, kind)
                };
                self.push(
                    id,
                    desc,
                    Space::Lifted,
                    Query::RicciDirection {
                        x: self.lift(kind, &x),
                    },
                    ClaimValue::Scalar(value),
                );
            }
        }
        debug_assert!(n >= 1);
    }
}

/// `"u1, u2"` to `"u1^c, u2^v"`; sample descriptions pass through.
fn lift_desc(desc: &str, kx: LiftKind, ky: LiftKind) -> String {
    match desc.split_once(", ") {
        Some((x, y)) if !desc.starts_with("sample") => {
            format!("{x}^{}, {y}^{}", kx.suffix(), ky.suffix())
        }
        _ => desc.to_string(),
    }
}
