//! Metric Lie algebras given by structure constants and an inner product.

use std::fmt;
use std::ops::{Add, Deref, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Cholesky};

/// Coordinates of an algebra element in a fixed basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The `i`-th canonical basis vector of dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| s * x).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Vector) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;

    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

/// Dense structure constants: `c[i][j][k]` is the `k`-th coordinate of `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; n * n * n],
        }
    }

    /// Builds constants from the brackets `[e_i, e_j]` with `i < j`; the
    /// lower half is the exact negation.
    pub fn from_fn(n: usize, mut bracket: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut sc = Self::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = bracket(i, j, k);
                    sc.c[(i * n + j) * n + k] = v;
                    sc.c[(j * n + i) * n + k] = -v;
                }
            }
        }
        sc
    }

    /// Sparse `(i, j, k, value)` triplets with `i < j`, reflected to `j > i`.
    /// Repeated triplets are rejected.
    pub fn from_upper_triplets(
        n: usize,
        triplets: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Result<Self> {
        let mut sc = Self::zero(n);
        let mut seen = vec![false; n * n * n];
        for (i, j, k, v) in triplets {
            if i >= n || j >= n || k >= n {
                return Err(Error::Other(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {n}"
                )));
            }
            if i >= j {
                return Err(Error::Other(format!(
                    "structure constant ({i},{j},{k}) must have i < j"
                )));
            }
            let at = (i * n + j) * n + k;
            if seen[at] {
                return Err(Error::Other(format!(
                    "structure constant ({i},{j},{k}) given twice"
                )));
            }
            seen[at] = true;
            sc.c[at] = v;
            sc.c[(j * n + i) * n + k] = -v;
        }
        Ok(sc)
    }

    /// Takes a full dense array verbatim, without enforcing antisymmetry.
    /// Used to check externally produced tables; [`MetricLieAlgebra::validate`]
    /// reports any asymmetry.
    pub fn from_dense(n: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                actual: c.len(),
            });
        }
        Ok(Self { n, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.n + j) * self.n;
        &self.c[start..start + self.n]
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vector {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s == 0.0 {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.basis_bracket(i, j)) {
                    *o += s * c;
                }
            }
        }
        Vector(out)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.c)
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| *x == 0.0)
    }

    /// Nonzero upper-triangle entries `(i, j, k, value)` with `i < j`, in
    /// lexicographic order.
    pub fn upper_triplets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `sum_m c[i][j][m] c[m][k][l] + c[j][k][m] c[m][i][l] + c[k][i][m] c[m][j][l]`
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        (0..self.n)
            .map(|m| {
                self.get(i, j, m) * self.get(m, k, l)
                    + self.get(j, k, m) * self.get(m, i, l)
                    + self.get(k, i, m) * self.get(m, j, l)
            })
            .sum()
    }
}

/// A symmetric positive definite Gram matrix on the algebra.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    n: usize,
    g: Vec<f64>,
    chol: Cholesky,
}

impl PartialEq for InnerProduct {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.g == other.g
    }
}

impl InnerProduct {
    /// Row-major `n x n` matrix. Rejects exact asymmetry and failed Cholesky.
    pub fn new(n: usize, g: Vec<f64>) -> Result<Self> {
        if g.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: g.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if g[i * n + j] != g[j * n + i] {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        residual: (g[i * n + j] - g[j * n + i]).abs(),
                    });
                }
            }
        }
        let chol = Cholesky::factor(n, &g)?;
        Ok(Self { n, g, chol })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            g.extend_from_slice(row);
        }
        Self::new(n, g)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n]).expect("identity is SPD")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut g = vec![0.0; n * n];
        for (i, di) in d.iter().enumerate() {
            g[i * n + i] = *di;
        }
        Self::new(n, g)
    }

    /// Block-diagonal sum of `blocks`.
    pub fn block_diagonal(blocks: &[&InnerProduct]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut g = vec![0.0; n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    g[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.n;
        }
        Self::new(n, g).expect("block sum of SPD matrices is SPD")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.n + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.g
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.g.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `g(x, y) = xᵀ G y`
    pub fn apply(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(x, &linalg::mat_vec(self.n, &self.g, y))
    }

    /// Lowers an index: the covector `G x`.
    pub fn lower(&self, x: &[f64]) -> Vec<f64> {
        linalg::mat_vec(self.n, &self.g, x)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.apply(x, x).sqrt()
    }

    pub fn inverse(&self) -> Vec<f64> {
        self.chol.inverse()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }

    pub(crate) fn cholesky(&self) -> &Cholesky {
        &self.chol
    }
}

/// Solves `g w = rhs` for the SPD Gram matrix `g`.
pub fn solve_spd(g: &InnerProduct, rhs: &[f64]) -> Result<Vector> {
    g.cholesky().solve(rhs).map(Vector)
}

/// Default threshold below which an intermediate Gram-Schmidt vector is
/// treated as dependent.
pub const GRAM_SCHMIDT_THRESHOLD: f64 = 1e-12;

/// Orthonormalizes `e_1, ..., e_n` in index order with respect to `g`
/// (modified Gram-Schmidt).
pub fn gram_schmidt(g: &InnerProduct) -> Result<Vec<Vector>> {
    orthonormalize(g, (0..g.dim()).map(|i| Vector::basis(g.dim(), i)))
}

/// Modified Gram-Schmidt over arbitrary input vectors.
pub fn orthonormalize(
    g: &InnerProduct,
    vectors: impl IntoIterator<Item = Vector>,
) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = Vec::new();
    for (index, v) in vectors.into_iter().enumerate() {
        let mut w = v;
        for q in &out {
            let p = g.apply(q, &w);
            w = w.axpy(-p, q);
        }
        let norm = g.norm(&w);
        if !(norm >= GRAM_SCHMIDT_THRESHOLD) {
            return Err(Error::Degenerate { index, norm });
        }
        out.push(w.scale(1.0 / norm));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Generic,
    Special { n: usize, lambda: f64 },
    OneDimCommutator { n: usize },
    TangentLift { parent: Box<Provenance> },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Generic => write!(f, "generic"),
            Provenance::Special { n, lambda } => write!(f, "special(n={n}, lambda={lambda})"),
            Provenance::OneDimCommutator { n } => write!(f, "one-dim-commutator(n={n})"),
            Provenance::TangentLift { parent } => write!(f, "tangent-lift({parent})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum Violation {
    Antisymmetry {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residual: f64,
    },
    MetricSymmetry {
        i: usize,
        j: usize,
        residual: f64,
    },
    MetricPositivity {
        pivot: usize,
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k, residual } => {
                write!(f, "antisymmetry at ({i},{j},{k}), residual {residual:e}")
            }
            Violation::Jacobi {
                i,
                j,
                k,
                l,
                residual,
            } => write!(f, "Jacobi at ({i},{j},{k};{l}), residual {residual:e}"),
            Violation::MetricSymmetry { i, j, residual } => {
                write!(f, "metric symmetry at ({i},{j}), residual {residual:e}")
            }
            Violation::MetricPositivity { pivot, value } => {
                write!(
                    f,
                    "metric not positive definite at pivot {pivot} ({value:e})"
                )
            }
        }
    }
}

/// Outcome of [`MetricLieAlgebra::validate`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
    /// Largest Jacobi residual seen, before scaling.
    pub max_jacobi_residual: f64,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Invalid(self.violations))
        }
    }
}

/// Structure constants, metric and labels of a Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    sc: StructureConstants,
    metric: InnerProduct,
    labels: Vec<String>,
    provenance: Provenance,
}

impl MetricLieAlgebra {
    pub fn new(
        sc: StructureConstants,
        metric: InnerProduct,
        labels: Vec<String>,
        provenance: Provenance,
    ) -> Result<Self> {
        let n = sc.dim();
        if metric.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: metric.dim(),
            });
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: labels.len(),
            });
        }
        Ok(Self {
            sc,
            metric,
            labels,
            provenance,
        })
    }

    /// Labels `e1, ..., en`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn metric(&self) -> &InnerProduct {
        &self.metric
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vector {
        self.sc.bracket(x, y)
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.metric.apply(x, y)
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.dim(), i)
    }

    /// The `g`-orthonormal basis obtained from `e_1, ..., e_n` in index order.
    pub fn orthonormal_basis(&self) -> Result<Vec<Vector>> {
        gram_schmidt(&self.metric)
    }

    /// Checks antisymmetry (exactly), the Jacobi identity (relative to the
    /// squared largest structure constant) and the metric.
    pub fn validate(&self, tol_jacobi: f64) -> Validation {
        let n = self.dim();
        let sc = &self.sc;
        let mut out = Validation::default();

        let mut antisymmetric = true;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let r = sc.get(i, j, k) + sc.get(j, i, k);
                    if r != 0.0 {
                        antisymmetric = false;
                        out.violations.push(Violation::Antisymmetry {
                            i,
                            j,
                            k,
                            residual: r.abs(),
                        });
                    }
                }
            }
        }

        let cmax = sc.max_abs();
        let bound = tol_jacobi * cmax * cmax;
        // The cyclic sum is alternating in (i, j, k) once c is antisymmetric.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if antisymmetric && !(i < j && j < k) {
                        continue;
                    }
                    for l in 0..n {
                        let r = sc.jacobi_residual(i, j, k, l).abs();
                        out.max_jacobi_residual = out.max_jacobi_residual.max(r);
                        if r > bound {
                            out.violations.push(Violation::Jacobi {
                                i,
                                j,
                                k,
                                l,
                                residual: r,
                            });
                        }
                    }
                }
            }
        }

        let g = self.metric.matrix();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = (g[i * n + j] - g[j * n + i]).abs();
                if r != 0.0 {
                    out.violations
                        .push(Violation::MetricSymmetry { i, j, residual: r });
                }
            }
        }
        if let Err(Error::NotPositiveDefinite { pivot, value }) = Cholesky::factor(n, g) {
            out.violations
                .push(Violation::MetricPositivity { pivot, value });
        }
        out
    }
}

impl Index<(usize, usize, usize)> for StructureConstants {
    type Output = f64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.c[(i * self.n + j) * self.n + k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so3() -> MetricLieAlgebra {
        let sc = StructureConstants::from_fn(3, |i, j, k| levi_civita_symbol(i, j, k));
        MetricLieAlgebra::new(
            sc,
            InnerProduct::identity(3),
            MetricLieAlgebra::default_labels(3),
            Provenance::Generic,
        )
        .unwrap()
    }

    fn levi_civita_symbol(i: usize, j: usize, k: usize) -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn abelian_identity_is_valid() {
        let mla = MetricLieAlgebra::new(
            StructureConstants::zero(4),
            InnerProduct::identity(4),
            MetricLieAlgebra::default_labels(4),
            Provenance::Generic,
        )
        .unwrap();
        assert!(mla.validate(1e-10).is_ok());
    }

    #[test]
    fn asymmetric_constants_are_reported() {
        let mut c = vec![0.0; 27];
        c[5] = 1.0; // (0,1,2)
        c[11] = 1.0; // (1,0,2)
        let sc = StructureConstants::from_dense(3, c).unwrap();
        let mla = MetricLieAlgebra::new(
            sc,
            InnerProduct::identity(3),
            MetricLieAlgebra::default_labels(3),
            Provenance::Generic,
        )
        .unwrap();
        let v = mla.validate(1e-10);
        assert!(v.violations.contains(&Violation::Antisymmetry {
            i: 0,
            j: 1,
            k: 2,
            residual: 2.0
        }));
    }

    #[test]
    fn so3_satisfies_jacobi_by_brute_force() {
        // Independent check of the alternating sum over every index tuple.
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut s = 0.0;
                        for m in 0..3 {
                            s += levi_civita_symbol(i, j, m) * levi_civita_symbol(m, k, l)
                                + levi_civita_symbol(j, k, m) * levi_civita_symbol(m, i, l)
                                + levi_civita_symbol(k, i, m) * levi_civita_symbol(m, j, l);
                        }
                        worst = worst.max(f64::abs(s));
                    }
                }
            }
        }
        assert_eq!(worst, 0.0);
        assert!(so3().validate(1e-10).is_ok());
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [e0,e1]=e1, [e0,e2]=e2, [e1,e2]=e0 violates Jacobi.
        let sc = StructureConstants::from_upper_triplets(
            3,
            [(0, 1, 1, 1.0), (0, 2, 2, 1.0), (1, 2, 0, 1.0)],
        )
        .unwrap();
        let mla = MetricLieAlgebra::new(
            sc,
            InnerProduct::identity(3),
            MetricLieAlgebra::default_labels(3),
            Provenance::Generic,
        )
        .unwrap();
        let v = mla.validate(1e-10);
        assert!(!v.is_ok());
        assert!(v
            .violations
            .iter()
            .all(|x| matches!(x, Violation::Jacobi { .. })));
    }

    #[test]
    fn triplets_must_be_upper() {
        assert!(StructureConstants::from_upper_triplets(2, [(1, 0, 0, 1.0)]).is_err());
        assert!(StructureConstants::from_upper_triplets(2, [(0, 1, 5, 1.0)]).is_err());
        assert!(
            StructureConstants::from_upper_triplets(2, [(0, 1, 0, 1.0), (0, 1, 0, 2.0)]).is_err()
        );
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let w = solve_spd(&InnerProduct::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(w.coords(), &[1.0, 2.0, 3.0]);
        let g = InnerProduct::diagonal(&[2.0, 4.0]).unwrap();
        let w = solve_spd(&g, &[2.0, 4.0]).unwrap();
        assert!(linalg::max_abs_diff(&w, &[1.0, 1.0]) <= 1e-15);
    }

    #[test]
    fn inner_product_rejects_bad_matrices() {
        assert!(matches!(
            InnerProduct::new(2, vec![1.0, 0.5, 0.4, 1.0]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            InnerProduct::new(2, vec![1.0, 0.0, 0.0, -1.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn gram_schmidt_identity_and_diagonal() {
        let b = gram_schmidt(&InnerProduct::identity(3)).unwrap();
        for (i, v) in b.iter().enumerate() {
            assert_eq!(v, &Vector::basis(3, i));
        }
        let b = gram_schmidt(&InnerProduct::diagonal(&[4.0, 9.0]).unwrap()).unwrap();
        assert_eq!(b[0].coords(), &[0.5, 0.0]);
        assert_eq!(b[1].coords(), &[0.0, 1.0 / 3.0]);
    }

    #[test]
    fn orthonormalize_rejects_dependent_input() {
        let g = InnerProduct::identity(2);
        let r = orthonormalize(
            &g,
            [Vector::new(vec![1.0, 1.0]), Vector::new(vec![2.0, 2.0])],
        );
        assert!(matches!(r, Err(Error::Degenerate { index: 1, .. })));
    }
}
