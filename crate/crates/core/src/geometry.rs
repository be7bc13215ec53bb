//! Levi-Civita connection and curvature of a left-invariant metric,
//! computed generically from structure constants.
//!
//! Every quantity here is evaluated on left-invariant fields, so covariant
//! derivatives reduce to bilinear maps on the algebra:
//!
//! ```text
//! ad*_x y   defined by  g(ad*_x y, z) = g(y, [x, z])
//! ∇_x y     = ½([x, y] − ad*_x y − ad*_y x)
//! R(x, y) z = ∇_x ∇_y z − ∇_y ∇_x z − ∇_[x,y] z
//! ```

use serde::Serialize;

use crate::algebra::{solve_spd, MetricLieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::sampling;

/// Relative Gram-determinant threshold below which a plane is degenerate.
pub const PLANE_DEGENERACY: f64 = 1e-12;

/// `gamma[i][j][k]` is the `k`-th coordinate of `∇_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    n: usize,
    gamma: Vec<f64>,
}

impl ConnectionCoefficients {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            gamma: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.n + j) * self.n + k]
    }

    /// Coordinates of `∇_{e_i} e_j`.
    pub fn pair(&self, i: usize, j: usize) -> &[f64] {
        let s = (i * self.n + j) * self.n;
        &self.gamma[s..s + self.n]
    }

    pub fn set_pair(&mut self, i: usize, j: usize, v: &[f64]) {
        let s = (i * self.n + j) * self.n;
        self.gamma[s..s + self.n].copy_from_slice(v);
    }

    /// `∇_x y` by bilinear extension.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Vector {
        let mut out = vec![0.0; self.n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s == 0.0 {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.pair(i, j)) {
                    *o += s * c;
                }
            }
        }
        Vector::new(out)
    }

    /// Largest `|gamma[i][j][k] - gamma[j][i][k] - c[i][j][k]|`.
    pub fn torsion_residual(&self, mla: &MetricLieAlgebra) -> f64 {
        let n = self.n;
        let sc = mla.structure();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = self.get(i, j, k) - self.get(j, i, k) - sc.get(i, j, k);
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// Largest `|g(∇_i e_j, e_k) + g(e_j, ∇_i e_k)|`.
    pub fn metric_compatibility_residual(&self, mla: &MetricLieAlgebra) -> f64 {
        let n = self.n;
        let g = mla.metric();
        let lowered: Vec<Vec<f64>> = (0..n * n)
            .map(|p| g.lower(self.pair(p / n, p % n)))
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = lowered[i * n + j][k] + lowered[i * n + k][j];
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        crate::linalg::max_abs_diff(&self.gamma, &other.gamma)
    }
}

/// `r[i][j][k][l]` is the `l`-th coordinate of `R(e_i, e_j) e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<f64>,
}

/// Worst violations of the algebraic curvature identities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CurvatureSymmetryResiduals {
    /// `R(e_i,e_j) = -R(e_j,e_i)`
    pub skew_first_pair: f64,
    /// `R_ijkl = -R_ijlk`
    pub skew_last_pair: f64,
    /// `R_ijkl = R_klij`
    pub pair_exchange: f64,
    /// first Bianchi identity
    pub bianchi: f64,
}

impl CurvatureSymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.skew_first_pair
            .max(self.skew_last_pair)
            .max(self.pair_exchange)
            .max(self.bianchi)
    }
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// Coordinates of `R(e_i, e_j) e_k`.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> &[f64] {
        let s = ((i * self.n + j) * self.n + k) * self.n;
        &self.r[s..s + self.n]
    }

    /// `R(x, y) z` by trilinear extension.
    pub fn apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vector {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let s = xy * z[k];
                    if s == 0.0 {
                        continue;
                    }
                    for (o, c) in out.iter_mut().zip(self.triple(i, j, k)) {
                        *o += s * c;
                    }
                }
            }
        }
        Vector::new(out)
    }

    /// `R_ijkl = g(R(e_i, e_j) e_k, e_l)` as a dense array.
    pub fn lowered(&self, mla: &MetricLieAlgebra) -> Vec<f64> {
        let n = self.n;
        let g = mla.metric();
        let mut out = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.extend(g.lower(self.triple(i, j, k)));
                }
            }
        }
        out
    }

    pub fn symmetry_residuals(&self, mla: &MetricLieAlgebra) -> CurvatureSymmetryResiduals {
        let n = self.n;
        let low = self.lowered(mla);
        let at = |i: usize, j: usize, k: usize, l: usize| low[((i * n + j) * n + k) * n + l];
        let mut res = CurvatureSymmetryResiduals::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        res.skew_first_pair = res
                            .skew_first_pair
                            .max((self.get(i, j, k, l) + self.get(j, i, k, l)).abs());
                        res.skew_last_pair = res
                            .skew_last_pair
                            .max((at(i, j, k, l) + at(i, j, l, k)).abs());
                        res.pair_exchange = res
                            .pair_exchange
                            .max((at(i, j, k, l) - at(k, l, i, j)).abs());
                        let b = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        res.bianchi = res.bianchi.max(b.abs());
                    }
                }
            }
        }
        res
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        crate::linalg::max_abs_diff(&self.r, &other.r)
    }
}

/// `ad*_x y`, the metric adjoint of `ad_x` applied to `y`.
pub fn coadjoint(mla: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> Result<Vector> {
    let n = mla.dim();
    check_dim(n, x)?;
    check_dim(n, y)?;
    let gy = mla.metric().lower(y);
    let sc = mla.structure();
    // v_k = g(y, [x, e_k])
    let v: Vec<f64> = (0..n)
        .map(|k| {
            let mut s = 0.0;
            for (i, xi) in x.iter().enumerate() {
                if *xi == 0.0 {
                    continue;
                }
                for (m, gym) in gy.iter().enumerate() {
                    s += xi * sc.get(i, k, m) * gym;
                }
            }
            s
        })
        .collect();
    solve_spd(mla.metric(), &v)
}

/// Levi-Civita connection on basis pairs from the Koszul formula.
pub fn levi_civita(mla: &MetricLieAlgebra) -> Result<ConnectionCoefficients> {
    let n = mla.dim();
    let basis: Vec<Vector> = (0..n).map(|i| mla.basis(i)).collect();
    let mut ad_star = Vec::with_capacity(n * n);
    for x in &basis {
        for y in &basis {
            ad_star.push(coadjoint(mla, x, y)?);
        }
    }
    let mut conn = ConnectionCoefficients::zero(n);
    let sc = mla.structure();
    for i in 0..n {
        for j in 0..n {
            let ij = &ad_star[i * n + j];
            let ji = &ad_star[j * n + i];
            let v: Vec<f64> = (0..n)
                .map(|k| 0.5 * (sc.get(i, j, k) - ij[k] - ji[k]))
                .collect();
            conn.set_pair(i, j, &v);
        }
    }
    Ok(conn)
}

/// Riemann tensor of `conn` on basis triples.
pub fn riemann(mla: &MetricLieAlgebra, conn: &ConnectionCoefficients) -> CurvatureTensor {
    let n = mla.dim();
    let sc = mla.structure();
    let mut r = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        for j in 0..n {
            let bracket = sc.basis_bracket(i, j);
            for k in 0..n {
                let ei = Vector::basis(n, i);
                let ej = Vector::basis(n, j);
                let first = conn.apply(&ei, conn.pair(j, k));
                let second = conn.apply(&ej, conn.pair(i, k));
                let third = conn.apply(bracket, &Vector::basis(n, k));
                r.extend((0..n).map(|l| first[l] - second[l] - third[l]));
            }
        }
    }
    CurvatureTensor { n, r }
}

/// Sectional curvature `g(R(x,y)y, x) / (g(x,x) g(y,y) − g(x,y)²)`.
pub fn sectional(
    mla: &MetricLieAlgebra,
    curv: &CurvatureTensor,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let n = mla.dim();
    check_dim(n, x)?;
    check_dim(n, y)?;
    let xx = mla.inner(x, x);
    let yy = mla.inner(y, y);
    let xy = mla.inner(x, y);
    let norms = xx * yy;
    let det = norms - xy * xy;
    if !(det > PLANE_DEGENERACY * norms) {
        return Err(Error::DegeneratePlane {
            relative_det: if norms > 0.0 { det / norms } else { 0.0 },
        });
    }
    let ryy = curv.apply(x, y, y);
    Ok(mla.inner(&ryy, x) / det)
}

/// `Ric(x, y) = Σ g(R(u_i, x) y, u_i)` over the index-order Gram-Schmidt basis.
pub fn ricci(mla: &MetricLieAlgebra, curv: &CurvatureTensor, x: &[f64], y: &[f64]) -> Result<f64> {
    let basis = mla.orthonormal_basis()?;
    ricci_in_basis(mla, curv, &basis, x, y)
}

/// The Ricci trace over a caller-supplied orthonormal basis.
pub fn ricci_in_basis(
    mla: &MetricLieAlgebra,
    curv: &CurvatureTensor,
    basis: &[Vector],
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let n = mla.dim();
    check_dim(n, x)?;
    check_dim(n, y)?;
    Ok(basis
        .iter()
        .map(|u| mla.inner(&curv.apply(u, x, y), u))
        .sum())
}

/// The Ricci trace as `Σ_ij (g⁻¹)_ij g(R(e_i, x) y, e_j)`; no orthonormal
/// basis involved.
pub fn ricci_via_inverse(
    mla: &MetricLieAlgebra,
    curv: &CurvatureTensor,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let n = mla.dim();
    check_dim(n, x)?;
    check_dim(n, y)?;
    let ginv = mla.metric().inverse();
    let mut s = 0.0;
    for i in 0..n {
        let low = mla.metric().lower(&curv.apply(&mla.basis(i), x, y));
        for j in 0..n {
            s += ginv[i * n + j] * low[j];
        }
    }
    Ok(s)
}

/// `Ric(x, x)`; the direction must be nonzero.
pub fn ricci_direction(mla: &MetricLieAlgebra, curv: &CurvatureTensor, x: &[f64]) -> Result<f64> {
    check_dim(mla.dim(), x)?;
    if x.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroVector);
    }
    ricci(mla, curv, x, x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSectional {
    pub is_constant: bool,
    /// Mean over all sampled planes.
    pub value: f64,
    /// Largest `|K - mean|`.
    pub max_deviation: f64,
    pub planes: usize,
}

/// Samples every coordinate plane plus `trials` random planes; trial `t`
/// draws from the stream keyed by `(seed, t)`.
pub fn constant_sectional_check(
    mla: &MetricLieAlgebra,
    curv: &CurvatureTensor,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ConstantSectional> {
    let n = mla.dim();
    if n < 2 {
        return Err(Error::Other(format!(
            "constant sectional check needs dimension >= 2, got {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::Other(
            "constant sectional check needs trials >= 1".into(),
        ));
    }
    let mut values = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(sectional(mla, curv, &mla.basis(i), &mla.basis(j))?);
        }
    }
    for t in 0..trials {
        values.push(random_plane_sectional(mla, curv, seed, t as u64)?);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    Ok(ConstantSectional {
        is_constant: max_deviation <= tol,
        value: mean,
        max_deviation,
        planes: values.len(),
    })
}

fn random_plane_sectional(
    mla: &MetricLieAlgebra,
    curv: &CurvatureTensor,
    seed: u64,
    trial: u64,
) -> Result<f64> {
    let mut rng = sampling::stream("constant_sectional", &[seed, trial]);
    loop {
        let x = sampling::uniform_vector(&mut rng, mla.dim());
        let y = sampling::uniform_vector(&mut rng, mla.dim());
        match sectional(mla, curv, &x, &y) {
            Err(Error::DegeneratePlane { .. }) => continue,
            other => return other,
        }
    }
}

fn check_dim(n: usize, v: &[f64]) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            actual: v.len(),
        })
    }
}

/// Connection and curvature of one algebra, computed once.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub algebra: MetricLieAlgebra,
    pub connection: ConnectionCoefficients,
    pub curvature: CurvatureTensor,
    orthonormal: Vec<Vector>,
}

impl Geometry {
    pub fn compute(mla: &MetricLieAlgebra) -> Result<Self> {
        let connection = levi_civita(mla)?;
        let curvature = riemann(mla, &connection);
        let orthonormal = mla.orthonormal_basis()?;
        Ok(Self {
            algebra: mla.clone(),
            connection,
            curvature,
            orthonormal,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn nabla(&self, x: &[f64], y: &[f64]) -> Vector {
        self.connection.apply(x, y)
    }

    pub fn curvature_at(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vector {
        self.curvature.apply(x, y, z)
    }

    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        sectional(&self.algebra, &self.curvature, x, y)
    }

    pub fn ricci(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        ricci_in_basis(&self.algebra, &self.curvature, &self.orthonormal, x, y)
    }

    pub fn ricci_direction(&self, x: &[f64]) -> Result<f64> {
        if x.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroVector);
        }
        self.ricci(x, x)
    }

    /// Ricci tensor on basis pairs, row-major.
    pub fn ricci_matrix(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(
                    self.ricci(&self.algebra.basis(i), &self.algebra.basis(j))
                        .expect("dimensions match"),
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{InnerProduct, Provenance, StructureConstants};

    fn algebra(
        n: usize,
        triplets: &[(usize, usize, usize, f64)],
        g: InnerProduct,
    ) -> MetricLieAlgebra {
        MetricLieAlgebra::new(
            StructureConstants::from_upper_triplets(n, triplets.iter().copied()).unwrap(),
            g,
            MetricLieAlgebra::default_labels(n),
            Provenance::Generic,
        )
        .unwrap()
    }

    fn hyperbolic_plane() -> MetricLieAlgebra {
        // basis (u, b), [b, u] = u  <=>  [u, b] = -u
        algebra(2, &[(0, 1, 0, -1.0)], InnerProduct::identity(2))
    }

    fn heisenberg() -> MetricLieAlgebra {
        algebra(3, &[(0, 1, 2, 1.0)], InnerProduct::identity(3))
    }

    fn so3() -> MetricLieAlgebra {
        algebra(
            3,
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
            InnerProduct::identity(3),
        )
    }

    #[test]
    fn abelian_is_flat() {
        let mla = algebra(3, &[], InnerProduct::identity(3));
        let geo = Geometry::compute(&mla).unwrap();
        assert_eq!(geo.connection, ConnectionCoefficients::zero(3));
        assert!(geo.curvature.r.iter().all(|x| *x == 0.0));
        let x = Vector::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(coadjoint(&mla, &x, &x).unwrap(), Vector::zeros(3));
        assert_eq!(geo.ricci_direction(&x).unwrap(), 0.0);
    }

    #[test]
    fn hyperbolic_plane_connection_and_curvature() {
        let mla = hyperbolic_plane();
        let u = mla.basis(0);
        let b = mla.basis(1);
        assert_eq!(coadjoint(&mla, &b, &u).unwrap(), u);
        let geo = Geometry::compute(&mla).unwrap();
        assert_eq!(geo.nabla(&u, &b), -&u);
        assert_eq!(geo.sectional(&u, &b).unwrap(), -1.0);
    }

    #[test]
    fn heisenberg_connection() {
        let mla = heisenberg();
        let geo = Geometry::compute(&mla).unwrap();
        assert_eq!(geo.connection.pair(0, 1), &[0.0, 0.0, 0.5]);
        let e = mla.basis(2);
        assert_eq!(coadjoint(&mla, &e, &e).unwrap(), Vector::zeros(3));
    }

    #[test]
    fn so3_bi_invariant_sectional_is_quarter() {
        let geo = Geometry::compute(&so3()).unwrap();
        let k = geo
            .sectional(&geo.algebra.basis(0), &geo.algebra.basis(1))
            .unwrap();
        assert!((k - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_plane_is_rejected() {
        let geo = Geometry::compute(&so3()).unwrap();
        let x = geo.algebra.basis(0);
        assert!(matches!(
            geo.sectional(&x, &x),
            Err(Error::DegeneratePlane { .. })
        ));
        assert!(matches!(
            geo.sectional(&x, &Vector::zeros(3)),
            Err(Error::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn zero_direction_is_rejected() {
        let mla = heisenberg();
        let geo = Geometry::compute(&mla).unwrap();
        assert_eq!(
            ricci_direction(&mla, &geo.curvature, &[0.0; 3]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn constant_check_needs_two_dimensions() {
        let mla = algebra(1, &[], InnerProduct::identity(1));
        let geo = Geometry::compute(&mla).unwrap();
        assert!(constant_sectional_check(&mla, &geo.curvature, 5, 0, 1e-9).is_err());
    }

    #[test]
    fn constant_check_flags_heisenberg() {
        let mla = heisenberg();
        let geo = Geometry::compute(&mla).unwrap();
        let c = constant_sectional_check(&mla, &geo.curvature, 10, 3, 1e-9).unwrap();
        assert!(!c.is_constant);
        assert!(c.max_deviation >= 0.5);
    }
}
