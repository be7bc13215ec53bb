//! Reference geometry computed the long way: Christoffel symbols from the
//! lowered Koszul formula, a Gauss-Jordan metric inverse, curvature by
//! composing connections, and Ricci as a plain trace. Shares nothing with the
//! library beyond reading structure constants and metric entries.

use tanlie_core::families::Query;
use tanlie_core::MetricLieAlgebra;

pub struct Brute {
    n: usize,
    /// `c[(i*n + j)*n + k]`
    c: Vec<f64>,
    g: Vec<f64>,
    /// `gamma[(i*n + j)*n + m]` is the `m`-th coordinate of `∇_{e_i} e_j`.
    gamma: Vec<f64>,
}

impl Brute {
    pub fn new(n: usize, c: Vec<f64>, g: Vec<f64>) -> Self {
        let ginv = invert(n, &g);
        // lowered[(i,j,k)] = g([e_i, e_j], e_k)
        let lowered = |i: usize, j: usize, k: usize| -> f64 {
            (0..n).map(|l| c[(i * n + j) * n + l] * g[l * n + k]).sum()
        };
        let mut gamma = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        // 2 g(∇_i e_j, e_k) = g([i,j],k) − g([j,k],i) + g([k,i],j)
                        let koszul = lowered(i, j, k) - lowered(j, k, i) + lowered(k, i, j);
                        s += ginv[m * n + k] * koszul;
                    }
                    gamma[(i * n + j) * n + m] = 0.5 * s;
                }
            }
        }
        Self { n, c, g, gamma }
    }

    pub fn from_algebra(mla: &MetricLieAlgebra) -> Self {
        let n = mla.dim();
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = mla.structure().get(i, j, k);
                }
            }
        }
        let g = (0..n * n).map(|p| mla.metric().get(p / n, p % n)).collect();
        Self::new(n, c, g)
    }

    /// Complete lifts first, vertical lifts second; metric `g ⊕ g`.
    pub fn lift(&self) -> Self {
        let n = self.n;
        let m = 2 * n;
        let mut c = vec![0.0; m * m * m];
        let mut put = |i: usize, j: usize, k: usize, v: f64| {
            c[(i * m + j) * m + k] = v;
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.c[(i * n + j) * n + k];
                    put(i, j, k, v); // [x^c, y^c] = [x, y]^c
                    put(i, n + j, n + k, v); // [x^c, y^v] = [x, y]^v
                    put(n + i, j, n + k, v); // [x^v, y^c] = [x, y]^v
                }
            }
        }
        let mut g = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                g[i * m + j] = self.g[i * n + j];
                g[(n + i) * m + n + j] = self.g[i * n + j];
            }
        }
        Self::new(m, c, g)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.g[i * n + j] * y[j];
            }
        }
        s
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.bilinear(&self.c, x, y)
    }

    pub fn nabla(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.bilinear(&self.gamma, x, y)
    }

    fn bilinear(&self, t: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w != 0.0 {
                    for k in 0..n {
                        out[k] += w * t[(i * n + j) * n + k];
                    }
                }
            }
        }
        out
    }

    pub fn curvature(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let a = self.nabla(x, &self.nabla(y, z));
        let b = self.nabla(y, &self.nabla(x, z));
        let c = self.nabla(&self.bracket(x, y), z);
        (0..self.n).map(|k| a[k] - b[k] - c[k]).collect()
    }

    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        let norms = self.inner(x, x) * self.inner(y, y);
        let det = norms - self.inner(x, y).powi(2);
        if !(det > 1e-12 * norms) {
            return None;
        }
        Some(self.inner(&self.curvature(x, y, y), x) / det)
    }

    /// Trace of `z ↦ R(z, x) y`.
    pub fn ricci(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| {
                let mut e = vec![0.0; self.n];
                e[i] = 1.0;
                self.curvature(&e, x, y)[i]
            })
            .sum()
    }

    /// `None` where the quantity is undefined (degenerate plane, zero direction).
    pub fn evaluate(&self, q: &Query) -> Option<Vec<f64>> {
        match q {
            Query::Connection { x, y } => Some(self.nabla(x, y)),
            Query::Curvature { x, y, z } => Some(self.curvature(x, y, z)),
            Query::Sectional { x, y } => self.sectional(x, y).map(|k| vec![k]),
            Query::Ricci { x, y } => Some(vec![self.ricci(x, y)]),
            Query::RicciDirection { x } => {
                if x.iter().all(|c| *c == 0.0) {
                    None
                } else {
                    Some(vec![self.ricci(x, x)])
                }
            }
        }
    }
}

/// Gauss-Jordan with partial pivoting.
fn invert(n: usize, a: &[f64]) -> Vec<f64> {
    let w = 2 * n;
    let mut m = vec![0.0; n * w];
    for i in 0..n {
        m[i * w..i * w + n].copy_from_slice(&a[i * n..i * n + n]);
        m[i * w + n + i] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| m[p * w + col].abs().total_cmp(&m[q * w + col].abs()))
            .unwrap();
        for k in 0..w {
            m.swap(col * w + k, pivot * w + k);
        }
        let d = m[col * w + col];
        assert!(d.abs() > 1e-300, "singular metric");
        for k in 0..w {
            m[col * w + k] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r * w + col];
                if f != 0.0 {
                    for k in 0..w {
                        m[r * w + k] -= f * m[col * w + k];
                    }
                }
            }
        }
    }
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n..i * n + n].copy_from_slice(&m[i * w + n..i * w + w]);
    }
    inv
}
