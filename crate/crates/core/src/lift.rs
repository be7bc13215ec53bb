//! The tangent Lie algebra `T𝔤 = 𝔤^c ⊕ 𝔤^v` of complete and vertical lifts.
//!
//! Complete lifts occupy indices `0..n`, vertical lifts `n..2n`. Brackets:
//! `[x^c, y^c] = [x, y]^c`, `[x^v, y^c] = [x, y]^v`, `[x^v, y^v] = 0`.
//! The lifted metric is `g ⊕ g`.

use crate::algebra::{InnerProduct, MetricLieAlgebra, Provenance, StructureConstants, Vector};
use crate::error::Result;
use crate::geometry::{coadjoint, levi_civita, ConnectionCoefficients};

/// Index bookkeeping for a lift of an `n`-dimensional algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftIndexing {
    n: usize,
}

/// Which copy of the base algebra a lifted index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiftKind {
    Complete,
    Vertical,
}

impl LiftKind {
    pub fn suffix(self) -> &'static str {
        match self {
            LiftKind::Complete => "c",
            LiftKind::Vertical => "v",
        }
    }
}

impl LiftIndexing {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn lifted_dim(&self) -> usize {
        2 * self.n
    }

    pub fn complete(&self, i: usize) -> usize {
        i
    }

    pub fn vertical(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn index(&self, kind: LiftKind, i: usize) -> usize {
        match kind {
            LiftKind::Complete => self.complete(i),
            LiftKind::Vertical => self.vertical(i),
        }
    }

    /// Inverse of [`index`](Self::index).
    pub fn split(&self, lifted: usize) -> (LiftKind, usize) {
        assert!(lifted < 2 * self.n, "index {lifted} out of range");
        if lifted < self.n {
            (LiftKind::Complete, lifted)
        } else {
            (LiftKind::Vertical, lifted - self.n)
        }
    }

    pub fn label(&self, base: &str, kind: LiftKind) -> String {
        format!("{base}^{}", kind.suffix())
    }

    /// Embeds a base vector as its complete or vertical lift.
    pub fn embed(&self, kind: LiftKind, x: &[f64]) -> Vector {
        let mut out = vec![0.0; 2 * self.n];
        let off = self.index(kind, 0);
        out[off..off + self.n].copy_from_slice(x);
        Vector::new(out)
    }
}

pub fn tangent_lift(mla: &MetricLieAlgebra) -> Result<MetricLieAlgebra> {
    let n = mla.dim();
    let ix = LiftIndexing::new(n);
    let sc = mla.structure();
    let lifted = StructureConstants::from_fn(2 * n, |p, q, r| {
        // p < q, so a complete index never follows a vertical one.
        match (ix.split(p), ix.split(q), ix.split(r)) {
            ((LiftKind::Complete, i), (LiftKind::Complete, j), (LiftKind::Complete, k)) => {
                sc.get(i, j, k)
            }
            // [x^c, y^v] = -[y^v, x^c] = -[y, x]^v = [x, y]^v
            ((LiftKind::Complete, i), (LiftKind::Vertical, j), (LiftKind::Vertical, k)) => {
                sc.get(i, j, k)
            }
            _ => 0.0,
        }
    });
    let metric = InnerProduct::block_diagonal(&[mla.metric(), mla.metric()]);
    let labels = [LiftKind::Complete, LiftKind::Vertical]
        .iter()
        .flat_map(|&kind| mla.labels().iter().map(move |l| ix.label(l, kind)))
        .collect();
    MetricLieAlgebra::new(
        lifted,
        metric,
        labels,
        Provenance::TangentLift {
            parent: Box::new(mla.provenance().clone()),
        },
    )
}

/// Lifted connection assembled from the base connection and coadjoint:
///
/// ```text
/// ∇_{x^c} y^c = (∇_x y)^c
/// ∇_{x^v} y^v = (∇_x y − ½[x, y])^c
/// ∇_{x^c} y^v = (∇_x y + ½ ad*_y x)^v
/// ∇_{x^v} y^c = (∇_x y + ½ ad*_x y)^v
/// ```
pub fn lifted_connection_closed_form(mla: &MetricLieAlgebra) -> Result<ConnectionCoefficients> {
    let n = mla.dim();
    let ix = LiftIndexing::new(n);
    let base = levi_civita(mla)?;
    let mut out = ConnectionCoefficients::zero(2 * n);
    for i in 0..n {
        for j in 0..n {
            let ei = mla.basis(i);
            let ej = mla.basis(j);
            let nabla = Vector::new(base.pair(i, j).to_vec());
            let bracket = mla.bracket(&ei, &ej);

            out.set_pair(
                ix.complete(i),
                ix.complete(j),
                &ix.embed(LiftKind::Complete, &nabla),
            );
            out.set_pair(
                ix.vertical(i),
                ix.vertical(j),
                &ix.embed(LiftKind::Complete, &nabla.axpy(-0.5, &bracket)),
            );
            let ad_j_i = coadjoint(mla, &ej, &ei)?;
            out.set_pair(
                ix.complete(i),
                ix.vertical(j),
                &ix.embed(LiftKind::Vertical, &nabla.axpy(0.5, &ad_j_i)),
            );
            let ad_i_j = coadjoint(mla, &ei, &ej)?;
            out.set_pair(
                ix.vertical(i),
                ix.complete(j),
                &ix.embed(LiftKind::Vertical, &nabla.axpy(0.5, &ad_i_j)),
            );
        }
    }
    Ok(out)
}
