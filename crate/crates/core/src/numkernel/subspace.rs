use super::{RealMatrix, RealVector};
use crate::error::{Error, Result};

/// Orthonormal basis of a subspace of `R^ambient_dim`, stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: RealMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: RealMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: RealMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Wraps columns that are already orthonormal. Checked against `tol_orth`.
    pub fn from_orthonormal(basis: RealMatrix, tol_orth: f64) -> Result<Self> {
        let s = Self { basis };
        let g = s.gram_residual();
        if g > tol_orth {
            return Err(Error::Structure(format!(
                "basis is not orthonormal (Gram residual {g:.3e})"
            )));
        }
        Ok(s)
    }

    pub(crate) fn from_orthonormal_unchecked(basis: RealMatrix) -> Self {
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &RealMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> impl Iterator<Item = RealVector> + '_ {
        self.basis.column_iter().map(|c| c.into_owned())
    }

    pub fn gram_residual(&self) -> f64 {
        let k = self.dim();
        (self.basis.transpose() * &self.basis - RealMatrix::identity(k, k)).norm()
    }

    pub fn projector(&self) -> RealMatrix {
        &self.basis * self.basis.transpose()
    }

    pub fn project(&self, v: &RealVector) -> RealVector {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Coordinates of the projection of `v` in this basis.
    pub fn coordinates(&self, v: &RealVector) -> RealVector {
        self.basis.transpose() * v
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let k = self.dim();
        if k == 0 {
            return Subspace::full(n);
        }
        if k == n {
            return Subspace::zero(n);
        }
        let comp = RealMatrix::identity(n, n) - self.projector();
        let svd = comp.svd(true, false);
        let u = svd.u.expect("u requested");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let mut out = RealMatrix::zeros(n, n - k);
        for (c, &j) in idx.iter().take(n - k).enumerate() {
            out.set_column(c, &u.column(j));
        }
        Subspace { basis: out }
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::Dimension(format!(
                "subspaces live in R^{} and R^{}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// Operator norm of the difference of the orthogonal projectors.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        let diff = self.projector() - other.projector();
        Ok(diff.singular_values().max().max(0.0))
    }

    /// Dimension of `self + other`.
    pub fn sum_dim(&self, other: &Subspace, rel_tol: f64) -> Result<usize> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        let mut stacked = RealMatrix::zeros(n, self.dim() + other.dim());
        stacked.columns_mut(0, self.dim()).copy_from(&self.basis);
        stacked
            .columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Ok(super::numerical_rank(&stacked, rel_tol))
    }

    /// `‖(I − P_other) B_self‖₂`: zero iff `self ⊆ other`.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let outside = &self.basis - other.projector() * &self.basis;
        Ok(outside.singular_values().max())
    }

    /// Largest `|⟨s, o⟩|` over basis pairs.
    pub fn max_cross_inner(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        let g = self.basis.transpose() * &other.basis;
        Ok(g.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }
}

/// Modified Gram–Schmidt with one reorthogonalisation pass.
///
/// A vector whose remaining component is at or below
/// `tol_zero · max(1, ‖v‖)` is dropped.
pub fn orthonormalize<'a, I>(vectors: I, ambient_dim: usize, tol_zero: f64) -> Result<Subspace>
where
    I: IntoIterator<Item = &'a RealVector>,
{
    let mut kept: Vec<RealVector> = Vec::new();
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in R^{ambient_dim}",
                v.len()
            )));
        }
        let norm0 = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &kept {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let r = w.norm();
        if r > tol_zero * norm0.max(1.0) {
            kept.push(w / r);
        }
    }
    let mut basis = RealMatrix::zeros(ambient_dim, kept.len());
    for (j, q) in kept.iter().enumerate() {
        basis.set_column(j, q);
    }
    Ok(Subspace { basis })
}
