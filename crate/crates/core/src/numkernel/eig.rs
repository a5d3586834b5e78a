use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{frobenius, require_finite, require_square, DenseMatrix, RealMatrix, I};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewKind {
    SkewHermitian,
    RealSkewSymmetric,
}

/// Real canonical form `Qᵀ A Q = diag(B(θ_1), …, B(θ_p), 0, …, 0)` with
/// `B(θ) = [[0, θ], [−θ, 0]]`, `θ_1 ≥ … ≥ θ_p > 0`.
///
/// Columns of `q` are `(p_1, q_1, p_2, q_2, …, kernel…)`.
#[derive(Debug, Clone)]
pub struct SkewSchur {
    pub q: RealMatrix,
    pub theta: Vec<f64>,
    pub kernel_dim: usize,
}

impl SkewSchur {
    pub fn block_form(&self) -> RealMatrix {
        let n = self.q.nrows();
        let mut t = RealMatrix::zeros(n, n);
        for (j, &th) in self.theta.iter().enumerate() {
            t[(2 * j, 2 * j + 1)] = th;
            t[(2 * j + 1, 2 * j)] = -th;
        }
        t
    }

    pub fn plane(&self, j: usize) -> (nalgebra::DVector<f64>, nalgebra::DVector<f64>) {
        (self.q.column(2 * j).into_owned(), self.q.column(2 * j + 1).into_owned())
    }

    pub fn kernel(&self) -> RealMatrix {
        let start = 2 * self.theta.len();
        self.q.columns(start, self.kernel_dim).into_owned()
    }
}

#[derive(Debug, Clone)]
pub struct SkewEigen {
    /// Purely imaginary eigenvalues `iθ`, sorted by decreasing `θ`.
    pub eigenvalues: Vec<Complex64>,
    /// Unitary matrix of eigenvectors, column `j` belongs to `eigenvalues[j]`.
    pub eigenvectors: DenseMatrix,
    /// Present for [`SkewKind::RealSkewSymmetric`].
    pub schur: Option<SkewSchur>,
}

impl SkewEigen {
    pub fn thetas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.im).collect()
    }
}

/// Eigendecomposition of a skew-Hermitian or real skew-symmetric matrix.
///
/// `tol` is the structural tolerance on `A + A*`; eigenvalue magnitudes
/// below `tol` relative to the spectral radius count as zero.
pub fn eig_skew(a: &DenseMatrix, kind: SkewKind, tol: f64) -> Result<SkewEigen> {
    let n = require_square(a)?;
    require_finite(a)?;
    let scale = frobenius(a).max(1.0);
    let skew = frobenius(&(a + a.adjoint()));
    if skew > tol * scale {
        return Err(Error::Structure(format!(
            "not skew-Hermitian (‖A + A*‖ = {skew:.3e})"
        )));
    }
    if kind == SkewKind::RealSkewSymmetric && a.iter().any(|z| z.im.abs() > tol * scale) {
        return Err(Error::Structure("matrix has imaginary entries".into()));
    }

    // A = iH with H Hermitian.
    let h = a.map(|z| -I * z);
    let h = (&h + h.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(h);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let radius = eig.eigenvalues.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    let zero = tol * radius.max(f64::MIN_POSITIVE);

    let eigenvalues: Vec<Complex64> = order
        .iter()
        .map(|&j| {
            let t = eig.eigenvalues[j];
            Complex64::new(0.0, if t.abs() <= zero { 0.0 } else { t })
        })
        .collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let schur = match kind {
        SkewKind::SkewHermitian => None,
        SkewKind::RealSkewSymmetric => Some(real_form(&eigenvalues, &eigenvectors, n)?),
    };

    Ok(SkewEigen {
        eigenvalues,
        eigenvectors,
        schur,
    })
}

fn real_form(values: &[Complex64], vectors: &DenseMatrix, n: usize) -> Result<SkewSchur> {
    let positive: Vec<usize> = (0..n).filter(|&j| values[j].im > 0.0).collect();
    let negative = (0..n).filter(|&j| values[j].im < 0.0).count();
    if positive.len() != negative {
        return Err(Error::Structure(
            "spectrum of a real skew matrix is not symmetric".into(),
        ));
    }
    let kernel: Vec<usize> = (0..n).filter(|&j| values[j].im == 0.0).collect();

    let mut q = RealMatrix::zeros(n, n);
    let mut theta = Vec::with_capacity(positive.len());
    let sqrt2 = std::f64::consts::SQRT_2;
    for (k, &j) in positive.iter().enumerate() {
        let w = vectors.column(j);
        for r in 0..n {
            q[(r, 2 * k)] = sqrt2 * w[r].re;
            q[(r, 2 * k + 1)] = sqrt2 * w[r].im;
        }
        theta.push(values[j].im);
    }

    // The kernel of a real matrix is spanned by the real and imaginary parts
    // of its complex null vectors.
    if !kernel.is_empty() {
        let mut parts = RealMatrix::zeros(n, 2 * kernel.len());
        for (k, &j) in kernel.iter().enumerate() {
            let w = vectors.column(j);
            for r in 0..n {
                parts[(r, 2 * k)] = w[r].re;
                parts[(r, 2 * k + 1)] = w[r].im;
            }
        }
        let svd = parts.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let base = 2 * positive.len();
        for (k, &j) in idx.iter().take(kernel.len()).enumerate() {
            q.set_column(base + k, &u.column(j));
        }
    }

    Ok(SkewSchur {
        q,
        theta,
        kernel_dim: kernel.len(),
    })
}
