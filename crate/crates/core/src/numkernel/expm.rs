use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{frobenius, require_finite, require_square, DenseMatrix, I};
use crate::error::{Error, Result};

/// Matrix exponential by scaling and squaring with a Padé approximant.
pub fn mat_exp(a: &DenseMatrix) -> Result<DenseMatrix> {
    require_square(a)?;
    require_finite(a)?;
    Ok(a.exp())
}

/// Exponential of a skew-Hermitian matrix through its eigendecomposition.
///
/// `-iA` is Hermitian; with `-iA = V diag(θ) V*` we get
/// `exp(A) = V diag(e^{iθ}) V*`, which is unitary up to the accuracy of `V`.
pub fn mat_exp_skew_hermitian(a: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    require_square(a)?;
    require_finite(a)?;
    let skew = frobenius(&(a + a.adjoint()));
    if skew > tol * frobenius(a).max(1.0) {
        return Err(Error::Structure(format!(
            "not skew-Hermitian (‖A + A*‖ = {skew:.3e})"
        )));
    }
    let h = a.map(|z| -I * z);
    let h = (&h + h.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let phases = eig
        .eigenvalues
        .map(|t| Complex64::new(0.0, t).exp());
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}
