use super::{RealMatrix, RealVector};

#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub x: RealVector,
    pub residual: f64,
    pub rank: usize,
}

/// Minimum-norm least-squares solution of `M x ≈ b`.
///
/// Singular values at or below `rel_tol · σ_max` are treated as zero, so the
/// result is the pseudoinverse solution of the truncated problem.
pub fn lstsq_min_norm(m: &RealMatrix, b: &RealVector, rel_tol: f64) -> LeastSquares {
    assert_eq!(m.nrows(), b.len(), "right-hand side length must match row count");
    let cols = m.ncols();
    if m.nrows() == 0 || cols == 0 {
        return LeastSquares {
            x: RealVector::zeros(cols),
            residual: b.norm(),
            rank: 0,
        };
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.max();
    let cutoff = rel_tol * smax;

    let mut x = RealVector::zeros(cols);
    let mut rank = 0;
    if smax > 0.0 {
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff {
                rank += 1;
                let coef = u.column(k).dot(b) / s;
                x.axpy(coef, &vt.row(k).transpose(), 1.0);
            }
        }
    }
    let residual = (m * &x - b).norm();
    LeastSquares { x, residual, rank }
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &RealMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = m.singular_values();
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * smax).count()
}
