//! Dense numerical kernel shared by the algebra code.
//!
//! Matrices of the defining representation are complex [`DenseMatrix`]
//! values. Linear maps on an algebra are real matrices in the coordinates
//! of a fixed orthonormal basis, so everything that needs a real inner
//! product (subspaces, least squares, hulls) works on `f64` data.

mod eig;
mod expm;
mod hull;
mod lstsq;
mod subspace;

pub use eig::{eig_skew, SkewEigen, SkewKind, SkewSchur};
pub use expm::{mat_exp, mat_exp_skew_hermitian};
pub use hull::{hull_distance, nearest_point_in_hull, HullPoint};
pub use lstsq::{lstsq_min_norm, numerical_rank, LeastSquares};
pub use subspace::{orthonormalize, Subspace};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex matrix of the defining representation.
pub type DenseMatrix = DMatrix<Complex64>;
/// Real matrix, used for linear maps in algebra coordinates.
pub type RealMatrix = DMatrix<f64>;
/// Real coordinate vector.
pub type RealVector = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Numerical thresholds used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub tol_orth: f64,
    pub tol_residual: f64,
    pub tol_zero: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_orth: 1e-10,
            tol_residual: 1e-8,
            tol_zero: 1e-10,
            max_iter: 10_000,
        }
    }
}

impl Tolerances {
    pub fn new(tol_orth: f64, tol_residual: f64, tol_zero: f64, max_iter: usize) -> Result<Self> {
        let t = Self {
            tol_orth,
            tol_residual,
            tol_zero,
            max_iter,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_residual(mut self, tol_residual: f64) -> Self {
        self.tol_residual = tol_residual;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_orth", self.tol_orth),
            ("tol_residual", self.tol_residual),
            ("tol_zero", self.tol_zero),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn require_square(m: &DenseMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub fn require_finite(m: &DenseMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input("matrix has non-finite entries".into()))
    }
}

pub fn frobenius(m: &DenseMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> DenseMatrix {
    DenseMatrix::identity(n, n)
}

/// Re trace(AB) without forming the product.
pub fn re_trace_product(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for k in 0..n {
            let x = a[(j, k)];
            let y = b[(k, j)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a * b - b * a
}

/// ‖M*M − I‖_F.
pub fn unitarity_residual(m: &DenseMatrix) -> f64 {
    frobenius(&(m.adjoint() * m - identity(m.nrows())))
}

pub fn is_real(m: &DenseMatrix, tol: f64) -> bool {
    m.iter().all(|z| z.im.abs() <= tol)
}

pub fn from_real(m: &RealMatrix) -> DenseMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Real vectorisation (re, im interleaved, row-major) used for Frobenius geometry.
pub fn realify(m: &DenseMatrix) -> RealVector {
    let mut v = Vec::with_capacity(2 * m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            v.push(m[(r, c)].re);
            v.push(m[(r, c)].im);
        }
    }
    RealVector::from_vec(v)
}

pub fn derealify(v: &RealVector, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |r, c| {
        let k = 2 * (r * cols + c);
        Complex64::new(v[k], v[k + 1])
    })
}
