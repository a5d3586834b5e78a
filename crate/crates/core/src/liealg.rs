//! The compact classical Lie algebras su(n), so(n), sp(n) as matrix algebras.
//!
//! Every algebra carries a fixed basis that is orthonormal for the inner
//! product `⟨X, Y⟩ = −Killing(X, Y)`. Linear maps on the algebra (ad, Ad,
//! projections) are real matrices in these coordinates, and a [`Subspace`]
//! of the algebra is a subspace of `R^dim` in the same coordinates.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{
    commutator, frobenius, identity, orthonormalize, re_trace_product, realify, DenseMatrix,
    RealMatrix, RealVector, Subspace, Tolerances, I, ONE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Su,
    So,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Su => "su",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Ok(Family::Su),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            other => Err(Error::Parameter(format!("unknown family {other:?}"))),
        }
    }
}

/// Family tag plus size parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub family: Family,
    pub n: usize,
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

impl AlgebraDescriptor {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let min = match family {
            Family::Su => 2,
            Family::So => 3,
            Family::Sp => 1,
        };
        if n < min {
            return Err(Error::Parameter(format!(
                "{family}({n}) is not a compact semisimple algebra; need n >= {min}"
            )));
        }
        Ok(Self { family, n })
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(Family::Su, n)
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(Family::So, n)
    }

    pub fn sp(n: usize) -> Result<Self> {
        Self::new(Family::Sp, n)
    }

    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::Su => n * n - 1,
            Family::So => n * (n - 1) / 2,
            Family::Sp => n * (2 * n + 1),
        }
    }

    pub fn rank(&self) -> usize {
        match self.family {
            Family::Su => self.n - 1,
            Family::So => self.n / 2,
            Family::Sp => self.n,
        }
    }

    /// Sum of the defining-equation violations of `x`.
    pub fn membership_residual(&self, x: &DenseMatrix) -> f64 {
        let size = self.matrix_size();
        if x.nrows() != size || x.ncols() != size {
            return f64::INFINITY;
        }
        let skew = frobenius(&(x + x.adjoint()));
        skew + match self.family {
            Family::Su => x.trace().norm(),
            Family::So => x.iter().map(|z| z.im * z.im).sum::<f64>().sqrt(),
            Family::Sp => {
                let j = symplectic_j(self.n);
                frobenius(&(x.transpose() * &j + &j * x))
            }
        }
    }

    pub fn is_member(&self, x: &DenseMatrix, tol: f64) -> bool {
        self.membership_residual(x) <= tol * frobenius(x).max(1.0)
    }

    /// Violation of the defining equations of the compact group.
    pub fn group_membership_residual(&self, g: &DenseMatrix) -> f64 {
        let size = self.matrix_size();
        if g.nrows() != size || g.ncols() != size {
            return f64::INFINITY;
        }
        let unitary = frobenius(&(g.adjoint() * g - identity(size)));
        unitary
            + match self.family {
                Family::Su => (g.determinant() - ONE).norm(),
                Family::So => {
                    g.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
                        + (g.determinant() - ONE).norm()
                }
                Family::Sp => {
                    let j = symplectic_j(self.n);
                    frobenius(&(g.transpose() * &j * g - j))
                }
            }
    }
}

/// `J = [[0, I_n], [−I_n, 0]]`.
pub fn symplectic_j(n: usize) -> DenseMatrix {
    let mut j = DenseMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = ONE;
        j[(n + k, k)] = -ONE;
    }
    j
}

/// Quaternionic matrix `U + jV` in the defining representation `[[U, −V̄], [V, Ū]]`.
pub fn quaternion_embedding(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    let n = u.nrows();
    if u.ncols() != n || v.nrows() != n || v.ncols() != n {
        return Err(Error::Dimension("quaternion blocks must be square and equal".into()));
    }
    let mut m = DenseMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(u);
    m.view_mut((0, n), (n, n)).copy_from(&(-v.conjugate()));
    m.view_mut((n, 0), (n, n)).copy_from(v);
    m.view_mut((n, n), (n, n)).copy_from(&u.conjugate());
    Ok(m)
}

/// An element of a specific algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    parent: AlgebraDescriptor,
    mat: DenseMatrix,
}

impl AlgebraElement {
    pub fn parent(&self) -> AlgebraDescriptor {
        self.parent
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.mat
    }

    pub fn frobenius(&self) -> f64 {
        frobenius(&self.mat)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            parent: self.parent,
            mat: self.mat.map(|z| z * s),
        }
    }

    fn same_parent(&self, other: &Self) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch {
                left: self.parent.to_string(),
                right: other.parent.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(Self {
            parent: self.parent,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(Self {
            parent: self.parent,
            mat: &self.mat - &other.mat,
        })
    }
}

/// Orthonormal basis of an algebra under [`Algebra::inner`].
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub parent: AlgebraDescriptor,
    pub elements: Vec<AlgebraElement>,
}

/// A concrete compact classical Lie algebra with its coordinate system.
#[derive(Debug, Clone)]
pub struct Algebra {
    desc: AlgebraDescriptor,
    basis: AlgebraBasis,
    trace_constant: f64,
    tol: Tolerances,
}

impl Algebra {
    pub fn new(desc: AlgebraDescriptor) -> Result<Self> {
        Self::with_tolerances(desc, Tolerances::default())
    }

    pub fn with_tolerances(desc: AlgebraDescriptor, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        let size = desc.matrix_size();
        let span = spanning_set(desc);
        let vecs: Vec<RealVector> = span.iter().map(realify).collect();
        let frob = orthonormalize(&vecs, 2 * size * size, tol.tol_zero)?;
        if frob.dim() != desc.dim() {
            return Err(Error::Structure(format!(
                "spanning set of {desc} has rank {} instead of {}",
                frob.dim(),
                desc.dim()
            )));
        }
        let frob_basis: Vec<DenseMatrix> = frob
            .vectors()
            .map(|v| crate::numkernel::derealify(&v, size, size))
            .collect();

        // Killing form in a Frobenius-orthonormal basis must be −c·I.
        let c = killing_scale(&frob_basis)?;
        let s = 1.0 / c.sqrt();
        let elements = frob_basis
            .into_iter()
            .map(|m| AlgebraElement {
                parent: desc,
                mat: m.map(|z| z * s),
            })
            .collect();
        Ok(Self {
            desc,
            basis: AlgebraBasis {
                parent: desc,
                elements,
            },
            trace_constant: c,
            tol,
        })
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.desc
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.desc.dim()
    }

    pub fn rank(&self) -> usize {
        self.desc.rank()
    }

    pub fn matrix_size(&self) -> usize {
        self.desc.matrix_size()
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    /// `c` with `−Killing(X, Y) = −c · Re tr(XY)`.
    pub fn trace_form_constant(&self) -> f64 {
        self.trace_constant
    }

    pub fn element(&self, mat: DenseMatrix) -> Result<AlgebraElement> {
        crate::numkernel::require_finite(&mat)?;
        let res = self.desc.membership_residual(&mat);
        if res > self.tol.tol_residual * frobenius(&mat).max(1.0) {
            return Err(Error::Structure(format!(
                "matrix is not in {} (residual {res:.3e})",
                self.desc
            )));
        }
        Ok(AlgebraElement {
            parent: self.desc,
            mat,
        })
    }

    pub fn zero(&self) -> AlgebraElement {
        let s = self.matrix_size();
        AlgebraElement {
            parent: self.desc,
            mat: DenseMatrix::zeros(s, s),
        }
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.parent != self.desc {
            return Err(Error::ParentMismatch {
                left: self.desc.to_string(),
                right: x.parent.to_string(),
            });
        }
        Ok(())
    }

    pub fn from_coords(&self, v: &RealVector) -> AlgebraElement {
        assert_eq!(v.len(), self.dim(), "coordinate vector length");
        let s = self.matrix_size();
        let mut mat = DenseMatrix::zeros(s, s);
        for (c, e) in v.iter().zip(&self.basis.elements) {
            if *c != 0.0 {
                mat += e.mat.map(|z| z * *c);
            }
        }
        AlgebraElement {
            parent: self.desc,
            mat,
        }
    }

    /// Coordinates in the orthonormal basis (projection for non-members).
    pub fn coords_of_matrix(&self, m: &DenseMatrix) -> RealVector {
        let c = self.trace_constant;
        RealVector::from_iterator(
            self.dim(),
            self.basis
                .elements
                .iter()
                .map(|e| -c * re_trace_product(&e.mat, m)),
        )
    }

    pub fn coords(&self, x: &AlgebraElement) -> Result<RealVector> {
        self.check(x)?;
        Ok(self.coords_of_matrix(&x.mat))
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AlgebraElement {
            parent: self.desc,
            mat: commutator(&x.mat, &y.mat),
        })
    }

    /// `−Killing(X, Y)` through the trace form.
    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(-self.trace_constant * re_trace_product(&x.mat, &y.mat))
    }

    /// `−trace(ad X · ad Y)` computed from ad matrices.
    pub fn killing_inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        let ax = self.ad_matrix(x)?;
        let ay = self.ad_matrix(y)?;
        Ok(-(ax * ay).trace())
    }

    pub fn norm(&self, x: &AlgebraElement) -> f64 {
        (-self.trace_constant * re_trace_product(&x.mat, &x.mat))
            .max(0.0)
            .sqrt()
    }

    /// Matrix of `ad(X) = [X, ·]` in the orthonormal basis.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> Result<RealMatrix> {
        self.check(x)?;
        let d = self.dim();
        let mut ad = RealMatrix::zeros(d, d);
        for (j, e) in self.basis.elements.iter().enumerate() {
            let col = self.coords_of_matrix(&commutator(&x.mat, &e.mat));
            ad.set_column(j, &col);
        }
        Ok(ad)
    }

    /// Matrix of `Ad(g) = g · g⁻¹` for a group element `g`.
    pub fn adjoint_action_matrix(&self, g: &DenseMatrix) -> RealMatrix {
        let d = self.dim();
        let gi = g.adjoint();
        let mut m = RealMatrix::zeros(d, d);
        for (j, e) in self.basis.elements.iter().enumerate() {
            m.set_column(j, &self.coords_of_matrix(&(g * &e.mat * &gi)));
        }
        m
    }

    /// `g X g⁻¹` for `g` in the compact group (so `g⁻¹ = g*`).
    pub fn conjugate(&self, g: &DenseMatrix, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        Ok(AlgebraElement {
            parent: self.desc,
            mat: g * &x.mat * g.adjoint(),
        })
    }

    /// `Ad(g)` applied to every basis vector of `s`.
    pub fn conjugate_subspace(&self, g: &DenseMatrix, s: &Subspace) -> Result<Subspace> {
        let ad = self.adjoint_action_matrix(g);
        let moved: Vec<RealVector> = s.vectors().map(|v| &ad * v).collect();
        orthonormalize(&moved, self.dim(), self.tol.tol_zero)
    }

    pub fn subspace_elements(&self, s: &Subspace) -> Vec<AlgebraElement> {
        s.vectors().map(|v| self.from_coords(&v)).collect()
    }

    pub fn span(&self, elements: &[AlgebraElement]) -> Result<Subspace> {
        let coords = elements
            .iter()
            .map(|e| self.coords(e))
            .collect::<Result<Vec<_>>>()?;
        orthonormalize(&coords, self.dim(), self.tol.tol_zero)
    }

    fn ad_svd(&self, x: &AlgebraElement) -> Result<(nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>, f64)> {
        let ad = self.ad_matrix(x)?;
        let svd = ad.svd(true, true);
        let smax = svd.singular_values.max();
        Ok((svd, self.tol.tol_zero * smax))
    }

    /// `Z(X)`, the kernel of `ad(X)`.
    pub fn centralizer(&self, x: &AlgebraElement) -> Result<Subspace> {
        let (svd, cutoff) = self.ad_svd(x)?;
        let vt = svd.v_t.as_ref().expect("v_t requested");
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&k| svd.singular_values[k] <= cutoff)
            .collect();
        let mut basis = RealMatrix::zeros(self.dim(), cols.len());
        for (c, &k) in cols.iter().enumerate() {
            basis.set_column(c, &vt.row(k).transpose());
        }
        Ok(Subspace::from_orthonormal_unchecked(basis))
    }

    /// `[X, L]`, the column space of `ad(X)`.
    pub fn ad_image(&self, x: &AlgebraElement) -> Result<Subspace> {
        let (svd, cutoff) = self.ad_svd(x)?;
        let u = svd.u.as_ref().expect("u requested");
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&k| svd.singular_values[k] > cutoff)
            .collect();
        let mut basis = RealMatrix::zeros(self.dim(), cols.len());
        for (c, &k) in cols.iter().enumerate() {
            basis.set_column(c, &u.column(k));
        }
        Ok(Subspace::from_orthonormal_unchecked(basis))
    }

    pub fn is_regular(&self, x: &AlgebraElement) -> Result<bool> {
        Ok(self.centralizer(x)?.dim() == self.rank())
    }

    pub fn random_element(&self, seed: u64) -> AlgebraElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_element_with(&mut rng)
    }

    pub fn random_element_with(&self, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let v = RealVector::from_fn(self.dim(), |_, _| StandardNormal.sample(rng));
        self.from_coords(&v)
    }

    /// Random element of the subspace `s` (standard normal coordinates).
    pub fn random_in_subspace(&self, s: &Subspace, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let w = RealVector::from_fn(s.dim(), |_, _| StandardNormal.sample(rng));
        self.from_coords(&(s.basis() * w))
    }

    pub fn random_regular(&self, seed: u64) -> Result<AlgebraElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..self.tol.max_iter {
            let x = self.random_element_with(&mut rng);
            if self.is_regular(&x)? {
                return Ok(x);
            }
        }
        Err(Error::SearchFailure {
            what: format!("regular element of {}", self.desc),
            iterations: self.tol.max_iter,
        })
    }
}

/// Trace-form constant of `desc`, computed from ad matrices.
pub fn trace_form_constant(desc: AlgebraDescriptor) -> Result<f64> {
    Ok(Algebra::new(desc)?.trace_form_constant())
}

/// Given a Frobenius-orthonormal basis, returns `c` with `−Killing = c·⟨·,·⟩_F`
/// after checking that the Killing matrix is a multiple of the identity.
///
/// Uses `tr(ad A ad W) = Re tr(A · Σ_j [[W, f_j], f_j*])`. The full matrix is
/// checked up to dimension 128; above that, a few seeded probes `K w = −c w`.
fn killing_scale(basis: &[DenseMatrix]) -> Result<f64> {
    const FULL_CHECK_DIM: usize = 128;
    let d = basis.len();
    let width = basis.first().map_or(0, |f| 2 * f.len());
    let mut rows = RealMatrix::zeros(d, width);
    for (i, f) in basis.iter().enumerate() {
        rows.set_row(i, &realify(&f.adjoint()).transpose());
    }
    let casimir_image = |w: &DenseMatrix| -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(w.nrows(), w.ncols());
        for f in basis {
            acc += commutator(&commutator(w, f), &f.adjoint());
        }
        acc
    };
    // column b of −K for the probe matrix sum_a w_a f_a
    let neg_killing_times = |w: &RealVector| -> RealVector {
        let mut m = DenseMatrix::zeros(basis[0].nrows(), basis[0].ncols());
        for (f, &x) in basis.iter().zip(w.iter()) {
            m += f.map(|z| z * x);
        }
        -(&rows * realify(&casimir_image(&m)))
    };
    let (c, dev) = if d <= FULL_CHECK_DIM {
        let mut neg_killing = RealMatrix::zeros(d, d);
        for b in 0..d {
            let mut e = RealVector::zeros(d);
            e[b] = 1.0;
            neg_killing.set_column(b, &neg_killing_times(&e));
        }
        let c = neg_killing.diagonal().mean();
        (c, (&neg_killing - RealMatrix::identity(d, d) * c).amax())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b11);
        let mut c = 0.0;
        let mut dev = 0.0_f64;
        for probe in 0..4 {
            let w = RealVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
            let kw = neg_killing_times(&w);
            let ck = kw.dot(&w) / w.norm_squared();
            if probe == 0 {
                c = ck;
            }
            dev = dev.max((&kw - &w * c).amax() / w.amax());
        }
        (c, dev)
    };
    if !(c > 0.0) || dev > 1e-10 * c {
        return Err(Error::Structure(format!(
            "Killing form is not proportional to the trace form (c = {c}, deviation {dev:.3e})"
        )));
    }
    Ok(c)
}

fn unit(size: usize, r: usize, c: usize, z: Complex64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(size, size);
    m[(r, c)] = z;
    m
}

fn spanning_set(desc: AlgebraDescriptor) -> Vec<DenseMatrix> {
    let n = desc.n;
    let size = desc.matrix_size();
    let mut out = Vec::new();
    match desc.family {
        Family::Su => {
            for j in 0..n - 1 {
                out.push(unit(size, j, j, I) + unit(size, j + 1, j + 1, -I));
            }
            for j in 0..n {
                for k in j + 1..n {
                    out.push(unit(size, j, k, ONE) + unit(size, k, j, -ONE));
                    out.push(unit(size, j, k, I) + unit(size, k, j, I));
                }
            }
        }
        Family::So => {
            for j in 0..n {
                for k in j + 1..n {
                    out.push(unit(size, j, k, ONE) + unit(size, k, j, -ONE));
                }
            }
        }
        Family::Sp => {
            // [[A, B], [−B̄, Ā]] with A ∈ u(n) and B complex symmetric.
            let mut u_n = Vec::new();
            for j in 0..n {
                u_n.push(unit(n, j, j, I));
                for k in j + 1..n {
                    u_n.push(unit(n, j, k, ONE) + unit(n, k, j, -ONE));
                    u_n.push(unit(n, j, k, I) + unit(n, k, j, I));
                }
            }
            for a in u_n {
                let zero = DenseMatrix::zeros(n, n);
                out.push(quaternion_embedding(&a, &zero).expect("square blocks"));
            }
            for j in 0..n {
                for k in j..n {
                    for z in [ONE, I] {
                        let b = if j == k {
                            unit(n, j, j, z)
                        } else {
                            unit(n, j, k, z) + unit(n, k, j, z)
                        };
                        // U = 0, V = −B̄ gives [[0, B], [−B̄, 0]].
                        let v = -b.conjugate();
                        out.push(
                            quaternion_embedding(&DenseMatrix::zeros(n, n), &v)
                                .expect("square blocks"),
                        );
                    }
                }
            }
        }
    }
    out
}
