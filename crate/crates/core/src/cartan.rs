//! Cartan subalgebras: the standard diagonal/block ones, orthogonal partners
//! built from circulant matrices (su, sp) and the recursive so(n)
//! construction, plus reduction of an arbitrary Cartan to standard form.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::liealg::{symplectic_j, Algebra, AlgebraDescriptor, AlgebraElement, Family};
use crate::numkernel::{
    eig_skew, frobenius, from_real, numerical_rank, orthonormalize, realify, DenseMatrix,
    RealMatrix, RealVector, SkewKind, Subspace, I, ONE, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Standard,
    Circulant,
    SoRecursive,
    Custom,
}

/// A Cartan subalgebra candidate: an orthonormal subspace of the algebra.
#[derive(Debug, Clone)]
pub struct CartanSub {
    pub parent: AlgebraDescriptor,
    pub space: Subspace,
    pub provenance: Provenance,
    /// Generators as constructed, before orthonormalisation.
    pub raw: Vec<DenseMatrix>,
}

impl CartanSub {
    pub fn from_elements(
        alg: &Algebra,
        elements: &[AlgebraElement],
        provenance: Provenance,
    ) -> Result<Self> {
        Ok(Self {
            parent: alg.descriptor(),
            space: alg.span(elements)?,
            provenance,
            raw: elements.iter().map(|e| e.matrix().clone()).collect(),
        })
    }

    pub fn from_subspace(alg: &Algebra, space: Subspace, provenance: Provenance) -> Self {
        let raw = alg
            .subspace_elements(&space)
            .into_iter()
            .map(AlgebraElement::into_matrix)
            .collect();
        Self {
            parent: alg.descriptor(),
            space,
            provenance,
            raw,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn elements(&self, alg: &Algebra) -> Vec<AlgebraElement> {
        alg.subspace_elements(&self.space)
    }

    /// `{family, n, provenance, basis}` with the orthonormal basis matrices.
    pub fn to_json(&self, alg: &Algebra) -> Value {
        json!({
            "family": self.parent.family,
            "n": self.parent.n,
            "provenance": self.provenance,
            "basis": self
                .elements(alg)
                .iter()
                .map(|e| matrix_to_json(e.matrix()))
                .collect::<Vec<_>>(),
        })
    }

    fn check_parent(&self, alg: &Algebra) -> Result<()> {
        if self.parent != alg.descriptor() {
            return Err(Error::ParentMismatch {
                left: alg.descriptor().to_string(),
                right: self.parent.to_string(),
            });
        }
        Ok(())
    }
}

fn unit(size: usize, r: usize, c: usize, z: Complex64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(size, size);
    m[(r, c)] = z;
    m
}

/// The diagonal (su, sp) or `C_{2k}` / `C_{2k+1}` block (so) Cartan subalgebra.
pub fn standard_cartan(alg: &Algebra) -> Result<CartanSub> {
    let d = alg.descriptor();
    let size = d.matrix_size();
    let n = d.n;
    let gens: Vec<DenseMatrix> = match d.family {
        Family::Su => (0..n - 1)
            .map(|j| unit(size, j, j, I) + unit(size, j + 1, j + 1, -I))
            .collect(),
        Family::So => {
            // [[0, Λ, 0], [−Λ, 0, 0], [0, 0, 0]] with Λ = E_jj
            let k = n / 2;
            (0..k)
                .map(|j| unit(size, j, k + j, ONE) + unit(size, k + j, j, -ONE))
                .collect()
        }
        Family::Sp => (0..n)
            .map(|j| unit(size, j, j, I) + unit(size, n + j, n + j, -I))
            .collect(),
    };
    let elements = gens
        .into_iter()
        .map(|m| alg.element(m))
        .collect::<Result<Vec<_>>>()?;
    CartanSub::from_elements(alg, &elements, Provenance::Standard)
}

/// First row of a circulant matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantVector(pub Vec<Complex64>);

impl CirculantVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `A_{jk} = a_{(k − j) mod n}`.
    pub fn matrix(&self) -> DenseMatrix {
        let n = self.len();
        DenseMatrix::from_fn(n, n, |j, k| self.0[(k + n - j) % n])
    }

    /// Whether `a_0 = 0` and `a_{n−l} = −ā_l`, i.e. the circulant lies in su(n).
    pub fn satisfies_su_constraints(&self, tol: f64) -> bool {
        let n = self.len();
        self.0[0].norm() <= tol
            && (1..n).all(|l| (self.0[n - l] + self.0[l].conj()).norm() <= tol)
    }
}

/// DFT diagonalisation `A = U Λ U*` of a circulant matrix.
#[derive(Debug, Clone)]
pub struct CirculantDiagonalization {
    pub u: DenseMatrix,
    pub lambda: Vec<Complex64>,
}

impl CirculantDiagonalization {
    pub fn reconstruct(&self) -> DenseMatrix {
        let d = DenseMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.lambda.clone()));
        &self.u * d * self.u.adjoint()
    }
}

/// `U` has columns `x_l = (1, ε^l, …, ε^{(n−1)l}) / √n` and `λ_l = Σ_j ε^{lj} a_j`.
pub fn circulant_diagonalize(a: &CirculantVector) -> Result<CirculantDiagonalization> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Parameter("empty circulant vector".into()));
    }
    let eps = |p: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (p % n) as f64 / n as f64);
    let s = 1.0 / (n as f64).sqrt();
    let u = DenseMatrix::from_fn(n, n, |j, l| eps(j * l) * s);
    let lambda = (0..n)
        .map(|l| (0..n).map(|j| eps(l * j) * a.0[j]).sum())
        .collect();
    Ok(CirculantDiagonalization { u, lambda })
}

/// Real solutions of the su(n) constraints on the first row.
pub fn su_circulant_generators(n: usize) -> Vec<CirculantVector> {
    let mut out = Vec::new();
    for l in 1..n {
        let m = n - l;
        if l < m {
            let mut re = vec![ZERO; n];
            re[l] = ONE;
            re[m] = -ONE;
            out.push(CirculantVector(re));
            let mut im = vec![ZERO; n];
            im[l] = I;
            im[m] = I;
            out.push(CirculantVector(im));
        } else if l == m {
            let mut im = vec![ZERO; n];
            im[l] = I;
            out.push(CirculantVector(im));
        }
    }
    out
}

/// `Circ(n) ∩ su(n)`.
pub fn circulant_cartan_su(alg: &Algebra) -> Result<CartanSub> {
    let d = alg.descriptor();
    if d.family != Family::Su {
        return Err(Error::Parameter(format!("{d} is not su(n)")));
    }
    let elements = su_circulant_generators(d.n)
        .iter()
        .map(|a| alg.element(a.matrix()))
        .collect::<Result<Vec<_>>>()?;
    CartanSub::from_elements(alg, &elements, Provenance::Circulant)
}

/// Quaternionic structure `J_c = Σ ζ^i E_{i, i+n}` (indices mod 2n,
/// `ζ = e^{iπ/n}`). Unlike `J`, conjugation `A ↦ J_c Ā J_c⁻¹` maps circulants
/// to circulants.
pub fn circulant_symplectic_form(n: usize) -> DenseMatrix {
    let size = 2 * n;
    let zeta = |p: usize| Complex64::from_polar(1.0, std::f64::consts::PI * p as f64 / n as f64);
    let mut j = DenseMatrix::zeros(size, size);
    for i in 0..size {
        j[(i, (i + n) % size)] = zeta(i);
    }
    j
}

/// Diagonal unitary `Φ` with `Φ̄ᵀ J_c Φ̄ = J`, so `X ↦ Φ X Φ*` carries the
/// `J_c`-form of sp(n) onto the `J`-form and fixes diagonal matrices.
pub fn circulant_twist(n: usize) -> DenseMatrix {
    let size = 2 * n;
    DenseMatrix::from_fn(size, size, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, std::f64::consts::PI * (r % n) as f64 / (2 * n) as f64)
        } else {
            ZERO
        }
    })
}

/// Real basis of `{A ∈ Circ(2n) : A* = −A, AᵀJ' + J'A = 0}`, the kernel of the
/// membership equations restricted to circulants.
pub fn circulant_kernel(n: usize, form: &DenseMatrix, tol_zero: f64) -> Result<Vec<DenseMatrix>> {
    let size = 2 * n;
    if form.nrows() != size || form.ncols() != size {
        return Err(Error::Dimension(format!("form must be {size}x{size}")));
    }
    // real parametrisation of Circ(2n): Re a_l and Im a_l
    let params: Vec<DenseMatrix> = (0..2 * size)
        .map(|p| {
            let mut a = vec![ZERO; size];
            a[p / 2] = if p % 2 == 0 { ONE } else { I };
            CirculantVector(a).matrix()
        })
        .collect();
    let constraint = |x: &DenseMatrix| -> RealVector {
        let skew = realify(&(x + x.adjoint()));
        let sympl = realify(&(x.transpose() * form + form * x));
        RealVector::from_iterator(skew.len() + sympl.len(), skew.iter().chain(sympl.iter()).copied())
    };
    let rows = constraint(&params[0]).len();
    let mut system = RealMatrix::zeros(rows, params.len());
    for (c, p) in params.iter().enumerate() {
        system.set_column(c, &constraint(p));
    }
    // rows exceed columns, so v_t is square and its small rows span the kernel
    let svd = system.svd(false, true);
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let cutoff = tol_zero * svd.singular_values.max();
    let null: Vec<RealVector> = (0..vt.nrows())
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .map(|k| vt.row(k).transpose())
        .collect();
    let kernel = orthonormalize(&null, params.len(), tol_zero)?;
    Ok(kernel
        .vectors()
        .map(|v| {
            let mut m = DenseMatrix::zeros(size, size);
            for (c, p) in params.iter().enumerate() {
                m += p.map(|z| z * v[c]);
            }
            m
        })
        .collect())
}

/// Circulant solutions for the `J_c` structure, transported to the `J`-form.
pub fn sp_circulant_generators(n: usize, tol_zero: f64) -> Result<Vec<DenseMatrix>> {
    let d = AlgebraDescriptor::sp(n)?;
    let phi = circulant_twist(n);
    let out: Vec<DenseMatrix> = circulant_kernel(n, &circulant_symplectic_form(n), tol_zero)?
        .iter()
        .map(|a| &phi * a * phi.adjoint())
        .collect();
    for m in &out {
        debug_assert!(d.membership_residual(m) < 1e-8);
    }
    Ok(out)
}

/// `Circ(2n) ∩ sp(n)`, realised with the circulant-compatible quaternionic
/// structure and carried to the `J`-form by [`circulant_twist`].
pub fn circulant_cartan_sp(alg: &Algebra) -> Result<CartanSub> {
    let d = alg.descriptor();
    if d.family != Family::Sp {
        return Err(Error::Parameter(format!("{d} is not sp(n)")));
    }
    let gens = sp_circulant_generators(d.n, alg.tolerances().tol_zero)?;
    if gens.len() != d.n {
        return Err(Error::Structure(format!(
            "Circ({}) ∩ {d} has dimension {}, expected {}",
            2 * d.n,
            gens.len(),
            d.n
        )));
    }
    let elements = gens
        .into_iter()
        .map(|m| alg.element(m))
        .collect::<Result<Vec<_>>>()?;
    CartanSub::from_elements(alg, &elements, Provenance::Circulant)
}

fn real(rows: usize, data: &[f64]) -> DenseMatrix {
    from_real(&RealMatrix::from_row_slice(rows, rows, data))
}

fn block_diag(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (p, q) = (a.nrows(), b.nrows());
    let mut m = DenseMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(a);
    m.view_mut((p, p), (q, q)).copy_from(b);
    m
}

fn blocks(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, d: &DenseMatrix) -> DenseMatrix {
    let k = a.nrows();
    let mut m = DenseMatrix::zeros(2 * k, 2 * k);
    m.view_mut((0, 0), (k, k)).copy_from(a);
    m.view_mut((0, k), (k, k)).copy_from(b);
    m.view_mut((k, 0), (k, k)).copy_from(c);
    m.view_mut((k, k), (k, k)).copy_from(d);
    m
}

/// `X ⊕ 0_2`.
pub fn pad2(x: &DenseMatrix) -> DenseMatrix {
    block_diag(x, &DenseMatrix::zeros(2, 2))
}

/// The hat map `so(2k) → so(2k + 4)`: pad each `k × k` block by `0_2`.
pub fn hat(x: &DenseMatrix) -> DenseMatrix {
    let k = x.nrows() / 2;
    let part = |r: usize, c: usize| pad2(&x.view((r * k, c * k), (k, k)).into_owned());
    blocks(&part(0, 0), &part(0, 1), &part(1, 0), &part(1, 1))
}

/// The extra generators `y`, `z` of `so(2k + 4)`.
pub fn hat_extras(k: usize) -> (DenseMatrix, DenseMatrix) {
    let zk = DenseMatrix::zeros(k + 2, k + 2);
    let s = block_diag(&DenseMatrix::zeros(k, k), &real(2, &[0., 1., 1., 0.]));
    let t = block_diag(&DenseMatrix::zeros(k, k), &real(2, &[0., -1., 1., 0.]));
    let y = blocks(&zk, &s, &(-&s), &zk);
    let z = blocks(&zk, &t, &t, &zk);
    (y, z)
}

/// Inclusion `so(2k) → so(2k + 1)` by a zero last row and column.
pub fn embed_odd(x: &DenseMatrix) -> DenseMatrix {
    block_diag(x, &DenseMatrix::zeros(1, 1))
}

/// Raw generators of a Cartan subalgebra of so(n) orthogonal to `C_n`.
pub fn so_orthogonal_generators(n: usize) -> Result<Vec<DenseMatrix>> {
    match n {
        0..=2 => Err(Error::Parameter(format!("so({n}) needs n >= 3"))),
        3 => Ok(vec![real(3, &[0., 0., 1., 0., 0., 0., -1., 0., 0.])]),
        4 => Ok(vec![
            real(4, &[0., 0., 0., 1., 0., 0., 1., 0., 0., -1., 0., 0., -1., 0., 0., 0.]),
            real(4, &[0., 0., 0., -1., 0., 0., 1., 0., 0., -1., 0., 0., 1., 0., 0., 0.]),
        ]),
        6 => {
            let a = real(3, &[0., -1., 0., 1., 0., 0., 0., 0., 0.]);
            let b = real(3, &[0., 0., 0., 0., 0., 0., 1., 0., 0.]);
            let c = real(3, &[0., 0., 0., 0., 0., -1., 0., 1., 0.]);
            let z3 = DenseMatrix::zeros(3, 3);
            Ok(vec![
                block_diag(&a, &z3),
                blocks(&z3, &b, &(-b.transpose()), &z3),
                block_diag(&z3, &c),
            ])
        }
        n if n % 2 == 1 => Ok(so_orthogonal_generators(n - 1)?
            .iter()
            .map(embed_odd)
            .collect()),
        n => {
            let k = (n - 4) / 2;
            let mut out: Vec<DenseMatrix> =
                so_orthogonal_generators(n - 4)?.iter().map(hat).collect();
            let (y, z) = hat_extras(k);
            out.push(y);
            out.push(z);
            Ok(out)
        }
    }
}

/// Cartan subalgebra of so(n) orthogonal to the standard one.
pub fn orthocartan_so(alg: &Algebra) -> Result<CartanSub> {
    let d = alg.descriptor();
    if d.family != Family::So {
        return Err(Error::Parameter(format!("{d} is not so(n)")));
    }
    let elements = so_orthogonal_generators(d.n)?
        .into_iter()
        .map(|m| alg.element(m))
        .collect::<Result<Vec<_>>>()?;
    CartanSub::from_elements(alg, &elements, Provenance::SoRecursive)
}

/// The explicit partner of [`standard_cartan`] for the algebra's family.
pub fn family_orthogonal_cartan(alg: &Algebra) -> Result<CartanSub> {
    match alg.descriptor().family {
        Family::Su => circulant_cartan_su(alg),
        Family::Sp => circulant_cartan_sp(alg),
        Family::So => orthocartan_so(alg),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CartanReport {
    pub abelian: bool,
    pub abelian_residual: f64,
    pub correct_dim: bool,
    pub dim: usize,
    pub rank: usize,
    pub self_centralizing: bool,
    pub self_centralizing_residual: f64,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.abelian && self.correct_dim && self.self_centralizing
    }
}

/// A seeded generic element of `c`.
pub fn generic_element(alg: &Algebra, c: &CartanSub, seed: u64) -> AlgebraElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    alg.random_in_subspace(&c.space, &mut rng)
}

/// A regular element of `c` (seeded rejection sampling).
pub fn regular_element(alg: &Algebra, c: &CartanSub, seed: u64) -> Result<AlgebraElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..alg.tolerances().max_iter {
        let h = alg.random_in_subspace(&c.space, &mut rng);
        if alg.is_regular(&h)? {
            return Ok(h);
        }
    }
    Err(Error::SearchFailure {
        what: format!("regular element in a {}-dimensional subspace", c.dim()),
        iterations: alg.tolerances().max_iter,
    })
}

pub fn verify_cartan(alg: &Algebra, c: &CartanSub) -> Result<CartanReport> {
    c.check_parent(alg)?;
    let tol = alg.tolerances().tol_residual;
    let els = c.elements(alg);
    let mut abelian_residual = 0.0_f64;
    for (i, x) in els.iter().enumerate() {
        for y in &els[i + 1..] {
            abelian_residual = abelian_residual.max(alg.norm(&alg.bracket(x, y)?));
        }
    }
    let self_centralizing_residual = if c.dim() == 0 {
        f64::INFINITY
    } else {
        let h = generic_element(alg, c, 0x5eed);
        alg.centralizer(&h)?.distance(&c.space)?
    };
    Ok(CartanReport {
        abelian: abelian_residual < tol,
        abelian_residual,
        correct_dim: c.dim() == alg.rank(),
        dim: c.dim(),
        rank: alg.rank(),
        self_centralizing: self_centralizing_residual < tol,
        self_centralizing_residual,
    })
}

/// `max |⟨c_i, c'_j⟩|` over orthonormal basis pairs.
pub fn verify_orthogonal(alg: &Algebra, c: &CartanSub, other: &CartanSub) -> Result<f64> {
    c.check_parent(alg)?;
    other.check_parent(alg)?;
    c.space.max_cross_inner(&other.space)
}

/// Group element `g` with `Ad(g) C = standard_cartan`.
pub fn conjugate_to_standard(alg: &Algebra, c: &CartanSub) -> Result<DenseMatrix> {
    c.check_parent(alg)?;
    let d = alg.descriptor();
    let tol = alg.tolerances();
    let h = regular_element(alg, c, 0xc0de)?;
    let g = match d.family {
        Family::Su => {
            let e = eig_skew(h.matrix(), SkewKind::SkewHermitian, tol.tol_residual)?;
            let mut v = e.eigenvectors;
            let det = v.determinant();
            let phase = det.conj() / det.norm();
            for r in 0..v.nrows() {
                v[(r, 0)] *= phase;
            }
            v.adjoint()
        }
        Family::So => so_conjugator(h.matrix(), d.n, tol.tol_residual)?,
        Family::Sp => {
            let n = d.n;
            let e = eig_skew(h.matrix(), SkewKind::SkewHermitian, tol.tol_residual)?;
            // first n columns belong to iθ with θ > 0
            let w = e.eigenvectors.columns(0, n).into_owned();
            let partner = -(symplectic_j(n) * w.conjugate());
            let mut v = DenseMatrix::zeros(2 * n, 2 * n);
            v.columns_mut(0, n).copy_from(&w);
            v.columns_mut(n, n).copy_from(&partner);
            v.adjoint()
        }
    };
    let group_res = d.group_membership_residual(&g);
    let moved = alg.conjugate_subspace(&g, &c.space)?;
    let dist = moved.distance(&standard_cartan(alg)?.space)?;
    let residual = group_res.max(dist);
    if residual > tol.tol_residual {
        return Err(Error::Conjugation { residual });
    }
    Ok(g)
}

/// Orthogonal `g` (det 1) with `g h gᵀ ∈ C_n` for a regular `h ∈ so(n)`.
fn so_conjugator(h: &DenseMatrix, n: usize, tol: f64) -> Result<DenseMatrix> {
    let e = eig_skew(h, SkewKind::RealSkewSymmetric, tol)?;
    let s = e.schur.expect("real form requested");
    let k = n / 2;
    let mut planes: Vec<(RealVector, RealVector)> = (0..s.theta.len()).map(|j| s.plane(j)).collect();
    let kernel = s.kernel();
    let mut kcols: Vec<RealVector> = kernel.column_iter().map(|c| c.into_owned()).collect();
    while planes.len() < k {
        if kcols.len() < 2 {
            return Err(Error::Conjugation { residual: f64::INFINITY });
        }
        let p = kcols.remove(0);
        let q = kcols.remove(0);
        planes.push((p, q));
    }
    let mut o = RealMatrix::zeros(n, n);
    for (j, (p, q)) in planes.iter().enumerate() {
        o.set_column(j, p);
        o.set_column(k + j, q);
    }
    if n % 2 == 1 {
        o.set_column(n - 1, &kcols[0]);
    }
    if o.determinant() < 0.0 {
        let last = -o.column(n - 1).into_owned();
        o.set_column(n - 1, &last);
    }
    Ok(from_real(&o.transpose()))
}

/// A Cartan subalgebra orthogonal to `c`: `Ad(g⁻¹)` of the family partner of
/// the standard Cartan, where `Ad(g) c` is standard.
pub fn orthogonal_cartan(alg: &Algebra, c: &CartanSub) -> Result<CartanSub> {
    let standard = standard_cartan(alg)?;
    let partner = family_orthogonal_cartan(alg)?;
    if c.space.distance(&standard.space)? < alg.tolerances().tol_residual {
        return Ok(partner);
    }
    let g = conjugate_to_standard(alg, c)?;
    let space = alg.conjugate_subspace(&g.adjoint(), &partner.space)?;
    Ok(CartanSub::from_subspace(alg, space, Provenance::Custom))
}

/// `‖[c_i, c_j]‖_F` for raw generators, used for the recursion checks.
pub fn max_pairwise_bracket(mats: &[DenseMatrix]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            worst = worst.max(frobenius(&(a * b - b * a)));
        }
    }
    worst
}

/// Real dimension of `Circ(m)` measured as a subspace of `gl(m, C)`.
pub fn circulant_space_dim(m: usize) -> usize {
    let vecs: Vec<RealVector> = (0..2 * m)
        .map(|p| {
            let mut a = vec![ZERO; m];
            a[p / 2] = if p % 2 == 0 { ONE } else { I };
            realify(&CirculantVector(a).matrix())
        })
        .collect();
    let mut mat = RealMatrix::zeros(2 * m * m, vecs.len());
    for (c, v) in vecs.iter().enumerate() {
        mat.set_column(c, v);
    }
    numerical_rank(&mat, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::identity;

    fn alg(f: Family, n: usize) -> Algebra {
        Algebra::new(AlgebraDescriptor::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn standard_dims() {
        assert_eq!(standard_cartan(&alg(Family::Su, 3)).unwrap().dim(), 2);
        assert_eq!(standard_cartan(&alg(Family::Sp, 2)).unwrap().dim(), 2);
        let so5 = alg(Family::So, 5);
        let c = standard_cartan(&so5).unwrap();
        assert_eq!(c.dim(), 2);
        for m in &c.raw {
            // Λ sits in rows 0..2 / columns 2..4 and the last row/column vanish
            for r in 0..5 {
                assert_eq!(m[(r, 4)], ZERO);
                assert_eq!(m[(4, r)], ZERO);
            }
            assert_eq!(m[(0, 2)] + m[(1, 3)], ONE);
        }
    }

    #[test]
    fn su2_circulant_is_off_diagonal_i() {
        let gens = su_circulant_generators(2);
        assert_eq!(gens.len(), 1);
        let expected = DenseMatrix::from_row_slice(2, 2, &[ZERO, I, I, ZERO]);
        assert_eq!(gens[0].matrix(), expected);
        assert!(gens[0].satisfies_su_constraints(0.0));
    }

    #[test]
    fn circulant_su_dims_and_orthogonality() {
        for n in 2..=8 {
            let a = alg(Family::Su, n);
            let c = circulant_cartan_su(&a).unwrap();
            assert_eq!(c.dim(), n - 1);
            let report = verify_cartan(&a, &c).unwrap();
            assert!(report.passed(), "su({n}): {report:?}");
            let s = standard_cartan(&a).unwrap();
            assert!(verify_orthogonal(&a, &s, &c).unwrap() < 1e-12);
        }
    }

    #[test]
    fn twist_relates_the_two_forms() {
        for n in 1..=5 {
            let m = circulant_twist(n).conjugate();
            let lhs = m.transpose() * circulant_symplectic_form(n) * &m;
            assert!(frobenius(&(lhs - symplectic_j(n))) < 1e-14);
            let jc = circulant_symplectic_form(n);
            assert!(frobenius(&(jc.transpose() + &jc)) < 1e-14);
            assert!(frobenius(&(&jc * jc.conjugate() + identity(2 * n))) < 1e-14);
        }
    }

    #[test]
    fn block_embedding_meets_circulants_in_a_line() {
        // with the block form J the intersection is one-dimensional for every n
        for n in 1..=5 {
            assert_eq!(circulant_kernel(n, &symplectic_j(n), 1e-10).unwrap().len(), 1);
        }
    }

    #[test]
    fn circulant_sp_dims() {
        for n in 1..=4 {
            let a = alg(Family::Sp, n);
            let c = circulant_cartan_sp(&a).unwrap();
            assert_eq!(c.dim(), n);
            let phi = circulant_twist(n);
            let size = 2 * n;
            for m in &c.raw {
                assert!(a.descriptor().is_member(m, 1e-12));
                // untwisted, constant along wrapped diagonals
                let u = phi.adjoint() * m * &phi;
                for j in 0..size {
                    for k in 0..size {
                        let d = u[(j, k)] - u[((j + 1) % size, (k + 1) % size)];
                        assert!(d.norm() < 1e-12);
                    }
                }
            }
            assert!(verify_cartan(&a, &c).unwrap().passed());
            let s = standard_cartan(&a).unwrap();
            assert!(verify_orthogonal(&a, &s, &c).unwrap() < 1e-12);
            // Circ(2n) is 4n-dimensional over R, four copies of C'
            assert_eq!(circulant_space_dim(2 * n), 4 * c.dim());
        }
    }

    #[test]
    fn sp_circulant_and_i_times_it_are_independent() {
        for n in 1..=3 {
            let gens = circulant_kernel(n, &circulant_symplectic_form(n), 1e-10).unwrap();
            let mut vecs: Vec<RealVector> = gens.iter().map(realify).collect();
            vecs.extend(gens.iter().map(|m| realify(&m.map(|z| z * I))));
            let s = orthonormalize(&vecs, 8 * n * n, 1e-10).unwrap();
            assert_eq!(s.dim(), 2 * n);
        }
    }

    #[test]
    fn so4_printed_generators() {
        let a = alg(Family::So, 4);
        let g = so_orthogonal_generators(4).unwrap();
        assert!(frobenius(&(&g[0] * &g[1] - &g[1] * &g[0])) < 1e-15);
        let x1 = a.element(g[0].clone()).unwrap();
        let x2 = a.element(g[1].clone()).unwrap();
        assert!(a.inner(&x1, &x2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn so6_generators_commute() {
        let g = so_orthogonal_generators(6).unwrap();
        assert_eq!(g.len(), 3);
        assert!(max_pairwise_bracket(&g) < 1e-15);
    }

    #[test]
    fn hat_recursion_commutes() {
        for base in [4, 6, 8] {
            let k = base / 2;
            let xs: Vec<DenseMatrix> = so_orthogonal_generators(base).unwrap();
            let hats: Vec<DenseMatrix> = xs.iter().map(hat).collect();
            assert!(max_pairwise_bracket(&hats) < 1e-14);
            let (y, z) = hat_extras(k);
            let mut all = hats.clone();
            all.push(y);
            all.push(z);
            assert!(max_pairwise_bracket(&all) < 1e-14, "base {base}");
        }
        assert_eq!(so_orthogonal_generators(8).unwrap().len(), 4);
    }

    #[test]
    fn odd_embedding_preserves_brackets_and_standard_cartan() {
        for k in 2..=4 {
            let even = alg(Family::So, 2 * k);
            let odd = alg(Family::So, 2 * k + 1);
            let x = even.random_element(1);
            let y = even.random_element(2);
            let lhs = embed_odd(&(x.matrix() * y.matrix() - y.matrix() * x.matrix()));
            let ex = embed_odd(x.matrix());
            let ey = embed_odd(y.matrix());
            assert!(frobenius(&(lhs - (&ex * &ey - &ey * &ex))) < 1e-12);

            let c_even = standard_cartan(&even).unwrap();
            let c_odd = standard_cartan(&odd).unwrap();
            let images: Vec<AlgebraElement> = c_even
                .raw
                .iter()
                .map(|m| odd.element(embed_odd(m)).unwrap())
                .collect();
            let span = odd.span(&images).unwrap();
            assert!(span.distance(&c_odd.space).unwrap() < 1e-12);
        }
    }

    #[test]
    fn so_family_orthogonal() {
        for n in 3..=10 {
            let a = alg(Family::So, n);
            let c = orthocartan_so(&a).unwrap();
            let report = verify_cartan(&a, &c).unwrap();
            assert!(report.passed(), "so({n}): {report:?}");
            let s = standard_cartan(&a).unwrap();
            assert!(verify_orthogonal(&a, &s, &c).unwrap() < 1e-12, "so({n})");
        }
        assert!(so_orthogonal_generators(2).is_err());
    }

    #[test]
    fn circulant_diagonalization_n2() {
        let a0 = Complex64::new(0.3, -1.0);
        let a1 = Complex64::new(2.0, 0.5);
        let d = circulant_diagonalize(&CirculantVector(vec![a0, a1])).unwrap();
        assert!((d.lambda[0] - (a0 + a1)).norm() < 1e-15);
        assert!((d.lambda[1] - (a0 - a1)).norm() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = real(2, &[s, s, s, -s]);
        assert!(frobenius(&(&d.u - u)) < 1e-15);
    }

    #[test]
    fn circulant_diagonalization_identity_and_random() {
        let mut e0 = vec![ZERO; 4];
        e0[0] = ONE;
        let d = circulant_diagonalize(&CirculantVector(e0)).unwrap();
        assert!(d.lambda.iter().all(|l| (l - ONE).norm() < 1e-15));
        let a = CirculantVector(
            (0..5)
                .map(|j| Complex64::new((j as f64 * 1.7).sin(), (j as f64 * 0.3).cos()))
                .collect(),
        );
        let d = circulant_diagonalize(&a).unwrap();
        assert!(frobenius(&(d.reconstruct() - a.matrix())) < 1e-10);
        assert!(frobenius(&(d.u.adjoint() * &d.u - identity(5))) < 1e-12);
        assert!(frobenius(&(d.u.transpose() - &d.u)) < 1e-15);
    }

    #[test]
    fn non_abelian_subspace_fails_verification() {
        let a = alg(Family::Su, 2);
        let x = a.element(DenseMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, -I])).unwrap();
        let y = a.element(DenseMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO])).unwrap();
        let c = CartanSub::from_elements(&a, &[x, y], Provenance::Custom).unwrap();
        let r = verify_cartan(&a, &c).unwrap();
        assert!(!r.abelian);
        assert!(!r.correct_dim);
    }

    #[test]
    fn self_inner_is_one() {
        let a = alg(Family::Su, 3);
        let c = standard_cartan(&a).unwrap();
        assert!(verify_orthogonal(&a, &c, &c).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn conjugation_of_standard_and_random_cartans() {
        for (f, n) in [(Family::Su, 3), (Family::So, 4), (Family::So, 7), (Family::Sp, 2)] {
            let a = alg(f, n);
            let std_c = standard_cartan(&a).unwrap();
            let g = conjugate_to_standard(&a, &std_c).unwrap();
            assert!(a.descriptor().group_membership_residual(&g) < 1e-10);

            let r = a.random_regular(9).unwrap();
            let c = CartanSub::from_subspace(&a, a.centralizer(&r).unwrap(), Provenance::Custom);
            let g = conjugate_to_standard(&a, &c).unwrap();
            let moved = a.conjugate_subspace(&g, &c.space).unwrap();
            assert!(moved.distance(&std_c.space).unwrap() < 1e-8, "{f}({n})");

            let partner = family_orthogonal_cartan(&a).unwrap();
            let g = conjugate_to_standard(&a, &partner).unwrap();
            let moved = a.conjugate_subspace(&g, &partner.space).unwrap();
            assert!(moved.distance(&std_c.space).unwrap() < 1e-8, "{f}({n})");
        }
    }

    #[test]
    fn orthogonal_partner_of_arbitrary_cartan() {
        let a = alg(Family::Su, 4);
        let s = standard_cartan(&a).unwrap();
        let p = orthogonal_cartan(&a, &s).unwrap();
        assert_eq!(p.provenance, Provenance::Circulant);

        for (f, n) in [(Family::So, 6), (Family::Sp, 3), (Family::Su, 5)] {
            let a = alg(f, n);
            let r = a.random_regular(17).unwrap();
            let c = CartanSub::from_subspace(&a, a.centralizer(&r).unwrap(), Provenance::Custom);
            let p = orthogonal_cartan(&a, &c).unwrap();
            assert!(verify_orthogonal(&a, &c, &p).unwrap() < 1e-8, "{f}({n})");
            assert!(verify_cartan(&a, &p).unwrap().passed());
        }
    }

    #[test]
    fn json_shape() {
        let a = alg(Family::Sp, 1);
        let c = circulant_cartan_sp(&a).unwrap();
        let v = c.to_json(&a);
        assert_eq!(v["family"], "sp");
        assert_eq!(v["n"], 1);
        assert_eq!(v["provenance"], "circulant");
        assert_eq!(v["basis"].as_array().unwrap().len(), 1);
    }
}
